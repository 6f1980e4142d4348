"""Ky Fan and Schatten norms, Ky Fan dominance and the variational formula."""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidN, InvalidP
from .linalg import as_matrix, matrix_abs, svd


@dataclass(frozen=True)
class SingularProfile:
    """Singular values ``s_1 >= s_2 >= ... >= 0``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if np.any(v < 0) or np.any(np.diff(v) > 0):
            raise ValueError("singular values must be non-negative and non-increasing")

    def s(self, n):
        """``s_n`` (1-based); zero beyond the matrix size."""
        return float(self.values[n - 1]) if n <= len(self.values) else 0.0

    def ky_fan(self, n):
        if n < 1:
            raise InvalidN("Ky Fan index must be at least 1")
        return float(np.sum(self.values[:n]))

    def schatten(self, p):
        if p == np.inf:
            return float(self.values[0]) if len(self.values) else 0.0
        if not p >= 1:
            raise InvalidP(f"Schatten exponent must be >= 1 or inf, got {p!r}")
        v = self.values
        top = v[0] if len(v) else 0.0
        if top == 0.0:
            return 0.0
        # scale first so large p does not overflow
        return float(top * np.sum((v / top) ** p) ** (1.0 / p))


def singular_profile(t):
    return SingularProfile(svd(t)[0])


def ky_fan(t, n):
    """Sum of the `n` largest singular values."""
    if n < 1:
        raise InvalidN("Ky Fan index must be at least 1")
    return singular_profile(t).ky_fan(n)


def schatten(t, p):
    """Schatten ``p``-norm; ``p = inf`` gives the operator norm."""
    if p != np.inf and not p >= 1:
        raise InvalidP(f"Schatten exponent must be >= 1 or inf, got {p!r}")
    return singular_profile(t).schatten(p)


def ky_fan_all(t):
    """All Ky Fan norms ``|||t|||_1, ..., |||t|||_k`` with ``k = min(rows, cols)``."""
    return np.cumsum(svd(t)[0])


def ky_fan_dominates(s, t, tol=1e-10):
    """True iff ``|||t|||_n <= |||s|||_n`` for every ``n`` (up to `tol`, relative)."""
    s, t = as_matrix(s), as_matrix(t)
    if s.shape != t.shape:
        raise DimensionMismatch(f"shapes differ: {s.shape} vs {t.shape}")
    ks, kt = ky_fan_all(s), ky_fan_all(t)
    slack = tol * max(ks[-1] if len(ks) else 0.0, 1.0)
    return bool(np.all(kt <= ks + slack))


def rank_distance(t, n):
    """``inf ||t - F||`` over ``rank F < n``, attained by truncating the SVD."""
    if n < 1:
        raise InvalidN("n must be at least 1")
    t = as_matrix(t)
    s, u, w = svd(t)
    k = n - 1
    best = (u[:, :k] * s[:k]) @ w[:, :k].conj().T
    return float(svd(t - best)[0][0]) if min(t.shape) else 0.0


def _orthonormal_system(dim, n, rng):
    z = rng.standard_normal((dim, n)) + 1j * rng.standard_normal((dim, n))
    q, _ = np.linalg.qr(z)
    return q


def ky_fan_variational_lower(t, n, trials=1000, seed=None):
    """Largest ``|sum_j <y_j, t x_j>|`` over sampled orthonormal systems.

    Trial 0 uses the leading singular vectors, which attain the supremum
    ``|||t|||_n``; the remaining ``trials - 1`` systems are random.
    """
    t = as_matrix(t)
    rows, cols = t.shape
    if n < 1 or n > min(rows, cols):
        raise InvalidN(f"need 1 <= n <= {min(rows, cols)}, got {n}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    s, u, w = svd(t)
    best = abs(np.sum(np.einsum("ij,ik,kj->j", u[:, :n].conj(), t, w[:, :n])))
    rng = np.random.default_rng(seed)
    for _ in range(trials - 1):
        x = _orthonormal_system(cols, n, rng)
        y = _orthonormal_system(rows, n, rng)
        best = max(best, abs(np.trace(y.conj().T @ t @ x)))
    return float(best)


def abs_norm_identities(t):
    """Largest deviation between the Ky Fan norms of ``t``, ``|t|``, ``t^*`` and ``|t^*|``."""
    t = as_matrix(t)
    ref = ky_fan_all(t)
    others = [ky_fan_all(matrix_abs(t)), ky_fan_all(t.conj().T), ky_fan_all(matrix_abs(t.conj().T))]
    k = len(ref)
    dev = 0.0
    for o in others:
        # |t| and |t^*| are square; extra singular values are zero
        dev = max(dev, float(np.max(np.abs(o[:k] - ref), initial=0.0)))
        if len(o) > k:
            dev = max(dev, float(np.max(np.abs(o[k:] - ref[-1]), initial=0.0)))
    return dev


@dataclass(frozen=True)
class NormMode:
    """A unitarily invariant norm: ``op``, ``kyfan:N`` or ``schatten:P``."""

    kind: str
    param: float = None

    @classmethod
    def parse(cls, text):
        text = str(text).strip().lower()
        if text in ("op", "operator", "inf"):
            return cls("op")
        kind, _, arg = text.partition(":")
        if kind == "kyfan":
            try:
                n = int(arg)
            except ValueError:
                raise InvalidN(f"bad Ky Fan index in {text!r}") from None
            if n < 1:
                raise InvalidN("Ky Fan index must be at least 1")
            return cls("kyfan", n)
        if kind == "schatten":
            p = np.inf if arg in ("inf", "infinity") else float(arg)
            if p != np.inf and not p >= 1:
                raise InvalidP(f"Schatten exponent must be >= 1, got {arg}")
            return cls("schatten", p)
        raise ValueError(f"unknown norm {text!r}; use op, kyfan:N or schatten:P")

    @property
    def label(self):
        if self.kind == "op":
            return "op"
        if self.kind == "kyfan":
            return f"kyfan:{self.param}"
        return "schatten:inf" if self.param == np.inf else f"schatten:{self.param:g}"

    def of_profile(self, prof):
        if self.kind == "op":
            return prof.schatten(np.inf)
        if self.kind == "kyfan":
            return prof.ky_fan(self.param)
        return prof.schatten(self.param)

    def __call__(self, t):
        return self.of_profile(singular_profile(t))


OPERATOR = NormMode("op")
