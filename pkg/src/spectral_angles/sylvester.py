"""Sylvester equation ``Y B0 - B1 Y = T`` under spectral separation.

Two independent solution routes are provided:

* :func:`solve_spectral` divides in the joint eigenbasis,
  ``Y~_jk = T~_jk / (lambda_k - mu_j)``;
* :func:`solve_integral` evaluates
  ``Y = int e^{i t B1} T e^{-i t B0} f(t) dt`` by quadrature, for a kernel
  ``f`` whose Fourier transform equals ``1/lambda`` for ``|lambda| >= d``.

The Riccati checks relate the graph operator of a reducing subspace to a
Sylvester equation with the same gap.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import sici

from .errors import (
    DimensionMismatch,
    InvalidGap,
    NotNormal,
    QuadratureUnderresolved,
    SpectraOverlap,
    SubspacesTooFar,
)
from .angles import block_unitary, h_blocks
from .linalg import as_matrix, check_hermitian, hermitian_eig, is_hermitian, is_normal, normal_eig, op_norm
from .spectral import set_distance

#: Optimal constant in ``||Y|| <= c ||T|| / d`` for self-adjoint ``B0``, ``B1``.
NAGY_CONSTANT = np.pi / 2
#: Universal constant used for normal ``B0``, ``B1``.
NORMAL_CONSTANT = 2.91

TOL_GAP = 1e-8
TOL_RES = 1e-11
TOL_QUAD = 1e-6
# perturbations below this multiple of ||A|| are at the roundoff level of the graph operator
RESIDUAL_FLOOR = 1e-5


@dataclass(frozen=True)
class SylvesterProblem:
    B0: np.ndarray
    B1: np.ndarray
    T: np.ndarray

    @classmethod
    def create(cls, B0, B1, T, normal=False):
        if normal:
            B0, B1 = as_matrix(B0), as_matrix(B1)
            for name, b in (("B0", B0), ("B1", B1)):
                if b.shape[0] != b.shape[1] or not is_normal(b):
                    raise NotNormal(f"{name} is not normal")
        else:
            B0 = check_hermitian(B0, name="B0")
            B1 = check_hermitian(B1, name="B1")
        T = as_matrix(T)
        if T.shape != (B1.shape[0], B0.shape[0]):
            raise DimensionMismatch(f"T must be {B1.shape[0]}x{B0.shape[0]}, got {T.shape}")
        return cls(B0, B1, T)

    @property
    def d(self):
        return set_distance(_eigvals(self.B0), _eigvals(self.B1))


def _eigvals(b):
    return hermitian_eig(b).eigenvalues if is_hermitian(b) else normal_eig(b).eigenvalues


def _eig(b, normal):
    return normal_eig(b) if normal else hermitian_eig(b)


def _divide(p, normal):
    d0 = _eig(p.B0, normal)
    d1 = _eig(p.B1, normal)
    lam, mu = d0.eigenvalues, d1.eigenvalues
    gap = set_distance(lam, mu)
    if not gap > TOL_GAP:
        raise SpectraOverlap(f"spectra of B0 and B1 are not separated (distance {gap:.3g})")
    u0, u1 = d0.eigenvectors, d1.eigenvectors
    tt = u1.conj().T @ p.T @ u0
    denom = lam[None, :] - mu[:, None]
    return u1 @ (tt / denom) @ u0.conj().T, gap


def residual(p, y):
    """``||Y B0 - B1 Y - T||`` relative to ``||T||`` (absolute when ``T = 0``)."""
    r = op_norm(y @ p.B0 - p.B1 @ y - p.T)
    t = op_norm(p.T)
    return r / t if t > 0 else r


def bound_ratio(p, y):
    """``||Y|| d / ||T||``; zero for ``T = 0``."""
    t = op_norm(p.T)
    return op_norm(y) * p.d / t if t > 0 else 0.0


def solve_spectral(p):
    """Unique solution of ``Y B0 - B1 Y = T`` for Hermitian ``B0``, ``B1``."""
    y, _ = _divide(p, normal=False)
    return y


def solve_normal(p, constant=NORMAL_CONSTANT):
    """Spectral-division solution for normal ``B0``, ``B1`` separated in the plane.

    Also asserts ``||Y|| <= constant * ||T|| / d``.
    """
    for name, b in (("B0", p.B0), ("B1", p.B1)):
        if not is_normal(b):
            raise NotNormal(f"{name} is not normal")
    y, gap = _divide(p, normal=True)
    t = op_norm(p.T)
    if t > 0 and op_norm(y) * gap / t > constant + 1e-9:
        raise ArithmeticError(f"norm bound with constant {constant} violated")
    return y


# ---------------------------------------------------------------------------
# kernels


@dataclass(frozen=True)
class Kernel:
    """An ``L^1`` kernel ``f`` with ``f^(lambda) = 1/lambda`` for ``|lambda| >= d``.

    ``fhat`` is the Fourier-side profile, ``f_time`` the kernel itself and
    ``tail`` (optional) the contribution of ``|t| > t_max`` to
    ``int e^{-i t lambda} f(t) dt``, used to correct truncated quadrature.
    """

    d: float
    fhat: Callable
    f_time: Callable
    l1_norm: float
    tail: Callable = None


def _g_profile(x):
    """Dimensionless default kernel: ``f(t) = (i / pi) g(d t)``.

    ``g(x) = (sin x - x cos x) / x^2 + sgn(x) pi/2 - Si(x)``, odd, with a
    jump of ``pi`` at the origin.
    """
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    small = ax < 1e-3
    with np.errstate(divide="ignore", invalid="ignore"):
        first = np.where(small, ax / 3.0 - ax**3 / 30.0, (np.sin(ax) - ax * np.cos(ax)) / ax**2)
    si, _ = sici(ax)
    g = first + np.pi / 2 - si
    g = np.where(ax == 0.0, 0.0, g)
    return np.sign(x) * g


# g(x) ~ sum c_k trig_k(x) / x^k for large x
_G_ASYMPTOTIC = ((2, "sin", 2.0), (3, "cos", -2.0), (4, "sin", -6.0), (5, "cos", 24.0), (6, "sin", 120.0))


def _exp_tail(omega, t0, kmax):
    """``E_k(omega) = int_{t0}^inf e^{i omega t} t^{-k} dt`` for ``k = 1..kmax``.

    Uses ``E_k = t0^{1-k} e^{i omega t0} / (k-1) + i omega E_{k-1} / (k-1)``
    with ``E_1`` from the sine and cosine integrals.
    """
    omega = np.asarray(omega, dtype=float)
    a = np.abs(omega) * t0
    si, ci = sici(np.where(a == 0.0, 1.0, a))
    e1 = np.where(a == 0.0, 0.0, -ci + 1j * np.sign(omega) * (np.pi / 2 - si))
    out = {1: e1}
    phase = np.exp(1j * omega * t0)
    for k in range(2, kmax + 1):
        out[k] = t0 ** (1 - k) * phase / (k - 1) + 1j * omega * out[k - 1] / (k - 1)
    return out


def _default_tail(d):
    def tail(lam, t_max):
        # 2/pi * int_{t_max}^inf sin(lam t) g(d t) dt with g replaced by its expansion
        lam = np.asarray(lam, dtype=float)
        em = _exp_tail(lam - d, t_max, 6)
        ep = _exp_tail(lam + d, t_max, 6)
        total = np.zeros_like(lam)
        for k, kind, coef in _G_ASYMPTOTIC:
            if kind == "sin":
                term = 0.5 * (em[k].real - ep[k].real)
            else:
                term = 0.5 * (ep[k].imag + em[k].imag)
            total = total + coef * d ** (-k) * term
        return 2.0 / np.pi * total

    return tail


@lru_cache(maxsize=1)
def _l1_of_g():
    """``int_0^inf |g(x)| dx`` by composite Simpson plus the mean-value tail."""
    x_max = 4000.0 * np.pi
    x = np.linspace(0.0, x_max, 2_000_001)
    y = np.abs(_g_profile(x))
    y[0] = np.pi / 2
    h = x[1] - x[0]
    body = h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())
    # |g| ~ 2|sin x|/x^2 whose mean over a period is (4/pi)/x^2
    return body + 4.0 / (np.pi * x_max)


def default_kernel(d):
    """Odd piecewise profile ``1/lambda`` outside ``(-d, d)`` and ``lambda/d^2`` inside.

    The time-domain kernel is the closed-form inverse transform
    ``f(t) = (i/pi) g(d t)``, see :func:`_g_profile`. Its ``L^1`` norm is
    ``(2 / (pi d)) int_0^inf |g|``, which exceeds the optimal ``pi/(2d)``.
    """
    if not (np.isfinite(d) and d > 0):
        raise InvalidGap(f"gap must be positive, got {d!r}")
    d = float(d)

    def fhat(lam):
        lam = np.asarray(lam, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(np.abs(lam) >= d, 1.0 / np.where(lam == 0, 1.0, lam), lam / d**2)

    def f_time(t):
        return 1j / np.pi * _g_profile(d * np.asarray(t, dtype=float))

    return Kernel(d, fhat, f_time, 2.0 / (np.pi * d) * _l1_of_g(), _default_tail(d))


def forward_transform(kernel, lam, t_max=None, steps=200_000, tail=True):
    """``int e^{-i t lambda} f(t) dt`` by composite Simpson on ``[-t_max, t_max]``.

    `steps` is the number of subintervals (made even). The grid is
    symmetric with a node at ``t = 0``, where the kernel may jump.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    t_max = 200.0 / kernel.d if t_max is None else float(t_max)
    steps = int(steps) + (int(steps) % 2)
    h = 2.0 * t_max / steps
    # integer multiples of h, so the middle node is exactly t = 0 where the kernel jumps
    t = h * np.arange(-(steps // 2), steps // 2 + 1)
    w = np.full(steps + 1, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    fw = kernel.f_time(t) * (w * h / 3.0)
    out = np.empty(lam.shape, dtype=np.complex128)
    chunk = max(1, 4_000_000 // (steps + 1))
    for start in range(0, lam.size, chunk):
        sl = slice(start, start + chunk)
        out[sl] = np.exp(-1j * np.outer(lam[sl], t)) @ fw
    if tail and kernel.tail is not None:
        out = out + kernel.tail(lam, t_max)
    return out


def solve_integral(p, kernel=None, quad=None, tol_quad=TOL_QUAD):
    """Solve ``Y B0 - B1 Y = T`` through the time-domain integral representation.

    In the eigenbases the integral factorizes entrywise into
    ``T~_jk * int e^{-i t (lambda_k - mu_j)} f(t) dt``, evaluated by
    :func:`forward_transform`. The answer is compared with
    :func:`solve_spectral`; a relative disagreement above `tol_quad`
    raises :class:`QuadratureUnderresolved`.
    """
    d0 = hermitian_eig(p.B0)
    d1 = hermitian_eig(p.B1)
    lam, mu = d0.eigenvalues, d1.eigenvalues
    gap = set_distance(lam, mu)
    if not gap > TOL_GAP:
        raise SpectraOverlap(f"spectra of B0 and B1 are not separated (distance {gap:.3g})")
    kernel = default_kernel(gap) if kernel is None else kernel
    if kernel.d > gap * (1 + 1e-12):
        raise SpectraOverlap(f"kernel gap {kernel.d} exceeds the spectral distance {gap}")
    quad = dict(quad or {})
    u0, u1 = d0.eigenvectors, d1.eigenvectors
    tt = u1.conj().T @ p.T @ u0
    if not np.any(tt):
        return np.zeros_like(p.T)
    diffs = lam[None, :] - mu[:, None]
    uniq, inv = np.unique(np.round(diffs, 14), return_inverse=True)
    weights = forward_transform(
        kernel, uniq, t_max=quad.get("t_max"), steps=quad.get("steps", 200_000), tail=quad.get("tail", True)
    )
    y = u1 @ (tt * weights[inv].reshape(diffs.shape)) @ u0.conj().T

    ref = solve_spectral(p)
    scale = max(op_norm(ref), np.finfo(float).tiny)
    gap_q = op_norm(y - ref) / scale
    if gap_q > tol_quad:
        raise QuadratureUnderresolved(
            f"integral and spectral solutions differ by {gap_q:.3g} (relative), above {tol_quad:g}", gap=gap_q
        )
    return y


# ---------------------------------------------------------------------------
# Riccati


def riccati_operator(X, A0, V0, A1, V1, W):
    """``X(A0+V0) - (A1+V1)X + XWX - W^*``, zero iff the graph of ``X`` reduces ``A + V``."""
    X, A0, V0, A1, V1, W = (as_matrix(m) for m in (X, A0, V0, A1, V1, W))
    n1, n0 = X.shape
    if A0.shape != (n0, n0) or V0.shape != (n0, n0) or A1.shape != (n1, n1) or V1.shape != (n1, n1):
        raise DimensionMismatch("diagonal blocks do not match X")
    if W.shape != (n0, n1):
        raise DimensionMismatch(f"W must be {n0}x{n1}, got {W.shape}")
    return X @ (A0 + V0) - (A1 + V1) @ X + X @ W @ X - W.conj().T


def riccati_residual(X, A0, V0, A1, V1, W, floor=0.0):
    """``||X(A0+V0) - (A1+V1)X + XWX - W^*|| / max(||W||, floor, eps)``."""
    r = riccati_operator(X, A0, V0, A1, V1, W)
    return op_norm(r) / max(op_norm(W), floor, np.finfo(float).eps)


@dataclass(frozen=True)
class RiccatiSylvesterCheck:
    """Outcome of rewriting the Riccati equation as a Sylvester equation.

    ``residual`` is the larger of the two identity residuals relative to
    ``max(||V||, RESIDUAL_FLOOR ||A||)``; ``margin`` is ``(pi/2)(1 + ||X||^2)||V||/d - ||X||``.
    """

    residual: float
    x_norm: float
    bound: float
    gap: float

    @property
    def margin(self):
        return self.bound - self.x_norm


def riccati_as_sylvester_check(graph, A, V, U=None):
    """Check ``X A0 - A1 X = V1 X - X V0 - X W X + W^* = (I+XX^*)^{1/2} (P' U^* V U P) (I+X^*X)^{1/2}``.

    `graph` is the :class:`~spectral_angles.angles.GraphOperator` of a
    reducing subspace for ``A + V`` relative to a spectral subspace of
    ``A``; `U` defaults to :func:`~spectral_angles.angles.block_unitary`.
    """
    A, V = as_matrix(A), as_matrix(V)
    X = graph.X
    n1, n0 = X.shape
    if A.shape != (n0 + n1, n0 + n1) or V.shape != A.shape:
        raise DimensionMismatch("A and V must act on the space split by the graph operator")
    if n0 == 0 or n1 == 0:
        raise SubspacesTooFar("one of the subspaces is trivial; nothing to check")
    A0, _, _, A1 = graph.blocks(A)
    V0, W, _, V1 = graph.blocks(V)
    U = block_unitary(graph) if U is None else as_matrix(U)

    lhs = X @ A0 - A1 @ X
    mid = V1 @ X - X @ V0 - X @ W @ X + W.conj().T
    r0, r1 = h_blocks(graph)
    rotated = U.conj().T @ V @ U
    low_left = graph.basis_Pperp.conj().T @ rotated @ graph.basis_P
    rhs = r1 @ low_left @ r0
    scale = max(op_norm(V), RESIDUAL_FLOOR * op_norm(A), np.finfo(float).eps)
    res = max(op_norm(lhs - mid), op_norm(mid - rhs)) / scale

    gap = set_distance(hermitian_eig(A0).eigenvalues, hermitian_eig(A1).eigenvalues)
    xn = op_norm(X)
    bound = NAGY_CONSTANT * (1.0 + xn**2) * op_norm(V) / gap
    return RiccatiSylvesterCheck(res, xn, bound, gap)
