"""Spectral sets, spectral projections and reducing projections."""

from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguousMembership
from .linalg import TOL_MEMBERSHIP, cluster_indices, herm, op_norm


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"interval bounds out of order: {self.lo} > {self.hi}")

    def classify(self, x, tol):
        """Return True/False for membership; raise on boundary ambiguity."""
        x = float(np.real(x))
        for edge in (self.lo, self.hi):
            if np.isfinite(edge) and abs(x - edge) <= tol:
                # a point set [a, a] contains its own boundary unambiguously
                if self.lo == self.hi and not (self.lo_open or self.hi_open):
                    return True
                raise AmbiguousMembership(f"eigenvalue {x!r} lies within {tol:g} of boundary {edge!r}")
        return self.lo < x < self.hi


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float
    open: bool = True

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("disk radius must be non-negative")

    def classify(self, z, tol):
        r = abs(complex(z) - complex(self.center))
        if self.radius == 0.0 and r <= tol:
            return True
        if abs(r - self.radius) <= tol:
            raise AmbiguousMembership(f"eigenvalue {z!r} lies within {tol:g} of a disk boundary")
        return r < self.radius


@dataclass(frozen=True)
class SpectralSet:
    """A finite union of real intervals and (for normal matrices) complex disks."""

    intervals: tuple = ()
    disks: tuple = field(default=())

    @classmethod
    def interval(cls, lo, hi, lo_open=False, hi_open=False):
        return cls((Interval(lo, hi, lo_open, hi_open),))

    @classmethod
    def points(cls, values):
        """Closed degenerate intervals ``[x, x]`` around each real value."""
        return cls(tuple(Interval(float(x), float(x)) for x in np.real(values)))

    @classmethod
    def disks_around(cls, centers, radius):
        return cls(disks=tuple(Disk(complex(c), float(radius)) for c in centers))

    @classmethod
    def empty(cls):
        return cls()

    def union(self, other):
        return SpectralSet(self.intervals + other.intervals, self.disks + other.disks)

    def neighbourhood(self, r):
        """Open ``r``-neighbourhood: each interval widened by ``r`` on both sides."""
        ivs = tuple(Interval(iv.lo - r, iv.hi + r, True, True) for iv in self.intervals)
        dks = tuple(Disk(d.center, d.radius + r, True) for d in self.disks)
        return SpectralSet(ivs, dks)

    def contains(self, x, tol=TOL_MEMBERSHIP):
        hit = False
        for piece in self.intervals + self.disks:
            if abs(np.imag(x)) > tol and isinstance(piece, Interval):
                continue
            hit = piece.classify(x, tol) or hit
        return hit

    def mask(self, values, tol=TOL_MEMBERSHIP):
        return np.array([self.contains(v, tol) for v in values], dtype=bool)

    def distance(self, other):
        """Distance between the sets as subsets of the real line (or plane)."""
        best = np.inf
        for a in self.intervals:
            for b in other.intervals:
                gap = max(b.lo - a.hi, a.lo - b.hi, 0.0)
                best = min(best, gap)
        for a in self.disks:
            for b in other.disks:
                best = min(best, max(abs(a.center - b.center) - a.radius - b.radius, 0.0))
        for a in self.intervals:
            for b in other.disks:
                best = min(best, _interval_disk_distance(a, b))
        for a in self.disks:
            for b in other.intervals:
                best = min(best, _interval_disk_distance(b, a))
        return float(best)

    def to_json(self):
        out = {
            "intervals": [
                {"lo": iv.lo, "hi": iv.hi, "lo_open": iv.lo_open, "hi_open": iv.hi_open}
                for iv in self.intervals
            ]
        }
        if self.disks:
            out["disks"] = [
                {"center": [d.center.real, d.center.imag], "radius": d.radius, "open": d.open}
                for d in self.disks
            ]
        return out

    @classmethod
    def from_json(cls, obj):
        ivs = tuple(
            Interval(float(i["lo"]), float(i["hi"]), bool(i.get("lo_open", False)), bool(i.get("hi_open", False)))
            for i in obj.get("intervals", [])
        )
        dks = tuple(
            Disk(complex(*d["center"]), float(d["radius"]), bool(d.get("open", True))) for d in obj.get("disks", [])
        )
        return cls(ivs, dks)


def _interval_disk_distance(iv, disk):
    c = complex(disk.center)
    x = min(max(c.real, iv.lo), iv.hi)
    return max(abs(complex(x, 0.0) - c) - disk.radius, 0.0)


def spectral_projection(dec, sset, tol=TOL_MEMBERSHIP):
    """Orthogonal projection onto the eigenvectors whose eigenvalues lie in `sset`."""
    sel = sset.mask(dec.eigenvalues, tol)
    return projection_from_columns(dec.eigenvectors[:, sel], dec.dim)


def projection_from_columns(cols, n=None):
    if cols.shape[1] == 0:
        return np.zeros((cols.shape[0] if n is None else n,) * 2, dtype=np.complex128)
    return herm(cols @ cols.conj().T)


def set_distance(a, b):
    """``min |a_i - b_j|`` over two finite point sets (``inf`` if either is empty)."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.size == 0 or b.size == 0:
        return np.inf
    return float(np.min(np.abs(a[:, None] - b[None, :])))


def haar_unitary(k, rng):
    """Haar-distributed ``k x k`` unitary from the QR of a complex Gaussian."""
    z = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_reducing_projection(dec, selector, mix_degenerate=False, seed=None, cluster_tol=1e-10):
    """Projection onto a span of eigenvectors of the decomposed matrix.

    `selector` is either a :class:`SpectralSet` or a sequence of eigenvalue
    indices. With `mix_degenerate`, the selected vectors inside each
    (numerically) degenerate eigenspace are replaced by a random subspace
    of the same dimension, so the result is in general not a spectral
    projection.
    """
    n = dec.dim
    if isinstance(selector, SpectralSet):
        sel = selector.mask(dec.eigenvalues)
    else:
        sel = np.zeros(n, dtype=bool)
        sel[np.asarray(list(selector), dtype=int)] = True
    vecs = np.array(dec.eigenvectors)
    if mix_degenerate:
        rng = np.random.default_rng(seed)
        lam = np.real(dec.eigenvalues)
        scale = max(np.max(np.abs(lam)), 1.0) if n else 1.0
        for group in cluster_indices(lam, cluster_tol * scale):
            k = len(group)
            m = int(np.sum(sel[group]))
            if k < 2 or m == 0 or m == k:
                continue
            rotated = vecs[:, group] @ haar_unitary(k, rng)
            chosen = group[sel[group]]
            vecs[:, chosen] = rotated[:, :m]
            vecs[:, group[~sel[group]]] = rotated[:, m:]
    return projection_from_columns(vecs[:, sel], n)


def is_projection(p, tol=1e-10):
    p = np.asarray(p)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        return False
    scale = max(np.linalg.norm(p), 1.0)
    return (
        np.linalg.norm(p - p.conj().T) <= tol * scale
        and np.linalg.norm(p @ p - p) <= tol * scale
    )


def commutator_norm(a, b):
    return op_norm(a @ b - b @ a)
