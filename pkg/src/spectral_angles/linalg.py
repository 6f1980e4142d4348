"""Dense complex linear algebra: Jacobi eigensolver, SVD, functional calculus.

Every matrix is a two-dimensional ``complex128`` :class:`numpy.ndarray`.
The eigensolver is a cyclic complex Jacobi method in parallel (round-robin)
ordering, so each sweep is a sequence of vectorized block rotations.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainError,
    NoConvergence,
    NotHermitian,
    NotNormal,
)

TOL_HERM = 1e-10
TOL_PROJ = 1e-10
TOL_UNIT = 1e-10
TOL_EIG = 1e-10
TOL_MEMBERSHIP = 1e-9
TOL_RANK = 1e-8

JACOBI_MAX_SWEEPS = 100
JACOBI_OFFDIAG_TOL = 1e-13


def as_matrix(a):
    """Return `a` as a finite 2-D complex array (a fresh copy)."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    elif m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got an array of shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def adjoint(a):
    return a.conj().T


def herm(a):
    """Hermitian part ``(a + a^*) / 2``."""
    return 0.5 * (a + a.conj().T)


def fro(a):
    return float(np.linalg.norm(a))


def is_hermitian(a, tol=TOL_HERM):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    scale = max(fro(a), 1.0)
    return fro(a - a.conj().T) <= tol * scale


def is_normal(a, tol=TOL_HERM):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    scale = max(fro(a) ** 2, 1.0)
    return fro(a @ a.conj().T - a.conj().T @ a) <= tol * scale


def check_hermitian(a, tol=TOL_HERM, name="matrix"):
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise NotHermitian(f"{name} is not square: shape {a.shape}")
    if not is_hermitian(a, tol):
        raise NotHermitian(f"{name} is not Hermitian within tolerance {tol:g}")
    return herm(a)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues with orthonormal eigenvectors stored as columns.

    For Hermitian input the eigenvalues are real and ascending; for
    normal input (see :func:`normal_eig`) they are complex, ordered by
    real part then imaginary part.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)

    @property
    def dim(self):
        return self.eigenvectors.shape[0]

    def matrix(self):
        """Reassemble ``V diag(lambda) V^*``."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@lru_cache(maxsize=None)
def _round_robin(n):
    """Pairings for one parallel Jacobi sweep over ``n`` indices.

    Returns a list of ``(p, q)`` index arrays with ``p < q``; within a round
    no index appears twice. Uses the circle method with a dummy index when
    ``n`` is odd.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            i, j = players[k], players[m - 1 - k]
            if i < n and j < n:
                ps.append(min(i, j))
                qs.append(max(i, j))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


@lru_cache(maxsize=None)
def _rotation_plan(n):
    """Per round: pair indices, flat positions of the 2x2 blocks and of the pivots."""
    plan = []
    for p, q in _round_robin(n):
        blocks = np.concatenate([p * n + p, p * n + q, q * n + p, q * n + q])
        plan.append((p, q, blocks, p * n + q, q * n + p))
    return plan


def _jacobi_round(a, v, eye, p, q, blocks, pq, qp):
    """Annihilate the pivots ``a[p, q]`` of one round with a single block rotation ``G``.

    ``G`` has the ``2 x 2`` blocks ``[[c, s], [-e^{-i phi} s, e^{-i phi} c]]``
    on the index pairs; returns ``(G^* a G, v G)``.
    """
    diag = a.diagonal().real
    apq = a.flat[pq]
    mag = np.abs(apq)
    zero = mag == 0.0
    safe = np.where(zero, 1.0, mag)
    phase = np.where(zero, 1.0, apq.conj() / safe)  # e^{-i phi}
    tau = (diag[q] - diag[p]) / (2.0 * safe)
    with np.errstate(over="ignore"):
        t = np.copysign(1.0, tau) / (np.abs(tau) + np.sqrt(tau * tau + 1.0))
    t = np.where(zero, 0.0, t)
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    g = eye.copy()
    g.flat[blocks] = np.concatenate([c, s, -phase * s, phase * c])
    a = g.conj().T @ a @ g
    a.flat[pq] = 0.0
    a.flat[qp] = 0.0
    return a, v @ g


def _offdiag(a):
    # direct sum; subtracting the diagonal from the total cancels catastrophically
    return float(np.linalg.norm(a[~np.eye(a.shape[0], dtype=bool)]))


def jacobi_eig(a, max_sweeps=JACOBI_MAX_SWEEPS, tol=JACOBI_OFFDIAG_TOL, basis=None):
    """Cyclic complex Jacobi iteration on a Hermitian matrix.

    Returns unsorted ``(eigenvalues, eigenvectors)``. Iteration stops one
    sweep after the off-diagonal Frobenius norm drops below
    ``tol * ||a||_F``; :class:`NoConvergence` is raised if that does not
    happen within `max_sweeps` sweeps.

    A unitary `basis` close to an eigenbasis (for instance that of a nearby
    matrix) is used as the starting point, which cuts the sweep count.
    """
    a = herm(np.array(a, dtype=np.complex128))
    n = a.shape[0]
    scale = fro(a)
    if basis is None:
        v = np.eye(n, dtype=np.complex128)
    else:
        v = np.array(basis, dtype=np.complex128)
        a = herm(v.conj().T @ a @ v)
    if n == 1 or scale == 0.0:
        return np.real(np.diag(a)).copy(), v
    threshold = tol * scale
    plan = _rotation_plan(n)
    eye = np.eye(n, dtype=np.complex128)
    polish = True
    for _ in range(max_sweeps):
        off = _offdiag(a)
        if off <= threshold:
            # one more sweep takes the off-diagonal to roundoff (quadratic convergence);
            # otherwise eigenvectors of clusters with gap g stay mixed at off / g
            if not polish or off <= 4 * np.finfo(float).eps * scale:
                break
            polish = False
        for step in plan:
            a, v = _jacobi_round(a, v, eye, *step)
        a = herm(a)
    else:
        if _offdiag(a) > threshold:
            raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    return np.real(np.diag(a)).copy(), v


def hermitian_eig(a, tol=TOL_HERM, basis=None):
    """Spectral decomposition of a Hermitian matrix, eigenvalues ascending.

    `basis` optionally warm-starts the iteration (see :func:`jacobi_eig`).
    """
    a = check_hermitian(a, tol)
    w, v = jacobi_eig(a, basis=basis)
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(w[order], v[:, order])


def cluster_indices(values, tol):
    """Group sorted real `values` into runs whose neighbours differ by <= tol."""
    groups = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > tol:
            groups.append(np.arange(start, i))
            start = i
    return groups


def normal_eig(a, tol=TOL_HERM):
    """Spectral decomposition of a normal matrix.

    The Hermitian part is diagonalized first; within each of its
    (numerically) degenerate eigenspaces the skew part is diagonalized.
    Eigenvalues are Rayleigh quotients ``v^* a v``.
    """
    a = as_matrix(a)
    if not is_normal(a, tol):
        raise NotNormal("matrix is not normal within tolerance")
    re_part = herm(a)
    im_part = herm(-1j * a)
    dec = hermitian_eig(re_part)
    vecs = np.array(dec.eigenvectors)
    scale = max(fro(a), 1.0)
    for group in cluster_indices(dec.eigenvalues, 1e-8 * scale):
        if len(group) < 2:
            continue
        basis = vecs[:, group]
        sub = hermitian_eig(basis.conj().T @ im_part @ basis)
        vecs[:, group] = basis @ sub.eigenvectors
    z = np.einsum("ij,ik,kj->j", vecs.conj(), a, vecs)
    order = np.lexsort((z.imag, z.real))
    return SpectralDecomposition(z[order], vecs[:, order])


def op_norm(t):
    """Operator (spectral) norm, i.e. the largest singular value."""
    t = np.asarray(t)
    if t.size == 0:
        return 0.0
    return float(singular_values(t)[0])


def _orth_complement(u, n):
    """Orthonormal basis of the complement of the columns of `u` in C^n."""
    k = u.shape[1]
    if k == n:
        return np.zeros((n, 0), dtype=np.complex128)
    proj = np.eye(n) - u @ u.conj().T
    dec = hermitian_eig(herm(proj))
    return np.array(dec.eigenvectors[:, k:])


def _right_system(t):
    """For ``rows >= cols``: singular values, right vectors and ``t W`` (unnormalized left vectors)."""
    gram = herm(t.conj().T @ t)
    w = np.array(hermitian_eig(gram).eigenvectors[:, ::-1])
    b = t @ w
    s = np.linalg.norm(b, axis=0)
    order = np.argsort(-s, kind="stable")
    return s[order], w[:, order], b[:, order]


def svd(t):
    """Singular value decomposition ``t = U diag(s) W^*``.

    Returns ``(s, U, W)`` with `s` non-increasing of length
    ``min(rows, cols)``, `U` and `W` square unitary.

    Hermitian input is decomposed directly (singular values are the
    absolute eigenvalues), which keeps small singular values accurate.
    Otherwise the right vectors come from the eigendecomposition of
    ``t^* t`` and singular values are recomputed as ``||t w_i||``.
    """
    t = as_matrix(t)
    rows, cols = t.shape
    if rows < cols:
        s, u, w = svd(t.conj().T)
        return s, w, u

    if rows == cols and is_hermitian(t, 1e-14):
        dec = hermitian_eig(herm(t))
        lam = dec.eigenvalues
        order = np.argsort(-np.abs(lam), kind="stable")
        w = np.array(dec.eigenvectors[:, order])
        signs = np.where(lam[order] < 0.0, -1.0, 1.0)
        return np.abs(lam[order]), w * signs, w

    s, w, b = _right_system(t)
    cutoff = max(s[0], 1.0) * 1e-13 if cols else 0.0
    good = s > cutoff
    u_cols = b[:, good] / s[good]
    if np.any(good):
        # re-orthonormalize against roundoff; columns are already nearly orthonormal
        q, r = np.linalg.qr(u_cols)
        u_cols = q * np.sign(np.real(np.diag(r)))
    u = np.hstack([u_cols, _orth_complement(u_cols, rows)])
    return s, u, w


def singular_values(t):
    """Singular values alone, skipping the construction of the left vectors."""
    t = as_matrix(t)
    if t.shape[0] < t.shape[1]:
        t = t.conj().T
    if t.shape[1] == 0:
        return np.zeros(0)
    if t.shape[0] == t.shape[1] and is_hermitian(t, 1e-14):
        return np.sort(np.abs(hermitian_eig(herm(t)).eigenvalues))[::-1]
    return _right_system(t)[0]


def apply_function(dec, f):
    """Functional calculus ``V diag(f(lambda)) V^*``.

    `f` is called on the array of eigenvalues. A non-finite value marks an
    eigenvalue outside the domain of `f` and raises :class:`DomainError`.
    """
    with np.errstate(all="ignore"):
        fl = np.asarray(f(np.asarray(dec.eigenvalues)), dtype=np.complex128)
    if fl.shape != dec.eigenvalues.shape:
        fl = np.broadcast_to(fl, dec.eigenvalues.shape)
    bad = ~np.isfinite(fl)
    if np.any(bad):
        raise DomainError(f"function undefined at eigenvalue(s) {dec.eigenvalues[bad]}")
    v = dec.eigenvectors
    out = (v * fl) @ v.conj().T
    if np.all(fl.imag == 0.0) and np.all(np.isreal(dec.eigenvalues)):
        out = herm(out)
    return out


def matrix_abs(t):
    """``|t| = (t^* t)^{1/2}`` computed from the SVD."""
    s, _, w = svd(t)
    k = len(s)
    return herm((w[:, :k] * s) @ w[:, :k].conj().T)


def sqrtm_psd(a):
    dec = hermitian_eig(a)
    return apply_function(dec, lambda x: np.sqrt(np.clip(x, 0.0, None)))


def inv_sqrtm_pd(a):
    dec = hermitian_eig(a)
    if dec.eigenvalues[0] <= 0.0:
        raise DomainError("matrix is not positive definite")
    return apply_function(dec, lambda x: 1.0 / np.sqrt(x))


def numerical_rank(t, rtol=TOL_RANK):
    s = singular_values(t)
    if len(s) == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def range_basis(p, tol=0.5):
    """Orthonormal basis of the range of an orthogonal projection `p`."""
    dec = hermitian_eig(p)
    return np.array(dec.eigenvectors[:, dec.eigenvalues > tol])
