"""Operator angle between two subspaces and the objects built from it.

For orthogonal projections ``P`` and ``Q`` the closeness and separation
operators are

    C = P Q P + P' Q' P',    S = P Q' P + P' Q P',    C + S = I,

with ``P' = I - P``, and the operator angle is ``Theta = arccos(sqrt(C))``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotAProjection, SingularOperator, SubspacesTooFar
from .linalg import (
    TOL_PROJ,
    TOL_RANK,
    SpectralDecomposition,
    apply_function,
    as_matrix,
    herm,
    hermitian_eig,
    inv_sqrtm_pd,
    matrix_abs,
    numerical_rank,
    op_norm,
    sqrtm_psd,
)
from .spectral import is_projection


def check_projection(p, name="P", tol=TOL_PROJ):
    p = as_matrix(p)
    if not is_projection(p, tol):
        raise NotAProjection(f"{name} is not an orthogonal projection within tolerance {tol:g}")
    return herm(p)


def _pair(p, q):
    p = check_projection(p, "P")
    q = check_projection(q, "Q")
    if p.shape != q.shape:
        raise NotAProjection(f"P and Q act on different spaces: {p.shape} vs {q.shape}")
    return p, q


def closeness(p, q):
    p, q = _pair(p, q)
    eye = np.eye(p.shape[0])
    pp, qp = eye - p, eye - q
    return herm(p @ q @ p + pp @ qp @ pp)


def separation(p, q):
    p, q = _pair(p, q)
    eye = np.eye(p.shape[0])
    pp, qp = eye - p, eye - q
    return herm(p @ qp @ p + pp @ q @ pp)


@dataclass(frozen=True)
class OperatorAngle:
    """The Hermitian angle operator with its spectral decomposition.

    ``eigenvalues`` are ascending, in radians, inside ``[0, pi/2]``.
    """

    theta: np.ndarray
    decomposition: SpectralDecomposition

    @property
    def eigenvalues(self):
        return self.decomposition.eigenvalues

    @property
    def norm(self):
        """The maximal angle ``||Theta||``."""
        return float(self.eigenvalues[-1]) if len(self.eigenvalues) else 0.0

    def apply(self, f):
        return apply_function(self.decomposition, f)

    def sin(self):
        return self.apply(np.sin)

    def cos(self):
        return self.apply(np.cos)

    def sin2(self):
        return self.apply(lambda t: np.sin(2.0 * t))


def operator_angle(p, q):
    """``Theta(P, Q) = arccos(sqrt(C(P, Q)))``.

    Evaluated in the eigenbasis of ``P - Q``, which also diagonalizes ``C``.
    On an eigenvector ``v`` the sine of the angle is ``|(P - Q) v|`` and the
    cosine is ``|(P + Q - I) v|`` (since ``(P + Q - I)^2 = C``); taking
    ``atan2`` of the two keeps every angle accurate, including those near
    ``0`` and ``pi/2`` where ``arccos(sqrt(.))`` loses half the digits.
    """
    p, q = _pair(p, q)
    n = p.shape[0]
    diff = herm(p - q)
    dec = hermitian_eig(diff)
    v = dec.eigenvectors
    sines = np.clip(np.abs(dec.eigenvalues), 0.0, 1.0)
    cosines = np.clip(np.linalg.norm((p + q - np.eye(n)) @ v, axis=0), 0.0, 1.0)
    angles = np.arctan2(sines, cosines)
    order = np.argsort(angles, kind="stable")
    angle_dec = SpectralDecomposition(angles[order], np.array(v[:, order]))
    return OperatorAngle(apply_function(angle_dec, lambda t: t), angle_dec)


def sin_theta(p, q):
    """``sin Theta = |P - Q|``."""
    p, q = _pair(p, q)
    return matrix_abs(p - q)


def max_angle(p, q):
    """The maximal angle ``arcsin ||P - Q||`` in ``[0, pi/2]``."""
    p, q = _pair(p, q)
    return float(np.arcsin(min(op_norm(p - q), 1.0)))


def max_identity_terms(p, q):
    """``(||P Q'||, ||P' Q||)``; the larger of the two equals ``||P - Q||``."""
    p, q = _pair(p, q)
    eye = np.eye(p.shape[0])
    return op_norm(p @ (eye - q)), op_norm((eye - p) @ q)


def sin2_theta(p, q):
    return operator_angle(p, q).sin2()


def kpk_projection(p, q):
    """``R = K P K`` with the reflection ``K = Q - Q'``.

    ``R`` is again an orthogonal projection and ``sin 2Theta(P, Q) = sin Theta(P, R)``.
    """
    p, q = _pair(p, q)
    k = 2.0 * q - np.eye(q.shape[0])
    return herm(k @ p @ k)


def intersection_dims(p, q, rtol=TOL_RANK):
    """``(dim Ran P ∩ Ran Q', dim Ran P' ∩ Ran Q)`` from ranks of products.

    Uses ``dim Ran P ∩ Ran Q' = rank Q' - rank P' Q'`` and
    ``dim Ran P' ∩ Ran Q = rank Q - rank P Q``.
    """
    p, q = _pair(p, q)
    eye = np.eye(p.shape[0])
    pp, qp = eye - p, eye - q
    rank = lambda t: numerical_rank(t, rtol)  # noqa: E731
    return rank(qp) - rank(pp @ qp), rank(q) - rank(p @ q)


def equivalently_positioned(p, q, rtol=TOL_RANK):
    a, b = intersection_dims(p, q, rtol)
    return a == b


def direct_rotation(p, q):
    """Direct rotation ``U = (Q P + Q' P') C^{-1/2}`` from ``Ran P`` to ``Ran Q``.

    Requires ``C(P, Q)`` invertible, i.e. ``||P - Q|| < 1``. The result is
    unitary with ``Q U = U P``, ``U^2 = (Q - Q')(P - P')`` and
    ``Re U = cos Theta``.
    """
    p, q = _pair(p, q)
    c = closeness(p, q)
    smallest = hermitian_eig(c).eigenvalues[0]
    if smallest <= TOL_RANK:
        raise SubspacesTooFar(f"closeness operator is singular (smallest eigenvalue {smallest:.3g})")
    eye = np.eye(p.shape[0])
    return (q @ p + (eye - q) @ (eye - p)) @ inv_sqrtm_pd(c)


def direct_rotation_residuals(p, q, u):
    """Residuals of the four defining properties of a direct rotation."""
    eye = np.eye(p.shape[0])
    return {
        "unitary": op_norm(u.conj().T @ u - eye),
        "intertwines": op_norm(q @ u - u @ p),
        "square": op_norm(u @ u - (2 * q - eye) @ (2 * p - eye)),
        "real_part": op_norm(herm(u) - operator_angle(p, q).cos()),
    }


@dataclass(frozen=True)
class GraphOperator:
    """``Ran Q`` written as the graph ``{x + X x}`` of ``X : Ran P -> Ran P'``.

    ``X`` acts in the coordinates given by the orthonormal columns of
    ``basis_P`` and ``basis_Pperp``.
    """

    X: np.ndarray
    basis_P: np.ndarray
    basis_Pperp: np.ndarray

    @property
    def basis(self):
        return np.hstack([self.basis_P, self.basis_Pperp])

    def graph_vectors(self):
        """Columns ``x + X x`` for ``x`` running over ``basis_P``."""
        return self.basis_P + self.basis_Pperp @ self.X

    def blocks(self, m):
        """Split an operator into the ``2 x 2`` block form of this decomposition."""
        b0, b1 = self.basis_P, self.basis_Pperp
        return (
            b0.conj().T @ m @ b0,
            b0.conj().T @ m @ b1,
            b1.conj().T @ m @ b0,
            b1.conj().T @ m @ b1,
        )


def split_basis(p):
    """Orthonormal bases of ``Ran P`` and ``Ran P'``, ordered by eigenvalue then index."""
    dec = hermitian_eig(p)
    vecs = dec.eigenvectors
    one = dec.eigenvalues > 0.5
    return np.array(vecs[:, one]), np.array(vecs[:, ~one])


def graph_operator(p, q):
    """The operator ``X`` with ``Ran Q = {x + X x | x in Ran P}``.

    In block form ``Q_00 = (I + X^* X)^{-1}`` and ``Q_10 = X Q_00``, so
    ``X = Q_10 Q_00^{-1}``.
    """
    p, q = _pair(p, q)
    dist = op_norm(p - q)
    if dist >= 1.0 - TOL_RANK:
        raise SubspacesTooFar(f"||P - Q|| = {dist:.12g} is not below 1")
    b0, b1 = split_basis(p)
    q00 = herm(b0.conj().T @ q @ b0)
    q10 = b1.conj().T @ q @ b0
    if b0.shape[1] == 0:
        x = np.zeros((b1.shape[1], 0), dtype=np.complex128)
    else:
        x = np.linalg.solve(q00, q10.conj().T).conj().T
    return GraphOperator(x, b0, b1)


def block_unitary(g):
    """Unitary ``U`` mapping ``Ran P`` onto ``Ran Q`` built from the graph operator.

    In the block decomposition ``Ran P ⊕ Ran P'``::

        U = [[ (I + X^*X)^{-1/2}, -X^* (I + X X^*)^{-1/2} ],
             [ X (I + X^*X)^{-1/2},     (I + X X^*)^{-1/2} ]]

    Returned in ambient coordinates, so ``U P U^* = Q``.
    """
    x = g.X
    n1, n0 = x.shape
    try:
        h0 = inv_sqrtm_pd(np.eye(n0) + x.conj().T @ x) if n0 else np.zeros((0, 0))
        h1 = inv_sqrtm_pd(np.eye(n1) + x @ x.conj().T) if n1 else np.zeros((0, 0))
    except Exception as exc:  # pragma: no cover - I + X^*X is always positive definite
        raise SingularOperator(str(exc)) from exc
    blk = np.block([[h0, -x.conj().T @ h1], [x @ h0, h1]])
    b = g.basis
    return b @ blk @ b.conj().T


def h_blocks(g):
    """``(I + X^*X)^{1/2}`` and ``(I + X X^*)^{1/2}``."""
    x = g.X
    n1, n0 = x.shape
    r0 = sqrtm_psd(np.eye(n0) + x.conj().T @ x) if n0 else np.zeros((0, 0))
    r1 = sqrtm_psd(np.eye(n1) + x @ x.conj().T) if n1 else np.zeros((0, 0))
    return r0, r1
