import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spectral_angles.errors import DomainError, NotHermitian, NotNormal
from spectral_angles.linalg import (
    apply_function,
    cluster_indices,
    hermitian_eig,
    jacobi_eig,
    matrix_abs,
    normal_eig,
    numerical_rank,
    op_norm,
    singular_values,
    sqrtm_psd,
    svd,
)

from .conftest import random_complex, random_hermitian, random_unitary


def test_eig_of_diagonal():
    dec = hermitian_eig(np.diag([1.0, -1.0]))
    np.testing.assert_allclose(dec.eigenvalues, [-1.0, 1.0])
    np.testing.assert_allclose(np.abs(dec.eigenvectors), [[0, 1], [1, 0]], atol=1e-15)


def test_eig_of_pauli_x():
    dec = hermitian_eig(np.array([[0, 1], [1, 0]]))
    np.testing.assert_allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-15)


def test_eig_random_reconstruction(rng):
    a = random_hermitian(rng, 8)
    dec = hermitian_eig(a)
    assert op_norm(dec.matrix() - a) <= 1e-10 * op_norm(a)
    np.testing.assert_allclose(dec.eigenvalues, np.linalg.eigvalsh(a), atol=1e-12)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_warm_start_matches_cold(rng):
    a = random_hermitian(rng, 10)
    basis = random_unitary(rng, 10)
    w1, _ = jacobi_eig(a)
    w2, v2 = jacobi_eig(a, basis=basis)
    np.testing.assert_allclose(np.sort(w1), np.sort(w2), atol=1e-12)
    assert np.linalg.norm(v2.conj().T @ v2 - np.eye(10)) < 1e-12


@given(st.integers(1, 14), st.integers(0, 2**32 - 1))
def test_eig_matches_numpy(n, seed):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, n)
    dec = hermitian_eig(a)
    v = dec.eigenvectors
    np.testing.assert_allclose(dec.eigenvalues, np.linalg.eigvalsh(a), atol=1e-11 * max(1, np.abs(a).max()))
    assert np.linalg.norm(v.conj().T @ v - np.eye(n)) < 1e-11
    assert np.all(np.diff(dec.eigenvalues) >= 0)


def test_eig_degenerate_spectrum(rng):
    u = random_unitary(rng, 6)
    a = (u * np.array([1, 1, 1, -2, -2, 5.0])) @ u.conj().T
    dec = hermitian_eig(a)
    np.testing.assert_allclose(dec.eigenvalues, [-2, -2, 1, 1, 1, 5], atol=1e-12)
    assert op_norm(dec.matrix() - a) < 1e-12


def test_svd_examples():
    s, _, _ = svd(np.diag([3.0, 1.0]))
    np.testing.assert_allclose(s, [3.0, 1.0])
    s, u, w = svd(np.zeros((3, 2)))
    np.testing.assert_allclose(s, [0.0, 0.0])
    assert np.linalg.norm(u.conj().T @ u - np.eye(3)) < 1e-12


def test_svd_truncation_oracle(rng):
    t = random_complex(rng, 5, 3)
    s, u, w = svd(t)
    np.testing.assert_allclose(s, np.linalg.svd(t, compute_uv=False), atol=1e-12)
    for n in range(1, 4):
        # best rank-(n-1) approximation from numpy's SVD
        uu, ss, vh = np.linalg.svd(t)
        approx = (uu[:, : n - 1] * ss[: n - 1]) @ vh[: n - 1]
        assert abs(np.linalg.norm(t - approx, 2) - s[n - 1]) < 1e-10


@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_svd_factorization(rows, cols, seed):
    rng = np.random.default_rng(seed)
    t = random_complex(rng, rows, cols)
    s, u, w = svd(t)
    k = min(rows, cols)
    sig = np.zeros((rows, cols))
    sig[:k, :k] = np.diag(s)
    assert np.linalg.norm(u @ sig @ w.conj().T - t) < 1e-10 * max(1, s[0])
    assert np.linalg.norm(u.conj().T @ u - np.eye(rows)) < 1e-10
    assert np.linalg.norm(w.conj().T @ w - np.eye(cols)) < 1e-10
    assert np.all(np.diff(s) <= 1e-12)
    np.testing.assert_allclose(singular_values(t), s, atol=1e-11 * max(1, s[0]))


def test_op_norm_dominates_random_vectors(rng):
    t = random_complex(rng, 6, 4)
    x = random_complex(rng, 4, 2000)
    ratios = np.linalg.norm(t @ x, axis=0) / np.linalg.norm(x, axis=0)
    assert ratios.max() <= op_norm(t) + 1e-12
    assert abs(op_norm(t) - np.linalg.norm(t, 2)) < 1e-12


def test_apply_function_examples(rng):
    a = random_hermitian(rng, 5)
    dec = hermitian_eig(a)
    assert op_norm(apply_function(dec, lambda x: x) - a) < 1e-12
    sq = apply_function(hermitian_eig(np.diag([2.0, 3.0])), lambda x: x**2)
    np.testing.assert_allclose(sq, np.diag([4.0, 9.0]), atol=1e-14)


def test_apply_function_arccos_sqrt_per_eigenvalue(rng):
    c = np.diag([0.0, 0.25, 0.5, 1.0])
    u = random_unitary(rng, 4)
    theta = apply_function(hermitian_eig(u @ c @ u.conj().T), lambda x: np.arccos(np.sqrt(x)))
    np.testing.assert_allclose(np.linalg.eigvalsh(theta), np.sort(np.arccos(np.sqrt(np.diag(c)))), atol=1e-7)


def test_apply_function_domain_error():
    with pytest.raises(DomainError):
        apply_function(hermitian_eig(np.diag([-1.0, 1.0])), np.sqrt)


def test_matrix_abs_and_sqrt(rng):
    t = random_complex(rng, 4)
    a = matrix_abs(t)
    assert np.linalg.norm(a @ a - t.conj().T @ t) < 1e-10
    g = random_complex(rng, 4)
    psd = g @ g.conj().T
    r = sqrtm_psd(psd)
    assert np.linalg.norm(r @ r - psd) < 1e-10


def test_normal_eig(rng):
    u = random_unitary(rng, 5)
    z = np.array([1 + 1j, -2, 0.5j, 3 - 1j, -1 - 1j])
    dec = normal_eig((u * z) @ u.conj().T)
    np.testing.assert_allclose(np.sort_complex(dec.eigenvalues), np.sort_complex(z), atol=1e-12)
    with pytest.raises(NotNormal):
        normal_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_cluster_indices_and_rank():
    groups = cluster_indices(np.array([0.0, 1e-12, 1.0, 2.0, 2.0]), 1e-10)
    assert [list(g) for g in groups] == [[0, 1], [2], [3, 4]]
    assert numerical_rank(np.diag([1.0, 1e-9, 0.0])) == 1
