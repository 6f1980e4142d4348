import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from spectral_angles.angles import graph_operator
from spectral_angles.errors import (
    DimensionMismatch,
    InvalidGap,
    NotHermitian,
    NotNormal,
    QuadratureUnderresolved,
    SpectraOverlap,
)
from spectral_angles.instances import generate_instance
from spectral_angles.linalg import hermitian_eig, op_norm
from spectral_angles.spectral import SpectralSet, random_reducing_projection, spectral_projection
from spectral_angles.sylvester import (
    NAGY_CONSTANT,
    NORMAL_CONSTANT,
    SylvesterProblem,
    bound_ratio,
    default_kernel,
    forward_transform,
    residual,
    riccati_as_sylvester_check,
    riccati_residual,
    solve_integral,
    solve_normal,
    solve_spectral,
)
from spectral_angles.verifiers import sharp_example

from .conftest import random_complex, random_unitary


def separated_problem(rng, n0, n1, d, interleave=False):
    """Hermitian ``B0``, ``B1`` whose spectra are at distance exactly ``d``."""
    lam = -rng.uniform(0, 2, n0)
    lam[0] = 0.0
    mu = d + rng.uniform(0, 2, n1)
    mu[0] = d
    if interleave:
        # B0 on both sides of B1
        lam[1::2] = mu.max() + d + rng.uniform(0, 1, len(lam[1::2]))
    u0, u1 = random_unitary(rng, n0), random_unitary(rng, n1)
    b0 = (u0 * lam) @ u0.conj().T
    b1 = (u1 * mu) @ u1.conj().T
    return SylvesterProblem.create((b0 + b0.conj().T) / 2, (b1 + b1.conj().T) / 2, random_complex(rng, n1, n0))


def test_scalar_equation():
    p = SylvesterProblem.create([[0.0]], [[2.0]], [[1.0]])
    np.testing.assert_allclose(solve_spectral(p), [[-0.5]])
    assert abs(solve_integral(p)[0, 0] + 0.5) < 1e-6


def test_zero_right_hand_side(rng):
    p = separated_problem(rng, 3, 4, 1.0)
    p = SylvesterProblem.create(p.B0, p.B1, np.zeros((4, 3)))
    assert not np.any(solve_spectral(p))
    assert not np.any(solve_integral(p))


def test_spectral_solver_against_scipy(rng):
    p = separated_problem(rng, 4, 5, 1.0)
    y = solve_spectral(p)
    # independent oracle: scipy solves A X + X B = Q, here -B1 Y + Y B0 = T
    ref = scipy.linalg.solve_sylvester(-p.B1, p.B0, p.T)
    assert op_norm(y - ref) < 1e-10 * op_norm(ref)
    assert residual(p, y) <= 1e-11
    assert bound_ratio(p, y) <= NAGY_CONSTANT


@given(st.integers(1, 6), st.integers(1, 6), st.floats(0.1, 3.0), st.booleans(), st.integers(0, 2**32 - 1))
def test_spectral_solver_properties(n0, n1, d, interleave, seed):
    rng = np.random.default_rng(seed)
    p = separated_problem(rng, n0, n1, d, interleave)
    y = solve_spectral(p)
    assert residual(p, y) <= 1e-11
    assert bound_ratio(p, y) <= NAGY_CONSTANT + 1e-9
    assert abs(p.d - d) < 1e-9


def test_integral_matches_spectral(rng):
    p = separated_problem(rng, 3, 3, 2.0, interleave=True)
    y = solve_integral(p)
    ref = solve_spectral(p)
    assert op_norm(y - ref) <= 1e-6 * op_norm(ref)


def test_underresolved_quadrature_is_loud(rng):
    p = separated_problem(rng, 2, 2, 1.0)
    with pytest.raises(QuadratureUnderresolved) as info:
        solve_integral(p, quad={"t_max": 5.0, "steps": 200, "tail": False})
    assert info.value.gap > 1e-6


def test_overlapping_spectra():
    p = SylvesterProblem.create(np.diag([0.0, 1.0]), np.diag([1.0]), np.ones((1, 2)))
    with pytest.raises(SpectraOverlap):
        solve_spectral(p)
    with pytest.raises(SpectraOverlap):
        solve_integral(p)


def test_problem_validation():
    with pytest.raises(NotHermitian):
        SylvesterProblem.create([[0.0, 1.0], [0.0, 0.0]], [[1.0]], [[1.0, 1.0]])
    with pytest.raises(DimensionMismatch):
        SylvesterProblem.create([[0.0]], [[1.0]], [[1.0, 1.0]])


def test_kernel_profile():
    for d in (0.5, 1.0, 2.0):
        k = default_kernel(d)
        assert k.fhat(d) == pytest.approx(1 / d)
        assert k.fhat(-d) == pytest.approx(-1 / d)
        assert k.fhat(0.0) == 0.0
        assert k.l1_norm >= np.pi / (2 * d)
        assert k.l1_norm <= 1.01 * np.pi / (2 * d)
    with pytest.raises(InvalidGap):
        default_kernel(0.0)


def test_kernel_l1_norm_by_quadrature():
    # independent estimate of the L1 norm of the time-domain kernel
    k = default_kernel(1.0)
    t = np.linspace(1e-9, 4000.0, 2_000_001)
    f = np.abs(k.f_time(t))
    est = 2 * np.trapezoid(f, t)
    assert abs(est - k.l1_norm) < 2e-3


def test_forward_transform_reproduces_profile():
    k = default_kernel(1.0)
    lam = np.array([1.0, -1.0, 1.5, -3.0, 7.0, 0.5, 0.0])
    got = forward_transform(k, lam)
    np.testing.assert_allclose(got, k.fhat(lam), atol=1e-8)


def test_normal_solver(rng):
    b0 = np.diag(np.exp(1j * np.array([0.0, 0.3, -0.3])))
    b1 = np.diag(2.0 * np.exp(1j * np.array([0.1, 3.0])))
    t = random_complex(rng, 2, 3)
    p = SylvesterProblem.create(b0, b1, t, normal=True)
    y = solve_normal(p)
    assert op_norm(y @ b0 - b1 @ y - t) <= 1e-11 * op_norm(t)
    assert op_norm(y) * p.d / op_norm(t) <= NORMAL_CONSTANT
    zero = SylvesterProblem.create(b0, b1, np.zeros((2, 3)), normal=True)
    assert not np.any(solve_normal(zero))
    with pytest.raises(NotNormal):
        SylvesterProblem.create([[0.0, 1.0], [0.0, 0.0]], [[3.0]], [[1.0, 1.0]], normal=True)


def test_riccati_residual_examples(rng):
    z = np.zeros((2, 3))
    a0, a1 = np.eye(3), 2 * np.eye(2)
    assert riccati_residual(z, a0, 0 * a0, a1, 0 * a1, np.zeros((3, 2))) == 0
    x = random_complex(rng, 2, 3)
    w = random_complex(rng, 3, 2)
    assert riccati_residual(x, a0, 0 * a0, a1, 0 * a1, w) > 1e-3
    with pytest.raises(DimensionMismatch):
        riccati_residual(x, a1, 0 * a1, a1, 0 * a1, w)


def test_riccati_for_sharp_example():
    ex = sharp_example(0.6)
    p = np.diag([1.0, 0.0])
    g = graph_operator(p, np.array(ex.quantities["projection"]))
    a0, _, _, a1 = g.blocks(ex.A)
    v0, w, _, v1 = g.blocks(ex.V)
    assert riccati_residual(g.X, a0, v0, a1, v1, w) <= 1e-9
    assert riccati_as_sylvester_check(g, ex.A, ex.V).residual <= 1e-9


def test_riccati_as_sylvester_random():
    for seed in range(10):
        inst = generate_instance(8, (3, 5), 1.0, 0.25, seed)
        dec_a, dec_b = hermitian_eig(inst.A), hermitian_eig(inst.A + inst.V)
        p = spectral_projection(dec_a, inst.sigma)
        q = spectral_projection(dec_b, SpectralSet.points(inst.sigma_eigenvalues).neighbourhood(0.5))
        chk = riccati_as_sylvester_check(graph_operator(p, q), inst.A, inst.V)
        assert chk.residual <= 1e-9
        assert chk.margin >= -1e-9


def test_riccati_as_sylvester_zero_perturbation():
    inst = generate_instance(5, (2, 3), 1.0, 0.0, 1)
    p = spectral_projection(hermitian_eig(inst.A), inst.sigma)
    chk = riccati_as_sylvester_check(graph_operator(p, p), inst.A, inst.V)
    assert chk.residual <= 1e-9 and chk.x_norm <= 1e-14


def test_reducing_random_q_solves_riccati():
    inst = generate_instance(6, (3, 3), 1.0, 0.2, 4)
    dec_b = hermitian_eig(inst.A + inst.V)
    p = spectral_projection(hermitian_eig(inst.A), inst.sigma)
    q = random_reducing_projection(dec_b, SpectralSet.points(inst.sigma_eigenvalues).neighbourhood(0.5))
    g = graph_operator(p, q)
    a0, _, _, a1 = g.blocks(inst.A)
    v0, w, _, v1 = g.blocks(inst.V)
    assert riccati_residual(g.X, a0, v0, a1, v1, w) <= 1e-9
