"""Executable checks of the subspace perturbation bounds.

Every ``verify_*`` function returns a :class:`VerificationReport` holding
the bound, the measured quantity and their difference. Identities that the
argument relies on along the way are recorded under ``details["checks"]``
as ``{"residual", "tol", "ok"}`` entries.
"""

from dataclasses import dataclass, field

import numpy as np

from .angles import (
    block_unitary,
    check_projection,
    direct_rotation,
    direct_rotation_residuals,
    graph_operator,
    kpk_projection,
    operator_angle,
)
from .errors import (
    InvalidX,
    NotApplicable,
    NotNormal,
    NotReducing,
    SeparationViolated,
    SubspacesTooFar,
)
from .linalg import (
    TOL_RANK,
    as_matrix,
    check_hermitian,
    fro,
    herm,
    hermitian_eig,
    is_normal,
    normal_eig,
    op_norm,
    singular_values,
)
from .norms import OPERATOR, NormMode, SingularProfile, ky_fan_all
from .spectral import SpectralSet, projection_from_columns, set_distance, spectral_projection
from .sylvester import (
    NAGY_CONSTANT,
    NORMAL_CONSTANT,
    RESIDUAL_FLOOR,
    riccati_as_sylvester_check,
    riccati_operator,
    riccati_residual,
)

TOL_MARGIN = 1e-8
TOL_IDENTITY = 1e-10
TOL_REDUCING = 1e-10
TOL_GAP = 1e-12
CONTINUITY_STEPS = 64


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one bound check; ``margin = bound - measured``."""

    theorem: str
    bound: float
    measured: float
    dims: tuple
    d: float
    vnorm: float
    seed: int = None
    tol_margin: float = TOL_MARGIN
    details: dict = field(default_factory=dict)

    @property
    def margin(self):
        return float(self.bound - self.measured)

    @property
    def passed(self):
        return self.margin >= -self.tol_margin

    @property
    def checks_ok(self):
        return all(c["ok"] for c in self.details.get("checks", {}).values())

    @property
    def ok(self):
        """Bound satisfied and every recorded identity within tolerance."""
        return self.passed and self.checks_ok

    def with_seed(self, seed):
        return VerificationReport(
            self.theorem, self.bound, self.measured, self.dims, self.d, self.vnorm, seed, self.tol_margin, self.details
        )

    def to_json(self):
        return {
            "theorem": self.theorem,
            "seed": self.seed,
            "dims": list(self.dims),
            "d": self.d,
            "vnorm": self.vnorm,
            "bound": self.bound,
            "measured": self.measured,
            "margin": self.margin,
            "passed": self.passed,
            "details": self.details,
        }


def _check(checks, name, residual, tol=TOL_IDENTITY):
    residual = float(residual)
    checks[name] = {"residual": residual, "tol": tol, "ok": bool(residual <= tol)}


def _split(dec, sigma):
    """Eigen-columns of ``dec`` inside and outside `sigma`."""
    inside = sigma.mask(dec.eigenvalues)
    return inside, dec.eigenvalues[inside], dec.eigenvalues[~inside]


def _spectral_parts(A, sigma, normal=False):
    dec = normal_eig(A) if normal else hermitian_eig(A)
    inside, sig, rest = _split(dec, sigma)
    P = projection_from_columns(dec.eigenvectors[:, inside], dec.dim)
    return dec, P, sig, rest


def _require_reducing(Q, B):
    # Frobenius norms bound the operator norms from the safe side
    n = B.shape[0]
    scale = max(fro(B) / np.sqrt(n), np.finfo(float).tiny)
    res = fro(Q @ B - B @ Q) / scale
    if res > TOL_REDUCING:
        raise NotReducing(f"Q does not commute with A + V (relative commutator {res:.3g})")
    return res


def _gap(sig, rest):
    d = set_distance(sig, rest)
    if not d > TOL_GAP:
        raise SeparationViolated("sigma and its complement in spec(A) are not separated")
    return d


def _profile_of_hermitian_eigs(values):
    return SingularProfile(np.sort(np.abs(values))[::-1])


# ---------------------------------------------------------------------------
# sin Theta theorems


def verify_sin_theta_0(A, V, delta, Delta, seed=None, tol_margin=TOL_MARGIN):
    """``dist(delta, Delta) ||E_A(delta) E_{A+V}(Delta)|| <= (pi/2) ||E_A(delta) V E_{A+V}(Delta)||``.

    The distance is taken between the eigenvalues of ``A`` in `delta` and
    those of ``A + V`` in `Delta`, which is never smaller than the distance
    between the sets themselves.
    """
    A, V = check_hermitian(A, name="A"), check_hermitian(V, name="V")
    dec_a = hermitian_eig(A)
    dec_b = hermitian_eig(A + V)
    E = spectral_projection(dec_a, delta)
    F = spectral_projection(dec_b, Delta)
    lam = dec_a.eigenvalues[delta.mask(dec_a.eigenvalues)]
    mu = dec_b.eigenvalues[Delta.mask(dec_b.eigenvalues)]
    dist = set_distance(lam, mu)
    overlap = op_norm(E @ F)
    measured = 0.0 if overlap == 0.0 or not np.isfinite(dist) else dist * overlap
    bound = NAGY_CONSTANT * op_norm(E @ V @ F)
    details = {
        "eigen_distance": dist,
        "set_distance": delta.distance(Delta),
        "overlap_norm": overlap,
    }
    return VerificationReport(
        "sin-theta-0", bound, measured, A.shape, dist, op_norm(V), seed, tol_margin, details
    )


def verify_symmetric_sin_theta(A, V, sigma, Sigma, omega, Omega, d=None, seed=None, tol_margin=TOL_MARGIN):
    """``||E_A(sigma) - E_{A+V}(omega)|| <= (pi/2) ||V|| / d``.

    `sigma`, `Sigma` must split ``spec(A)`` and `omega`, `Omega` must split
    ``spec(A + V)``. ``d`` defaults to the smaller of the two cross
    distances ``dist(sigma, Omega)`` and ``dist(Sigma, omega)`` measured on
    eigenvalues; a larger ``d`` raises :class:`SeparationViolated`.
    Also checks ``||P - Q|| = max(||E_A(sigma) E_{A+V}(Omega)||, ||E_A(Sigma) E_{A+V}(omega)||)``.
    """
    A, V = check_hermitian(A, name="A"), check_hermitian(V, name="V")
    dec_a = hermitian_eig(A)
    dec_b = hermitian_eig(A + V)
    a_in, a_out = sigma.mask(dec_a.eigenvalues), Sigma.mask(dec_a.eigenvalues)
    b_in, b_out = omega.mask(dec_b.eigenvalues), Omega.mask(dec_b.eigenvalues)
    if np.any(a_in == a_out) or np.any(b_in == b_out):
        raise SeparationViolated("the sets must partition the spectra of A and A + V")
    cross = min(
        set_distance(dec_a.eigenvalues[a_in], dec_b.eigenvalues[b_out]),
        set_distance(dec_a.eigenvalues[a_out], dec_b.eigenvalues[b_in]),
    )
    if d is None:
        d = cross
    elif d > cross * (1 + 1e-12):
        raise SeparationViolated(f"requested d = {d} exceeds the measured separation {cross}")
    if not d > 0:
        raise SeparationViolated("spectral components touch")

    n = dec_a.dim
    P = projection_from_columns(dec_a.eigenvectors[:, a_in], n)
    Pc = projection_from_columns(dec_a.eigenvectors[:, a_out], n)
    Q = projection_from_columns(dec_b.eigenvectors[:, b_in], n)
    Qc = projection_from_columns(dec_b.eigenvectors[:, b_out], n)
    measured = op_norm(P - Q)
    vn = op_norm(V)
    bound = NAGY_CONSTANT * vn / d if np.isfinite(d) else 0.0
    terms = (op_norm(P @ Qc), op_norm(Pc @ Q))
    checks = {}
    _check(checks, "max_identity", abs(measured - max(terms)))
    details = {"cross_distance": cross, "max_terms": list(terms), "checks": checks}
    return VerificationReport("symmetric-sin-theta", bound, measured, A.shape, d, vn, seed, tol_margin, details)


def verify_symmetric_sin_theta_ideals(A, V, P, Q, norm_mode=OPERATOR, seed=None, tol_margin=TOL_MARGIN):
    """``|||P - Q||| <= (pi/2) |||V||| / d`` for reducing projections.

    ``P`` reduces ``A``, ``Q`` reduces ``A + V``, and ``d`` is the smaller
    cross distance between the spectra of the parts of ``A`` and ``A + V``.
    Also checks that ``T = P V Q' - P' V Q`` is Ky Fan dominated by ``V``.
    """
    A, V = check_hermitian(A, name="A"), check_hermitian(V, name="V")
    P, Q = check_projection(P, "P"), check_projection(Q, "Q")
    mode = norm_mode if isinstance(norm_mode, NormMode) else NormMode.parse(norm_mode)
    B = A + V
    _require_reducing(P, A)
    _require_reducing(Q, B)
    n = A.shape[0]

    def part_spectra(M, R):
        dec = hermitian_eig(R)
        one = dec.eigenvalues > 0.5
        b_in, b_out = dec.eigenvectors[:, one], dec.eigenvectors[:, ~one]
        inner = hermitian_eig(herm(b_in.conj().T @ M @ b_in)).eigenvalues if b_in.shape[1] else np.zeros(0)
        outer = hermitian_eig(herm(b_out.conj().T @ M @ b_out)).eigenvalues if b_out.shape[1] else np.zeros(0)
        return inner, outer

    a0, a1 = part_spectra(A, P)
    l0, l1 = part_spectra(B, Q)
    d = min(set_distance(a0, l1), set_distance(a1, l0))
    if not d > TOL_GAP:
        raise SeparationViolated("spectra of the parts of A and A + V are not separated")

    eye = np.eye(n)
    T = P @ V @ (eye - Q) - (eye - P) @ V @ Q
    kt, kv = ky_fan_all(T), ky_fan_all(V)
    checks = {}
    _check(checks, "T_dominated_by_V", max(float(np.max(kt - kv)), 0.0), 1e-10 * max(kv[-1], 1.0))

    diff = hermitian_eig(herm(P - Q)).eigenvalues
    measured = mode.of_profile(_profile_of_hermitian_eigs(diff))
    vmode = mode(V)
    bound = NAGY_CONSTANT * vmode / d if np.isfinite(d) else 0.0
    details = {"norm": mode.label, "norm_of_V": vmode, "checks": checks}
    return VerificationReport(
        "symmetric-sin-theta-ideals", bound, measured, A.shape, d, op_norm(V), seed, tol_margin, details
    )


# ---------------------------------------------------------------------------
# sin 2 Theta theorems


def _sin2_reports(A, V, sigma, Q, modes, constant, normal, theorem, seed, tol_margin):
    if normal:
        A, V = as_matrix(A), as_matrix(V)
        if not is_normal(A):
            raise NotNormal("A is not normal")
    else:
        A, V = check_hermitian(A, name="A"), check_hermitian(V, name="V")
    Q = check_projection(Q, "Q")
    B = A + V
    comm = _require_reducing(Q, B)
    dec_a, P, sig, rest = _spectral_parts(A, sigma, normal)
    d = _gap(sig, rest)
    n = dec_a.dim

    angle = operator_angle(P, Q)
    theta = angle.eigenvalues
    sin2 = np.sin(2.0 * theta)
    prof = SingularProfile(np.sort(np.abs(sin2))[::-1])

    # reflection route: R = K P K is the sigma-projection of D = A + V - K V K = K A K
    K = 2.0 * Q - np.eye(n)
    R = kpk_projection(P, Q)
    D = B - K @ V @ K
    checks = {}
    if normal:
        if not is_normal(D):
            raise NotNormal("D = A + V - K V K is not normal")
        dec_d = normal_eig(D)
    else:
        dec_d = hermitian_eig(herm(D))
    _check(checks, "reflection_projection", op_norm(spectral_projection(dec_d, sigma) - R), 1e-9)
    dec_pr = hermitian_eig(herm(P - R))
    route = np.sort(np.abs(dec_pr.eigenvalues))[::-1]
    _check(checks, "reflection_route", float(np.max(np.abs(route - prof.values), initial=0.0)))
    sin_pr = herm((dec_pr.eigenvectors * np.abs(dec_pr.eigenvalues)) @ dec_pr.eigenvectors.conj().T)
    _check(checks, "lemma_matrix", fro(angle.sin2() - sin_pr))
    kv_v, kv_dev = ky_fan_all(V), ky_fan_all(D - A)
    _check(checks, "D_minus_A_dominated_by_2V", max(float(np.max(kv_dev - 2 * kv_v)), 0.0), 1e-10 * max(kv_v[-1], 1.0))

    v_prof = SingularProfile(singular_values(V))
    vn = v_prof.schatten(np.inf)
    base = {
        "angles": theta.tolist(),
        "commutator": comm,
        "constant": constant,
    }
    reports = []
    for mode in modes:
        measured = mode.of_profile(prof)
        vmode = mode.of_profile(v_prof)
        bound = constant * 2.0 * vmode / d
        details = dict(base, norm=mode.label, norm_of_V=vmode, checks=checks)
        reports.append(VerificationReport(theorem, bound, measured, A.shape, d, vn, seed, tol_margin, details))
    return reports


def _modes(norm_modes):
    if norm_modes is None:
        return [OPERATOR]
    if isinstance(norm_modes, (str, NormMode)):
        norm_modes = [norm_modes]
    return [m if isinstance(m, NormMode) else NormMode.parse(m) for m in norm_modes]


def verify_generic_sin2_theta(A, V, sigma, Q, norm_mode=OPERATOR, seed=None, tol_margin=TOL_MARGIN):
    """``|||sin 2Theta(E_A(sigma), Q)||| <= (pi/2) 2 |||V||| / d`` for any reducing ``Q`` of ``A + V``.

    ``d`` is the distance between the eigenvalues of ``A`` inside `sigma`
    and the rest. The checks compare the direct evaluation with the
    reflection route ``sin 2Theta(P, Q) = sin Theta(P, K P K)``, where
    ``K P K`` is the `sigma` spectral projection of ``A + V - K V K``.
    """
    return _sin2_reports(
        A, V, sigma, Q, _modes(norm_mode), NAGY_CONSTANT, False, "sin2theta-generic", seed, tol_margin
    )[0]


def verify_generic_sin2_theta_modes(A, V, sigma, Q, norm_modes, seed=None, tol_margin=TOL_MARGIN):
    """Like :func:`verify_generic_sin2_theta` for several norms, sharing the decompositions."""
    return _sin2_reports(A, V, sigma, Q, _modes(norm_modes), NAGY_CONSTANT, False, "sin2theta-generic", seed, tol_margin)


def verify_normal_variants(A, V, sigma, Q, constant=NORMAL_CONSTANT, norm_mode=OPERATOR, seed=None, tol_margin=TOL_MARGIN):
    """The sin 2Theta bound for normal ``A`` with the Sylvester constant for normal operators.

    `sigma` selects eigenvalues in the complex plane (disks, or intervals
    for real spectra). ``V`` need not be Hermitian; ``Q`` must commute with
    ``A + V``.
    """
    modes = _modes(norm_mode)
    return _sin2_reports(A, V, sigma, Q, modes, constant, True, "normal-variants", seed, tol_margin)[0]


def verify_sin2theta_scalar(A, V, sigma, Q, seed=None, tol_margin=TOL_MARGIN):
    """``sin 2theta <= pi ||V|| / d`` for the maximal angle ``theta = arcsin ||E_A(sigma) - Q||``.

    When ``theta < pi/2`` the graph operator of ``Ran Q`` over
    ``Ran E_A(sigma)`` is formed and its Riccati residual recorded.
    """
    A, V = check_hermitian(A, name="A"), check_hermitian(V, name="V")
    Q = check_projection(Q, "Q")
    B = A + V
    _require_reducing(Q, B)
    dec_a, P, sig, rest = _spectral_parts(A, sigma)
    d = _gap(sig, rest)
    vn = op_norm(V)

    angle = operator_angle(P, Q)
    dist = op_norm(P - Q)
    # the largest operator angle is arcsin ||P - Q||, but without arcsin's loss of digits near 1
    theta = angle.norm
    measured = float(np.sin(2.0 * theta))
    checks = {}
    _check(checks, "sine_of_max_angle", abs(np.sin(theta) - dist))
    _check(checks, "max_angle_consistency", max(measured - float(np.max(np.sin(2 * angle.eigenvalues))), 0.0))
    details = {"theta": theta}
    if dist >= 1.0 - TOL_RANK:
        # no graph representation; sin 2theta is (numerically) zero and the bound is immediate
        details["case"] = "theta = pi/2"
    else:
        details["case"] = "theta < pi/2"
        g = graph_operator(P, Q)
        A0, _, _, A1 = g.blocks(A)
        V0, W, _, V1 = g.blocks(V)
        if g.X.size:
            # near theta = pi/2 the terms grow like ||X||^2, so scale accordingly
            xn = op_norm(g.X)
            scale = (1.0 + xn) ** 2 * max(op_norm(B), np.finfo(float).eps)
            _check(checks, "riccati", op_norm(riccati_operator(g.X, A0, V0, A1, V1, W)) / scale, 1e-9)
            _check(checks, "graph_angle", abs(np.arctan(xn) - theta))
    details["checks"] = checks
    return VerificationReport("sin2theta-scalar", np.pi * vn / d, measured, A.shape, d, vn, seed, tol_margin, details)


def verify_graph_riccati(A, V, sigma, Q, seed=None, tol_margin=TOL_MARGIN):
    """Graph operator, Riccati equation and block unitary for ``||E_A(sigma) - Q|| < 1``.

    The bound is ``(pi/2)(1 + ||X||^2)||V|| / d`` on ``||X||``, obtained by
    reading the Riccati equation as a Sylvester equation.
    """
    A, V = check_hermitian(A, name="A"), check_hermitian(V, name="V")
    Q = check_projection(Q, "Q")
    _require_reducing(Q, A + V)
    dec_a, P, sig, rest = _spectral_parts(A, sigma)
    _gap(sig, rest)
    g = graph_operator(P, Q)
    if g.X.size == 0:
        raise SubspacesTooFar("sigma or its complement is empty")
    A0, _, _, A1 = g.blocks(A)
    V0, W, _, V1 = g.blocks(V)
    U = block_unitary(g)
    n = A.shape[0]
    xn = op_norm(g.X)
    checks = {}
    _check(checks, "graph_angle", abs(np.arctan(xn) - np.arcsin(min(op_norm(P - Q), 1.0))))
    floor = RESIDUAL_FLOOR * op_norm(A)
    _check(checks, "riccati", riccati_residual(g.X, A0, V0, A1, V1, W, floor), 1e-9)
    _check(checks, "unitary", op_norm(U.conj().T @ U - np.eye(n)), 1e-9)
    _check(checks, "maps_P_to_Q", op_norm(U @ P @ U.conj().T - Q), 1e-9)
    rs = riccati_as_sylvester_check(g, A, V, U)
    _check(checks, "riccati_as_sylvester", rs.residual, 1e-9)
    details = {"x_norm": xn, "checks": checks}
    return VerificationReport("graph-riccati", rs.bound, xn, A.shape, rs.gap, op_norm(V), seed, tol_margin, details)


# ---------------------------------------------------------------------------
# maximal angle and the spectrum of Theta


def _nbhd(sig, d):
    return SpectralSet.points(sig).neighbourhood(d / 2.0)


def verify_corollary(A, V, sigma, d=None, steps=CONTINUITY_STEPS, seed=None, tol_margin=TOL_MARGIN):
    """``arcsin ||E_A(sigma) - E_{A+V}(O_{d/2}(sigma))|| <= (1/2) arcsin(pi ||V|| / d)``.

    Applies when ``||V|| <= d / pi``; otherwise :class:`NotApplicable` is
    raised. The path ``t -> A + tV`` is sampled at ``steps + 1`` points:
    every angle must stay below ``pi/4`` and below the bound for ``tV``,
    and consecutive sines may move by at most the symmetric sin Theta bound
    for the step ``V / steps``.
    """
    A, V = check_hermitian(A, name="A"), check_hermitian(V, name="V")
    dec_a, P, sig, rest = _spectral_parts(A, sigma)
    gap = _gap(sig, rest)
    if d is None:
        d = gap
    elif d > gap * (1 + 1e-12):
        raise SeparationViolated(f"requested d = {d} exceeds the spectral distance {gap}")
    vn = op_norm(V)
    if vn > d / np.pi * (1 + 1e-12):
        raise NotApplicable(f"||V|| = {vn:.6g} exceeds d/pi = {d / np.pi:.6g}")
    ratio = min(np.pi * vn / d, 1.0)
    bound = 0.5 * float(np.arcsin(ratio))
    nbhd = _nbhd(sig, d)

    a_in = sigma.mask(dec_a.eigenvalues)
    b, b_perp = dec_a.eigenvectors[:, a_in], dec_a.eigenvectors[:, ~a_in]
    basis = dec_a.eigenvectors
    sines, thetas, step_bounds, jumps = [], [], [], []
    prev = None
    for k in range(steps + 1):
        t = k / steps
        dec = hermitian_eig(herm(A + t * V), basis=basis)
        basis = dec.eigenvectors
        inside = nbhd.mask(dec.eigenvalues)
        c, c_perp = basis[:, inside], basis[:, ~inside]
        # ||P - Q|| = max(||P Q'||, ||P' Q||), evaluated on the small blocks
        s = max(op_norm(b.conj().T @ c_perp), op_norm(b_perp.conj().T @ c))
        sines.append(s)
        thetas.append(float(np.arcsin(min(s, 1.0))))
        if prev is not None:
            lam_prev, in_prev = prev
            cross = min(
                set_distance(lam_prev[in_prev], dec.eigenvalues[~inside]),
                set_distance(lam_prev[~in_prev], dec.eigenvalues[inside]),
            )
            step_bounds.append(NAGY_CONSTANT * (vn / steps) / cross if np.isfinite(cross) else 0.0)
            jumps.append(abs(sines[-1] - sines[-2]))
        prev = (dec.eigenvalues, inside)

    grid_bounds = [0.5 * float(np.arcsin(min(np.pi * (k / steps) * vn / d, 1.0))) for k in range(steps + 1)]
    checks = {}
    _check(checks, "below_pi_over_4", max(max(thetas) - np.pi / 4, 0.0), tol_margin)
    _check(checks, "scaled_bounds", max(max(th - b for th, b in zip(thetas, grid_bounds)), 0.0), tol_margin)
    over = [j - b for j, b in zip(jumps, step_bounds)]
    _check(checks, "continuity_steps", max(max(over, default=0.0), 0.0))
    details = {
        "steps": steps,
        "grid_theta": thetas,
        "max_jump": max(jumps, default=0.0),
        "checks": checks,
    }
    return VerificationReport("corollary", bound, thetas[-1], A.shape, d, vn, seed, tol_margin, details)


def _bands(theta, alpha, tol):
    low = [float(t) for t in theta if t <= alpha + tol]
    high = [float(t) for t in theta if t >= np.pi / 2 - alpha - tol]
    return low, high


def theta_spectral_gap(A, V, sigma, Q, seed=None, tol=TOL_MARGIN):
    """No eigenvalue of ``Theta(E_A(sigma), Q)`` in ``(alpha, pi/2 - alpha)``, ``alpha = (1/2) arcsin(pi ||V|| / d)``.

    ``measured`` is the deepest intrusion of an eigenvalue into the
    forbidden band (negative when there is none) and ``bound`` is zero.
    """
    A, V = check_hermitian(A, name="A"), check_hermitian(V, name="V")
    Q = check_projection(Q, "Q")
    _require_reducing(Q, A + V)
    dec_a, P, sig, rest = _spectral_parts(A, sigma)
    d = _gap(sig, rest)
    vn = op_norm(V)
    if not vn < d / np.pi:
        raise NotApplicable(f"||V|| = {vn:.6g} is not below d/pi = {d / np.pi:.6g}")
    alpha = 0.5 * float(np.arcsin(np.pi * vn / d))
    theta = operator_angle(P, Q).eigenvalues
    intrusion = np.minimum(theta - alpha, np.pi / 2 - alpha - theta)
    low, high = _bands(theta, alpha, tol)
    details = {"alpha": alpha, "low_band": low, "high_band": high}
    return VerificationReport(
        "spectral-gap", 0.0, float(np.max(intrusion, initial=-np.inf)), A.shape, d, vn, seed, tol, details
    )


def mixed_subspace_demo(A, V, sigma, seed=None, tol_margin=TOL_MARGIN):
    """A reducing subspace whose angle operator populates both spectral bands.

    With ``Q = E_{A+V}(O_{d/2}(sigma))``, the projection ``R`` is spanned by
    a random set of eigenvectors of ``A + V`` containing at least one from
    ``Ran Q`` and one from ``Ran Q'``. For unit vectors ``x`` in
    ``Ran R ∩ Ran Q`` the form ``<sin^2 Theta(P, R) x, x>`` is at most
    ``sin^2 alpha``; for ``x`` in ``Ran R ∩ Ran Q'`` it is at least
    ``cos^2 alpha``. ``R = Q`` and ``R = Q'`` serve as controls with a
    single band each.
    """
    A, V = check_hermitian(A, name="A"), check_hermitian(V, name="V")
    dec_a, P, sig, rest = _spectral_parts(A, sigma)
    d = _gap(sig, rest)
    vn = op_norm(V)
    if not vn < d / np.pi:
        raise NotApplicable(f"||V|| = {vn:.6g} is not below d/pi = {d / np.pi:.6g}")
    alpha = 0.5 * float(np.arcsin(np.pi * vn / d))
    dec_b = hermitian_eig(A + V)
    inside = _nbhd(sig, d).mask(dec_b.eigenvalues)
    idx_q, idx_qc = np.flatnonzero(inside), np.flatnonzero(~inside)
    if len(idx_q) == 0 or len(idx_qc) == 0:
        raise NotApplicable("need eigenvectors on both sides of the split")

    rng = np.random.default_rng(seed)

    def pick(idx):
        # one vector is always taken; when possible one is always left out, so that R is not Q, Q' or I
        idx = [int(i) for i in rng.permutation(idx)]
        extras = [i for i in idx[2:] if rng.random() < 0.5]
        return [idx[0], *extras]

    pick_q, pick_qc = pick(idx_q), pick(idx_qc)
    n = dec_b.dim
    vecs = dec_b.eigenvectors
    R = projection_from_columns(vecs[:, sorted(pick_q + pick_qc)], n)
    Q = projection_from_columns(vecs[:, idx_q], n)
    Qc = np.eye(n) - Q

    sin2 = herm((P - R) @ (P - R))
    forms_low = [float(np.real(vecs[:, i].conj() @ sin2 @ vecs[:, i])) for i in pick_q]
    forms_high = [float(np.real(vecs[:, i].conj() @ sin2 @ vecs[:, i])) for i in pick_qc]
    s2, c2 = np.sin(alpha) ** 2, np.cos(alpha) ** 2

    low, high = _bands(operator_angle(P, R).eigenvalues, alpha, tol_margin)
    ctrl_q = _bands(operator_angle(P, Q).eigenvalues, alpha, tol_margin)
    ctrl_qc = _bands(operator_angle(P, Qc).eigenvalues, alpha, tol_margin)

    checks = {}
    _check(checks, "low_forms", max(max(forms_low) - s2, 0.0), tol_margin)
    _check(checks, "high_forms", max(c2 - min(forms_high), 0.0), tol_margin)
    _check(checks, "both_bands", 0.0 if low and high else 1.0, 0.0)
    _check(checks, "control_Q_low_only", float(len(ctrl_q[1])), 0.0)
    _check(checks, "control_Qperp_high_only", float(len(ctrl_qc[0])), 0.0)
    details = {
        "alpha": alpha,
        "low_band": low,
        "high_band": high,
        "forms_low": forms_low,
        "forms_high": forms_high,
        "control_Q": {"low_band": ctrl_q[0], "high_band": ctrl_q[1]},
        "control_Qperp": {"low_band": ctrl_qc[0], "high_band": ctrl_qc[1]},
        "checks": checks,
    }
    return VerificationReport("mixed-subspace", s2, max(forms_low), A.shape, d, vn, seed, tol_margin, details)


def direct_rotation_demo(A, V, sigma, seed=None, tol_margin=TOL_MARGIN):
    """Direct rotation from ``E_A(sigma)`` to ``E_{A+V}(O_{d/2}(sigma))`` and the trivial case ``Q = P``.

    ``measured`` is ``||Theta||`` and ``bound`` is ``pi/2``, the largest
    angle for which the direct rotation exists.
    """
    A, V = check_hermitian(A, name="A"), check_hermitian(V, name="V")
    dec_a, P, sig, rest = _spectral_parts(A, sigma)
    d = _gap(sig, rest)
    dec_b = hermitian_eig(A + V)
    Q = spectral_projection(dec_b, _nbhd(sig, d))
    n = A.shape[0]
    checks = {}
    U0 = direct_rotation(P, P)
    _check(checks, "identity_case", op_norm(U0 - np.eye(n)))
    U = direct_rotation(P, Q)
    for name, value in direct_rotation_residuals(P, Q, U).items():
        _check(checks, name, value, 1e-9)
    theta = operator_angle(P, Q)
    details = {"max_angle": theta.norm, "checks": checks}
    return VerificationReport("direct-rotation", np.pi / 2, theta.norm, A.shape, d, op_norm(V), seed, tol_margin, details)


# ---------------------------------------------------------------------------
# the sharp 2 x 2 example


@dataclass(frozen=True)
class SharpExample:
    """``A = diag(1, -1)`` perturbed so that the maximal-angle bound is attained."""

    x: float
    A: np.ndarray
    V: np.ndarray
    theta: float
    quantities: dict

    @property
    def d(self):
        return 2.0

    @property
    def sigma(self):
        return SpectralSet.points([1.0])

    @property
    def max_residual(self):
        return max(self.quantities["residuals"].values())


def sharp_example(x):
    """Build the example for ``0 < x < 1`` and evaluate it with the library.

    ``theta`` is the measured maximal angle ``arcsin ||E_A({1}) - E_{A+V}((0, 2))||``;
    the closed forms it is compared with are ``(1/2) arcsin x`` for the
    angle, ``+-sqrt(1 - x^2)`` for the spectrum and the rank-one projection
    onto ``(cos theta, sin theta)``.
    """
    x = float(x)
    if not 0.0 < x < 1.0:
        raise InvalidX(f"x must lie in (0, 1), got {x}")
    c = np.sqrt(1.0 - x * x)
    A = np.diag([1.0, -1.0]).astype(np.complex128)
    V = np.array([[-x * x, x * c], [x * c, x * x]], dtype=np.complex128)
    dec_a = hermitian_eig(A)
    dec_b = hermitian_eig(A + V)
    sigma = SpectralSet.points([1.0])
    P = spectral_projection(dec_a, sigma)
    Q = spectral_projection(dec_b, sigma.neighbourhood(1.0))
    theta = float(np.arcsin(min(op_norm(P - Q), 1.0)))
    exact = 0.5 * np.arcsin(x)
    proj = np.array(
        [[np.cos(exact) ** 2, np.sin(exact) * np.cos(exact)], [np.sin(exact) * np.cos(exact), np.sin(exact) ** 2]]
    )
    residuals = {
        "vnorm": abs(op_norm(V) - x),
        "spectrum": float(np.max(np.abs(dec_b.eigenvalues - np.array([-c, c])))),
        "projection": op_norm(Q - proj),
        "theta": abs(theta - exact),
        "bound": abs(theta - 0.5 * np.arcsin(2.0 * op_norm(V) / 2.0)),
    }
    quantities = {
        "spectrum": dec_b.eigenvalues.tolist(),
        "tan_theta": float(np.tan(theta)),
        "cot_theta": float(1.0 / np.tan(theta)),
        "tan_closed_form": float((1.0 - c) / x),
        "cot_closed_form": float((1.0 + c) / x),
        "projection": np.real(Q).tolist(),
        "residuals": residuals,
    }
    return SharpExample(x, A, V, theta, quantities)


def sharpness_grid(steps):
    """``x_k = k / (steps + 1)`` for ``k = 1..steps``."""
    if steps < 2:
        raise InvalidX("need at least two grid points")
    return np.arange(1, steps + 1) / (steps + 1)
