"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v``.
"""

import time

import numpy as np
import pytest

from spectral_angles.angles import (
    closeness,
    kpk_projection,
    max_identity_terms,
    operator_angle,
    separation,
    sin2_theta,
    sin_theta,
)
from spectral_angles.campaign import CampaignConfig, mixed_angle_demo, run_campaign
from spectral_angles.instances import generate_instance
from spectral_angles.linalg import hermitian_eig, op_norm
from spectral_angles.norms import (
    abs_norm_identities,
    ky_fan,
    ky_fan_variational_lower,
    rank_distance,
    singular_profile,
)
from spectral_angles.spectral import random_reducing_projection
from spectral_angles.sylvester import (
    NAGY_CONSTANT,
    SylvesterProblem,
    bound_ratio,
    default_kernel,
    forward_transform,
    residual,
    solve_integral,
    solve_spectral,
)
from spectral_angles.verifiers import sharp_example, verify_normal_variants

from .conftest import near_projection, random_complex, random_projection, random_unitary

TOL_MARGIN = 1e-8


@pytest.fixture
def report(capsys):
    """Print one summary line per criterion, outside of pytest's capture."""

    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} | {detail}")
        assert ok, f"criterion {number} failed: {detail}"

    return emit


@pytest.fixture(scope="module")
def generic_campaign():
    config = CampaignConfig(
        theorem="sin2theta-generic", trials=1000, dim=(4, 20), vnorm=(0.01, 0.6), norm="all", seed=2024
    )
    start = time.perf_counter()
    result = run_campaign(config)
    return result, time.perf_counter() - start


def projection_pairs(count, max_dim, seed):
    """Random pairs of mixed ranks; every third pair is a small rotation of the first projection."""
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(1, max_dim + 1))
        p = random_projection(rng, n, int(rng.integers(0, n + 1)))
        if i % 3 == 0:
            q = near_projection(rng, p, float(rng.uniform(0.0, 1.5)))
        else:
            q = random_projection(rng, n, int(rng.integers(0, n + 1)))
        yield p, q


def test_sharp_example_equality(report):
    start = time.perf_counter()
    worst = {"theta": 0.0, "spectrum": 0.0, "vnorm": 0.0}
    for x in np.arange(1, 20) * 0.05:
        ex = sharp_example(x)
        res = ex.quantities["residuals"]
        worst["theta"] = max(worst["theta"], abs(ex.theta - 0.5 * np.arcsin(x)))
        worst["spectrum"] = max(worst["spectrum"], res["spectrum"])
        worst["vnorm"] = max(worst["vnorm"], res["vnorm"])
    elapsed = time.perf_counter() - start
    ok = worst["theta"] <= 1e-10 and worst["spectrum"] <= 1e-12 and worst["vnorm"] <= 1e-12 and elapsed < 1.0
    detail = (
        f"19 points, max |theta - arcsin(x)/2| {worst['theta']:.1e}, spectrum {worst['spectrum']:.1e}, "
        f"||V|| {worst['vnorm']:.1e}, {elapsed:.3f} s"
    )
    report(1, "sharp example equality", ok, detail)


def test_generic_sin2theta_campaign(report, generic_campaign):
    result, elapsed = generic_campaign
    reports = result.reports
    worst = result.worst_margin
    checks_ok = all(r.checks_ok for r in reports)
    norms = {r.details["norm"] for r in reports}
    kinds = {"op", "schatten:1", "schatten:2", "schatten:inf"} | {f"kyfan:{n}" for n in range(1, 21)}
    degenerate = sum(1 for r in result.records if r.tags.get("degenerate"))
    random_q = sum(1 for r in result.records if r.tags.get("q") == "random")
    ok = (
        result.counts["pass"] == 1000
        and worst >= -TOL_MARGIN
        and checks_ok
        and kinds <= norms
        and degenerate > 0
        and random_q > 0
        and elapsed < 60.0
    )
    detail = (
        f"{result.counts['pass']}/1000 instances, {len(reports)} norm checks, worst margin {worst:.2e}, "
        f"{degenerate} degenerate, {random_q} random Q, {elapsed:.1f} s"
    )
    report(2, "generic sin2Theta campaign in all norms", ok, detail)


def test_reflection_lemma(report):
    worst = 0.0
    ranks = set()
    for p, q in projection_pairs(1000, 16, seed=3):
        ranks.add((round(np.trace(p).real), round(np.trace(q).real)))
        worst = max(worst, op_norm(sin2_theta(p, q) - sin_theta(p, kpk_projection(p, q))))
    ok = worst <= 1e-10 and len(ranks) > 50
    report(3, "sin 2Theta(P,Q) = sin Theta(P,KPK)", ok, f"1000 pairs, {len(ranks)} rank combinations, max residual {worst:.1e}")


def test_algebraic_identities(report):
    worst = dict.fromkeys(("C+S=I", "(P-Q)^2=S", "sin||Theta||", "S(P,Q')=C(P,Q)", "max identity"), 0.0)
    for p, q in projection_pairs(1000, 16, seed=4):
        eye = np.eye(p.shape[0])
        c, s = closeness(p, q), separation(p, q)
        dist = op_norm(p - q)
        values = (
            op_norm(c + s - eye),
            op_norm((p - q) @ (p - q) - s),
            abs(dist - np.sin(operator_angle(p, q).norm)),
            op_norm(separation(p, eye - q) - c),
            abs(dist - max(max_identity_terms(p, q))),
        )
        for key, v in zip(worst, values):
            worst[key] = max(worst[key], v)
    ok = max(worst.values()) <= 1e-10
    report(4, "algebraic identities", ok, "1000 pairs; " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def separated_problem(rng, n0, n1, d):
    """Interleaved spectra: B1 sits in a window of B0's spectrum, at distance exactly d."""
    mu = rng.uniform(0.0, 2.0, n1)
    lo, hi = mu.min() - d, mu.max() + d
    below = lo - rng.uniform(0.0, 2.0, n0)
    above = hi + rng.uniform(0.0, 2.0, n0)
    lam = np.where(rng.random(n0) < 0.5, below, above)
    lam[0] = lo if rng.random() < 0.5 else hi
    u0, u1 = random_unitary(rng, n0), random_unitary(rng, n1)
    b0, b1 = (u0 * lam) @ u0.conj().T, (u1 * mu) @ u1.conj().T
    return SylvesterProblem.create((b0 + b0.conj().T) / 2, (b1 + b1.conj().T) / 2, random_complex(rng, n1, n0))


def test_sylvester(report):
    start = time.perf_counter()
    rng = np.random.default_rng(5)
    worst_res = worst_ratio = 0.0
    for _ in range(500):
        n0, n1 = (int(k) for k in rng.integers(1, 9, 2))
        p = separated_problem(rng, n0, n1, float(rng.uniform(0.1, 3.0)))
        y = solve_spectral(p)
        worst_res = max(worst_res, residual(p, y))
        worst_ratio = max(worst_ratio, bound_ratio(p, y))
    worst_quad = 0.0
    for _ in range(50):
        n0, n1 = (int(k) for k in rng.integers(1, 4, 2))
        p = separated_problem(rng, n0, n1, float(rng.uniform(0.5, 2.0)))
        ref = solve_spectral(p)
        worst_quad = max(worst_quad, op_norm(solve_integral(p) - ref) / op_norm(ref))
    kernel = default_kernel(1.0)
    lam = np.concatenate([[1.0, -1.0], rng.choice([-1, 1], 18) * rng.uniform(1.0, 25.0, 18)])
    worst_profile = float(np.max(np.abs(forward_transform(kernel, lam) - 1.0 / lam)))
    elapsed = time.perf_counter() - start
    ok = (
        worst_res <= 1e-11
        and worst_ratio <= NAGY_CONSTANT + 1e-9
        and worst_quad <= 1e-6
        and worst_profile <= 1e-8
        and elapsed < 120.0
    )
    detail = (
        f"500 spectral: residual {worst_res:.1e}, max ||Y||d/||T|| {worst_ratio:.4f}; "
        f"50 integral: rel. gap {worst_quad:.1e}; 20 lambda: profile error {worst_profile:.1e}; {elapsed:.1f} s"
    )
    report(5, "Sylvester solvers and kernel", ok, detail)


def test_maximal_angle_corollary(report):
    config = CampaignConfig(theorem="corollary", trials=200, dim=(4, 12), vnorm=(0.0, 1.0 / np.pi), seed=6)
    result = run_campaign(config)
    reports = result.reports
    ok = (
        result.counts["pass"] == 200
        and result.worst_margin >= -TOL_MARGIN
        and all(r.bound <= np.pi / 4 + 1e-15 for r in reports)
        and all(r.details["steps"] == 64 and r.checks_ok for r in reports)
    )
    top = max(r.measured for r in reports)
    detail = f"{result.counts['pass']}/200, worst margin {result.worst_margin:.1e}, largest angle {top:.4f} (pi/4 = {np.pi / 4:.4f})"
    report(6, "maximal angle bound with 64-step continuity grid", ok, detail)


def test_spectral_gap_of_theta(report, generic_campaign):
    result, _ = generic_campaign
    gaps = [r.extra["spectral_gap"] for r in result.records if "spectral_gap" in r.extra]
    eligible = sum(1 for r in result.records if r.reports and r.reports[0].vnorm < 1.0 / np.pi)
    intrusion = max(g.measured for g in gaps)
    both = sum(1 for g in gaps if g.details["low_band"] and g.details["high_band"])
    demo = mixed_angle_demo(seed=0, dim=4)
    ok = (
        len(gaps) == eligible
        and len(gaps) > 0
        and all(g.passed for g in gaps)
        and bool(demo.details["low_band"])
        and bool(demo.details["high_band"])
        and demo.ok
    )
    detail = (
        f"{len(gaps)} instances with ||V|| < d/pi, deepest intrusion {intrusion:.3f} (<= 0 required), "
        f"{both} with both bands; dim-4 demo bands {len(demo.details['low_band'])} low / {len(demo.details['high_band'])} high"
    )
    report(7, "spectral gap of Theta", ok, detail)


def test_graph_and_riccati(report):
    config = CampaignConfig(theorem="graph-riccati", trials=200, dim=(4, 16), vnorm=(0.01, 0.45), seed=8)
    result = run_campaign(config)
    worst = {}
    for r in result.reports:
        for name, c in r.details["checks"].items():
            worst[name] = max(worst.get(name, 0.0), c["residual"])
    limits = {"graph_angle": 1e-10, "riccati": 1e-9, "unitary": 1e-9, "maps_P_to_Q": 1e-9, "riccati_as_sylvester": 1e-9}
    ok = result.counts["pass"] == 200 and all(worst[k] <= v for k, v in limits.items())
    detail = f"{result.counts['pass']}/200; " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    report(8, "graph operator, Riccati and block unitary", ok, detail)


def test_norms(report):
    rng = np.random.default_rng(9)
    worst = dict.fromkeys(("rank distance", "sup attained", "sup exceeded", "polar", "(i)", "(ii)"), 0.0)
    for i in range(500):
        rows, cols = (int(k) for k in rng.integers(1, 7, 2))
        k, t, l_ = random_complex(rng, rows), random_complex(rng, rows, cols), random_complex(rng, cols)
        prof = singular_profile(t)
        scale = max(prof.values[0], 1.0)
        m = len(prof.values)
        for n in range(1, m + 1):
            worst["rank distance"] = max(worst["rank distance"], abs(rank_distance(t, n) - prof.s(n)) / scale)
            kt = ky_fan(t, n)
            excess = ky_fan(k @ t @ l_, n) - op_norm(k) * kt * op_norm(l_)
            worst["(i)"] = max(worst["(i)"], excess)
        worst["polar"] = max(worst["polar"], abs_norm_identities(t) / scale)
        r1 = np.outer(random_complex(rng, rows, 1), random_complex(rng, 1, cols))
        top = op_norm(r1)
        worst["(ii)"] = max(worst["(ii)"], max(abs(ky_fan(r1, n) - top) for n in range(1, m + 1)) / top)
        if i < 10:
            # the variational formula against 1000 random orthonormal systems per n
            for n in range(1, m + 1):
                kt = ky_fan(t, n)
                worst["sup attained"] = max(worst["sup attained"], abs(ky_fan_variational_lower(t, n, trials=1) - kt))
                sampled = ky_fan_variational_lower(t, n, trials=1000, seed=i)
                worst["sup exceeded"] = max(worst["sup exceeded"], sampled - kt)
    ok = all(v <= 1e-10 for k, v in worst.items() if k != "(i)") and worst["(i)"] <= 1e-9
    report(9, "Ky Fan and Schatten norm identities", ok, "500 triples; " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_normal_variants(report):
    config = CampaignConfig(theorem="normal-variants", trials=200, dim=(4, 12), vnorm=(0.0, 0.4), seed=10)
    result = run_campaign(config)
    # Hermitian instances pass with pi/2 in place of 2.91
    herm_worst = np.inf
    herm_ok = True
    for seed in range(200):
        inst = generate_instance(8, (3, 5), 1.0, 0.05 + 0.003 * seed, seed)
        sel = np.flatnonzero(np.random.default_rng(seed).random(8) < 0.5)
        q = random_reducing_projection(hermitian_eig(inst.A + inst.V), sel)
        rep = verify_normal_variants(inst.A, inst.V, inst.sigma, q, constant=NAGY_CONSTANT)
        herm_ok &= rep.ok
        herm_worst = min(herm_worst, rep.margin)
    ok = result.counts["pass"] == 200 and result.worst_margin >= -TOL_MARGIN and herm_ok
    detail = (
        f"{result.counts['pass']}/200 normal with 2.91, worst margin {result.worst_margin:.2e}, "
        f"max ratio {result.max_bound_ratio:.3f}; 200 Hermitian with pi/2, worst margin {herm_worst:.2e}"
    )
    report(10, "normal-operator variants", ok, detail)
