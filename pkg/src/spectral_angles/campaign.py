"""Seeded verification campaigns over random instances."""

from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguousMembership, NotApplicable, SeparationViolated, SubspacesTooFar
from .instances import degenerate_variant, generate_instance, generate_normal_instance
from .linalg import cluster_indices, hermitian_eig
from .norms import NormMode
from .spectral import SpectralSet, random_reducing_projection, spectral_projection
from .verifiers import (
    TOL_MARGIN,
    mixed_subspace_demo,
    theta_spectral_gap,
    verify_corollary,
    verify_generic_sin2_theta_modes,
    verify_graph_riccati,
    verify_normal_variants,
    verify_sin2theta_scalar,
    verify_sin_theta_0,
    verify_symmetric_sin_theta,
    verify_symmetric_sin_theta_ideals,
)

THEOREMS = (
    "sin2theta-generic",
    "sin2theta-scalar",
    "sin-theta-0",
    "symmetric-sin-theta",
    "symmetric-ideals",
    "corollary",
    "spectral-gap",
    "graph-riccati",
    "normal-variants",
)

# hypotheses not met by a random instance; recorded, never counted as failures
_SKIPPED = (NotApplicable, SeparationViolated, SubspacesTooFar, AmbiguousMembership)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CampaignConfig:
    """One campaign: a theorem, an instance family and a seed.

    `dim` is a count or an inclusive ``(lo, hi)`` range drawn per trial;
    `vnorm` is a value or a ``(start, stop)`` sweep spread linearly over the
    trials; `split` is drawn per trial when omitted. `norm` is ``op``,
    ``kyfan:N``, ``schatten:P`` or ``all`` (operator norm, every Ky Fan
    norm and Schatten ``p = 1, 2, inf``).
    """

    theorem: str
    trials: int = 100
    dim: object = 12
    split: tuple = None
    d: float = 1.0
    vnorm: object = 0.25
    norm: str = "op"
    seed: int = 0
    tol_margin: float = TOL_MARGIN
    degenerate_fraction: float = 0.25

    def __post_init__(self):
        if self.theorem not in THEOREMS:
            raise ConfigError(f"unknown theorem {self.theorem!r}; choose from {', '.join(THEOREMS)}")
        if not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise ConfigError("trials must be at least 1")
        lo, hi = self.dim_range
        if lo < 2 or hi < lo:
            raise ConfigError("dim must be at least 2")
        if self.split is not None:
            if len(self.split) != 2 or min(self.split) < 1 or lo != hi or sum(self.split) != lo:
                raise ConfigError(f"split {self.split} must be two positive counts summing to dim")
        if not self.d > 0:
            raise ConfigError("gap d must be positive")
        v0, v1 = self.vnorm_range
        if v0 < 0 or v1 < 0:
            raise ConfigError("vnorm must be non-negative")
        if self.norm != "all":
            try:
                NormMode.parse(self.norm)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        if not self.tol_margin >= 0:
            raise ConfigError("tol_margin must be non-negative")

    @property
    def dim_range(self):
        if isinstance(self.dim, (tuple, list)):
            return int(self.dim[0]), int(self.dim[1])
        return int(self.dim), int(self.dim)

    @property
    def vnorm_range(self):
        if isinstance(self.vnorm, (tuple, list)):
            return float(self.vnorm[0]), float(self.vnorm[1])
        return float(self.vnorm), float(self.vnorm)

    def trial_vnorm(self, i):
        v0, v1 = self.vnorm_range
        if self.trials == 1:
            return v0
        return v0 + (v1 - v0) * i / (self.trials - 1)

    def norm_modes(self, dim):
        if self.norm == "all":
            names = ["op", *(f"kyfan:{n}" for n in range(1, dim + 1)), "schatten:1", "schatten:2", "schatten:inf"]
            return [NormMode.parse(n) for n in names]
        return [NormMode.parse(self.norm)]

    def to_json(self):
        return {
            "theorem": self.theorem,
            "trials": int(self.trials),
            "dim": list(self.dim_range),
            "split": list(self.split) if self.split else None,
            "d": self.d,
            "vnorm": list(self.vnorm_range),
            "norm": self.norm,
            "seed": int(self.seed),
            "tol_margin": self.tol_margin,
        }


@dataclass
class TrialRecord:
    trial: int
    seed: int
    status: str
    reports: list = field(default_factory=list)
    reason: str = ""
    extra: dict = field(default_factory=dict)
    tags: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "trial": self.trial,
            "seed": self.seed,
            "status": self.status,
            "reports": [r.to_json() for r in self.reports],
        }
        if self.tags:
            out["tags"] = self.tags
        if self.reason:
            out["reason"] = self.reason
        if self.extra:
            out["extra"] = {k: v.to_json() for k, v in self.extra.items()}
        return out


@dataclass
class CampaignResult:
    config: CampaignConfig
    records: list

    @property
    def counts(self):
        out = {"pass": 0, "fail": 0, "not_applicable": 0}
        for r in self.records:
            out[r.status] += 1
        return out

    @property
    def reports(self):
        return [rep for r in self.records for rep in r.reports]

    @property
    def worst_margin(self):
        return min((rep.margin for rep in self.reports), default=float("inf"))

    @property
    def max_bound_ratio(self):
        ratios = [rep.measured / rep.bound for rep in self.reports if rep.bound > 0]
        return max(ratios, default=0.0)

    @property
    def ok(self):
        return self.counts["fail"] == 0

    def summary(self):
        c = self.counts
        return {
            "theorem": self.config.theorem,
            "trials": len(self.records),
            "passed": c["pass"],
            "failed": c["fail"],
            "not_applicable": c["not_applicable"],
            "worst_margin": self.worst_margin,
            "max_bound_ratio": self.max_bound_ratio,
        }

    def to_json(self):
        return {
            "config": self.config.to_json(),
            "summary": self.summary(),
            "trials": [r.to_json() for r in self.records],
        }


def _trial_rng(seed, trial):
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(trial)]))


def _draw_shape(config, rng):
    lo, hi = config.dim_range
    dim = int(rng.integers(lo, hi + 1))
    if config.split is not None:
        return dim, tuple(int(s) for s in config.split)
    k = int(rng.integers(1, dim))
    return dim, (k, dim - k)


def _natural_projection(dec, inst):
    nbhd = SpectralSet.points(inst.sigma_eigenvalues).neighbourhood(inst.d / 2.0)
    return spectral_projection(dec, nbhd)


def _random_reducing(dec, rng, degenerate):
    """Random subset of eigenvectors; a degenerate cluster is cut so that mixing matters."""
    n = dec.dim
    sel = rng.random(n) < 0.5
    mix = False
    if degenerate:
        scale = max(np.max(np.abs(dec.eigenvalues)), 1.0)
        for group in cluster_indices(dec.eigenvalues, 1e-10 * scale):
            if len(group) > 1:
                sel[group] = False
                sel[group[0]] = True
                mix = True
    return random_reducing_projection(dec, np.flatnonzero(sel), mix_degenerate=mix, seed=int(rng.integers(2**31)))


def run_trial(config, trial):
    """Run one trial; deterministic in ``(config, trial)``."""
    rng = _trial_rng(config.seed, trial)
    dim, split = _draw_shape(config, rng)
    vnorm = config.trial_vnorm(trial)
    inst_seed = int(rng.integers(2**31))
    th = config.theorem
    tol = config.tol_margin
    extra = {}
    try:
        if th == "normal-variants":
            inst = generate_normal_instance(dim, split, config.d, vnorm, inst_seed)
            if rng.random() < 0.5:
                cols = range(split[0])
            else:
                cols = np.flatnonzero(rng.random(dim) < 0.5)
            Q = inst.reducing_projection(cols)
            reports = [
                verify_normal_variants(inst.A, inst.V, inst.sigma, Q, norm_mode=m, seed=inst_seed, tol_margin=tol)
                for m in config.norm_modes(dim)
            ]
            return TrialRecord(trial, inst_seed, _status(reports), reports)

        inst = generate_instance(dim, split, config.d, vnorm, inst_seed)
        degenerate = th in ("sin2theta-generic", "sin2theta-scalar", "spectral-gap") and (
            rng.random() < config.degenerate_fraction
        )
        if degenerate:
            inst = degenerate_variant(inst, multiplicity=int(rng.integers(2, 4)), seed=inst_seed)
        A, V, sigma = inst.A, inst.V, inst.sigma
        if th == "corollary":
            reports = [verify_corollary(A, V, sigma, seed=inst_seed, tol_margin=tol)]
            return TrialRecord(trial, inst_seed, _status(reports), reports)

        dec = hermitian_eig(A + V)
        natural = inst.vnorm < inst.d / 2.0
        if th in ("symmetric-ideals", "graph-riccati", "symmetric-sin-theta", "sin-theta-0") and not natural:
            raise NotApplicable("||V|| >= d/2: the perturbed spectrum is not split by the d/2-neighbourhoods")
        if natural and (th in ("symmetric-ideals", "graph-riccati") or rng.random() < 1.0 / 3.0):
            Q = _natural_projection(dec, inst)
            tags = {"q": "natural"}
        else:
            Q = _random_reducing(dec, rng, degenerate)
            tags = {"q": "random"}
        if degenerate:
            tags["degenerate"] = True

        if th == "sin2theta-generic":
            reports = verify_generic_sin2_theta_modes(A, V, sigma, Q, config.norm_modes(dim), inst_seed, tol)
            try:
                extra["spectral_gap"] = theta_spectral_gap(A, V, sigma, Q, seed=inst_seed, tol=tol)
            except NotApplicable:
                pass
        elif th == "sin2theta-scalar":
            reports = [verify_sin2theta_scalar(A, V, sigma, Q, inst_seed, tol)]
        elif th == "spectral-gap":
            reports = [theta_spectral_gap(A, V, sigma, Q, seed=inst_seed, tol=tol)]
        elif th == "graph-riccati":
            reports = [verify_graph_riccati(A, V, sigma, Q, inst_seed, tol)]
        elif th == "symmetric-ideals":
            P = spectral_projection(hermitian_eig(A), sigma)
            reports = [
                verify_symmetric_sin_theta_ideals(A, V, P, Q, m, inst_seed, tol) for m in config.norm_modes(dim)
            ]
        else:
            sig = SpectralSet.points(inst.sigma_eigenvalues)
            rest = SpectralSet.points(inst.Sigma_eigenvalues)
            half = inst.d / 2.0
            if th == "symmetric-sin-theta":
                reports = [
                    verify_symmetric_sin_theta(
                        A, V, sig, rest, sig.neighbourhood(half), rest.neighbourhood(half), seed=inst_seed, tol_margin=tol
                    )
                ]
            else:
                reports = [verify_sin_theta_0(A, V, sig, rest.neighbourhood(half), inst_seed, tol)]
    except _SKIPPED as exc:
        return TrialRecord(trial, inst_seed, "not_applicable", reason=f"{type(exc).__name__}: {exc}")
    status = _status(reports + list(extra.values()))
    return TrialRecord(trial, inst_seed, status, reports, extra=extra, tags=tags)


def _status(reports):
    return "pass" if all(r.ok for r in reports) else "fail"


def run_campaign(config, progress=None):
    """All trials of `config`, ordered by trial index."""
    records = []
    for i in range(config.trials):
        records.append(run_trial(config, i))
        if progress is not None:
            progress(i + 1, config.trials)
    return CampaignResult(config, records)


def mixed_angle_demo(seed=0, dim=4, d=1.0, vnorm=0.2):
    """The mixed-subspace construction on a random ``dim``-dimensional instance with two-by-two split."""
    inst = generate_instance(dim, (dim // 2, dim - dim // 2), d, vnorm, seed)
    return mixed_subspace_demo(inst.A, inst.V, inst.sigma, seed=seed)


__all__ = [
    "THEOREMS",
    "CampaignConfig",
    "CampaignResult",
    "ConfigError",
    "TrialRecord",
    "mixed_angle_demo",
    "run_campaign",
    "run_trial",
]
