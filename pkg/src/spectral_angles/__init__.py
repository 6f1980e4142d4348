"""Operator angles between subspaces and perturbation bounds for spectral subspaces."""

from .angles import (
    GraphOperator,
    OperatorAngle,
    block_unitary,
    closeness,
    direct_rotation,
    graph_operator,
    kpk_projection,
    max_angle,
    operator_angle,
    separation,
    sin2_theta,
    sin_theta,
)
from .errors import *  # noqa: F401,F403
from .instances import RandomInstance, degenerate_variant, generate_instance, generate_normal_instance
from .linalg import SpectralDecomposition, apply_function, hermitian_eig, normal_eig, op_norm, svd
from .norms import NormMode, ky_fan, ky_fan_dominates, ky_fan_variational_lower, schatten
from .spectral import Interval, SpectralSet, random_reducing_projection, spectral_projection
from .sylvester import SylvesterProblem, default_kernel, solve_integral, solve_normal, solve_spectral
from .verifiers import (
    SharpExample,
    VerificationReport,
    sharp_example,
    theta_spectral_gap,
    verify_corollary,
    verify_generic_sin2_theta,
    verify_normal_variants,
    verify_sin2theta_scalar,
    verify_sin_theta_0,
    verify_symmetric_sin_theta,
    verify_symmetric_sin_theta_ideals,
)

__version__ = "0.1.0"
