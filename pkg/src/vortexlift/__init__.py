"""Vortex-line dynamics in a nonlinear Schroedinger equation with harmonic forces.

Exact solutions are built by lifting closed-form harmonic-trap states, vortex
lines are tracked through their phase winding, and a split-step spectral
integrator provides an independent numerical check.
"""

from .errors import (
    BoxTooSmallError,
    FrequencyCollapseError,
    IllConditionedLoopError,
    IndeterminateRatioError,
    InvalidArgumentError,
    NumericError,
    VortexLiftError,
)
from .gp import GPParams, center_ratio, ratio_field, regime_report, vortex_timescale, xi_estimate
from .lift import LiftedState, LiftFunctions, lift, lifted_residual, phase_a, phase_f, shift_b
from .linear import evolve_linear, residual_linear
from .moments import GlobalMoments, compute_moments, evolve_moments, moment_ode_residual
from .oracle import (
    GPStepper,
    GridSpec,
    GridState,
    HarmonicStepper,
    Observer,
    evolve,
    l2_distance,
    sample,
    step_gp,
    step_harmonic_nlse,
)
from .states import (
    HermiteGaussianState,
    TwoLineParams,
    VortexParams,
    evaluate,
    from_polynomial,
    make_ground_state,
    make_single_vortex,
    make_two_perpendicular_vortices,
    monomials_to_hermite,
    norm_sq,
)
from .trap import TrapConfig, modified_frequencies
from .vortices import (
    Plane,
    VortexPoint,
    VortexPolyline,
    find_zeros_in_plane,
    single_vortex_trajectory,
    trace_vortex_lines,
    winding_number,
)

__version__ = "0.1.0"

__all__ = [
    "BoxTooSmallError",
    "center_ratio",
    "compute_moments",
    "evaluate",
    "evolve",
    "evolve_linear",
    "evolve_moments",
    "from_polynomial",
    "find_zeros_in_plane",
    "FrequencyCollapseError",
    "GlobalMoments",
    "GPParams",
    "GPStepper",
    "GridSpec",
    "GridState",
    "HarmonicStepper",
    "HermiteGaussianState",
    "IllConditionedLoopError",
    "IndeterminateRatioError",
    "InvalidArgumentError",
    "l2_distance",
    "lift",
    "lifted_residual",
    "LiftedState",
    "LiftFunctions",
    "make_ground_state",
    "make_single_vortex",
    "make_two_perpendicular_vortices",
    "modified_frequencies",
    "moment_ode_residual",
    "monomials_to_hermite",
    "norm_sq",
    "NumericError",
    "Observer",
    "phase_a",
    "phase_f",
    "Plane",
    "ratio_field",
    "regime_report",
    "residual_linear",
    "sample",
    "shift_b",
    "single_vortex_trajectory",
    "step_gp",
    "step_harmonic_nlse",
    "trace_vortex_lines",
    "TrapConfig",
    "TwoLineParams",
    "vortex_timescale",
    "VortexLiftError",
    "VortexParams",
    "VortexPoint",
    "VortexPolyline",
    "winding_number",
    "xi_estimate",
]
