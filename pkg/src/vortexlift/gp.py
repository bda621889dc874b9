"""Size of the Gross-Pitaevskii contact term relative to the kinetic term near vortex lines.

Quantities here are in SI (or any consistent unit system): lengths, the atom
mass and hbar are explicit fields of :class:`GPParams`.  Setting
``mass = hbar = 1`` gives natural units.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy import constants

from .errors import IndeterminateRatioError, InvalidArgumentError

SODIUM_MASS = 22.98976928 * constants.atomic_mass

NONLINEARITY_THRESHOLD = 1e-2
TRAP_TIME_FACTOR = 10.0


@dataclass(frozen=True)
class GPParams:
    n_atoms: float
    a_scatt: float
    L: float
    d: float
    mass: float = SODIUM_MASS
    hbar: float = constants.hbar

    def __post_init__(self):
        for name in ("a_scatt", "L", "mass", "hbar"):
            if not getattr(self, name) > 0:
                raise InvalidArgumentError(f"{name} must be positive")
        if self.n_atoms < 0 or self.d < 0:
            raise InvalidArgumentError("n_atoms and d must be non-negative")
        if self.d > self.L / 2:
            warnings.warn(
                f"vortex separation d={self.d:g} exceeds L/2={self.L / 2:g}; "
                "the small-separation estimates are not expected to hold",
                stacklevel=3,
            )

    @classmethod
    def sodium_condensate(cls, n_atoms=1e6, a_scatt=5e-9, L=5e-5, d=None):
        """A sodium condensate of size L with two vortex lines d = L/10 apart by default."""
        return cls(n_atoms, a_scatt, L, L / 10 if d is None else d)

    @classmethod
    def natural(cls, n_atoms, a_scatt, L, d):
        return cls(n_atoms, a_scatt, L, d, mass=1.0, hbar=1.0)


def ratio_field(state, pt, gp: GPParams, rtol=1e-12):
    """8 pi a |psi|^2 psi / (-Laplacian psi) at ``pt``.

    ``state`` must be callable and expose ``laplacian(points)``.  Raises
    IndeterminateRatioError where |Laplacian| < rtol * |psi| / L^2.
    """
    pts = np.asarray(pt, dtype=float)
    psi = np.asarray(state(pts), dtype=complex)
    lap = np.asarray(state.laplacian(pts), dtype=complex)
    floor = rtol * np.maximum(np.abs(psi), 1e-300) / gp.L**2
    if np.any(np.abs(lap) < floor):
        raise IndeterminateRatioError("Laplacian vanishes; ratio is indeterminate")
    out = 8 * np.pi * gp.a_scatt * np.abs(psi) ** 2 * psi / (-lap)
    return complex(out) if out.ndim == 0 else out


def grid_ratio_field(values, laplacian, gp: GPParams):
    """Pointwise ratio on arrays of field and Laplacian samples."""
    return 8 * np.pi * gp.a_scatt * np.abs(values) ** 2 * values / (-laplacian)


def center_ratio(gp: GPParams) -> float:
    """N a d^6 / (sqrt(pi) L (L^2 + 3 d^2 / 8) (24 L^4 + d^4)) for the two-line state."""
    n, a, L, d = gp.n_atoms, gp.a_scatt, gp.L, gp.d
    return n * a * d**6 / (math.sqrt(math.pi) * L * (L**2 + 3 * d**2 / 8) * (24 * L**4 + d**4))


def xi_estimate(gp: GPParams) -> float:
    """Order-of-magnitude ratio N (a/L) (d/L)^6."""
    return gp.n_atoms * (gp.a_scatt / gp.L) * (gp.d / gp.L) ** 6


def vortex_timescale(gp: GPParams) -> float:
    """T0 = m d^2 / hbar."""
    return gp.mass * gp.d**2 / gp.hbar


@dataclass(frozen=True)
class RegimeReport:
    xi: float
    center_ratio: float
    t0: float
    trap_period: float
    nonlinearity_negligible: bool
    trap_negligible: bool
    ratio_threshold: float = NONLINEARITY_THRESHOLD
    time_factor: float = TRAP_TIME_FACTOR

    FIELDS = (
        "xi", "center_ratio", "t0", "trap_period",
        "nonlinearity_negligible", "trap_negligible", "ratio_threshold", "time_factor",
    )

    def to_text(self) -> str:
        lines = []
        for name, value in asdict(self).items():
            if isinstance(value, bool):
                lines.append(f"{name} = {str(value).lower()}")
            else:
                lines.append(f"{name} = {value:.17g}")
        return "\n".join(lines) + "\n"

    def as_dict(self):
        return asdict(self)


def regime_report(gp: GPParams, trap_period, ratio_threshold=NONLINEARITY_THRESHOLD,
                  time_factor=TRAP_TIME_FACTOR) -> RegimeReport:
    """Verdicts on whether the contact term and the trap matter on the vortex timescale.

    The thresholds are policy defaults: the contact term counts as negligible
    when the centre ratio is below ``ratio_threshold``; the trap when
    T0 < trap_period / time_factor.
    """
    if not trap_period > 0:
        raise InvalidArgumentError("trap_period must be positive")
    cr = center_ratio(gp)
    t0 = vortex_timescale(gp)
    return RegimeReport(
        xi=xi_estimate(gp),
        center_ratio=cr,
        t0=t0,
        trap_period=float(trap_period),
        nonlinearity_negligible=bool(cr < ratio_threshold),
        trap_negligible=bool(t0 < trap_period / time_factor),
        ratio_threshold=ratio_threshold,
        time_factor=time_factor,
    )
