"""Harmonic trap with harmonic inter-particle forces (natural units, hbar = m = 1)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FrequencyCollapseError, InvalidArgumentError


def _vec3(value, name):
    arr = np.asarray(value, dtype=float).reshape(-1)
    if arr.size == 1:
        arr = np.repeat(arr, 3)
    if arr.shape != (3,):
        raise InvalidArgumentError(f"{name} must be a scalar or a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} must be finite")
    return arr


def modified_frequencies(tilde_omega, omega_sq_int, norm):
    """Internal frequencies sqrt(tilde_omega_j**2 - norm * omega_sq_int).

    Raises FrequencyCollapseError naming the first axis whose radicand is not
    positive (repulsion too strong for a bound internal motion).
    """
    tilde_omega = _vec3(tilde_omega, "tilde_omega")
    radicand = tilde_omega**2 - norm * omega_sq_int
    for axis, value in enumerate(radicand):
        if value <= 0.0:
            raise FrequencyCollapseError(axis, float(value))
    return np.sqrt(radicand)


@dataclass(frozen=True, eq=False)
class TrapConfig:
    """Trap frequencies, interaction strength Omega^2 and total norm N.

    ``omega_sq_int > 0`` is repulsive, ``< 0`` attractive.
    """

    tilde_omega: np.ndarray
    omega_sq_int: float = 0.0
    norm: float = 1.0

    def __post_init__(self):
        tw = _vec3(self.tilde_omega, "tilde_omega")
        if np.any(tw <= 0):
            raise InvalidArgumentError("trap frequencies must be positive")
        if not self.norm > 0:
            raise InvalidArgumentError("norm must be positive")
        tw.setflags(write=False)
        object.__setattr__(self, "tilde_omega", tw)
        object.__setattr__(self, "omega_sq_int", float(self.omega_sq_int))
        object.__setattr__(self, "norm", float(self.norm))
        omega = modified_frequencies(tw, self.omega_sq_int, self.norm)
        omega.setflags(write=False)
        object.__setattr__(self, "_omega", omega)

    @property
    def omega(self):
        """Modified frequencies felt by the internal (quadrupole) motion."""
        return self._omega

    def __repr__(self):
        return (
            f"TrapConfig(tilde_omega={self.tilde_omega.tolist()}, "
            f"omega_sq_int={self.omega_sq_int!r}, norm={self.norm!r})"
        )
