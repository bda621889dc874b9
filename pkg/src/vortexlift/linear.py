"""Exact evolution under i d/dt phi = (-Laplacian/2 + sum_j w_j^2 x_j^2 / 2) phi."""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError
from .states import HermiteGaussianState, ladder_laplacian
from .trap import _vec3


def eigen_energies(shape, freqs):
    """sum_j (n_j + 1/2) w_j on the index grid of a coefficient array."""
    ex, ey, ez = ((np.arange(n) + 0.5) * w for n, w in zip(shape, freqs))
    return ex[:, None, None] + ey[None, :, None] + ez[None, None, :]


def _check_widths(s, freqs, rtol=1e-12):
    if not np.allclose(s.widths, freqs, rtol=rtol, atol=0.0):
        raise InvalidArgumentError(
            f"state widths {s.widths.tolist()} do not match trap frequencies {freqs.tolist()}; "
            "the eigenphase rule is exact only on the trap's own Gaussian"
        )


def evolve_linear(s0: HermiteGaussianState, trap_freqs, t) -> HermiteGaussianState:
    """Advance ``s0`` by time ``t`` (negative allowed) with eigenphases exp(-i E_n t)."""
    freqs = _vec3(trap_freqs, "trap_freqs")
    _check_widths(s0, freqs)
    phases = np.exp(-1j * eigen_energies(s0.coeffs.shape, freqs) * t)
    return s0.replace(coeffs=s0.coeffs * phases, time=s0.time + t)


def residual_linear(s: HermiteGaussianState, trap_freqs, points, energies=None):
    """Max over ``points`` of |i d/dt phi - H phi|.

    The time derivative follows the eigenphase rule (i d/dt c_n = E_n c_n, with
    E_n from ``trap_freqs`` unless ``energies`` overrides it); the Laplacian is
    built independently from the Hermite ladder relations and the potential is
    applied pointwise, so the check is not tautological.
    """
    freqs = _vec3(trap_freqs, "trap_freqs")
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if energies is None:
        energies = eigen_energies(s.coeffs.shape, freqs)
    i_dt = s._evaluate_coeffs(s.coeffs * energies, pts)
    lap = s._evaluate_coeffs(ladder_laplacian(s.coeffs, s.widths), pts)
    potential = 0.5 * (pts**2 @ freqs**2)
    h_phi = -0.5 * lap + potential * s.evaluate(pts)
    return float(np.max(np.abs(i_dt - h_phi)))
