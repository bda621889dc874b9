"""Hermite-Gaussian states, exact linear evolution and the global moments.

Run: python3 demos/01_linear_and_moments.py
"""

# %% A displaced vortex in an anisotropic trap
import numpy as np

from vortexlift import TrapConfig, VortexParams, compute_moments, evolve_linear, evolve_moments, make_single_vortex

cfg = TrapConfig([1.1, 1.3, 0.9], omega_sq_int=0.15, norm=1.0)
print("trap frequencies   ", cfg.tilde_omega)
print("modified frequencies", cfg.omega.round(6))

phi0 = make_single_vortex(VortexParams(0.5), cfg.omega)
print("norm", phi0.norm_sq())

# %% Linear evolution only rotates the Hermite coefficients
phi = evolve_linear(phi0, cfg.omega, 2.0)
print("norm after t=2:", phi.norm_sq())

# %% Moments: R and P oscillate at the trap frequencies, U, T, W at the modified ones
m0 = compute_moments(phi0)
print("R(0) =", m0.r.round(6), " P(0) =", m0.p.round(6))
for t in np.linspace(0.0, 6.0, 4):
    m = evolve_moments(m0, cfg, t)
    print(f"t={t:4.1f}  R={m.r.round(4)}  U_sum={m.u.sum():.5f}  T+w^2 U={np.round(m.t_kin + cfg.omega**2 * m.u, 6)}")
