"""Following a vortex line through its phase winding.

In an isotropic trap the displaced vortex circles the axis at fixed radius; in
an anisotropic one it runs off to infinity whenever cos((wx - wy) t) = 0.

Run: python3 demos/03_vortex_tracking.py
"""

# %%
import numpy as np

from vortexlift import Plane, VortexParams, evolve_linear, find_zeros_in_plane, make_single_vortex, single_vortex_trajectory

a = 0.5
for label, w in (("isotropic", np.array([1.0, 1.0, 1.0])), ("anisotropic", np.array([1.3, 0.9, 1.0]))):
    print(label)
    s0 = make_single_vortex(VortexParams(a), w)
    for t in np.linspace(0.0, 3.0, 7):
        pred = single_vortex_trajectory(a, w, t)
        found = find_zeros_in_plane(evolve_linear(s0, w, t), Plane(2, 0.0), ((-4, 4), (-4, 4)), 64)
        pos = found[0].position[:2] if len(found) else (np.nan, np.nan)
        print(f"  t={t:4.2f}  predicted=({pred.x:+.6f}, {pred.y:+.6f})  found=({pos[0]:+.6f}, {pos[1]:+.6f})")

# %% The line escapes at t = pi / (2 (wx - wy))
t_star = np.pi / (2 * 0.4)
print("unbounded at t* :", single_vortex_trajectory(a, [1.3, 0.9, 1.0], t_star).unbounded)
