"""Two perpendicular vortex lines reconnecting under the Gross-Pitaevskii equation.

Natural units (hbar = m = 1), with the same ratios as a sodium condensate:
N = 1e6, a/L = 1e-4, d = L/10.  The vortex time scale is T0 = d^2.

Run: python3 demos/05_gp_reconnection.py   (about ten seconds; pass --full for the 96^3 grid)
"""

# %%
import sys

from vortexlift import GPParams, GPStepper, GridSpec, Observer, TwoLineParams, evolve, make_two_perpendicular_vortices, regime_report, sample
from vortexlift.oracle import spectral_resample
from vortexlift.vortices import trace_vortex_lines

gp = GPParams.natural(n_atoms=1e6, a_scatt=1e-3, L=10.0, d=1.0)
print(regime_report(gp, trap_period=2 * 3.141592653589793 * gp.L**2).to_text())

n = 96 if "--full" in sys.argv else 64
spec = GridSpec(n, 70.0)
zoom = GridSpec(64, 1.5 * gp.d)
s0 = make_two_perpendicular_vortices(TwoLineParams(gp.d, gp.L, gp.n_atoms))


def topology(g):
    return trace_vortex_lines(spectral_resample(g, zoom)).topology()


# %% Watch the endpoint pairing of the two lines inside a small window around the crossing
_, logs = evolve(sample(s0, spec), GPStepper(1.0 / gp.L**2, gp), 0.005, 200, [Observer("topo", topology, 10)])
previous = None
for t, topo in logs["topo"]:
    marker = "  <- changed" if previous is not None and topo != previous else ""
    print(f"t/T0={t:5.2f}  {topo}{marker}")
    previous = topo
