"""Acceptance checks, one test per headline criterion.

Each test prints a single ``[criterion N] PASS|FAIL ...`` line to the terminal
(even under pytest's output capture) before asserting.
"""

import math
import time

import numpy as np
import pytest

from vortexlift.gp import GPParams, center_ratio, grid_ratio_field, ratio_field, vortex_timescale, xi_estimate
from vortexlift.lift import LiftFunctions, lift
from vortexlift.linear import evolve_linear
from vortexlift.moments import compute_moments, evolve_moments, moment_ode_residual
from vortexlift.oracle import (
    GPStepper,
    GridSpec,
    HarmonicStepper,
    Observer,
    evolve,
    grid_laplacian,
    l2_distance,
    sample,
    spectral_resample,
)
from vortexlift.states import TwoLineParams, VortexParams, from_polynomial, make_single_vortex, make_two_perpendicular_vortices
from vortexlift.trap import TrapConfig
from vortexlift.vortices import Plane, find_zeros_in_plane, single_vortex_trajectory, trace_vortex_lines

from conftest import random_poly

pytestmark = pytest.mark.slow

# previously reported estimates for this setup, logged next to the formula values
REPORTED_XI = 1e-3
REPORTED_T0_SECONDS = 3e-4


@pytest.fixture
def report(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {criterion}] {'PASS' if ok else 'FAIL'} {detail}")
        return ok

    return emit


# ---------------------------------------------------------------------------
# criteria 1 and 2 share the oracle runs
# ---------------------------------------------------------------------------

N_SCENARIOS = 5
GRID_N = 64
BOX_WIDTHS = 8.0
DT = 1e-3
MOMENT_STRIDE = 250


def make_scenario(seed):
    rng = np.random.default_rng(seed)
    tilde = rng.uniform(0.8, 1.6, 3)
    strength = rng.choice([-1.0, 1.0]) * rng.uniform(0.0, 0.3) * tilde.min() ** 2
    cfg = TrapConfig(tilde, omega_sq_int=strength, norm=1.0)
    while True:
        phi0 = from_polynomial(random_poly(rng, degree=3, n_terms=6), cfg.omega, norm=1.0)
        m0 = compute_moments(phi0)
        if np.linalg.norm(m0.r) > 0.05 and np.linalg.norm(m0.p) > 0.05:
            return cfg, phi0


def run_scenario(seed):
    cfg, phi0 = make_scenario(seed)
    spec = GridSpec(GRID_N, tuple(BOX_WIDTHS / np.sqrt(cfg.omega)))
    period = 2 * math.pi / cfg.omega.min()
    n_steps = int(round(period / DT))
    start = time.perf_counter()
    final, logs = evolve(
        sample(phi0, spec), HarmonicStepper(cfg), DT, n_steps,
        [Observer("moments", compute_moments, MOMENT_STRIDE)],
    )
    elapsed = time.perf_counter() - start
    ref = sample(lift(phi0, cfg, final.time), spec, check=False)
    rel = l2_distance(final, ref) / math.sqrt(ref.norm_sq())
    return {"cfg": cfg, "phi0": phi0, "rel": rel, "seconds": elapsed, "moments": logs["moments"], "steps": n_steps}


@pytest.fixture(scope="module")
def scenarios():
    return [run_scenario(1000 + k) for k in range(N_SCENARIOS)]


def test_criterion_1_lift_matches_oracle(scenarios, report):
    worst = max(s["rel"] for s in scenarios)
    slowest = max(s["seconds"] for s in scenarios)
    ok = worst <= 1e-4 and slowest <= 300
    detail = ", ".join(f"{s['rel']:.2e}/{s['seconds']:.0f}s" for s in scenarios)
    report(1, ok, f"relative L2 error <= 1e-4 and <= 5 min per scenario: {detail}")
    assert ok


def moment_relative_error(logged, m0, cfg):
    worst = 0.0
    for name in ("r", "p", "u", "t_kin", "w"):
        oracle = np.array([getattr(m, name) for _, m in logged])
        closed = np.array([getattr(evolve_moments(m0, cfg, t), name) for t, _ in logged])
        scale = np.max(np.abs(closed))
        worst = max(worst, np.max(np.abs(oracle - closed)) / scale)
    n_err = max(abs(m.n - m0.n) for _, m in logged) / m0.n
    return max(worst, n_err)


def test_criterion_2_moment_closed_forms(scenarios, report):
    errs = [moment_relative_error(s["moments"], compute_moments(s["phi0"]), s["cfg"]) for s in scenarios]

    cfg, phi0 = scenarios[0]["cfg"], scenarios[0]["phi0"]
    m0 = compute_moments(phi0)
    span = 2 * math.pi / cfg.omega.min()

    def residual(h):
        traj = [evolve_moments(m0, cfg, k * h) for k in range(int(round(span / h)) + 1)]
        return max(moment_ode_residual(traj, cfg).values())

    h = span / 200
    ratio = residual(h) / residual(h / 2)
    ok = max(errs) <= 1e-3 and 3.5 <= ratio <= 4.5
    report(2, ok, f"max moment relative error {max(errs):.2e} (<= 1e-3); residual ratio on halving {ratio:.3f} (3.5-4.5)")
    assert ok


# ---------------------------------------------------------------------------
# criterion 3: single-vortex trajectory
# ---------------------------------------------------------------------------


def test_criterion_3_vortex_trajectory(report):
    a = 0.4
    worst_aniso = 0.0
    w = np.array([1.3, 0.9, 1.0])
    s0 = make_single_vortex(VortexParams(a), w)
    dw = w[0] - w[1]
    # 50 times on which the zero stays within the search window (|det| >= 0.15)
    times = [t for t in np.linspace(0.0, 20.0, 400) if abs(math.cos(dw * t)) >= 0.15][:50]
    for t in times:
        pt = single_vortex_trajectory(a, w, t)
        zeros = find_zeros_in_plane(evolve_linear(s0, w, t), Plane(2, 0.0), ((-3.0, 3.0), (-3.0, 3.0)), 64)
        assert len(zeros) == 1
        worst_aniso = max(worst_aniso, float(np.max(np.abs(zeros[0].position[:2] - [pt.x, pt.y]))))

    iso = make_single_vortex(VortexParams(a), 1.1)
    worst_circle = 0.0
    worst_iso = 0.0
    for t in np.linspace(0.0, 12.0, 50):
        zeros = find_zeros_in_plane(evolve_linear(iso, 1.1, t), Plane(2, 0.0), ((-1.5, 1.5), (-1.5, 1.5)), 48)
        x, y = zeros[0].position[:2]
        pt = single_vortex_trajectory(a, [1.1] * 3, t)
        worst_iso = max(worst_iso, abs(x - pt.x), abs(y - pt.y))
        worst_circle = max(worst_circle, abs(x * x + y * y - a * a))

    base = math.pi / (2 * dw)
    flagged = single_vortex_trajectory(a, w, math.acos(1e-13) / dw).unbounded and single_vortex_trajectory(a, w, base).unbounded
    kept = not single_vortex_trajectory(a, w, math.acos(1e-11) / dw).unbounded

    ok = len(times) == 50 and max(worst_aniso, worst_iso) <= 1e-8 and worst_circle <= 1e-6 and flagged and kept
    report(3, ok, f"trajectory error {max(worst_aniso, worst_iso):.1e} (<= 1e-8), |x^2+y^2-a^2| {worst_circle:.1e} "
                  f"(<= 1e-6), unbounded flag at |cos| < 1e-12: {flagged and kept}")
    assert ok


# ---------------------------------------------------------------------------
# criterion 4: zeros of psi are zeros of phi shifted by b
# ---------------------------------------------------------------------------


def test_criterion_4_lift_covariance(report):
    cfg = TrapConfig([1.0, 1.5, 1.2], omega_sq_int=0.2)
    a = 0.5
    phi0 = make_single_vortex(VortexParams(a), cfg.omega)
    m0 = compute_moments(phi0)
    wt, om = cfg.tilde_omega, cfg.omega
    worst_zero = worst_liss = 0.0
    # 20 times on which the internal zero stays inside the window (|det| >= 0.15)
    times = [t for t in np.linspace(0.1, 12.0, 200) if abs(math.cos((om[0] - om[1]) * t)) >= 0.15][::4][:20]
    assert len(times) == 20
    for t in times:
        ls = lift(phi0, cfg, t)
        win = ((-4.0, 4.0), (-4.0, 4.0))
        z_phi = find_zeros_in_plane(ls.phi, Plane(2, 0.0), win, 64)
        z_psi = find_zeros_in_plane(ls, Plane(2, ls.b[2]), ((-4.0 + ls.b[0], 4.0 + ls.b[0]), (-4.0 + ls.b[1], 4.0 + ls.b[1])), 64)
        assert len(z_phi) == len(z_psi) == 1
        worst_zero = max(worst_zero, float(np.max(np.abs(z_psi[0].position - z_phi[0].position - ls.b))))
        # two-frequency superposition per axis with R = (Rx, 0, 0), P = (0, Py, 0)
        bx = m0.r[0] / m0.n * (math.cos(wt[0] * t) - math.cos(om[0] * t))
        by = m0.p[1] / m0.n * (math.sin(wt[1] * t) / wt[1] - math.sin(om[1] * t) / om[1])
        worst_liss = max(worst_liss, abs(ls.b[0] - bx), abs(ls.b[1] - by), abs(ls.b[2]))

    # two vortex lines: crossings with the plane x = 0.3 move rigidly with b
    L = 1.0
    cfg2 = TrapConfig(math.sqrt(1.0 / L**4 + 0.25), omega_sq_int=0.25)
    phi2 = make_two_perpendicular_vortices(TwoLineParams(d=0.6, L=L))
    for t in times[::4]:
        ls = lift(phi2, cfg2, t)
        z_phi = find_zeros_in_plane(ls.phi, Plane(0, 0.3), ((-3, 3), (-3, 3)), 64)
        z_psi = find_zeros_in_plane(ls, Plane(0, 0.3 + ls.b[0]),
                                    ((-3 + ls.b[1], 3 + ls.b[1]), (-3 + ls.b[2], 3 + ls.b[2])), 64)
        assert len(z_phi) == len(z_psi) >= 1
        for p, q in zip(z_phi, z_psi):
            worst_zero = max(worst_zero, float(np.max(np.abs(q.position - p.position - ls.b))))
    ok = worst_zero <= 1e-8 and worst_liss <= 1e-12
    report(4, ok, f"max |zero(psi) - zero(phi) - b| {worst_zero:.1e} (<= 1e-8); Lissajous form error {worst_liss:.1e}")
    assert ok


# ---------------------------------------------------------------------------
# criterion 5: degenerate limits
# ---------------------------------------------------------------------------


def test_criterion_5_degenerate_limits(report):
    rng = np.random.default_rng(55)
    cfg0 = TrapConfig([0.9, 1.2, 1.4], omega_sq_int=0.0)
    phi0 = from_polynomial(random_poly(rng), cfg0.omega, norm=1.0)
    worst = 0.0
    fns = LiftFunctions(compute_moments(phi0), cfg0)
    for _ in range(100):
        t = rng.uniform(-10, 10)
        pt = rng.normal(size=(1, 3))
        ls = lift(phi0, cfg0, t)
        worst = max(worst, abs(ls(pt)[0] - evolve_linear(phi0, cfg0.omega, t)(pt)[0]),
                    np.max(np.abs(fns.a(t))), np.max(np.abs(fns.b(t))), abs(fns.f(t)))
    cfg = TrapConfig([0.9, 1.2, 1.4], omega_sq_int=0.25)
    phi1 = from_polynomial(random_poly(rng), cfg.omega, norm=1.0)
    pts = rng.normal(size=(100, 3))
    exact_t0 = bool(np.array_equal(lift(phi1, cfg, 0.0)(pts), phi1(pts)))
    ok = worst == 0.0 and exact_t0
    report(5, ok, f"Omega^2 = 0: max deviation {worst:.1e} (exact zero); t = 0 bitwise identical: {exact_t0}")
    assert ok


# ---------------------------------------------------------------------------
# criterion 6: estimates with the sodium parameters
# ---------------------------------------------------------------------------


def test_criterion_6_estimates(report):
    gp = GPParams(1e6, 5e-9, 5e-5, 5e-6)
    state = make_two_perpendicular_vortices(TwoLineParams(gp.d, gp.L, gp.n_atoms))
    at_origin = ratio_field(state, np.zeros(3), gp)
    closed = center_ratio(gp)
    rel = abs(at_origin - closed) / closed
    xi, t0 = xi_estimate(gp), vortex_timescale(gp)
    ok = rel <= 1e-8 and closed < 1e-2
    report(6, ok, f"center ratio {closed:.4e} (field at origin agrees to {rel:.1e}; < 1e-2); "
                  f"xi computed {xi:.3e} vs reported {REPORTED_XI:g}; T0 computed {t0:.3e} s vs reported {REPORTED_T0_SECONDS:g} s")
    assert ok


# ---------------------------------------------------------------------------
# criterion 7: reconnection in the GP run
# ---------------------------------------------------------------------------

GP_N_ATOMS, GP_A, GP_L, GP_D = 1e6, 1e-3, 10.0, 1.0
GP_GRID, GP_BOX, GP_DT, GP_STEPS, GP_STRIDE = 96, 70.0, 0.005, 400, 2
ORIGINAL = (("+x", "-x"), ("+y", "-y"))


def reconnected(topology):
    return len(topology) == 2 and all({a[-1], b[-1]} == {"x", "y"} for a, b in topology)


def test_criterion_7_gp_reconnection(report):
    gp = GPParams.natural(GP_N_ATOMS, GP_A, GP_L, GP_D)
    s0 = make_two_perpendicular_vortices(TwoLineParams(gp.d, gp.L, gp.n_atoms))
    spec = GridSpec(GP_GRID, GP_BOX)
    zoom = GridSpec(64, 1.5 * gp.d)
    near = np.linalg.norm(zoom.points(), axis=-1) <= gp.d
    centre = center_ratio(gp)

    def observe(g):
        psi = spectral_resample(g, zoom)
        lap = spectral_resample(type(g)(g.spec, grid_laplacian(g, "spectral"), g.time), zoom)
        ratio = np.abs(grid_ratio_field(psi.values, lap.values, gp))
        return trace_vortex_lines(psi).topology(), float(ratio[near].max())

    start = time.perf_counter()
    trap_omega = gp.hbar / (gp.mass * gp.L**2)
    _, logs = evolve(sample(s0, spec), GPStepper(trap_omega, gp), GP_DT, GP_STEPS,
                     [Observer("obs", observe, GP_STRIDE)])
    elapsed = time.perf_counter() - start
    t0 = vortex_timescale(gp)
    series = logs["obs"]
    assert series[0][1][0] == ORIGINAL
    changed = next(k for k, (_, (topo, _)) in enumerate(series) if topo != ORIGINAL)
    last_original = series[changed - 1][0]
    first_new = next((t for t, (topo, _) in series[changed:] if reconnected(topo)), math.inf)
    in_window = 0.5 * t0 <= last_original and first_new <= 2.0 * t0
    worst_ratio = max(r for _, (_, r) in series)
    ratio_ok = worst_ratio < 10 * centre
    ok = in_window and ratio_ok and elapsed <= 1200
    report(7, ok, f"reconnection between t = {last_original:.3f} and {first_new:.3f} (window [{0.5 * t0:g}, {2 * t0:g}]): "
                  f"{in_window}; max |ratio| within d {worst_ratio:.3e} = {worst_ratio / centre:.1f} x centre "
                  f"{centre:.3e} (< 10x): {ratio_ok}; {elapsed:.0f} s")
    assert ok


# ---------------------------------------------------------------------------
# criterion 8: oracle integrity
# ---------------------------------------------------------------------------


def test_criterion_8_oracle_integrity(report):
    cfg, phi0 = make_scenario(8)
    spec = GridSpec(32, tuple(BOX_WIDTHS / np.sqrt(cfg.omega)))
    g0 = sample(phi0, spec)
    stepper = HarmonicStepper(cfg)
    g1 = stepper(g0, DT, 10_000)
    drift = abs(g1.norm_sq() - g0.norm_sq()) / g0.norm_sq()
    back = stepper(g1, -DT, 10_000)
    rev = l2_distance(back, g0)

    gp = GPParams.natural(1e3, 1e-2, 1.0, 0.3)
    s_gp = make_two_perpendicular_vortices(TwoLineParams(gp.d, gp.L, gp.n_atoms))
    gspec = GridSpec(32, 8.0)
    h0 = sample(s_gp, gspec)
    gp_step = GPStepper(1.0, gp)
    h1 = gp_step(h0, DT, 10_000)
    drift_gp = abs(h1.norm_sq() - h0.norm_sq()) / h0.norm_sq()
    rev_gp = l2_distance(gp_step(h1, -DT, 10_000), h0) / math.sqrt(h0.norm_sq())

    ok = max(drift, drift_gp) < 1e-8 and max(rev, rev_gp) < 1e-6
    report(8, ok, f"norm drift {drift:.1e} / GP {drift_gp:.1e} (< 1e-8); reversal L2 error {rev:.1e} / GP {rev_gp:.1e} (< 1e-6)")
    assert ok
