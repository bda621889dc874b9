import math

import numpy as np
import pytest
from scipy import constants

from vortexlift.errors import IndeterminateRatioError, InvalidArgumentError
from vortexlift.gp import (
    SODIUM_MASS,
    GPParams,
    center_ratio,
    grid_ratio_field,
    ratio_field,
    regime_report,
    vortex_timescale,
    xi_estimate,
)
from vortexlift.oracle import GridSpec, grid_laplacian, sample
from vortexlift.states import TwoLineParams, make_ground_state, make_two_perpendicular_vortices


def two_lines(gp):
    return make_two_perpendicular_vortices(TwoLineParams(gp.d, gp.L, gp.n_atoms))


@pytest.mark.parametrize("n_atoms,a,L,d", [(1e6, 5e-9, 5e-5, 5e-6), (1e6, 1e-3, 10.0, 1.0), (200.0, 0.01, 1.3, 0.5)])
def test_center_ratio_equals_field_ratio_at_origin(n_atoms, a, L, d):
    gp = GPParams(n_atoms, a, L, d)
    got = ratio_field(two_lines(gp), np.zeros(3), gp)
    assert abs(got.imag) < 1e-12 * abs(got.real)
    assert got.real == pytest.approx(center_ratio(gp), rel=1e-10)


def test_grid_ratio_matches_pointwise_ratio():
    gp = GPParams.natural(1e3, 0.01, 1.0, 0.3)
    s = two_lines(gp)
    g = sample(s, GridSpec(48, 7.0))
    ratio = grid_ratio_field(g.values, grid_laplacian(g, "spectral"), gp)
    pts = g.spec.points()[22:26, 22:26, 22:26]
    ref = ratio_field(s, pts, gp)
    np.testing.assert_allclose(ratio[22:26, 22:26, 22:26], ref, rtol=1e-8)


def test_sodium_estimates():
    gp = GPParams.sodium_condensate()
    assert gp.d == pytest.approx(5e-6)
    assert xi_estimate(gp) == pytest.approx(1e6 * (5e-9 / 5e-5) * 0.1**6, rel=1e-14)
    t0 = vortex_timescale(gp)
    assert t0 == pytest.approx(SODIUM_MASS * 25e-12 / constants.hbar, rel=1e-14)
    assert 9.0e-3 < t0 < 9.1e-3
    assert center_ratio(gp) < 1e-2


def test_regime_report_verdicts():
    gp = GPParams.natural(1e6, 1e-3, 10.0, 1.0)
    rep = regime_report(gp, trap_period=2 * math.pi * 100)
    assert rep.nonlinearity_negligible and rep.trap_negligible
    assert rep.t0 == 1.0
    rep = regime_report(gp, trap_period=5.0)
    assert not rep.trap_negligible
    text = rep.to_text()
    assert "trap_negligible = false" in text and text.count("\n") == len(rep.as_dict())
    with pytest.raises(InvalidArgumentError):
        regime_report(gp, trap_period=0.0)


def test_parameter_validation():
    with pytest.raises(InvalidArgumentError):
        GPParams(1e6, -1.0, 1.0, 0.1)
    with pytest.warns(UserWarning):
        GPParams(1e6, 1e-3, 1.0, 0.8)


def test_indeterminate_ratio():
    gp = GPParams.natural(1.0, 0.01, 1.0, 0.1)
    g = make_ground_state(1.0)
    # Laplacian of exp(-r^2/2) vanishes on r^2 = 3
    with pytest.raises(IndeterminateRatioError):
        ratio_field(g, np.array([math.sqrt(3.0), 0.0, 0.0]), gp, rtol=1e-6)


SODIUM = dict(n_atoms=1e6, a_scatt=5e-9, L=5e-5)


def test_sodium_regime_verdicts_follow_the_formulas():
    # T0 = m d^2 / hbar is ~9e-3 s for d = 5 um, not below T/10 = 1e-3 s, so the trap verdict is false
    rep = regime_report(GPParams(d=5e-6, **SODIUM), trap_period=1e-2)
    assert rep.nonlinearity_negligible
    assert not rep.trap_negligible
    assert rep.t0 == pytest.approx(9.05e-3, rel=1e-3)


def test_regime_edge_cases():
    with pytest.warns(UserWarning):
        wide = GPParams(d=5e-5, **SODIUM)
    assert not regime_report(wide, 1e-2).nonlinearity_negligible
    empty = GPParams(0.0, 5e-9, 5e-5, 5e-6)
    rep = regime_report(empty, 1e-2)
    assert rep.xi == 0.0 and rep.center_ratio == 0.0 and rep.nonlinearity_negligible
    assert vortex_timescale(GPParams.natural(1.0, 1e-3, 10.0, 1.0)) == 1.0
    assert center_ratio(GPParams(d=0.0, **SODIUM)) == 0.0


def test_center_ratio_scales_as_d_to_the_sixth():
    small = center_ratio(GPParams(d=1e-7, **SODIUM))
    assert center_ratio(GPParams(d=2e-7, **SODIUM)) / small == pytest.approx(64.0, rel=1e-4)


def test_ratio_vanishes_on_and_towards_a_vortex_line():
    gp = GPParams.natural(1e6, 1e-3, 10.0, 1.0)
    s = two_lines(gp)
    assert ratio_field(s, np.array([0.0, 0.7, 0.5]), gp) == 0.0
    # approach the line x = 0, z = d/2 along x over the last decade
    xs = np.logspace(-1, -2, 12)
    values = np.abs(ratio_field(s, np.stack([xs, np.full(12, 0.7), np.full(12, 0.5)], axis=1), gp))
    assert np.all(np.diff(values) < 0)


def test_ratio_at_separation_distance_is_an_order_of_magnitude_estimate():
    # on the sphere |r| = d the ratio stays within two decades of the centre value,
    # but only a minority of directions are within a factor of ten
    gp = GPParams.natural(1e6, 1e-3, 10.0, 1.0)
    s = two_lines(gp)
    rng = np.random.default_rng(3)
    dirs = rng.normal(size=(2000, 3))
    pts = gp.d * dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    rel = np.abs(ratio_field(s, pts, gp, rtol=0.0)) / center_ratio(gp)
    assert rel.max() < 100.0
    assert 0.1 < np.mean(rel < 10.0) < 0.5
