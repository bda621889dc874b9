import json

import numpy as np
import pytest

from vortexlift.errors import IllConditionedLoopError, InvalidArgumentError
from vortexlift.linear import evolve_linear
from vortexlift.oracle import GridSpec, GridState, sample
from vortexlift.states import TwoLineParams, VortexParams, make_single_vortex, make_two_perpendicular_vortices
from vortexlift.vortices import (
    Plane,
    circle_loop,
    find_zeros_in_plane,
    plaquette_windings,
    polylines_to_csv,
    polylines_to_json,
    single_vortex_trajectory,
    trace_vortex_lines,
    winding_number,
)


def xy_field(charge=1, x0=0.0, y0=0.0):
    def f(pts):
        pts = np.asarray(pts, dtype=float)
        z = (pts[..., 0] - x0) + 1j * (pts[..., 1] - y0)
        return z**charge if charge >= 0 else np.conj(z) ** (-charge)
    return f


def test_winding_numbers():
    loop = circle_loop([0, 0, 0], 1.0)
    assert winding_number(xy_field(1), loop) == 1
    assert winding_number(xy_field(-1), loop) == -1
    assert winding_number(xy_field(2), loop) == 2
    assert winding_number(xy_field(1, x0=3.0), loop) == 0
    with pytest.raises(IllConditionedLoopError):
        winding_number(xy_field(1, x0=1.0), loop)
    with pytest.raises(InvalidArgumentError):
        winding_number(xy_field(1), loop[:2])


def test_plaquette_windings_locate_charges():
    u = np.linspace(-2, 2, 41)
    uu, vv = np.meshgrid(u, u, indexing="ij")
    z = uu + 1j * vv
    vals = (z - 0.55) * np.conj(z + 0.55)
    wind = plaquette_windings(vals)
    assert wind.sum() == 0 and np.abs(wind).sum() == 2
    assert wind[np.nonzero(wind)].tolist() in ([-1, 1], [1, -1])


def test_find_zeros_without_gradient():
    field = xy_field(1, x0=0.3141, y0=-0.2718)
    zeros = find_zeros_in_plane(field, Plane(2, 0.5), ((-1, 1), (-1, 1)), n=16)
    assert len(zeros) == 1 and zeros.dropped == 0
    np.testing.assert_allclose(zeros[0].position, [0.3141, -0.2718, 0.5], atol=1e-10)
    assert zeros[0].charge == 1


def test_isotropic_vortex_moves_on_circle():
    a, w = 0.5, 1.0
    s0 = make_single_vortex(VortexParams(a), w)
    for t in np.linspace(0, 6, 13):
        zeros = find_zeros_in_plane(evolve_linear(s0, w, t), Plane(2, 0.0), ((-2, 2), (-2, 2)), 48)
        assert len(zeros) == 1
        x, y = zeros[0].position[:2]
        pt = single_vortex_trajectory(a, [w, w, w], t)
        assert np.hypot(x, y) == pytest.approx(a, abs=1e-9)
        assert (x, y) == pytest.approx((pt.x, pt.y), abs=1e-9)


def test_anisotropic_trajectory_and_flag():
    a, w = 0.4, np.array([1.3, 0.9, 1.0])
    s0 = make_single_vortex(VortexParams(a), w)
    for t in (0.5, 1.7, 2.9):
        pt = single_vortex_trajectory(a, w, t)
        zeros = find_zeros_in_plane(evolve_linear(s0, w, t), Plane(2, 0.0), ((-4, 4), (-4, 4)), 64)
        assert len(zeros) == 1
        np.testing.assert_allclose(zeros[0].position[:2], [pt.x, pt.y], atol=1e-9)
    t_star = np.pi / (2 * (w[0] - w[1]))
    flagged = single_vortex_trajectory(a, w, t_star)
    assert flagged.unbounded and np.isnan(flagged.x)
    assert not single_vortex_trajectory(a, w, t_star * 0.99).unbounded


def test_trace_two_perpendicular_lines():
    p = TwoLineParams(d=1.0, L=2.0)
    g = sample(make_two_perpendicular_vortices(p), GridSpec(32, 1.5), check=False)
    res = trace_vortex_lines(g)
    h2 = g.spec.spacing[0] ** 2  # bilinear face locator is second order
    assert len(res) == 2 and len(res.ambiguous_cells) == 0
    assert res.topology() == (("+x", "-x"), ("+y", "-y"))
    for line in res:
        pos = line.positions
        if line.start_face.endswith("y"):
            np.testing.assert_allclose(pos[:, 0], 0.0, atol=h2)
            np.testing.assert_allclose(pos[:, 2], 0.5, atol=h2)
        else:
            np.testing.assert_allclose(pos[:, 1], 0.0, atol=h2)
            np.testing.assert_allclose(pos[:, 2], -0.5, atol=h2)
        assert line.charge == 1


def test_trace_closed_ring():
    spec = GridSpec(32, 2.0)

    def ring(pts):
        x, y, z = np.moveaxis(pts, -1, 0)
        return (x**2 + y**2 - 1.0) + 1j * z

    res = trace_vortex_lines(GridState(spec, ring(spec.points())))
    assert len(res) == 1 and res[0].closed
    radii = np.hypot(res[0].positions[:, 0], res[0].positions[:, 1])
    np.testing.assert_allclose(radii, 1.0, atol=2e-2)
    assert res.topology() == ()


def test_exports():
    p = TwoLineParams(d=1.0, L=2.0)
    lines = trace_vortex_lines(sample(make_two_perpendicular_vortices(p), GridSpec(16, 1.5), check=False)).lines
    csv_rows = polylines_to_csv(lines).strip().split("\n")
    assert csv_rows[0] == "line_id,vertex,x,y,z,charge"
    assert len(csv_rows) == 1 + sum(len(ln) for ln in lines)
    payload = json.loads(polylines_to_json(lines))
    assert [len(item["points"]) for item in payload] == [len(ln) for ln in lines]
