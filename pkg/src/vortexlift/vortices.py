"""Vortex lines: zeros of a complex field around which the phase winds.

Detection is by plaquette phase winding (independent of the amplitude scale);
in-plane zeros are then polished by Newton iteration on (Re, Im), and 3-D lines
are traced by linking pierced cell faces.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import IllConditionedLoopError, InvalidArgumentError

TWO_PI = 2 * np.pi


@dataclass(frozen=True, eq=False)
class VortexPoint:
    position: np.ndarray
    charge: int

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float).reshape(3))
        object.__setattr__(self, "charge", int(self.charge))


@dataclass(frozen=True, eq=False)
class VortexPolyline:
    points: list
    closed: bool = False
    start_face: str = "interior"
    end_face: str = "interior"

    @property
    def charge(self):
        return self.points[0].charge if self.points else 0

    @property
    def positions(self):
        return np.array([p.position for p in self.points]).reshape(-1, 3)

    def __len__(self):
        return len(self.points)


class TrajectoryPoint(NamedTuple):
    x: float
    y: float
    unbounded: bool


def _wrapped_increments(values, axis=-1):
    """Phase increments between successive samples, each in (-pi, pi]."""
    nxt = np.roll(values, -1, axis=axis)
    return np.angle(nxt * np.conj(values))


# ---------------------------------------------------------------------------
# analytic single-vortex trajectory
# ---------------------------------------------------------------------------


def single_vortex_trajectory(a_disp, omega, t, flag_tol=1e-12):
    """Zero of x e^{-i wx t} - a + i y e^{-i wy t} in the z = const plane.

    Solves the real 2 x 2 system; its determinant is cos((wx - wy) t).  When
    |det| < flag_tol the zero has run off to infinity and the point is flagged
    ``unbounded`` (coordinates NaN).
    """
    wx, wy = float(omega[0]), float(omega[1])
    det = math.cos((wx - wy) * t)
    if abs(det) < flag_tol:
        return TrajectoryPoint(math.nan, math.nan, True)
    return TrajectoryPoint(a_disp * math.cos(wy * t) / det, a_disp * math.sin(wx * t) / det, False)


# ---------------------------------------------------------------------------
# winding numbers and in-plane zeros
# ---------------------------------------------------------------------------


def winding_number(field, loop, tol=1e-10):
    """Integer winding of ``field`` around the closed polygon ``loop`` (M x 3 points).

    Raises IllConditionedLoopError if |field| on the loop drops below
    ``tol`` times its maximum there.
    """
    pts = np.asarray(loop, dtype=float).reshape(-1, 3)
    if len(pts) < 3:
        raise InvalidArgumentError("a loop needs at least 3 points")
    if np.allclose(pts[0], pts[-1]):
        pts = pts[:-1]
    vals = np.asarray(field(pts), dtype=complex)
    mod = np.abs(vals)
    if mod.max() == 0.0 or mod.min() <= tol * mod.max():
        raise IllConditionedLoopError("field (nearly) vanishes on the loop")
    return int(round(_wrapped_increments(vals).sum() / TWO_PI))


def circle_loop(center, radius, normal_axis=2, n=256):
    """Counter-clockwise circle (seen from +normal) in an axis-aligned plane."""
    u_ax, v_ax = (normal_axis + 1) % 3, (normal_axis + 2) % 3
    theta = np.linspace(0, TWO_PI, n, endpoint=False)
    pts = np.tile(np.asarray(center, dtype=float), (n, 1))
    pts[:, u_ax] += radius * np.cos(theta)
    pts[:, v_ax] += radius * np.sin(theta)
    return pts


@dataclass(frozen=True)
class Plane:
    """Plane x_axis = offset; in-plane coordinates are the next two axes cyclically."""

    axis: int
    offset: float = 0.0

    @property
    def in_plane(self):
        return (self.axis + 1) % 3, (self.axis + 2) % 3

    def embed(self, u, v):
        u = np.asarray(u, dtype=float)
        pts = np.empty(np.broadcast(u, v).shape + (3,))
        iu, iv = self.in_plane
        pts[..., self.axis] = self.offset
        pts[..., iu] = u
        pts[..., iv] = v
        return pts


@dataclass
class ZeroSearch:
    """Zeros found in a plane; ``dropped`` counts seeds where Newton failed."""

    points: list = field(default_factory=list)
    dropped: int = 0

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]


def plaquette_windings(values):
    """Winding of each plaquette of a 2-D sample array (counter-clockwise in index order)."""
    du = np.angle(values[1:, :] * np.conj(values[:-1, :]))
    dv = np.angle(values[:, 1:] * np.conj(values[:, :-1]))
    total = du[:, :-1] + dv[1:, :] - du[:, 1:] - dv[:-1, :]
    return np.rint(total / TWO_PI).astype(int)


def _jacobian(field, point, plane, step):
    iu, iv = plane.in_plane
    grad_fn = getattr(field, "gradient", None)
    if grad_fn is not None:
        g = np.asarray(grad_fn(point[None, :]))[0]
        du, dv = g[iu], g[iv]
    else:
        e_u = np.zeros(3)
        e_u[iu] = step
        e_v = np.zeros(3)
        e_v[iv] = step
        pts = np.stack([point + e_u, point - e_u, point + e_v, point - e_v])
        f = np.asarray(field(pts))
        du, dv = (f[0] - f[1]) / (2 * step), (f[2] - f[3]) / (2 * step)
    return np.array([[du.real, dv.real], [du.imag, dv.imag]])


def newton_zero(field, start, plane, scale, step, max_iter=50, rtol=1e-10):
    """Polish an in-plane zero; returns the point or None if not converged."""
    iu, iv = plane.in_plane
    p = np.asarray(start, dtype=float).copy()
    for _ in range(max_iter + 1):
        f = complex(np.asarray(field(p[None, :]))[0])
        if abs(f) < rtol * scale:
            return p
        jac = _jacobian(field, p, plane, step)
        try:
            delta = np.linalg.solve(jac, [f.real, f.imag])
        except np.linalg.LinAlgError:
            return None
        p[iu] -= delta[0]
        p[iv] -= delta[1]
        if not np.all(np.isfinite(p)):
            return None
    return None


def find_zeros_in_plane(field, plane: Plane, window, n=64, max_iter=50, rtol=1e-10):
    """Vortex points of ``field`` in ``plane`` inside ``window = ((u0, u1), (v0, v1))``.

    Plaquettes of an n x n lattice with nonzero phase winding seed a Newton
    iteration; converged zeros (|field| < rtol * max |field| on the lattice)
    are returned with the plaquette winding as charge.
    """
    if n < 8:
        raise InvalidArgumentError("need at least 8 lattice points per axis")
    (u0, u1), (v0, v1) = window
    us, vs = np.linspace(u0, u1, n), np.linspace(v0, v1, n)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    values = np.asarray(field(plane.embed(uu, vv)), dtype=complex)
    scale = float(np.abs(values).max())
    cell = max(us[1] - us[0], vs[1] - vs[0])
    wind = plaquette_windings(values)
    result = ZeroSearch()
    for i, j in zip(*np.nonzero(wind)):
        seed = plane.embed(0.5 * (us[i] + us[i + 1]), 0.5 * (vs[j] + vs[j + 1]))
        zero = newton_zero(field, seed, plane, scale, cell / 8, max_iter, rtol)
        if zero is None:
            result.dropped += 1
            continue
        if any(np.linalg.norm(zero - q.position) < cell / 4 for q in result.points):
            continue
        result.points.append(VortexPoint(zero, wind[i, j]))
    result.points.sort(key=lambda q: tuple(q.position))
    return result


# ---------------------------------------------------------------------------
# 3-D line tracing on a grid
# ---------------------------------------------------------------------------


def face_windings(values):
    """Integer windings of all lattice faces, oriented along +x, +y, +z.

    Returns (wx, wy, wz) with shapes (nx, ny-1, nz-1), (nx-1, ny, nz-1) and
    (nx-1, ny-1, nz); in-face loops run (y, z), (z, x), (x, y) respectively.
    """
    v = values
    dx = np.angle(v[1:, :, :] * np.conj(v[:-1, :, :]))
    dy = np.angle(v[:, 1:, :] * np.conj(v[:, :-1, :]))
    dz = np.angle(v[:, :, 1:] * np.conj(v[:, :, :-1]))
    wx = dy[:, :, :-1] + dz[:, 1:, :] - dy[:, :, 1:] - dz[:, :-1, :]
    wy = dz[:-1, :, :] + dx[:, :, 1:] - dz[1:, :, :] - dx[:, :, :-1]
    wz = dx[:, :-1, :] + dy[1:, :, :] - dx[:, 1:, :] - dy[:-1, :, :]
    return tuple(np.rint(w / TWO_PI).astype(int) for w in (wx, wy, wz))


def _bilinear_zero(f00, f10, f01, f11, iters=30):
    """Zero (s, t) in [0, 1]^2 of the bilinear interpolant of complex corner values."""
    s = np.full(f00.shape, 0.5)
    t = np.full(f00.shape, 0.5)
    a, b, c, d = f00, f10 - f00, f01 - f00, f11 - f10 - f01 + f00
    for _ in range(iters):
        f = a + b * s + c * t + d * s * t
        fs = b + d * t
        ft = c + d * s
        det = fs.real * ft.imag - ft.real * fs.imag
        safe = np.where(det == 0, 1.0, det)
        ds = (f.real * ft.imag - ft.real * f.imag) / safe
        dt = (fs.real * f.imag - f.real * fs.imag) / safe
        s = np.clip(s - np.where(det == 0, 0, ds), 0.0, 1.0)
        t = np.clip(t - np.where(det == 0, 0, dt), 0.0, 1.0)
    return s, t


@dataclass
class TraceResult:
    lines: list
    ambiguous_cells: np.ndarray

    def __iter__(self):
        return iter(self.lines)

    def __len__(self):
        return len(self.lines)

    def __getitem__(self, i):
        return self.lines[i]

    def topology(self):
        """Sorted endpoint-face pairs of the open lines, e.g. (('-x', '+x'), ('-y', '+y'))."""
        pairs = [tuple(sorted((ln.start_face, ln.end_face))) for ln in self.lines if not ln.closed]
        return tuple(sorted(pairs))


def trace_vortex_lines(grid) -> TraceResult:
    """Vortex polylines of a sampled field (``grid.values[ix, iy, iz]`` on ``grid.spec``).

    Each lattice cell whose faces carry exactly one entering and one leaving
    unit winding contributes a segment; segments are chained across shared
    faces.  Cells with any other pierced-face pattern are reported as
    ambiguous (typically a near-reconnection) and cut the lines there.
    Polylines are oriented so that their charge is positive.
    """
    values = np.asarray(grid.values, dtype=complex)
    shape = values.shape
    if min(shape) < 16:
        raise InvalidArgumentError("tracing needs at least 16 points per axis")
    axes = grid.spec.axes()
    nx, ny, nz = shape
    wins = face_windings(values)

    # face ids: one block per orientation
    offsets = np.cumsum([0] + [w.size for w in wins])

    def fid(orient, idx):
        return offsets[orient] + np.ravel_multi_index(idx, wins[orient].shape)

    cell_shape = (nx - 1, ny - 1, nz - 1)
    ci, cj, ck = np.indices(cell_shape).reshape(3, -1)
    # outward flux and face id for the six faces of every cell
    fluxes, ids = [], []
    for orient, (lo, hi) in enumerate(
        [((ci, cj, ck), (ci + 1, cj, ck)), ((ci, cj, ck), (ci, cj + 1, ck)), ((ci, cj, ck), (ci, cj, ck + 1))]
    ):
        w = wins[orient]
        fluxes += [-w[lo], w[hi]]
        ids += [fid(orient, lo), fid(orient, hi)]
    fluxes = np.stack(fluxes, axis=1)
    ids = np.stack(ids, axis=1)
    pierced = fluxes != 0
    count = pierced.sum(axis=1)
    good = (count == 2) & (np.abs(fluxes).max(axis=1) == 1)
    ambiguous = count.astype(bool) & ~good

    nxt = {}
    for row in np.nonzero(good)[0]:
        cols = np.nonzero(pierced[row])[0]
        inflow = cols[fluxes[row, cols] < 0][0]
        outflow = cols[fluxes[row, cols] > 0][0]
        nxt[int(ids[row, inflow])] = int(ids[row, outflow])

    # positions of all pierced faces
    positions, charges, labels = {}, {}, {}
    v = values
    corner_sets = [
        (v[:, :-1, :-1], v[:, 1:, :-1], v[:, :-1, 1:], v[:, 1:, 1:]),  # x faces: s->y, t->z
        (v[:-1, :, :-1], v[:-1, :, 1:], v[1:, :, :-1], v[1:, :, 1:]),  # y faces: s->z, t->x
        (v[:-1, :-1, :], v[1:, :-1, :], v[:-1, 1:, :], v[1:, 1:, :]),  # z faces: s->x, t->y
    ]
    spans = [(1, 2), (2, 0), (0, 1)]
    limits = [(nx - 1, "x"), (ny - 1, "y"), (nz - 1, "z")]
    for orient, w in enumerate(wins):
        idx = np.nonzero(w)
        if not idx[0].size:
            continue
        corners = [c[idx] for c in corner_sets[orient]]
        s, t = _bilinear_zero(*corners)
        su, tv = spans[orient]
        for m in range(idx[0].size):
            ijk = [int(idx[q][m]) for q in range(3)]
            pos = np.array([axes[q][ijk[q]] for q in range(3)])
            frac = {su: s[m], tv: t[m]}
            for q, fval in frac.items():
                pos[q] += fval * (axes[q][ijk[q] + 1] - axes[q][ijk[q]])
            key = int(fid(orient, tuple(ijk)))
            positions[key] = pos
            charges[key] = int(w[tuple(ijk)])
            along = ijk[orient]
            top, name = limits[orient]
            labels[key] = ("-" + name) if along == 0 else ("+" + name) if along == top else "interior"

    prev = {b: a for a, b in nxt.items()}
    lines, seen = [], set()

    def build(chain, closed):
        pts = [VortexPoint(positions[f], abs(charges[f])) for f in chain]
        start = labels[chain[0]] if not closed else "interior"
        end = labels[chain[-1]] if not closed else "interior"
        return VortexPolyline(pts, closed, start, end)

    for start in sorted(positions):
        if start in seen or start in prev:
            continue
        chain = [start]
        seen.add(start)
        while chain[-1] in nxt and nxt[chain[-1]] not in seen:
            chain.append(nxt[chain[-1]])
            seen.add(chain[-1])
        lines.append(build(chain, False))
    for start in sorted(positions):
        if start in seen:
            continue
        chain = [start]
        seen.add(start)
        while nxt.get(chain[-1]) is not None and nxt[chain[-1]] not in seen:
            chain.append(nxt[chain[-1]])
            seen.add(chain[-1])
        lines.append(build(chain, nxt.get(chain[-1]) == start))

    lines.sort(key=lambda ln: tuple(ln.positions[0]))
    amb = np.stack([ci[ambiguous], cj[ambiguous], ck[ambiguous]], axis=1)
    return TraceResult(lines, amb)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

POLYLINE_COLUMNS = ("line_id", "vertex", "x", "y", "z", "charge")


def polylines_to_csv(lines) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(POLYLINE_COLUMNS)
    for line_id, line in enumerate(lines):
        for k, pt in enumerate(line.points):
            x, y, z = pt.position
            writer.writerow([line_id, k, f"{x:.17g}", f"{y:.17g}", f"{z:.17g}", pt.charge])
    return buf.getvalue()


def polylines_to_json(lines) -> str:
    payload = [
        {
            "id": line_id,
            "closed": line.closed,
            "charge": line.charge,
            "ends": [line.start_face, line.end_face],
            "points": [[float(f"{c:.17g}") for c in pt.position] for pt in line.points],
        }
        for line_id, line in enumerate(lines)
    ]
    return json.dumps(payload, indent=1)
