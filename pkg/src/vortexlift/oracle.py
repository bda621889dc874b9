"""Split-step (Strang) spectral integrator used as an independent oracle.

Two equations are supported:

* the harmonic-force NLSE, through its exact moment reduction
  V(r) = sum_j tilde_w_j^2 x_j^2 / 2 - Omega^2 (U - R.r + R.R/(2N)) - N Omega^2 r^2 / 2,
  with N, R, U re-measured from the current field before every half kick;
* the Gross-Pitaevskii equation with an isotropic trap and contact term
  4 pi hbar^2 a |psi|^2 / m.

Fields live on a periodic box of cell-centred points; arrays are indexed
``values[ix, iy, iz]``.  Both real-space kicks leave |psi| unchanged, so the
density-dependent part of each kick is exact.
"""

from __future__ import annotations

import functools
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import _fft
from .errors import BoxTooSmallError, InvalidArgumentError
from .lift import LiftedState
from .moments import GlobalMoments, compute_moments
from .states import HermiteGaussianState
from .trap import TrapConfig

BOUNDARY_TOL = 1e-8


@dataclass(frozen=True)
class GridSpec:
    """``n`` points per axis on [-box_j, box_j], cell centred and periodic."""

    n: tuple
    box: tuple

    def __post_init__(self):
        n = tuple(int(v) for v in np.broadcast_to(self.n, 3))
        box = tuple(float(v) for v in np.broadcast_to(self.box, 3))
        if any(v < 16 or v % 2 for v in n):
            raise InvalidArgumentError(f"grid needs an even number >= 16 of points per axis, got {n}")
        if any(not b > 0 for b in box):
            raise InvalidArgumentError("box half-widths must be positive")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "box", box)

    @property
    def spacing(self):
        return np.array([2 * b / n for b, n in zip(self.box, self.n)])

    @property
    def cell_volume(self):
        return float(np.prod(self.spacing))

    def axis(self, j):
        h = 2 * self.box[j] / self.n[j]
        return -self.box[j] + (np.arange(self.n[j]) + 0.5) * h

    def axes(self):
        return [self.axis(j) for j in range(3)]

    def wavenumbers(self, j):
        return 2 * np.pi * np.fft.fftfreq(self.n[j], d=2 * self.box[j] / self.n[j])

    def points(self):
        return np.stack(np.meshgrid(*self.axes(), indexing="ij"), axis=-1)


@dataclass(frozen=True, eq=False)
class GridState:
    spec: GridSpec
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != self.spec.n:
            raise InvalidArgumentError(f"values shape {values.shape} does not match grid {self.spec.n}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "time", float(self.time))

    def norm_sq(self):
        return float(np.sum(np.abs(self.values) ** 2) * self.spec.cell_volume)


def _boundary_max(values):
    return max(
        np.abs(values[[0, -1], :, :]).max(),
        np.abs(values[:, [0, -1], :]).max(),
        np.abs(values[:, :, [0, -1]]).max(),
    )


def check_boundary(values, tol=BOUNDARY_TOL):
    peak = np.abs(values).max()
    if peak == 0.0:
        return
    edge = _boundary_max(values)
    if edge >= tol * peak:
        raise BoxTooSmallError(f"boundary amplitude {edge / peak:.3g} x max exceeds {tol:g}; enlarge the box")


def sample(state, spec: GridSpec, check=True) -> GridState:
    """Evaluate a state at the cell centres of ``spec``."""
    xs, ys, zs = spec.axes()
    if isinstance(state, HermiteGaussianState):
        values, time = state.evaluate_grid(xs, ys, zs), state.time
    elif isinstance(state, LiftedState):
        b, a = state.b, state.a
        values = state.phi.evaluate_grid(xs - b[0], ys - b[1], zs - b[2])
        values = values * np.exp(1j * a[0] * xs)[:, None, None]
        values = values * np.exp(1j * (a[1] * ys[:, None] + a[2] * zs[None, :]))[None]
        values *= np.exp(1j * state.f)
        time = state.time
    else:
        values, time = np.asarray(state(spec.points()), dtype=complex), getattr(state, "time", 0.0)
    if check:
        check_boundary(values)
    return GridState(spec, values, time)


def l2_distance(g1: GridState, g2: GridState) -> float:
    if g1.spec != g2.spec:
        raise InvalidArgumentError("grids have different specs")
    return math.sqrt(np.sum(np.abs(g1.values - g2.values) ** 2) * g1.spec.cell_volume)


# ---------------------------------------------------------------------------
# spectral calculus on grids
# ---------------------------------------------------------------------------


def _k_broadcast(spec, j):
    shape = [1, 1, 1]
    shape[j] = spec.n[j]
    return spec.wavenumbers(j).reshape(shape)


def spectral_gradient(g: GridState):
    spectrum = _fft.fftn(g.values)
    return [_fft.ifftn(1j * _k_broadcast(g.spec, j) * spectrum) for j in range(3)]


def grid_laplacian(g: GridState, method="stencil"):
    """Laplacian of a grid field: 7-point periodic stencil or spectral."""
    if method == "spectral":
        k2 = sum(_k_broadcast(g.spec, j) ** 2 for j in range(3))
        return _fft.ifftn(-k2 * _fft.fftn(g.values))
    if method != "stencil":
        raise InvalidArgumentError(f"unknown Laplacian method {method!r}")
    v = g.values
    out = np.zeros_like(v)
    for j, h in enumerate(g.spec.spacing):
        out += (np.roll(v, 1, axis=j) - 2 * v + np.roll(v, -1, axis=j)) / h**2
    return out


@compute_moments.register
def _(g: GridState) -> GlobalMoments:
    psi = g.values
    dv = g.spec.cell_volume
    rho = psi.real**2 + psi.imag**2
    n = rho.sum() * dv
    if not n > 0:
        raise InvalidArgumentError("moments of a zero-norm state are undefined")
    grads = spectral_gradient(g)
    r, p, u, t_kin, w = (np.zeros(3) for _ in range(5))
    for j, x in enumerate(g.spec.axes()):
        shape = [1, 1, 1]
        shape[j] = -1
        xb = x.reshape(shape)
        p_psi = -1j * grads[j]
        r[j] = np.sum(xb * rho) * dv
        p[j] = np.sum(np.conj(psi) * p_psi).real * dv
        u[j] = 0.5 * np.sum(xb**2 * rho) * dv - r[j] ** 2 / (2 * n)
        t_kin[j] = 0.5 * np.sum(np.abs(grads[j]) ** 2) * dv - p[j] ** 2 / (2 * n)
        w[j] = 0.5 * np.sum(np.conj(xb * psi) * p_psi).real * dv - r[j] * p[j] / (2 * n)
    return GlobalMoments(n, r, p, u, t_kin, w, g.time)


def spectral_resample(g: GridState, target: GridSpec, center=(0.0, 0.0, 0.0)) -> GridState:
    """Trigonometric interpolant of ``g`` evaluated on ``target`` shifted by ``center``.

    Useful for zooming into a small window of a band-limited field; the Nyquist
    mode is interpreted as a cosine so node values are reproduced exactly.
    """
    coeffs = _fft.fftn(g.values)
    for j in range(3):
        n = g.spec.n[j]
        x0 = g.spec.axis(j)[0]
        k = g.spec.wavenumbers(j)
        x_new = target.axis(j) + center[j]
        mat = np.exp(1j * np.outer(x_new - x0, k))
        mat[:, n // 2] = np.cos((x_new - x0) * k[n // 2])
        coeffs = np.moveaxis(np.tensordot(mat / n, coeffs, axes=([1], [j])), 0, j)
    return GridState(target, coeffs, g.time)


# ---------------------------------------------------------------------------
# steppers
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=16)
def _kinetic_factor(spec: GridSpec, coeff: float):
    """exp(-i coeff k^2) on the spectral grid."""
    parts = [np.exp(-1j * coeff * spec.wavenumbers(j) ** 2) for j in range(3)]
    return parts[0][:, None, None] * parts[1][None, :, None] * parts[2][None, None, :]


def _density_marginals(psi, spec):
    rho = psi.real**2 + psi.imag**2
    rho_xy = rho.sum(axis=2)
    dv = spec.cell_volume
    return rho, (rho_xy.sum(axis=1) * dv, rho_xy.sum(axis=0) * dv, rho.sum(axis=(0, 1)) * dv)


def _harmonic_kick(psi, spec, cfg, tau):
    """psi *= exp(-i V tau) with V re-measured from |psi| (in place)."""
    _, marg = _density_marginals(psi, spec)
    axes = spec.axes()
    n = float(marg[0].sum())
    r = np.array([m @ x for m, x in zip(marg, axes)])
    x2 = np.array([m @ x**2 for m, x in zip(marg, axes)])
    u = float(np.sum(0.5 * x2 - r**2 / (2 * n)))
    om2 = cfg.tilde_omega**2 - n * cfg.omega_sq_int
    o2 = cfg.omega_sq_int
    fac = [np.exp(-1j * tau * (0.5 * om2[j] * axes[j] ** 2 + o2 * r[j] * axes[j])) for j in range(3)]
    const = np.exp(1j * tau * o2 * (u + r @ r / (2 * n)))
    psi *= (fac[0][:, None] * fac[1][None, :])[:, :, None]
    psi *= (fac[2] * const)[None, None, :]
    return psi


def _kinetic(psi, spec, coeff):
    return _fft.ifftn(_fft.fftn(psi) * _kinetic_factor(spec, coeff))


class HarmonicStepper:
    """Strang steps of the harmonic-force NLSE (natural units)."""

    def __init__(self, cfg: TrapConfig):
        self.cfg = cfg

    def __call__(self, g: GridState, dt, n_steps=1) -> GridState:
        if n_steps == 0:
            return g
        spec = g.spec
        psi = np.array(g.values, dtype=complex)
        _harmonic_kick(psi, spec, self.cfg, dt / 2)
        for k in range(n_steps):
            psi = _kinetic(psi, spec, dt / 2)
            # consecutive half kicks see the same |psi|, so they merge exactly
            _harmonic_kick(psi, spec, self.cfg, dt if k < n_steps - 1 else dt / 2)
        return GridState(spec, psi, g.time + n_steps * dt)


def step_harmonic_nlse(g: GridState, cfg: TrapConfig, dt) -> GridState:
    """One potential-kinetic-potential Strang step of the harmonic-force NLSE."""
    return HarmonicStepper(cfg)(g, dt)


class GPStepper:
    """Strang steps of i hbar psi_t = -hbar^2/(2m) Lap psi + m w^2 r^2/2 psi + g |psi|^2 psi."""

    def __init__(self, trap_omega, gp):
        self.trap_omega = float(trap_omega)
        self.gp = gp

    def _kick(self, psi, spec, tau):
        gp = self.gp
        coupling = 4 * np.pi * gp.hbar**2 * gp.a_scatt / gp.mass
        axes = spec.axes()
        half_mw2 = 0.5 * gp.mass * self.trap_omega**2
        fac = [np.exp(-1j * tau * half_mw2 * x**2 / gp.hbar) for x in axes]
        rho = psi.real**2 + psi.imag**2
        psi *= np.exp(-1j * tau * coupling / gp.hbar * rho)
        psi *= (fac[0][:, None] * fac[1][None, :])[:, :, None]
        psi *= fac[2][None, None, :]
        return psi

    def __call__(self, g: GridState, dt, n_steps=1) -> GridState:
        if n_steps == 0:
            return g
        spec = g.spec
        kin = self.gp.hbar * dt / (2 * self.gp.mass)
        psi = np.array(g.values, dtype=complex)
        self._kick(psi, spec, dt / 2)
        for k in range(n_steps):
            psi = _kinetic(psi, spec, kin)
            self._kick(psi, spec, dt if k < n_steps - 1 else dt / 2)
        return GridState(spec, psi, g.time + n_steps * dt)


def step_gp(g: GridState, trap_omega, gp, dt) -> GridState:
    """One Strang step of the Gross-Pitaevskii equation in the units of ``gp``."""
    return GPStepper(trap_omega, gp)(g, dt)


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


@dataclass
class Observer:
    """Calls ``fn(grid)`` every ``stride`` steps (including step 0)."""

    name: str
    fn: Callable
    stride: int = 1
    log: list = field(default_factory=list)


def evolve(g0: GridState, stepper, dt, n_steps, observers=()):
    """Run ``n_steps`` steps; returns the final grid and ``{name: [(time, value), ...]}``."""
    observers = list(observers)
    for obs in observers:
        if obs.stride < 1:
            raise InvalidArgumentError("observer stride must be >= 1")
    marks = sorted({0, n_steps} | {k for obs in observers for k in range(0, n_steps + 1, obs.stride)})
    logs = {obs.name: [] for obs in observers}
    g = g0
    done = 0
    for mark in marks:
        if mark > done:
            g = stepper(g, dt, mark - done)
            done = mark
        for obs in observers:
            if mark % obs.stride == 0:
                logs[obs.name].append((g.time, obs.fn(g)))
    return g, logs


# ---------------------------------------------------------------------------
# binary dumps
# ---------------------------------------------------------------------------

_HEADER = struct.Struct("<3I4d")


def write_grid(path, g: GridState):
    """Little-endian header (3 x u32 dims, 3 x f64 box, f64 time) then (re, im) f64 pairs, x fastest."""
    header = _HEADER.pack(*g.spec.n, *g.spec.box, g.time)
    body = np.asarray(g.values, dtype="<c16").ravel(order="F").tobytes()
    Path(path).write_bytes(header + body)


def read_grid(path) -> GridState:
    data = Path(path).read_bytes()
    nx, ny, nz, bx, by, bz, time = _HEADER.unpack_from(data)
    values = np.frombuffer(data, dtype="<c16", offset=_HEADER.size)
    if values.size != nx * ny * nz:
        raise InvalidArgumentError("grid dump is truncated or has a bad header")
    return GridState(GridSpec((nx, ny, nz), (bx, by, bz)), values.reshape((nx, ny, nz), order="F"), time)
