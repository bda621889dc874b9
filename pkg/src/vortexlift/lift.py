"""Exact solutions of the harmonic-force NLSE built from linear solutions.

    psi(r, t) = exp(i f(t) + i a(t).r) phi(r - b(t), t)

where phi solves the linear equation with the modified frequencies
w_j = sqrt(tilde_w_j^2 - N Omega^2).  Substituting into the NLSE gives

    db/dt = a
    da/dt = -w^2 b - Omega^2 R(t)
    df/dt = -a.a / 2 + sum_j w_j^2 b_j^2 / 2 + Omega^2 (U(t) + R(t).R(t) / (2N))

with a = b = f = 0 at t = 0.  a and b are closed-form; f is integrated
numerically.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import InvalidArgumentError, NumericError
from .linear import eigen_energies, evolve_linear
from .moments import GlobalMoments, compute_moments, evolve_moments
from .states import HermiteGaussianState, ladder_laplacian
from .trap import TrapConfig, modified_frequencies

__all__ = [
    "LiftFunctions",
    "LiftedState",
    "lift",
    "lifted_residual",
    "modified_frequencies",
    "phase_a",
    "phase_f",
    "shift_b",
]

F_TOL = 1e-10


def _column(t):
    t = np.asarray(t, dtype=float)
    return t[..., None]


@dataclass(frozen=True, eq=False)
class LiftFunctions:
    """a(t), b(t), f(t) for the initial moments ``m0`` of psi(., 0) = phi(., 0)."""

    m0: GlobalMoments
    cfg: TrapConfig

    def b(self, t):
        t = _column(t)
        wt, om = self.cfg.tilde_omega, self.cfg.omega
        r0, p0 = self.m0.r, self.m0.p
        return (
            r0 * (np.cos(wt * t) - np.cos(om * t))
            + p0 * (np.sin(wt * t) / wt - np.sin(om * t) / om)
        ) / self.m0.n

    def a(self, t):
        t = _column(t)
        wt, om = self.cfg.tilde_omega, self.cfg.omega
        r0, p0 = self.m0.r, self.m0.p
        return (
            -r0 * (wt * np.sin(wt * t) - om * np.sin(om * t))
            + p0 * (np.cos(wt * t) - np.cos(om * t))
        ) / self.m0.n

    def da_dt(self, t):
        """Time derivative of the closed form for a, differentiated term by term."""
        t = _column(t)
        wt, om = self.cfg.tilde_omega, self.cfg.omega
        r0, p0 = self.m0.r, self.m0.p
        return (
            -r0 * (wt**2 * np.cos(wt * t) - om**2 * np.cos(om * t))
            + p0 * (-wt * np.sin(wt * t) + om * np.sin(om * t))
        ) / self.m0.n

    def f_rate(self, t):
        """df/dt from the closed-form a, b, U(t) and R(t)."""
        t = float(t)
        a, b = self.a(t), self.b(t)
        m = evolve_moments(self.m0, self.cfg, t)
        om2 = self.cfg.omega**2
        return (
            -0.5 * a @ a
            + 0.5 * np.sum(om2 * b**2)
            + self.cfg.omega_sq_int * (m.u_total + m.r @ m.r / (2 * self.m0.n))
        )

    def f(self, t, tol=F_TOL):
        t = float(t)
        if t == 0.0:
            return 0.0
        if self.cfg.omega_sq_int == 0.0:
            return 0.0
        # oscillatory integrand: allow enough subintervals for long horizons
        limit = max(200, int(abs(t) * float(np.max(self.cfg.tilde_omega) + np.max(self.cfg.omega))) * 4)
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                value, err = integrate.quad(self.f_rate, 0.0, t, epsabs=tol, epsrel=0.0, limit=limit)
            except integrate.IntegrationWarning as exc:
                raise NumericError(f"phase integral to t={t} did not converge: {exc}") from exc
        if err > tol:
            raise NumericError(f"phase integral to t={t}: error estimate {err:.3g} exceeds tol {tol:.3g}")
        return value


def shift_b(m0: GlobalMoments, cfg: TrapConfig, t):
    """Rigid displacement b(t)."""
    return LiftFunctions(m0, cfg).b(t)


def phase_a(m0: GlobalMoments, cfg: TrapConfig, t):
    """Phase-gradient vector a(t) = db/dt."""
    return LiftFunctions(m0, cfg).a(t)


def phase_f(m0: GlobalMoments, cfg: TrapConfig, t, tol=F_TOL):
    """Global phase f(t) by adaptive quadrature with absolute error <= tol."""
    if not tol > 0:
        raise InvalidArgumentError("tol must be positive")
    return LiftFunctions(m0, cfg).f(t, tol)


@dataclass(frozen=True, eq=False)
class LiftedState:
    """Snapshot of psi at ``time``: ``phi`` is the evolved linear state."""

    phi: HermiteGaussianState
    lift: LiftFunctions
    time: float
    a: np.ndarray
    b: np.ndarray
    f: float

    def evaluate(self, points):
        pts = np.asarray(points, dtype=float)
        phase = np.exp(1j * (self.f + pts @ self.a))
        return phase * self.phi.evaluate(pts - self.b)

    __call__ = evaluate

    def gradient(self, points):
        pts = np.asarray(points, dtype=float)
        phase = np.exp(1j * (self.f + pts @ self.a))[..., None]
        shifted = pts - self.b
        return phase * (self.phi.gradient(shifted) + 1j * self.a * self.phi.evaluate(shifted)[..., None])

    def laplacian(self, points):
        pts = np.asarray(points, dtype=float)
        shifted = pts - self.b
        phase = np.exp(1j * (self.f + pts @ self.a))
        val = self.phi.evaluate(shifted)
        grad = self.phi.gradient(shifted)
        lap = self.phi.laplacian(shifted)
        return phase * (lap + 2j * (grad @ self.a) - (self.a @ self.a) * val)

    def norm_sq(self):
        return self.phi.norm_sq()


@compute_moments.register
def _(state: LiftedState) -> GlobalMoments:
    m = compute_moments(state.phi)
    return GlobalMoments(
        m.n, m.r + m.n * state.b, m.p + m.n * state.a, m.u, m.t_kin, m.w, state.time
    )


def lift(phi0: HermiteGaussianState, cfg: TrapConfig, t, tol=F_TOL) -> LiftedState:
    """Solution of the harmonic-force NLSE at time ``t`` with initial value ``phi0``."""
    if not np.allclose(phi0.widths, cfg.omega, rtol=1e-12, atol=0.0):
        raise InvalidArgumentError(
            f"phi0 widths {phi0.widths.tolist()} must equal the modified frequencies {cfg.omega.tolist()}"
        )
    norm = phi0.norm_sq()
    if not math.isclose(norm, cfg.norm, rel_tol=1e-8):
        raise InvalidArgumentError(f"norm of phi0 ({norm:.12g}) differs from cfg.norm ({cfg.norm:.12g})")
    fns = LiftFunctions(compute_moments(phi0), cfg)
    t = float(t)
    return LiftedState(
        phi=evolve_linear(phi0, cfg.omega, t),
        lift=fns,
        time=t,
        a=fns.a(t),
        b=fns.b(t),
        f=fns.f(t, tol),
    )


def lifted_residual(ls: LiftedState, points):
    """Max |i d/dt psi - RHS| of the moment-reduced NLSE at ``points``.

    Time derivatives come from the eigenphase rule for phi, the differentiated
    closed forms for a and b, and the ODE right-hand side for f; spatial
    derivatives from the Hermite ladder relations.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    fns, cfg, t = ls.lift, ls.lift.cfg, ls.time
    phi = ls.phi
    om2 = cfg.omega**2
    shifted = pts - ls.b

    val = phi.evaluate(shifted)
    grad = phi.gradient(shifted)
    lap = phi._evaluate_coeffs(ladder_laplacian(phi.coeffs, phi.widths), shifted)
    i_phi_t = phi._evaluate_coeffs(phi.coeffs * eigen_energies(phi.coeffs.shape, cfg.omega), shifted)

    a = ls.a
    db_dt = fns.a(t)
    da_dt = fns.da_dt(t)
    df_dt = fns.f_rate(t)
    lhs = (-df_dt - pts @ da_dt) * val + i_phi_t - 1j * (grad @ db_dt)

    m = evolve_moments(fns.m0, cfg, t)
    mean_field = cfg.omega_sq_int * (m.u_total - pts @ m.r + m.r @ m.r / (2 * m.n))
    rhs = (
        -0.5 * (lap + 2j * (grad @ a) - (a @ a) * val)
        + 0.5 * (pts**2 @ om2) * val
        - mean_field * val
    )
    return float(np.max(np.abs(lhs - rhs)))


LIFT_COLUMNS = ("time", "a_x", "a_y", "a_z", "b_x", "b_y", "b_z", "f")


def lift_to_csv(fns: LiftFunctions, times, tol=F_TOL) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(LIFT_COLUMNS)
    for t in times:
        row = [t, *fns.a(t), *fns.b(t), fns.f(t, tol)]
        writer.writerow(f"{float(v):.17g}" for v in row)
    return buf.getvalue()
