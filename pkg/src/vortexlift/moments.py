"""Global moments N, R, P, U, T, W and their closed-form evolution.

U, T and W are the diagonal second moments with the centre-of-mass part
subtracted, e.g. U_xx = 1/2 int x^2 |psi|^2 - R_x^2 / (2N); they are therefore
translation invariant and unchanged by a plane-wave phase factor.
"""

from __future__ import annotations

import csv
import functools
import io
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .states import HermiteGaussianState, inner, ladder_derivative, ladder_position
from .trap import TrapConfig


@dataclass(frozen=True, eq=False)
class GlobalMoments:
    n: float
    r: np.ndarray
    p: np.ndarray
    u: np.ndarray
    t_kin: np.ndarray
    w: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        for name in ("r", "p", "u", "t_kin", "w"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float).reshape(3))
        object.__setattr__(self, "n", float(self.n))
        object.__setattr__(self, "time", float(self.time))

    @property
    def u_total(self):
        return float(self.u.sum())

    def as_row(self):
        return np.concatenate(
            [[self.time, self.n], self.r, self.p, self.u, self.t_kin, self.w,
             [self.u.sum(), self.t_kin.sum(), self.w.sum()]]
        )

    def uncertainty_gap(self):
        """U_jj T_jj - W_jj^2 per axis; non-negative for any wavefunction."""
        return self.u * self.t_kin - self.w**2


MOMENT_COLUMNS = (
    "time", "n",
    "r_x", "r_y", "r_z",
    "p_x", "p_y", "p_z",
    "u_xx", "u_yy", "u_zz",
    "t_xx", "t_yy", "t_zz",
    "w_xx", "w_yy", "w_zz",
    "u_sum", "t_sum", "w_sum",
)


@functools.singledispatch
def compute_moments(state) -> GlobalMoments:
    """Global moments of a Hermite state, lifted state or grid state."""
    raise TypeError(f"no moment rule for {type(state).__name__}")


@compute_moments.register
def _(state: HermiteGaussianState) -> GlobalMoments:
    c, w = state.coeffs, state.widths
    n = inner(c, c, w).real
    if not n > 0:
        raise InvalidArgumentError("moments of a zero-norm state are undefined")
    r, p, u, t_kin, ww = (np.zeros(3) for _ in range(5))
    for ax in range(3):
        xc = ladder_position(c, w, ax)
        pc = -1j * ladder_derivative(c, w, ax)
        r[ax] = inner(c, xc, w).real
        p[ax] = inner(c, pc, w).real
        u[ax] = 0.5 * inner(xc, xc, w).real - r[ax] ** 2 / (2 * n)
        t_kin[ax] = 0.5 * inner(pc, pc, w).real - p[ax] ** 2 / (2 * n)
        ww[ax] = 0.5 * inner(xc, pc, w).real - r[ax] * p[ax] / (2 * n)
    return GlobalMoments(n, r, p, u, t_kin, ww, state.time)


def evolve_moments(m0: GlobalMoments, cfg: TrapConfig, t) -> GlobalMoments:
    """Closed-form solution of the moment equations after a time ``t``.

    R and P rotate at the trap frequencies; U, T, W at the modified ones.
    """
    wt = cfg.tilde_omega
    om = cfg.omega
    ct, st = np.cos(wt * t), np.sin(wt * t)
    r = m0.r * ct + m0.p * st / wt
    p = -m0.r * wt * st + m0.p * ct
    c, s = np.cos(om * t), np.sin(om * t)
    s2, c2 = np.sin(2 * om * t), np.cos(2 * om * t)
    u = m0.u * c**2 + m0.t_kin * s**2 / om**2 + m0.w * s2 / om
    t_kin = m0.u * om**2 * s**2 + m0.t_kin * c**2 - m0.w * om * s2
    w = -m0.u * om * s2 / 2 + m0.t_kin * s2 / (2 * om) + m0.w * c2
    return GlobalMoments(m0.n, r, p, u, t_kin, w, m0.time + t)


def moment_ode_rhs(m: GlobalMoments, cfg: TrapConfig):
    """Right-hand sides of the linear moment equations, keyed like the residual."""
    wt2 = cfg.tilde_omega**2
    om2 = cfg.omega**2
    return {
        "n": np.zeros(1),
        "r": m.p,
        "p": -wt2 * m.r,
        "u": 2 * m.w,
        "t_kin": -2 * om2 * m.w,
        "w": m.t_kin - om2 * m.u,
    }


def moment_ode_residual(m_traj, cfg: TrapConfig):
    """Max |central-difference derivative - RHS| per equation along a sampled trajectory.

    Endpoints are excluded.  Returns a dict keyed by ``n, r, p, u, t_kin, w``.
    """
    traj = list(m_traj)
    if len(traj) < 5:
        raise InvalidArgumentError("need at least 5 samples for the moment ODE residual")
    times = np.array([m.time for m in traj])
    steps = np.diff(times)
    h = steps.mean()
    if not np.allclose(steps, h, rtol=1e-9, atol=1e-12 * abs(h)):
        raise InvalidArgumentError("trajectory must be uniformly sampled in time")

    def series(name):
        return np.array([np.atleast_1d(getattr(m, name)) for m in traj])

    out = {}
    for name in ("n", "r", "p", "u", "t_kin", "w"):
        values = series(name)
        deriv = (values[2:] - values[:-2]) / (2 * h)
        rhs = np.array([moment_ode_rhs(m, cfg)[name] for m in traj[1:-1]])
        out[name] = float(np.max(np.abs(deriv - rhs)))
    return out


def moments_to_csv(traj) -> str:
    """CSV text with the fixed header :data:`MOMENT_COLUMNS` (17 significant digits)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(MOMENT_COLUMNS)
    for m in traj:
        writer.writerow(f"{v:.17g}" for v in m.as_row())
    return buf.getvalue()
