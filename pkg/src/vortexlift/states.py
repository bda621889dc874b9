"""Polynomial x Gaussian wavefunctions in the Hermite eigenbasis of a harmonic trap.

A state is stored as a dense complex array ``coeffs[nx, ny, nz]`` over the
(unnormalised) basis functions

    H_nx(sqrt(wx) x) H_ny(sqrt(wy) y) H_nz(sqrt(wz) z) exp(-(wx x^2 + wy y^2 + wz z^2) / 2)

with physicists' Hermite polynomials.  Derivatives and multiplication by a
coordinate act tridiagonally on the indices, so moments, gradients and
Laplacians are exact up to roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import InvalidArgumentError
from .trap import _vec3

MAX_DEGREE = 16


# ---------------------------------------------------------------------------
# one-dimensional Hermite machinery
# ---------------------------------------------------------------------------


def hermite_table(u, degree):
    """H_0(u) ... H_degree(u) stacked along a new leading axis."""
    u = np.asarray(u, dtype=float)
    out = np.empty((degree + 1,) + u.shape)
    out[0] = 1.0
    if degree >= 1:
        out[1] = 2.0 * u
    for n in range(1, degree):
        out[n + 1] = 2.0 * u * out[n] - 2.0 * n * out[n - 1]
    return out


def basis_norms_1d(degree, width):
    """Integral of (H_n(sqrt(w) x) exp(-w x^2/2))^2 dx for n = 0..degree."""
    n = np.arange(degree + 1)
    fact = np.array([math.factorial(k) for k in n], dtype=float)
    return 2.0**n * fact * math.sqrt(math.pi / width)


def monomial_to_hermite_matrix(degree, width):
    """M with x^k = sum_j M[k, j] H_j(sqrt(width) x)."""
    m = np.zeros((degree + 1, degree + 1))
    for k in range(degree + 1):
        scale = width ** (-k / 2.0) * math.factorial(k) / 2.0**k
        for j in range(k // 2 + 1):
            m[k, k - 2 * j] = scale / (math.factorial(j) * math.factorial(k - 2 * j))
    return m


def hermite_to_monomial_matrix(degree, width):
    """Inverse of :func:`monomial_to_hermite_matrix`: H_j(sqrt(w) x) = sum_k M[j, k] x^k."""
    h = np.zeros((degree + 1, degree + 1))
    h[0, 0] = 1.0
    if degree >= 1:
        h[1, 1] = 2.0
    for n in range(1, degree):
        h[n + 1, 1:] = 2.0 * h[n, :-1]
        h[n + 1] -= 2.0 * n * h[n - 1]
    powers = np.sqrt(width) ** np.arange(degree + 1)
    return h * powers[None, :]


def _transform(array, matrices):
    return np.einsum("klm,ka,lb,mc->abc", array, *matrices, optimize=True)


def _as_dense(poly: Mapping, max_degree=MAX_DEGREE):
    if not poly:
        return np.zeros((1, 1, 1), dtype=complex)
    idx = np.array(list(poly.keys()), dtype=int).reshape(-1, 3)
    if np.any(idx < 0):
        raise InvalidArgumentError("exponents must be non-negative")
    top = idx.max(axis=0)
    if np.any(top > max_degree):
        raise InvalidArgumentError(f"degree {top.max()} exceeds the maximum {max_degree}")
    dense = np.zeros(tuple(top + 1), dtype=complex)
    for key, value in poly.items():
        dense[tuple(key)] += complex(value)
    return dense


def _as_sparse(dense, tol=0.0):
    return {
        tuple(int(i) for i in key): complex(dense[key])
        for key in zip(*np.nonzero(np.abs(dense) > tol))
    }


def monomials_to_hermite(poly, widths, max_degree=MAX_DEGREE):
    """Exact change of basis from monomials x^k y^l z^m to scaled Hermite products.

    ``poly`` maps exponent triples to complex coefficients; returns a mapping
    from Hermite multi-indices to coefficients (exact zeros dropped).
    """
    widths = _vec3(widths, "widths")
    dense = _as_dense(poly, max_degree)
    mats = [monomial_to_hermite_matrix(d - 1, w) for d, w in zip(dense.shape, widths)]
    return _as_sparse(_transform(dense, mats))


def hermite_to_monomials(coeffs, widths, max_degree=MAX_DEGREE):
    """Inverse of :func:`monomials_to_hermite`."""
    widths = _vec3(widths, "widths")
    dense = _as_dense(coeffs, max_degree)
    mats = [hermite_to_monomial_matrix(d - 1, w) for d, w in zip(dense.shape, widths)]
    return _as_sparse(_transform(dense, mats))


# ---------------------------------------------------------------------------
# ladder operators on dense coefficient arrays
# ---------------------------------------------------------------------------


def _pad_axis(c, axis, extra=1):
    pad = [(0, 0)] * 3
    pad[axis] = (0, extra)
    return np.pad(c, pad)


def ladder_derivative(c, widths, axis):
    """Coefficients of d/dx_axis applied to the state (array grows by one)."""
    c = _pad_axis(c, axis)
    c = np.moveaxis(c, axis, 0)
    out = np.zeros_like(c)
    m = np.arange(c.shape[0] - 1).reshape((-1, 1, 1))
    out[:-1] += (m + 1) * c[1:]
    out[1:] -= 0.5 * c[:-1]
    return np.moveaxis(out, 0, axis) * math.sqrt(widths[axis])


def ladder_position(c, widths, axis):
    """Coefficients of x_axis times the state (array grows by one)."""
    c = _pad_axis(c, axis)
    c = np.moveaxis(c, axis, 0)
    out = np.zeros_like(c)
    m = np.arange(c.shape[0] - 1).reshape((-1, 1, 1))
    out[:-1] += (m + 1) * c[1:]
    out[1:] += 0.5 * c[:-1]
    return np.moveaxis(out, 0, axis) / math.sqrt(widths[axis])


def _common_shape(*arrays):
    shape = np.max([a.shape for a in arrays], axis=0)
    return [np.pad(a, [(0, s - d) for s, d in zip(shape, a.shape)]) for a in arrays]


def ladder_laplacian(c, widths):
    parts = [ladder_derivative(ladder_derivative(c, widths, ax), widths, ax) for ax in range(3)]
    return sum(_common_shape(*parts))


def basis_norms(shape, widths):
    hx, hy, hz = (basis_norms_1d(n - 1, w) for n, w in zip(shape, widths))
    return hx[:, None, None] * hy[None, :, None] * hz[None, None, :]


def inner(c1, c2, widths):
    """<phi1, phi2> for two coefficient arrays on the same Gaussian."""
    c1, c2 = _common_shape(c1, c2)
    return complex(np.sum(np.conj(c1) * c2 * basis_norms(c1.shape, widths)))


# ---------------------------------------------------------------------------
# the state type
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HermiteGaussianState:
    """Finite Hermite expansion on top of exp(-sum_j w_j x_j^2 / 2)."""

    widths: np.ndarray
    coeffs: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        widths = _vec3(self.widths, "widths")
        if np.any(widths <= 0):
            raise InvalidArgumentError("Gaussian widths must be positive")
        coeffs = np.array(self.coeffs, dtype=complex, order="C")
        if coeffs.ndim != 3:
            raise InvalidArgumentError("coefficient array must be three-dimensional")
        if not np.all(np.isfinite(coeffs)):
            raise InvalidArgumentError("coefficients must be finite")
        widths.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "widths", widths)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "time", float(self.time))

    @classmethod
    def from_terms(cls, terms, widths, time=0.0):
        return cls(widths, _as_dense(terms, max_degree=MAX_DEGREE + 2), time)

    def terms(self):
        """Nonzero coefficients as ``{(nx, ny, nz): complex}``."""
        return _as_sparse(self.coeffs)

    @property
    def degree(self):
        return tuple(int(s) - 1 for s in self.coeffs.shape)

    def replace(self, **changes):
        fields = {"widths": self.widths, "coeffs": self.coeffs, "time": self.time}
        fields.update(changes)
        return HermiteGaussianState(**fields)

    def scaled(self, factor):
        return self.replace(coeffs=self.coeffs * factor)

    def __add__(self, other):
        if not np.array_equal(self.widths, other.widths):
            raise InvalidArgumentError("cannot add states on different Gaussians")
        a, b = _common_shape(self.coeffs, other.coeffs)
        return self.replace(coeffs=a + b)

    def norm_sq(self):
        return norm_sq(self)

    def with_norm(self, norm):
        """Rescale so that the integral of |phi|^2 equals ``norm``."""
        current = self.norm_sq()
        if current == 0.0:
            raise InvalidArgumentError("cannot normalise the zero state")
        return self.scaled(math.sqrt(norm / current))

    # -- pointwise evaluation ------------------------------------------------

    def _evaluate_coeffs(self, coeffs, points):
        pts = np.asarray(points, dtype=float)
        flat = pts.reshape(-1, 3)
        tables = [
            hermite_table(np.sqrt(w) * flat[:, j], n - 1)
            for j, (n, w) in enumerate(zip(coeffs.shape, self.widths))
        ]
        poly = np.einsum("abc,am,bm,cm->m", coeffs, *tables, optimize=True)
        gauss = np.exp(-0.5 * (flat**2 @ self.widths))
        return (poly * gauss).reshape(pts.shape[:-1])

    def evaluate(self, points):
        """Field value at ``points`` (array of shape (..., 3))."""
        return self._evaluate_coeffs(self.coeffs, points)

    __call__ = evaluate

    def gradient(self, points):
        """Complex gradient, shape (..., 3)."""
        return np.stack(
            [
                self._evaluate_coeffs(ladder_derivative(self.coeffs, self.widths, ax), points)
                for ax in range(3)
            ],
            axis=-1,
        )

    def laplacian(self, points):
        return self._evaluate_coeffs(ladder_laplacian(self.coeffs, self.widths), points)

    def evaluate_grid(self, xs, ys, zs):
        """Field on the tensor grid xs x ys x zs, array indexed [ix, iy, iz]."""
        tables = []
        for axis_pts, n, w in zip((xs, ys, zs), self.coeffs.shape, self.widths):
            axis_pts = np.asarray(axis_pts, dtype=float)
            tables.append(hermite_table(np.sqrt(w) * axis_pts, n - 1) * np.exp(-0.5 * w * axis_pts**2))
        return np.einsum("abc,ai,bj,ck->ijk", self.coeffs, *tables, optimize=True)


def evaluate(s, r):
    return s.evaluate(r)


def norm_sq(s):
    """Closed-form integral of |phi|^2 from the coefficients."""
    weights = basis_norms(s.coeffs.shape, s.widths)
    return float(np.sum(np.abs(s.coeffs) ** 2 * weights))


def from_polynomial(poly, widths, norm=None, time=0.0):
    """State (polynomial in x, y, z) * Gaussian; optionally rescaled to ``norm``."""
    widths = _vec3(widths, "widths")
    if np.any(widths <= 0):
        raise InvalidArgumentError("Gaussian widths must be positive")
    dense = _as_dense(poly)
    mats = [monomial_to_hermite_matrix(d - 1, w) for d, w in zip(dense.shape, widths)]
    state = HermiteGaussianState(widths, _transform(dense, mats), time)
    return state if norm is None else state.with_norm(norm)


def poly_mul(p, q):
    """Product of two polynomials given as ``{(k, l, m): coeff}`` mappings."""
    out = {}
    for (k1, l1, m1), a in p.items():
        for (k2, l2, m2), b in q.items():
            key = (k1 + k2, l1 + l2, m1 + m2)
            out[key] = out.get(key, 0.0) + a * b
    return out


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VortexParams:
    """Straight vortex along z, displaced by ``a_disp`` along x at t = 0."""

    a_disp: float


@dataclass(frozen=True)
class TwoLineParams:
    """Two perpendicular vortex lines at z = +d/2 (along y) and z = -d/2 (along x)."""

    d: float
    L: float
    n_atoms: float = 1.0


def make_ground_state(widths, norm=1.0):
    widths = _vec3(widths, "widths")
    if np.any(widths <= 0):
        raise InvalidArgumentError("Gaussian widths must be positive")
    return from_polynomial({(0, 0, 0): 1.0}, widths, norm=norm)


def make_single_vortex(p: VortexParams, widths, norm=1.0):
    """N0 (x - a + i y) Gaussian, with N0 fixed by the closed-form norm."""
    poly = {(1, 0, 0): 1.0, (0, 0, 0): -float(p.a_disp), (0, 1, 0): 1j}
    return from_polynomial(poly, widths, norm=norm)


def two_line_polynomial(d):
    """(x + i(z - d/2)) (y + i(z + d/2)) as a monomial mapping."""
    first = {(1, 0, 0): 1.0, (0, 0, 1): 1j, (0, 0, 0): -0.5j * d}
    second = {(0, 1, 0): 1.0, (0, 0, 1): 1j, (0, 0, 0): 0.5j * d}
    return poly_mul(first, second)


def two_line_widths(L):
    """Gaussian widths of the two-line state: exp(-r^2 / (2 L^2)), i.e. w = 1/L^2."""
    return np.full(3, 1.0 / L**2)


def two_line_amplitude(p: TwoLineParams):
    """Closed-form amplitude sqrt(N) pi^(-3/4) L^(-7/2) (3/2 + d^4/(16 L^4))^(-1/2)."""
    return (
        math.sqrt(p.n_atoms)
        * math.pi**-0.75
        * p.L**-3.5
        / math.sqrt(1.5 + p.d**4 / (16.0 * p.L**4))
    )


def make_two_perpendicular_vortices(p: TwoLineParams):
    """A (x + i(z - d/2)) (y + i(z + d/2)) exp(-r^2 / (2 L^2)), normalised to n_atoms."""
    if p.d < 0 or not p.L > 0 or not p.n_atoms > 0:
        raise InvalidArgumentError("need d >= 0, L > 0 and n_atoms > 0")
    return from_polynomial(two_line_polynomial(p.d), two_line_widths(p.L), norm=p.n_atoms)


# ---------------------------------------------------------------------------
# text serialisation
# ---------------------------------------------------------------------------


def dumps_state(s: HermiteGaussianState) -> str:
    lines = [
        "# vortexlift HermiteGaussianState",
        "widths = " + " ".join(f"{w:.17g}" for w in s.widths),
        f"time = {s.time:.17g}",
    ]
    for (nx, ny, nz), c in sorted(s.terms().items()):
        lines.append(f"coeff = {nx} {ny} {nz} {c.real:.17g} {c.imag:.17g}")
    return "\n".join(lines) + "\n"


def loads_state(text: str) -> HermiteGaussianState:
    widths = None
    time = 0.0
    terms = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InvalidArgumentError(f"line {lineno}: expected 'key = value'")
        key, fields = key.strip(), value.split()
        if key == "widths":
            widths = [float(v) for v in fields]
        elif key == "time":
            time = float(fields[0])
        elif key == "coeff":
            nx, ny, nz = (int(v) for v in fields[:3])
            terms[(nx, ny, nz)] = complex(float(fields[3]), float(fields[4]))
        else:
            raise InvalidArgumentError(f"line {lineno}: unknown key {key!r}")
    if widths is None:
        raise InvalidArgumentError("missing 'widths'")
    return HermiteGaussianState.from_terms(terms, widths, time)
