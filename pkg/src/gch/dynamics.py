"""Right-hand-side formulations of the evolution and their residuals.

The equation u_t - u_txx = d_x(2 + d_x)[(2 - d_x)u]^2 admits several
algebraically equivalent nonlocal rewritings once (1 - d_xx)^{-1} is
expressed through the kernel G.  With G* denoting that inverse and
G_x* = d_x G* the available forms are

    PRIMITIVE  u_t = G*[(2 d_x + d_xx)(2u - u_x)^2]
    FORM_A     u_t = 4 u u_x + G*[d_x(2 u_x^2 + 6 u^2) + d_xx(u_x^2)]
    FORM_B     u_t = 4 u u_x - u_x^2 + G*[d_x(2 u_x^2 + 6 u^2) + u_x^2]
    MOMENTUM   m = u - u_xx evolved via
               m_t = 2m^2 + (8u_x - 4u)m + (4u - 2u_x)m_x + 2(u + u_x)^2,
               then u_t = G* m_t
    SQRT3      u_t = 4 u u_x - u_x^2 + sqrt3 u^2 - G*[u_x^2 - sqrt3 u^2]
                     + G_x*[(sqrt2 u_x + sqrt6 u)^2]

The first four agree to roundoff (FORM_A <-> FORM_B via the identity
G*d_xx f = G*f - f).  SQRT3 does not reduce to the others: expanding the
square and applying the same identity leaves the field

    -sqrt3 u^2 + 3 sqrt3 G*u^2 - 2 G*u_x^2,

so it is kept as a diagnostic only and never offered for simulation.

All quadratic products are dealiased with the 2/3 rule: inputs and output
are truncated to |mode| < n/3, which makes products of truncated fields
exact truncations of the true products and preserves the algebraic
equivalences on the grid.
"""

from __future__ import annotations

import enum

import numpy as np

from .grid import Field, Grid, derivative, lp_norm
from .helmholtz import helmholtz_forward, helmholtz_inverse

__all__ = [
    "RhsForm",
    "SIMULATION_FORMS",
    "rhs",
    "form_residual",
    "momentum_rhs",
    "momentum_from_velocity",
    "velocity_from_momentum",
    "sqrt3_residual_field",
]

_SQRT2 = np.sqrt(2.0)
_SQRT3 = np.sqrt(3.0)
_SQRT6 = np.sqrt(6.0)


class RhsForm(enum.Enum):
    PRIMITIVE = "primitive"
    FORM_A = "form_a"
    FORM_B = "form_b"
    MOMENTUM = "momentum"
    SQRT3 = "sqrt3"


#: Forms accepted by the time integrator; SQRT3 is diagnostic-only.
SIMULATION_FORMS = (RhsForm.PRIMITIVE, RhsForm.FORM_A, RhsForm.FORM_B, RhsForm.MOMENTUM)

_MASK_CACHE: dict = {}


def _dealias_mask(grid: Grid):
    mask = _MASK_CACHE.get(grid)
    if mask is None:
        modes = np.arange(grid.n // 2 + 1)
        mask = modes < grid.n / 3.0
        _MASK_CACHE[grid] = mask
    return mask


def _lowpass(vals, grid: Grid):
    spec = np.fft.rfft(vals)
    spec[~_dealias_mask(grid)] = 0.0
    return np.fft.irfft(spec, n=grid.n)


class _Work:
    """Array-level helpers bound to one grid, with per-term finiteness checks."""

    def __init__(self, grid: Grid, dealias: bool):
        self.grid = grid
        self.dealias = dealias

    def prod(self, a, b, name):
        # overflow surfaces as the named non-finite error, not as a warning
        with np.errstate(over="ignore", invalid="ignore"):
            if self.dealias:
                out = _lowpass(_lowpass(a, self.grid) * _lowpass(b, self.grid), self.grid)
            else:
                out = a * b
        return self.check(out, name)

    def dx(self, vals, order=1):
        spec = np.fft.rfft(vals) * (1j * self.grid.k_rfft) ** order
        if order % 2 == 1:
            spec[-1] = 0.0
        return np.fft.irfft(spec, n=self.grid.n)

    def ginv(self, vals):
        spec = np.fft.rfft(vals) / (1.0 + self.grid.k_rfft**2)
        return np.fft.irfft(spec, n=self.grid.n)

    def gx(self, vals):
        spec = np.fft.rfft(vals) * (1j * self.grid.k_rfft) / (1.0 + self.grid.k_rfft**2)
        spec[-1] = 0.0
        return np.fft.irfft(spec, n=self.grid.n)

    @staticmethod
    def check(vals, name):
        if not np.all(np.isfinite(vals)):
            raise FloatingPointError(f"non-finite value in term '{name}'")
        return vals


def rhs(u: Field, form: RhsForm, dealias: bool = True) -> Field:
    """Evaluate the time derivative of u for the selected formulation."""
    form = RhsForm(form)
    grid = u.grid
    w = _Work(grid, dealias)
    v = w.check(u.values, "u")
    ux = w.check(w.dx(v), "u_x")

    if form is RhsForm.PRIMITIVE:
        sq = w.prod(2.0 * v - ux, 2.0 * v - ux, "(2u-u_x)^2")
        out = w.ginv(2.0 * w.dx(sq) + w.dx(sq, 2))
    elif form is RhsForm.FORM_A:
        uux = w.prod(v, ux, "u*u_x")
        ux2 = w.prod(ux, ux, "u_x^2")
        u2 = w.prod(v, v, "u^2")
        out = 4.0 * uux + w.ginv(w.dx(2.0 * ux2 + 6.0 * u2) + w.dx(ux2, 2))
    elif form is RhsForm.FORM_B:
        uux = w.prod(v, ux, "u*u_x")
        ux2 = w.prod(ux, ux, "u_x^2")
        u2 = w.prod(v, v, "u^2")
        out = 4.0 * uux - ux2 + w.ginv(w.dx(2.0 * ux2 + 6.0 * u2) + ux2)
    elif form is RhsForm.MOMENTUM:
        m = w.check(helmholtz_forward(u).values, "m")
        mx = w.check(w.dx(m), "m_x")
        mt = (
            2.0 * w.prod(m, m, "m^2")
            + 8.0 * w.prod(ux, m, "u_x*m")
            - 4.0 * w.prod(v, m, "u*m")
            + 4.0 * w.prod(v, mx, "u*m_x")
            - 2.0 * w.prod(ux, mx, "u_x*m_x")
            + 2.0 * w.prod(v + ux, v + ux, "(u+u_x)^2")
        )
        out = w.ginv(w.check(mt, "m_t"))
    elif form is RhsForm.SQRT3:
        uux = w.prod(v, ux, "u*u_x")
        ux2 = w.prod(ux, ux, "u_x^2")
        u2 = w.prod(v, v, "u^2")
        q = _SQRT2 * ux + _SQRT6 * v
        q2 = w.prod(q, q, "(sqrt2*u_x+sqrt6*u)^2")
        out = (
            4.0 * uux
            - ux2
            + _SQRT3 * u2
            - w.ginv(ux2 - _SQRT3 * u2)
            + w.gx(q2)
        )
    else:  # pragma: no cover - exhaustive enum
        raise ValueError(f"unknown form {form}")

    return Field(grid, w.check(out, f"rhs[{form.value}]"))


def form_residual(u: Field, f1: RhsForm, f2: RhsForm, dealias: bool = True) -> float:
    """Sup-norm distance between two formulations evaluated on the same field."""
    return lp_norm(rhs(u, f1, dealias) - rhs(u, f2, dealias), np.inf)


def momentum_rhs(m: Field, dealias: bool = True) -> Field:
    """Time derivative of the momentum density m = u - u_xx.

    Self-contained in m: the velocity is recovered as u = G*m and m_x is
    differentiated spectrally from m itself.
    """
    grid = m.grid
    w = _Work(grid, dealias)
    mv = w.check(m.values, "m")
    uv = w.check(helmholtz_inverse(m).values, "u")
    ux = w.check(w.dx(uv), "u_x")
    mx = w.check(w.dx(mv), "m_x")
    mt = (
        2.0 * w.prod(mv, mv, "m^2")
        + 8.0 * w.prod(ux, mv, "u_x*m")
        - 4.0 * w.prod(uv, mv, "u*m")
        + 4.0 * w.prod(uv, mx, "u*m_x")
        - 2.0 * w.prod(ux, mx, "u_x*m_x")
        + 2.0 * w.prod(uv + ux, uv + ux, "(u+u_x)^2")
    )
    return Field(grid, w.check(mt, "m_t"))


def momentum_from_velocity(u: Field) -> Field:
    """m = u - u_xx via the forward Helmholtz multiplier."""
    return helmholtz_forward(u)


def velocity_from_momentum(m: Field) -> Field:
    """u = G*m via the inverse Helmholtz multiplier."""
    return helmholtz_inverse(m)


def sqrt3_residual_field(u: Field, convolve=None) -> Field:
    """The field by which the SQRT3 rewriting misses FORM_B.

    Expanding (sqrt2 u_x + sqrt6 u)^2 and applying G*d_xx f = G*f - f gives

        rhs(SQRT3) - rhs(FORM_B) = -sqrt3 u^2 + 3 sqrt3 G*u^2 - 2 G*u_x^2.

    ``convolve`` selects the realization of G* (defaults to the spectral
    multiplier; pass ``green_convolve_direct`` for the quadrature oracle).
    Products here are plain pointwise squares, independent of dealiasing.
    """
    if convolve is None:
        convolve = helmholtz_inverse
    u2 = Field(u.grid, u.values**2)
    ux = derivative(u, 1)
    ux2 = Field(u.grid, ux.values**2)
    return _SQRT3 * (3.0 * convolve(u2) - u2) - 2.0 * convolve(ux2)
