"""Riemann-Liouville fractional integrals and derivatives on uniform grids.

The default derivative scheme is L1 product integration: the samples are
interpreted as a piecewise-linear interpolant, the weakly singular kernel is
integrated exactly against it, and the outer classical derivative is carried
out in closed form.  The scheme is linear in the samples and converges with
empirical order 2 - alpha for smooth data.  A shifted Grunwald-Letnikov
scheme is available as an independent cross-check.

Left derivatives are undefined (singular) at the first node, right
derivatives at the last one; those entries are returned as NaN markers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gammafn import GammaPoleError, gamma, reciprocal_gamma
from .grids import FracOrder, Grid, SampledFunction

__all__ = [
    "UnsupportedOrderError",
    "Constant",
    "PowerShifted",
    "left_rl_integral",
    "right_rl_integral",
    "left_rl_derivative",
    "right_rl_derivative",
    "closed_form_left_derivative",
    "left_derivative_matrix",
]


class UnsupportedOrderError(ValueError):
    """Raised for derivative orders outside (0, 1]."""


# --------------------------------------------------------------------------
# closed-form atoms
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Constant:
    """The constant function f(t) = c on [a, b]."""

    c: float
    a: float = 0.0


@dataclass(frozen=True)
class PowerShifted:
    """f(t) = coefficient * (t - a)**exponent, exponent > -1."""

    coefficient: float
    exponent: float
    a: float = 0.0

    def __post_init__(self) -> None:
        if self.exponent <= -1.0:
            raise ValueError(f"power atom needs exponent > -1, got {self.exponent}")


def closed_form_left_derivative(
    atom: Constant | PowerShifted, order: FracOrder, t: float
) -> float:
    """Exact left RL derivative of a constant or shifted-power atom at t."""
    alpha = order.alpha
    if isinstance(atom, Constant):
        if t <= atom.a:
            raise ValueError(f"need t > a = {atom.a} for the constant rule")
        return atom.c * reciprocal_gamma(1.0 - alpha) * (t - atom.a) ** (-alpha)
    ups = atom.exponent
    tail = ups - alpha
    if _is_nonpositive_integer(tail + 1.0):
        raise GammaPoleError(
            f"degenerate pairing: exponent {ups} minus order {alpha} hits a gamma pole"
        )
    if t < atom.a or (t == atom.a and tail < 0.0):
        raise ValueError(f"atom derivative undefined at t = {t} (base point {atom.a})")
    base = (t - atom.a) ** tail if t > atom.a else (1.0 if tail == 0.0 else 0.0)
    return atom.coefficient * gamma(ups + 1.0) / gamma(tail + 1.0) * base


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


# --------------------------------------------------------------------------
# fractional integrals (product trapezoid, exact for piecewise-linear data)
# --------------------------------------------------------------------------

def _pl_integral_1d(f: np.ndarray, h: float, alpha: float) -> np.ndarray:
    """Left RL integral of the piecewise-linear interpolant, all nodes."""
    m = f.size - 1
    r = np.arange(m, dtype=float)
    # Kernel moments over one interval at history distance r*h:
    #   m0_r = int_{rh}^{(r+1)h} u^(alpha-1) du
    #   m1_r = int u^(alpha-1) (u1 - u) du   with u1 = (r+1)h
    m0 = h**alpha * ((r + 1.0) ** alpha - r**alpha) / alpha
    m1 = h ** (alpha + 1.0) * (
        (r + 1.0) * ((r + 1.0) ** alpha - r**alpha) / alpha
        - ((r + 1.0) ** (alpha + 1.0) - r ** (alpha + 1.0)) / (alpha + 1.0)
    )
    d = np.diff(f) / h
    left_vals = f[:-1]
    out = np.zeros(m + 1)
    conv0 = np.convolve(left_vals, m0)[:m]
    conv1 = np.convolve(d, m1)[:m]
    out[1:] = (conv0 + conv1) / gamma(alpha)
    return out


def left_rl_integral(f: SampledFunction, order: FracOrder) -> SampledFunction:
    """Node-wise left RL integral of order alpha > 0; zero at the left end."""
    vals = np.column_stack(
        [_pl_integral_1d(f.component(i), f.grid.h, order.alpha) for i in range(f.dim)]
    )
    return SampledFunction(f.grid, vals)


def right_rl_integral(f: SampledFunction, order: FracOrder) -> SampledFunction:
    """Mirror image of left_rl_integral; zero at the right end."""
    vals = np.column_stack(
        [
            _pl_integral_1d(f.component(i)[::-1], f.grid.h, order.alpha)[::-1]
            for i in range(f.dim)
        ]
    )
    return SampledFunction(f.grid, vals)


# --------------------------------------------------------------------------
# fractional derivatives
# --------------------------------------------------------------------------

def _l1_left_1d(f: np.ndarray, h: float, alpha: float) -> np.ndarray:
    """L1 left RL derivative of the piecewise-linear interpolant.

    Splits off the boundary term f(a) (t-a)^(-alpha) / Gamma(1-alpha), then
    integrates the kernel exactly against the interpolant's slope.  NaN at
    the first node.
    """
    m = f.size - 1
    out = np.empty(m + 1)
    out[0] = np.nan
    j = np.arange(1, m + 1, dtype=float)
    out[1:] = f[0] * reciprocal_gamma(1.0 - alpha) * (j * h) ** (-alpha)
    r = np.arange(m, dtype=float)
    b = (r + 1.0) ** (1.0 - alpha) - r ** (1.0 - alpha)
    d = np.diff(f)
    out[1:] += (h ** (-alpha) / gamma(2.0 - alpha)) * np.convolve(d, b)[:m]
    return out


def _gl_left_1d(f: np.ndarray, h: float, alpha: float) -> np.ndarray:
    """Shifted Grunwald-Letnikov left derivative; independent cross-check."""
    m = f.size - 1
    w = np.empty(m + 1)
    w[0] = 1.0
    for k in range(1, m + 1):
        w[k] = w[k - 1] * (1.0 - (alpha + 1.0) / k)
    out = np.empty(m + 1)
    out[0] = np.nan
    conv = np.convolve(w, f)[: m + 1]
    out[1:] = h ** (-alpha) * conv[1:]
    return out


def _classical_derivative_1d(f: np.ndarray, h: float) -> np.ndarray:
    """Second-order central differences, one-sided at the endpoints."""
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - f[:-2]) / (2.0 * h)
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
    out[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * h)
    return out


def _check_derivative_order(order: FracOrder) -> None:
    if order.alpha > 1.0:
        raise UnsupportedOrderError(
            f"derivative orders above 1 are unsupported, got alpha = {order.alpha}"
        )


def left_rl_derivative(
    f: SampledFunction, order: FracOrder, scheme: str = "l1"
) -> SampledFunction:
    """Left RL derivative for 0 < alpha <= 1 (alpha = 1: classical fallback)."""
    _check_derivative_order(order)
    h = f.grid.h
    if order.is_classical:
        cols = [_classical_derivative_1d(f.component(i), h) for i in range(f.dim)]
    elif scheme == "l1":
        cols = [_l1_left_1d(f.component(i), h, order.alpha) for i in range(f.dim)]
    elif scheme == "gl":
        cols = [_gl_left_1d(f.component(i), h, order.alpha) for i in range(f.dim)]
    else:
        raise ValueError(f"unknown scheme {scheme!r}; expected 'l1' or 'gl'")
    return SampledFunction(f.grid, np.column_stack(cols))


def right_rl_derivative(
    f: SampledFunction, order: FracOrder, scheme: str = "l1"
) -> SampledFunction:
    """Right RL derivative: the left operator conjugated by t -> a + b - t."""
    _check_derivative_order(order)
    if order.is_classical:
        vals = np.column_stack(
            [-_classical_derivative_1d(f.component(i), f.grid.h) for i in range(f.dim)]
        )
        return SampledFunction(f.grid, vals)
    reflected = SampledFunction(f.grid, f.values[::-1])
    d = left_rl_derivative(reflected, order, scheme=scheme)
    return SampledFunction(f.grid, d.values[::-1])


def left_derivative_matrix(
    grid: Grid, order: FracOrder, boundary: str = "nan"
) -> np.ndarray:
    """Dense (m+1) x (m+1) matrix A with (A f)_j the left derivative at t_j.

    boundary='nan' leaves the singular first row NaN; 'extrapolate' replaces
    it by the linear extrapolation 2*row_1 - row_2, which is what the solver
    and the quadrature layers use.
    """
    _check_derivative_order(order)
    m, h = grid.m, grid.h
    A = np.zeros((m + 1, m + 1))
    if order.is_classical:
        i = np.arange(1, m)
        A[i, i - 1] = -1.0 / (2.0 * h)
        A[i, i + 1] = 1.0 / (2.0 * h)
        A[0, :3] = np.array([-3.0, 4.0, -1.0]) / (2.0 * h)
        A[m, m - 2 :] = np.array([1.0, -4.0, 3.0]) / (2.0 * h)
        return A
    alpha = order.alpha
    r = np.arange(m, dtype=float)
    b = (r + 1.0) ** (1.0 - alpha) - r ** (1.0 - alpha)
    c = h ** (-alpha) / gamma(2.0 - alpha)
    for j in range(1, m + 1):
        A[j, 0] = reciprocal_gamma(1.0 - alpha) * (j * h) ** (-alpha) - c * b[j - 1]
        if j >= 2:
            A[j, 1:j] = c * (b[j - 1 : 0 : -1] - b[j - 2 :: -1])
        A[j, j] = c * b[0]
    if boundary == "extrapolate":
        A[0] = 2.0 * A[1] - A[2]
    elif boundary == "nan":
        A[0] = np.nan
    else:
        raise ValueError(f"unknown boundary mode {boundary!r}")
    return A
