"""Fractional isoperimetric optimal control: Pontryagin-side residuals.

This layer certifies or refutes candidate quadruples (q, u, p, lambda)
against the Hamiltonian system, the stationary condition, the
Hamiltonian-form Noether law, and the autonomous energy law.  It never
synthesizes controls.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import frac_kernels as fk
from .fields import PointField, VectorField
from .grids import FracOrder, Grid, SampledFunction, fill_endpoints
from .noether import SymmetryGenerator, frac_pair_operator
from .problems import DEFAULT_BAND, ResidualReport, make_report

__all__ = [
    "ControlProblem",
    "PontryaginExtremal",
    "ControlSymmetry",
    "hamiltonian_value",
    "pontryagin_residuals",
    "hamiltonian_noether_residual",
    "autonomous_energy_residual",
    "AutonomyError",
]


class AutonomyError(ValueError):
    """Raised when a problem required to be autonomous depends on t."""


@dataclass(frozen=True)
class ControlProblem:
    """Data of the fractional isoperimetric optimal control problem.

    lagrangian and constraints are fields of (t, q, u); dynamics maps
    (t, q, u) -> R^n and defines D^alpha q = phi(t, q, u).
    """

    order: FracOrder
    lagrangian: PointField
    dynamics: VectorField
    grid: Grid
    initial: np.ndarray
    control_dim: int = 1
    constraints: Sequence[PointField] = ()
    constraint_levels: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self) -> None:
        if self.order.alpha > 1.0:
            raise ValueError("control layer needs 0 < alpha <= 1")
        object.__setattr__(self, "initial", np.atleast_1d(np.asarray(self.initial, float)))
        object.__setattr__(self, "constraint_levels", np.atleast_1d(np.asarray(self.constraint_levels, float)))
        if len(self.constraints) != self.constraint_levels.size:
            raise ValueError("constraint/level count mismatch")

    @property
    def dim(self) -> int:
        return self.initial.size

    @property
    def k(self) -> int:
        return len(self.constraints)

    def check_multipliers(self, lam: np.ndarray) -> np.ndarray:
        lam = np.atleast_1d(np.asarray(lam, float))
        if lam.size != self.k:
            raise ValueError(f"expected {self.k} multipliers, got {lam.size}")
        return lam


@dataclass(frozen=True)
class PontryaginExtremal:
    """Candidate quadruple (state, control, costate, multipliers)."""

    q: SampledFunction
    u: SampledFunction
    p: SampledFunction
    lam: np.ndarray

    def __post_init__(self) -> None:
        if not (self.q.grid == self.u.grid == self.p.grid):
            raise ValueError("q, u, p must share one grid")
        if self.q.dim != self.p.dim:
            raise ValueError("state and costate dimensions disagree")
        object.__setattr__(self, "lam", np.atleast_1d(np.asarray(self.lam, float)))


@dataclass(frozen=True)
class ControlSymmetry:
    """Generators (tau, xi, rho, sigma) of a control-space transformation.

    Only tau and xi enter the Hamiltonian-form Noether law; rho and sigma
    describe the control/costate parts of the family.
    """

    tau: Callable[[float, np.ndarray], float]
    xi: Callable[[float, np.ndarray], np.ndarray]
    rho: Callable[[float, np.ndarray], np.ndarray] | None = None
    sigma: Callable[[float, np.ndarray], np.ndarray] | None = None

    def base(self) -> SymmetryGenerator:
        return SymmetryGenerator(tau=self.tau, xi=self.xi)


def hamiltonian_value(
    cp: ControlProblem,
    t: float,
    q: np.ndarray,
    u: np.ndarray,
    p: np.ndarray,
    lam: np.ndarray,
) -> float:
    """H = L - lambda . g + p . phi at one point."""
    lam = cp.check_multipliers(lam)
    q = np.atleast_1d(np.asarray(q, float))
    u = np.atleast_1d(np.asarray(u, float))
    p = np.atleast_1d(np.asarray(p, float))
    val = cp.lagrangian(t, q, u)
    for lj, gj in zip(lam, cp.constraints):
        val -= lj * gj(t, q, u)
    return val + float(np.dot(p, cp.dynamics(t, q, u)))


def _h_gradients(
    cp: ControlProblem, t: float, q: np.ndarray, u: np.ndarray, p: np.ndarray, lam: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """(d_q H, d_u H); the gradient in p is phi itself and is used exactly."""
    dq = cp.lagrangian.d_x(t, q, u).copy()
    du = cp.lagrangian.d_y(t, q, u).copy()
    for lj, gj in zip(lam, cp.constraints):
        dq -= lj * gj.d_x(t, q, u)
        du -= lj * gj.d_y(t, q, u)
    dq += cp.dynamics.d_x(t, q, u).T @ p
    du += cp.dynamics.d_y(t, q, u).T @ p
    return dq, du


def pontryagin_residuals(
    cp: ControlProblem,
    ext: PontryaginExtremal,
    band: int = DEFAULT_BAND,
) -> tuple[ResidualReport, ResidualReport, ResidualReport]:
    """Residuals of the state equation, the costate equation, and the
    stationary condition:

        (i)   D^alpha q - d_p H        (= D^alpha q - phi, used exactly)
        (ii)  D_b^alpha p - d_q H
        (iii) d_u H
    """
    lam = cp.check_multipliers(ext.lam)
    grid = ext.q.grid
    t = grid.nodes
    v = fk.left_rl_derivative(ext.q, cp.order).values
    rp = fk.right_rl_derivative(ext.p, cp.order).values

    r_state = np.empty_like(v)
    r_costate = np.empty_like(rp)
    r_stationary = np.empty((t.size, ext.u.dim))
    for j in range(t.size):
        qj, uj, pj = ext.q.values[j], ext.u.values[j], ext.p.values[j]
        r_state[j] = v[j] - cp.dynamics(t[j], qj, uj)
        dq, du = _h_gradients(cp, t[j], qj, uj, pj, lam)
        r_costate[j] = rp[j] - dq
        r_stationary[j] = du
    return (
        make_report(grid, r_state, band=band),
        make_report(grid, r_costate, band=band),
        make_report(grid, r_stationary, band=band),
    )


def _hamiltonian_samples(
    cp: ControlProblem, ext: PontryaginExtremal
) -> tuple[np.ndarray, np.ndarray]:
    """(H(t_j), p_j . D^alpha q_j) along the candidate, velocity filled."""
    t = ext.q.grid.nodes
    v = fill_endpoints(fk.left_rl_derivative(ext.q, cp.order).values)
    hs = np.array(
        [
            hamiltonian_value(cp, t[j], ext.q.values[j], ext.u.values[j], ext.p.values[j], ext.lam)
            for j in range(t.size)
        ]
    )
    pv = np.sum(ext.p.values * v, axis=1)
    return hs, pv


def hamiltonian_noether_residual(
    cp: ControlProblem,
    ext: PontryaginExtremal,
    sym: ControlSymmetry,
    band: int = DEFAULT_BAND,
) -> ResidualReport:
    """Residual of the Hamiltonian-form Noether law:

        D^alpha(H - (1 - alpha) p . D^alpha q, tau) - D^alpha(p, xi).
    """
    grid = ext.q.grid
    taus, xis = sym.base().sampled_along(grid, ext.q)
    hs, pv = _hamiltonian_samples(cp, ext)
    hhat = hs - (1.0 - cp.order.alpha) * pv
    term1 = frac_pair_operator(
        SampledFunction(grid, hhat), SampledFunction(grid, taus), cp.order
    )
    term2 = frac_pair_operator(ext.p, SampledFunction(grid, xis), cp.order)
    return make_report(grid, term1.values - term2.values, band=band)


def _check_autonomous(cp: ControlProblem, rng: np.random.Generator, tol: float = 1e-8) -> None:
    t0, t1 = cp.grid.a, cp.grid.b
    for _ in range(8):
        q = rng.uniform(-1.0, 1.0, cp.dim)
        u = rng.uniform(-1.0, 1.0, cp.control_dim)
        ta, tb = rng.uniform(t0, t1, 2)
        vals_a = [cp.lagrangian(ta, q, u), *[g(ta, q, u) for g in cp.constraints]]
        vals_b = [cp.lagrangian(tb, q, u), *[g(tb, q, u) for g in cp.constraints]]
        phi_a, phi_b = cp.dynamics(ta, q, u), cp.dynamics(tb, q, u)
        if np.max(np.abs(np.array(vals_a) - np.array(vals_b))) > tol or np.max(
            np.abs(phi_a - phi_b)
        ) > tol:
            raise AutonomyError("problem data depends explicitly on t")


def autonomous_energy_residual(
    cp: ControlProblem,
    ext: PontryaginExtremal,
    band: int = DEFAULT_BAND,
    seed: int = 0,
) -> ResidualReport:
    """Residual of D^alpha[ H + (alpha - 1) p . D^alpha q ] for autonomous
    data: the fractional replacement for conservation of the Hamiltonian.
    """
    _check_autonomous(cp, np.random.default_rng(seed))
    grid = ext.q.grid
    hs, pv = _hamiltonian_samples(cp, ext)
    energy = hs + (cp.order.alpha - 1.0) * pv
    r = fk.left_rl_derivative(SampledFunction(grid, energy), cp.order)
    return make_report(grid, r.values, band=band)
