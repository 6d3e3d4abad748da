"""Direct transcription of the fractional isoperimetric problem.

The discrete unknowns are the interior node values of q (boundaries pinned)
plus the multiplier vector lambda.  The stationarity system is the exact
gradient of the discretized augmented objective: the right RL derivative in
the Euler-Lagrange residual is realized by the transpose of the left
derivative matrix, so damped Newton converges on a true stationary point of
the discrete problem.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import frac_kernels as fk
from .grids import FracOrder, Grid, SampledFunction
from .problems import (
    ResidualReport,
    VariationalProblem,
    constraint_values,
    euler_lagrange_residual,
    make_report,
    normality_check,
)

__all__ = ["SolverConfig", "Solution", "SolverError", "solve", "refine"]


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    max_iterations: int = 50
    # scaled-gradient stopping test; the floor for fields with
    # finite-difference gradients is about 1e-7, so do not tighten much
    newton_tolerance: float = 1e-6
    fd_step: float = 1e-6
    continuation_steps: int = 0
    regularization: float = 0.0
    constraint_tolerance: float = 1e-8

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.newton_tolerance <= 0 or self.fd_step <= 0:
            raise ValueError("tolerances must be positive")
        if self.regularization < 0:
            raise ValueError("regularization must be >= 0")


@dataclass(frozen=True)
class Solution:
    q: SampledFunction
    lam: np.ndarray
    el_report: ResidualReport
    constraint_residual: np.ndarray
    converged: bool
    iterations: int
    stationarity_norm: float
    empirical_order: float | None = None


def _trapezoid_weights(grid: Grid) -> np.ndarray:
    w = np.full(grid.m + 1, grid.h)
    w[0] = w[-1] = grid.h / 2.0
    return w


class _Discretization:
    """Discrete augmented objective, its gradient, and a structured Jacobian.

    The objective is a quadrature sum over M points,

        Jd(q, lambda) = sum_s w_s F(theta_s, (P q)_s, (D q)_s),

    with P an evaluation matrix and D the discrete fractional-derivative
    matrix.  For alpha < 1, theta = grid nodes, P = identity, D = the L1
    matrix (singular first row extrapolated), w = trapezoid weights.  For
    alpha = 1 the quadrature is per-interval midpoint with P the endpoint
    average and D the interval slope; on piecewise-linear data this is the
    exact classical functional, which makes the classical benchmark
    solutions nodally exact.
    """

    def __init__(self, problem: VariationalProblem, alpha: float, fd_step: float):
        self.problem = problem
        self.grid = problem.grid
        self.n = problem.dim
        self.k = problem.k
        self.fd_step = fd_step
        m, h = self.grid.m, self.grid.h
        nodes = self.grid.nodes
        if alpha == 1.0:
            self.theta = 0.5 * (nodes[:-1] + nodes[1:])
            self.w = np.full(m, h)
            self.P = np.zeros((m, m + 1))
            self.D = np.zeros((m, m + 1))
            idx = np.arange(m)
            self.P[idx, idx] = 0.5
            self.P[idx, idx + 1] = 0.5
            self.D[idx, idx] = -1.0 / h
            self.D[idx, idx + 1] = 1.0 / h
        else:
            self.theta = nodes
            self.w = _trapezoid_weights(self.grid)
            self.P = np.eye(m + 1)
            self.D = fk.left_derivative_matrix(
                self.grid, FracOrder(alpha), boundary="extrapolate"
            )

    # -- pointwise gradients of F = L - lambda.g and of each g_j ----------
    def _grads(self, s: int, qs: np.ndarray, vs: np.ndarray, lam: np.ndarray):
        L = self.problem.lagrangian
        ts = self.theta[s]
        a = L.d_x(ts, qs, vs).copy()
        b = L.d_y(ts, qs, vs).copy()
        for lj, gj in zip(lam, self.problem.constraints):
            a -= lj * gj.d_x(ts, qs, vs)
            b -= lj * gj.d_y(ts, qs, vs)
        return a, b

    def _points(self, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return self.P @ q, self.D @ q

    def gradient(self, q: np.ndarray, lam: np.ndarray) -> np.ndarray:
        """Stacked [dJd/dq_interior ; constraint defects]."""
        m, n = self.grid.m, self.n
        x, v = self._points(q)
        M = self.theta.size
        a = np.empty((M, n))
        b = np.empty((M, n))
        for s in range(M):
            a[s], b[s] = self._grads(s, x[s], v[s], lam)
        gel = self.P.T @ (self.w[:, None] * a) + self.D.T @ (self.w[:, None] * b)
        defects = self.constraint_defects(x, v)
        # scale the stationarity rows to O(1) so the Newton tolerance is
        # grid-independent
        return np.concatenate([gel[1:m].ravel() / self.grid.h, defects])

    def constraint_defects(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        vals = np.empty(self.k)
        for r, gj in enumerate(self.problem.constraints):
            samples = np.array(
                [gj(self.theta[s], x[s], v[s]) for s in range(self.theta.size)]
            )
            vals[r] = np.dot(self.w, samples) - self.problem.constraint_levels[r]
        return vals

    # -- structured Jacobian ---------------------------------------------
    def _hessian_blocks(self, x: np.ndarray, v: np.ndarray, lam: np.ndarray):
        """Per-point second partials of F by central differences of gradients."""
        M, n = self.theta.size, self.n
        Hqq = np.empty((M, n, n))
        Hqv = np.empty((M, n, n))
        Hvv = np.empty((M, n, n))
        for s in range(M):
            xs, vs = x[s], v[s]
            for i in range(n):
                st = self.fd_step * (1.0 + abs(xs[i]))
                xp, xm = xs.copy(), xs.copy()
                xp[i] += st
                xm[i] -= st
                ap, _ = self._grads(s, xp, vs, lam)
                am, _ = self._grads(s, xm, vs, lam)
                Hqq[s][:, i] = (ap - am) / (2.0 * st)
                st = self.fd_step * (1.0 + abs(vs[i]))
                vp, vm = vs.copy(), vs.copy()
                vp[i] += st
                vm[i] -= st
                ap, bp = self._grads(s, xs, vp, lam)
                am, bm = self._grads(s, xs, vm, lam)
                Hqv[s][:, i] = (ap - am) / (2.0 * st)
                Hvv[s][:, i] = (bp - bm) / (2.0 * st)
        return Hqq, Hqv, Hvv

    def jacobian(self, q: np.ndarray, lam: np.ndarray) -> np.ndarray:
        m, n, k = self.grid.m, self.n, self.k
        x, v = self._points(q)
        M = self.theta.size
        Pb = self.P if n == 1 else np.kron(self.P, np.eye(n))
        Db = self.D if n == 1 else np.kron(self.D, np.eye(n))
        wb = np.repeat(self.w, n)
        Hqq, Hqv, Hvv = self._hessian_blocks(x, v, lam)

        if n == 1:
            dqq, dqv, dvv = Hqq[:, 0, 0], Hqv[:, 0, 0], Hvv[:, 0, 0]
            K = Pb.T @ ((wb * dqq)[:, None] * Pb)
            K += Pb.T @ ((wb * dqv)[:, None] * Db)
            K += Db.T @ ((wb * dqv)[:, None] * Pb)
            K += Db.T @ ((wb * dvv)[:, None] * Db)
        else:
            def blockdiag(H):
                Dm = np.zeros((M * n, M * n))
                for s in range(M):
                    Dm[s * n : (s + 1) * n, s * n : (s + 1) * n] = H[s]
                return Dm

            Dqq, Dqv, Dvv = (blockdiag(H) for H in (Hqq, Hqv, Hvv))
            W = np.diag(wb)
            K = (
                Pb.T @ W @ Dqq @ Pb
                + Pb.T @ W @ Dqv @ Db
                + Db.T @ Dqv.T @ W @ Pb
                + Db.T @ W @ Dvv @ Db
            )

        N = (m + 1) * n
        interior = np.arange(n, N - n)
        J = np.zeros((interior.size + k, interior.size + k))
        J[: interior.size, : interior.size] = K[np.ix_(interior, interior)] / self.grid.h

        # multiplier coupling: d(gel)/d(lambda_r) = -(P^T W g_q + D^T W g_v)
        for r, gj in enumerate(self.problem.constraints):
            gq = np.empty((M, n))
            gv = np.empty((M, n))
            for s in range(M):
                gq[s] = gj.d_x(self.theta[s], x[s], v[s])
                gv[s] = gj.d_y(self.theta[s], x[s], v[s])
            col = (
                self.P.T @ (self.w[:, None] * gq) + self.D.T @ (self.w[:, None] * gv)
            ).ravel()
            J[: interior.size, interior.size + r] = -col[interior] / self.grid.h
            J[interior.size + r, : interior.size] = col[interior]
        return J


def _initial_state(problem: VariationalProblem, guess: Solution | None):
    grid, n = problem.grid, problem.dim
    if guess is not None:
        q = guess.q.values.copy()
        lam = np.atleast_1d(np.asarray(guess.lam, float)).copy()
    else:
        s = (grid.nodes - grid.a) / (grid.b - grid.a)
        q = np.outer(1.0 - s, problem.boundary_a) + np.outer(s, problem.boundary_b)
        lam = np.zeros(problem.k)
    q[0] = problem.boundary_a
    q[-1] = problem.boundary_b
    return q, lam


def _newton(
    disc: _Discretization,
    q: np.ndarray,
    lam: np.ndarray,
    config: SolverConfig,
) -> tuple[np.ndarray, np.ndarray, bool, int, float]:
    m, n = disc.grid.m, disc.n
    G = disc.gradient(q, lam)
    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        if np.max(np.abs(G)) <= config.newton_tolerance:
            return q, lam, True, iterations - 1, float(np.max(np.abs(G)))
        J = disc.jacobian(q, lam)
        if config.regularization > 0.0:
            J = J + config.regularization * np.eye(J.shape[0])
        try:
            step = np.linalg.solve(J, -G)
        except np.linalg.LinAlgError as exc:
            raise SolverError(
                "singular Jacobian; consider setting SolverConfig.regularization > 0"
            ) from exc
        base_norm = np.linalg.norm(G)
        scale = 1.0
        for _ in range(30):
            q_try = q.copy()
            q_try[1:m] += scale * step[: (m - 1) * n].reshape(m - 1, n)
            lam_try = lam + scale * step[(m - 1) * n :]
            G_try = disc.gradient(q_try, lam_try)
            if np.linalg.norm(G_try) < base_norm:
                q, lam, G = q_try, lam_try, G_try
                break
            scale *= 0.5
        else:
            # no residual decrease found: report the best iterate
            return q, lam, False, iterations, float(np.max(np.abs(G)))
    converged = np.max(np.abs(G)) <= config.newton_tolerance
    return q, lam, converged, iterations, float(np.max(np.abs(G)))


def solve(
    problem: VariationalProblem,
    config: SolverConfig = SolverConfig(),
    initial_guess: Solution | None = None,
) -> Solution:
    """Find (q, lambda) annihilating the discrete Euler-Lagrange gradient
    and the isoperimetric defects.  Optional homotopy in the order: with
    continuation_steps > 0 the classical problem (alpha = 1) is solved first
    and the order stepped down, warm-starting each stage.
    """
    q, lam = _initial_state(problem, initial_guess)
    target = problem.order.alpha
    if config.continuation_steps > 0 and initial_guess is None and target < 1.0:
        alphas = np.linspace(1.0, target, config.continuation_steps + 1)
    else:
        alphas = np.array([target])

    converged, iterations, gnorm = False, 0, np.inf
    for alpha in alphas:
        disc = _Discretization(problem, float(alpha), config.fd_step)
        q, lam, converged, its, gnorm = _newton(disc, q, lam, config)
        iterations += its

    qs = SampledFunction(problem.grid, q)
    el = euler_lagrange_residual(problem, lam, qs)
    defects = constraint_values(problem, qs) - problem.constraint_levels
    converged = converged and (
        problem.k == 0 or np.max(np.abs(defects)) <= config.constraint_tolerance
    )
    if converged and problem.k > 0:
        abnormal = all(
            normality_check(problem, qs, j).sup_norm < 1e-8 for j in range(problem.k)
        )
        if abnormal:
            warnings.warn(
                "all constraints satisfy the Euler-Lagrange-type equation along "
                "the solution: abnormal problem, multipliers are not meaningful",
                stacklevel=2,
            )
    return Solution(
        q=qs,
        lam=lam,
        el_report=el,
        constraint_residual=defects,
        converged=converged,
        iterations=iterations,
        stationarity_norm=gnorm,
    )


def refine(problem: VariationalProblem, solution: Solution, factor: int = 2) -> Solution:
    """Re-solve on a factor-times finer grid, warm-started by interpolation;
    the result carries an empirical order estimate from the EL residuals."""
    if not solution.converged:
        raise ValueError("refine requires a converged input solution")
    if factor < 2:
        raise ValueError("refinement factor must be >= 2")
    fine_grid = problem.grid.refined(factor)
    fine_problem = replace(problem, grid=fine_grid)
    coarse_t = problem.grid.nodes
    fine_t = fine_grid.nodes
    q0 = np.column_stack(
        [
            np.interp(fine_t, coarse_t, solution.q.component(i))
            for i in range(solution.q.dim)
        ]
    )
    warm = replace(
        solution,
        q=SampledFunction(fine_grid, q0),
        el_report=solution.el_report,
    )
    fine = solve(fine_problem, initial_guess=warm)
    order = float(
        np.log(solution.el_report.sup_norm / fine.el_report.sup_norm) / np.log(factor)
    )
    return replace(fine, empirical_order=order)
