"""Pointwise integrand fields L(t, q, v) and their partial derivatives.

Analytic gradients are used when supplied; otherwise central finite
differences with a relative step.  A self-check compares supplied gradients
against the finite-difference ones on random probes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = ["PointField", "VectorField", "MissingPartialsError"]

_FD_STEP = 1e-6


class MissingPartialsError(RuntimeError):
    """Raised when a partial derivative can be formed neither way."""


def _fd_gradient(f: Callable[[np.ndarray], float], x: np.ndarray) -> np.ndarray:
    g = np.empty_like(x, dtype=float)
    for i in range(x.size):
        step = _FD_STEP * (1.0 + abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += step
        xm[i] -= step
        g[i] = (f(xp) - f(xm)) / (2.0 * step)
    return g


@dataclass(frozen=True)
class PointField:
    """Scalar field (t, x, y) -> R with x, y in R^n (e.g. L(t, q, D^alpha q)).

    grad_x / grad_y, when given, must return arrays of shape (n,).
    """

    evaluator: Callable[[float, np.ndarray, np.ndarray], float]
    grad_x: Optional[Callable[[float, np.ndarray, np.ndarray], np.ndarray]] = None
    grad_y: Optional[Callable[[float, np.ndarray, np.ndarray], np.ndarray]] = None

    def __call__(self, t: float, x: np.ndarray, y: np.ndarray) -> float:
        return float(self.evaluator(t, np.asarray(x, float), np.asarray(y, float)))

    def d_x(self, t: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        if self.grad_x is not None:
            return np.atleast_1d(np.asarray(self.grad_x(t, x, y), float))
        return _fd_gradient(lambda xx: self.evaluator(t, xx, y), x)

    def d_y(self, t: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        if self.grad_y is not None:
            return np.atleast_1d(np.asarray(self.grad_y(t, x, y), float))
        return _fd_gradient(lambda yy: self.evaluator(t, x, yy), y)

    def check_partials(
        self,
        t_range: tuple[float, float],
        dim: int,
        rng: np.random.Generator,
        probes: int = 10,
        tol: float = 1e-6,
    ) -> None:
        """Verify analytic gradients against finite differences."""
        if self.grad_x is None and self.grad_y is None:
            return
        for _ in range(probes):
            t = rng.uniform(*t_range)
            x = rng.uniform(-1.0, 1.0, dim)
            y = rng.uniform(-1.0, 1.0, dim)
            scale = 1.0 + abs(self(t, x, y))
            if self.grad_x is not None:
                fd = _fd_gradient(lambda xx: self.evaluator(t, xx, y), x)
                if np.max(np.abs(self.d_x(t, x, y) - fd)) > tol * scale * 100:
                    raise ValueError("grad_x disagrees with finite differences")
            if self.grad_y is not None:
                fd = _fd_gradient(lambda yy: self.evaluator(t, x, yy), y)
                if np.max(np.abs(self.d_y(t, x, y) - fd)) > tol * scale * 100:
                    raise ValueError("grad_y disagrees with finite differences")


@dataclass(frozen=True)
class VectorField:
    """Vector field (t, x, y) -> R^n (e.g. control dynamics phi(t, q, u)).

    jac_x / jac_y, when given, return Jacobians of shape (n, dim_x/dim_y).
    """

    evaluator: Callable[[float, np.ndarray, np.ndarray], np.ndarray]
    jac_x: Optional[Callable[[float, np.ndarray, np.ndarray], np.ndarray]] = None
    jac_y: Optional[Callable[[float, np.ndarray, np.ndarray], np.ndarray]] = None

    def __call__(self, t: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.atleast_1d(np.asarray(self.evaluator(t, np.asarray(x, float), np.asarray(y, float)), float))
        return out

    def _fd_jac(self, t: float, x: np.ndarray, y: np.ndarray, wrt: str) -> np.ndarray:
        base = self(t, x, y)
        arg = x if wrt == "x" else y
        J = np.empty((base.size, arg.size))
        for i in range(arg.size):
            step = _FD_STEP * (1.0 + abs(arg[i]))
            ap = arg.copy()
            am = arg.copy()
            ap[i] += step
            am[i] -= step
            if wrt == "x":
                J[:, i] = (self(t, ap, y) - self(t, am, y)) / (2.0 * step)
            else:
                J[:, i] = (self(t, x, ap) - self(t, x, am)) / (2.0 * step)
        return J

    def d_x(self, t: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.jac_x is not None:
            return np.atleast_2d(np.asarray(self.jac_x(t, x, y), float))
        return self._fd_jac(t, np.asarray(x, float), np.asarray(y, float), "x")

    def d_y(self, t: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.jac_y is not None:
            return np.atleast_2d(np.asarray(self.jac_y(t, x, y), float))
        return self._fd_jac(t, np.asarray(x, float), np.asarray(y, float), "y")
