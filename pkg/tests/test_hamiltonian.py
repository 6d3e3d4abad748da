import numpy as np
import pytest

from fracnoether import (
    AutonomyError,
    ControlProblem,
    ControlSymmetry,
    FracOrder,
    Grid,
    PointField,
    PontryaginExtremal,
    SampledFunction,
    VectorField,
    autonomous_energy_residual,
    gamma,
    hamiltonian_noether_residual,
    hamiltonian_value,
    left_rl_derivative,
    make_report,
    pontryagin_residuals,
    sample,
)

HALF = FracOrder(0.5)
GRID = Grid(0.0, 1.0, 2000)
ZERO = SampledFunction(GRID, np.zeros(GRID.m + 1))
BAND = 100  # 5% of the interval per side


def lifted_benchmark() -> ControlProblem:
    """phi = u turns the variational benchmark into a control problem."""
    return ControlProblem(
        order=HALF,
        lagrangian=PointField(lambda t, q, u: t**4 + float(u[0] ** 2)),
        dynamics=VectorField(lambda t, q, u: u.copy()),
        grid=GRID,
        initial=[0.0],
        constraints=[PointField(lambda t, q, u: t * t * float(u[0]))],
        constraint_levels=[0.2],
    )


def lifted_extremal() -> PontryaginExtremal:
    return PontryaginExtremal(
        q=sample(GRID, lambda t: 2.0 * t**2.5 / gamma(3.5)),
        u=sample(GRID, lambda t: t * t),
        p=ZERO,
        lam=np.array([2.0]),
    )


def autonomous_problem() -> ControlProblem:
    """L = (u-1)^2, phi = u, int u = -1; H vanishes along the extremal."""
    return ControlProblem(
        order=HALF,
        lagrangian=PointField(lambda t, q, u: float((u[0] - 1.0) ** 2)),
        dynamics=VectorField(lambda t, q, u: u.copy()),
        grid=GRID,
        initial=[0.0],
        constraints=[PointField(lambda t, q, u: float(u[0]))],
        constraint_levels=[-1.0],
    )


def autonomous_extremal() -> PontryaginExtremal:
    return PontryaginExtremal(
        q=sample(GRID, lambda t: -(t**0.5) / gamma(1.5)),
        u=sample(GRID, lambda t: -1.0),
        p=ZERO,
        lam=np.array([-4.0]),
    )


def test_hamiltonian_value_is_direct_sum():
    cp = lifted_benchmark()
    rng = np.random.default_rng(5)
    for _ in range(20):
        t = rng.uniform(0.0, 1.0)
        q = rng.uniform(-1.0, 1.0, 1)
        u = rng.uniform(-1.0, 1.0, 1)
        p = rng.uniform(-1.0, 1.0, 1)
        lam = np.array([2.0])
        expected = t**4 + u[0] ** 2 - 2.0 * t * t * u[0] + p[0] * u[0]
        assert hamiltonian_value(cp, t, q, u, p, lam) == pytest.approx(expected, rel=1e-12)


def test_lift_passes_pontryagin_residuals():
    reps = pontryagin_residuals(lifted_benchmark(), lifted_extremal(), band=BAND)
    assert all(r.sup_norm <= 5e-3 for r in reps)


def test_wrong_costate_fails_costate_equation():
    bad = PontryaginExtremal(
        q=sample(GRID, lambda t: 2.0 * t**2.5 / gamma(3.5)),
        u=sample(GRID, lambda t: t * t),
        p=SampledFunction(GRID, np.ones(GRID.m + 1)),
        lam=np.array([2.0]),
    )
    _, costate, _ = pontryagin_residuals(lifted_benchmark(), bad, band=BAND)
    assert costate.sup_norm > 0.1


def test_wrong_control_fails_stationarity():
    bad = PontryaginExtremal(
        q=sample(GRID, lambda t: 2.0 * t**2.5 / gamma(3.5)),
        u=sample(GRID, lambda t: t * t + 0.5),
        p=ZERO,
        lam=np.array([2.0]),
    )
    _, _, stationary = pontryagin_residuals(lifted_benchmark(), bad, band=BAND)
    assert stationary.sup_norm > 0.5


def test_extremal_validation():
    with pytest.raises(ValueError, match="grid"):
        PontryaginExtremal(
            q=sample(GRID, lambda t: t),
            u=sample(Grid(0.0, 1.0, 10), lambda t: t),
            p=ZERO,
            lam=np.zeros(1),
        )


def test_autonomous_energy_law_exact():
    rep = autonomous_energy_residual(autonomous_problem(), autonomous_extremal())
    assert rep.sup_norm <= 1e-10


def test_hamiltonian_noether_law():
    sym = ControlSymmetry(tau=lambda t, q: 1.0, xi=lambda t, q: np.zeros(1))
    rep = hamiltonian_noether_residual(
        autonomous_problem(), autonomous_extremal(), sym, band=BAND
    )
    assert rep.sup_norm <= 1e-10


def test_autonomy_check_rejects_time_dependence():
    with pytest.raises(AutonomyError):
        autonomous_energy_residual(lifted_benchmark(), lifted_extremal())


def test_hamiltonian_alone_is_not_conserved():
    """D^alpha of a nonzero constant Hamiltonian does not vanish."""
    h_values = SampledFunction(GRID, np.full(GRID.m + 1, 3.0))
    rep = make_report(GRID, left_rl_derivative(h_values, HALF).values, band=BAND)
    assert rep.sup_norm > 1.0
