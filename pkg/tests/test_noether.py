import numpy as np
import pytest

from fracnoether import (
    FracOrder,
    Grid,
    SampledFunction,
    SymmetryGenerator,
    certification_tolerance,
    frac_pair_operator,
    invariance_first_order_check,
    invariance_necessary_condition,
    momentum_law_residual,
    noether_law_residual,
    sample,
)

HALF = FracOrder(0.5)

SHIFT_BOTH = SymmetryGenerator(tau=lambda t, q: 1.0, xi=lambda t, q: np.ones(1))
STATE_SHIFT = SymmetryGenerator(tau=lambda t, q: 0.0, xi=lambda t, q: np.ones(1))
TIME_SHIFT = SymmetryGenerator(tau=lambda t, q: 1.0, xi=lambda t, q: np.zeros(1))


def test_pair_operator_classical_product_rule():
    grid = Grid(0.0, 1.0, 1000)
    f = sample(grid, lambda t: np.sin(2.0 * t))
    h = sample(grid, lambda t: t * t + 1.0)
    pair = frac_pair_operator(f, h, FracOrder(1.0)).scalar
    t = grid.nodes
    exact = 2.0 * np.cos(2.0 * t) * (t * t + 1.0) + np.sin(2.0 * t) * 2.0 * t
    assert np.max(np.abs(pair[1:-1] - exact[1:-1])) <= 1e-4


def test_pair_operator_bilinearity():
    grid = Grid(0.0, 1.0, 128)
    rng = np.random.default_rng(7)
    f1 = SampledFunction(grid, rng.standard_normal(grid.m + 1))
    f2 = SampledFunction(grid, rng.standard_normal(grid.m + 1))
    h = SampledFunction(grid, rng.standard_normal(grid.m + 1))
    lhs = frac_pair_operator(f1 * 2.0 + f2 * (-3.0), h, HALF).scalar
    rhs = 2.0 * frac_pair_operator(f1, h, HALF).scalar - 3.0 * frac_pair_operator(
        f2, h, HALF
    ).scalar
    assert np.allclose(lhs[1:-1], rhs[1:-1], atol=1e-10)
    lhs = frac_pair_operator(h, f1 * 2.0 + f2 * (-3.0), HALF).scalar
    rhs = 2.0 * frac_pair_operator(h, f1, HALF).scalar - 3.0 * frac_pair_operator(
        h, f2, HALF
    ).scalar
    assert np.allclose(lhs[1:-1], rhs[1:-1], atol=1e-10)


def test_pair_operator_validation():
    grid = Grid(0.0, 1.0, 32)
    other = Grid(0.0, 2.0, 32)
    f = sample(grid, lambda t: t)
    with pytest.raises(ValueError, match="grid"):
        frac_pair_operator(f, sample(other, lambda t: t), HALF)
    with pytest.raises(ValueError, match="dimension"):
        frac_pair_operator(f, sample(grid, lambda t: np.array([t, t])), HALF)


def test_noether_law_on_benchmark(bench2000, bench2000_q):
    rep = noether_law_residual(bench2000, np.array([2.0]), bench2000_q, SHIFT_BOTH)
    assert rep.passes(certification_tolerance(bench2000))


def test_momentum_law_on_benchmark(bench2000, bench2000_q):
    rep = momentum_law_residual(bench2000, np.array([2.0]), bench2000_q, STATE_SHIFT)
    assert rep.passes(certification_tolerance(bench2000))


def test_momentum_law_requires_zero_tau(bench2000, bench2000_q):
    with pytest.raises(ValueError, match="tau"):
        momentum_law_residual(bench2000, np.array([2.0]), bench2000_q, SHIFT_BOTH)
    with pytest.raises(ValueError, match="tau"):
        invariance_necessary_condition(
            bench2000, np.array([2.0]), bench2000_q, SHIFT_BOTH
        )


def test_tau_zero_reduction(bench2000, bench2000_q):
    """With tau == 0 the full law reduces exactly to the momentum law."""
    lam = np.array([2.0])
    full = noether_law_residual(bench2000, lam, bench2000_q, STATE_SHIFT)
    mom = momentum_law_residual(bench2000, lam, bench2000_q, STATE_SHIFT)
    a = full.pointwise.values[1:-1]
    b = mom.pointwise.values[1:-1]
    assert np.max(np.abs(a - b)) == 0.0


def test_invariance_necessary_condition_on_benchmark(bench2000, bench2000_q):
    rep = invariance_necessary_condition(
        bench2000, np.array([2.0]), bench2000_q, STATE_SHIFT
    )
    assert rep.sup_norm <= certification_tolerance(bench2000)


def test_first_order_invariance_probe(bench2000, bench2000_q):
    lam = np.array([2.0])
    inv = invariance_first_order_check(bench2000, lam, bench2000_q, TIME_SHIFT)
    assert inv.sup_norm <= 1e-3
    # the unaugmented functional is not invariant under time translation
    not_inv = invariance_first_order_check(
        bench2000, np.array([0.0]), bench2000_q, TIME_SHIFT
    )
    assert not_inv.sup_norm > 0.1


def test_first_order_probe_zero_generator(bench2000, bench2000_q):
    zero_gen = SymmetryGenerator(tau=lambda t, q: 0.0, xi=lambda t, q: np.zeros(1))
    rep = invariance_first_order_check(
        bench2000, np.array([2.0]), bench2000_q, zero_gen
    )
    assert rep.sup_norm == 0.0
