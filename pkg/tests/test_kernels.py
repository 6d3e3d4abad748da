import numpy as np
import pytest

from fracnoether import (
    Constant,
    FracOrder,
    GammaPoleError,
    Grid,
    PowerShifted,
    SampledFunction,
    UnsupportedOrderError,
    closed_form_left_derivative,
    gamma,
    left_derivative_matrix,
    left_rl_derivative,
    left_rl_integral,
    right_rl_derivative,
    right_rl_integral,
    sample,
)

HALF = FracOrder(0.5)


def rel_err_on_window(grid, numeric, exact, t_min=0.05):
    mask = grid.nodes >= t_min
    return float(np.max(np.abs(numeric[mask] - exact[mask]) / np.abs(exact[mask])))


def test_power_rule():
    grid = Grid(0.0, 1.0, 2000)
    t = grid.nodes
    num = left_rl_derivative(sample(grid, lambda s: s * s), HALF).scalar
    exact = gamma(3.0) / gamma(2.5) * t**1.5
    assert rel_err_on_window(grid, num, exact) <= 1e-3


def test_power_rule_empirical_order():
    errs = {}
    for m in (1000, 2000):
        grid = Grid(0.0, 1.0, m)
        num = left_rl_derivative(sample(grid, lambda s: s * s), HALF).scalar
        exact = gamma(3.0) / gamma(2.5) * grid.nodes**1.5
        errs[m] = rel_err_on_window(grid, num, exact)
    order = np.log2(errs[1000] / errs[2000])
    assert order >= 1.4


def test_constant_rule():
    grid = Grid(0.0, 1.0, 2000)
    t = grid.nodes
    num = left_rl_derivative(sample(grid, lambda s: 3.0), HALF).scalar
    mask = t >= 0.05
    exact = 3.0 / gamma(0.5) * t[mask] ** (-0.5)
    assert np.max(np.abs(num[mask] - exact) / exact) <= 1e-3


def test_closed_form_atoms():
    t = 0.7
    val = closed_form_left_derivative(PowerShifted(1.0, 2.0), HALF, t)
    assert val == pytest.approx(gamma(3.0) / gamma(2.5) * t**1.5, rel=1e-12)
    val = closed_form_left_derivative(Constant(2.0), HALF, t)
    assert val == pytest.approx(2.0 / gamma(0.5) * t ** (-0.5), rel=1e-12)


def test_closed_form_degenerate_pairing_raises():
    # exponent - alpha + 1 at a non-positive integer
    with pytest.raises(GammaPoleError):
        closed_form_left_derivative(PowerShifted(1.0, -0.5), HALF, 0.5)


def test_singular_markers():
    grid = Grid(0.0, 1.0, 64)
    d = left_rl_derivative(sample(grid, lambda s: s + 1.0), HALF).scalar
    assert np.isnan(d[0]) and np.all(np.isfinite(d[1:]))
    r = right_rl_derivative(sample(grid, lambda s: s + 1.0), HALF).scalar
    assert np.isnan(r[-1]) and np.all(np.isfinite(r[:-1]))


def test_gl_cross_check():
    grid = Grid(0.0, 1.0, 1000)
    f = sample(grid, lambda s: np.sin(2.0 * s) + s)
    l1 = left_rl_derivative(f, HALF, scheme="l1").scalar
    gl = left_rl_derivative(f, HALF, scheme="gl").scalar
    assert np.max(np.abs(l1[20:-1] - gl[20:-1])) <= 1e-2


def test_unknown_scheme():
    grid = Grid(0.0, 1.0, 16)
    with pytest.raises(ValueError):
        left_rl_derivative(sample(grid, lambda s: s), HALF, scheme="magic")


def test_semigroup_integral_then_derivative():
    grid = Grid(0.0, 1.0, 2000)
    f = sample(grid, lambda s: np.cos(2.0 * s))
    back = left_rl_derivative(left_rl_integral(f, HALF), HALF).scalar
    inner = slice(50, -1)
    assert np.max(np.abs(back[inner] - f.scalar[inner])) <= 2e-3


def test_integral_power_rule():
    # I^alpha t = t^(1+alpha) * gamma(2)/gamma(2+alpha); the scheme is the
    # exact integral of the piecewise-linear interpolant, and t is linear
    grid = Grid(0.0, 1.0, 200)
    t = grid.nodes
    num = left_rl_integral(sample(grid, lambda s: s), HALF).scalar
    exact = t**1.5 / gamma(2.5)
    assert np.max(np.abs(num - exact)) <= 1e-13


def test_right_integral_mirror():
    grid = Grid(0.0, 1.0, 200)
    num = right_rl_integral(sample(grid, lambda s: 1.0 - s), HALF).scalar
    exact = (1.0 - grid.nodes) ** 1.5 / gamma(2.5)
    assert np.max(np.abs(num - exact)) <= 1e-13


def test_right_power_rule():
    # D_b^alpha (b - t)^2 = gamma(3)/gamma(2.5) (b - t)^1.5
    grid = Grid(0.0, 1.0, 2000)
    t = grid.nodes
    num = right_rl_derivative(sample(grid, lambda s: (1.0 - s) ** 2), HALF).scalar
    exact = gamma(3.0) / gamma(2.5) * (1.0 - t) ** 1.5
    mask = t <= 0.95
    assert np.max(np.abs(num[mask] - exact[mask])) <= 1e-3


def test_classical_limit_matches_derivative():
    grid = Grid(0.0, 1.0, 1000)
    one = FracOrder(1.0)
    d = left_rl_derivative(sample(grid, lambda s: np.sin(s)), one).scalar
    assert np.max(np.abs(d - np.cos(grid.nodes))) <= 1e-5
    r = right_rl_derivative(sample(grid, lambda s: np.sin(s)), one).scalar
    assert np.max(np.abs(r + np.cos(grid.nodes))) <= 1e-5


def test_alpha_near_one_approaches_classical():
    grid = Grid(0.0, 1.0, 2000)
    f = sample(grid, lambda s: s**3)
    near = left_rl_derivative(f, FracOrder(0.999)).scalar
    classic = 3.0 * grid.nodes**2
    mask = grid.nodes >= 0.05
    assert np.max(np.abs(near[mask] - classic[mask])) <= 2e-2


def test_derivative_matrix_matches_convolution():
    grid = Grid(0.0, 1.0, 50)
    rng = np.random.default_rng(3)
    f = SampledFunction(grid, rng.standard_normal(grid.m + 1))
    A = left_derivative_matrix(grid, HALF, boundary="nan")
    direct = left_rl_derivative(f, HALF).scalar
    via_matrix = A @ f.scalar
    assert np.max(np.abs(via_matrix[1:] - direct[1:])) <= 1e-12
    assert np.all(np.isnan(A[0]))


def test_derivative_matrix_extrapolate_row():
    grid = Grid(0.0, 1.0, 50)
    A = left_derivative_matrix(grid, HALF, boundary="extrapolate")
    assert np.allclose(A[0], 2.0 * A[1] - A[2])
    with pytest.raises(ValueError):
        left_derivative_matrix(grid, HALF, boundary="bogus")


def test_orders_above_one_rejected():
    grid = Grid(0.0, 1.0, 16)
    with pytest.raises(UnsupportedOrderError):
        left_rl_derivative(sample(grid, lambda s: s), FracOrder(1.5))


def test_vector_samples_componentwise():
    grid = Grid(0.0, 1.0, 100)
    f = sample(grid, lambda s: np.array([s, s * s]))
    d = left_rl_derivative(f, HALF)
    d0 = left_rl_derivative(sample(grid, lambda s: s), HALF).scalar
    d1 = left_rl_derivative(sample(grid, lambda s: s * s), HALF).scalar
    assert np.allclose(d.component(0)[1:], d0[1:])
    assert np.allclose(d.component(1)[1:], d1[1:])
