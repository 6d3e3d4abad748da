import math

import numpy as np
import pytest

from fracnoether.exprspec import SpecError, parse_expression, parse_spec


# -- expression grammar ------------------------------------------------------


def ev(text, **env):
    return parse_expression(text, tuple(env))(env)


def test_literals_and_arithmetic():
    assert ev("2 + 3 * 4") == 14.0
    assert ev("(2 + 3) * 4") == 20.0
    assert ev("7 / 2 - 1") == 2.5
    assert ev("1e-3 + .5") == pytest.approx(0.5010)


def test_power_binds_tightest_and_right_associative():
    assert ev("2 * 3 ^ 2") == 18.0
    assert ev("2 ^ 3 ^ 2") == 512.0
    assert ev("-2 ^ 2") == -4.0
    assert ev("2 ^ -1") == 0.5


def test_unary_signs():
    assert ev("-3 + +2") == -1.0
    assert ev("--4") == 4.0


def test_gamma_function():
    assert ev("gamma(0.5) ^ 2") == pytest.approx(math.pi, rel=1e-12)
    assert ev("2 / gamma(3.5)") == pytest.approx(0.6018022225, rel=1e-9)


def test_variables():
    assert ev("t ^ 2 + v1", t=3.0, v1=1.0) == 10.0
    vals = parse_expression("t ^ 2", ("t",))({"t": np.array([1.0, 2.0])})
    assert np.allclose(vals, [1.0, 4.0])


def test_unknown_variable_rejected():
    with pytest.raises(SpecError, match="unknown variable 'x'"):
        parse_expression("t + x", ("t",))


def test_syntax_errors():
    for bad in ("2 +", "(1 + 2", "1 2", "gamma 3", "* 4", "2 $ 3"):
        with pytest.raises(SpecError):
            parse_expression(bad)


# -- spec files --------------------------------------------------------------


def write(tmp_path, text):
    path = tmp_path / "case.spec"
    path.write_text(text)
    return str(path)


MINIMAL = """\
alpha = 0.5
L = t + v1^2
q_a1 = 0
q_b1 = 1
"""


def test_minimal_spec(tmp_path):
    spec = parse_spec(write(tmp_path, MINIMAL))
    assert spec.alpha == 0.5
    assert (spec.a, spec.b, spec.m, spec.dim) == (0.0, 1.0, 500, 1)
    assert spec.k == 0 and not spec.is_control
    assert spec.q_a == [0.0] and spec.q_b == [1.0]


def test_bundled_benchmark_spec():
    from fracnoether.cli import _bundled_spec

    spec = parse_spec(_bundled_spec("example1.spec"))
    assert spec.alpha == 0.5
    assert spec.lagrangian.replace(" ", "") == "t^4+v1^2"
    assert spec.constraints[0].replace(" ", "") == "t^2*v1"
    assert spec.levels == [0.2]
    assert spec.multipliers == [2.0]
    assert spec.q_b[0] == pytest.approx(0.6018022225, rel=1e-9)


def test_empty_file_rejected(tmp_path):
    with pytest.raises(SpecError, match="empty"):
        parse_spec(write(tmp_path, ""))


def test_missing_alpha(tmp_path):
    with pytest.raises(SpecError, match="alpha"):
        parse_spec(write(tmp_path, "L = t\nq_a1 = 0\nq_b1 = 0\n"))


def test_constraint_level_count_mismatch(tmp_path):
    text = MINIMAL + "g1 = v1\ng2 = t\nl1 = 1\n"
    with pytest.raises(SpecError, match="2 constraint expressions but 1 levels"):
        parse_spec(write(tmp_path, text))


def test_duplicate_key_line_number(tmp_path):
    text = "alpha = 0.5\nalpha = 0.6\n"
    with pytest.raises(SpecError, match="line 2.*duplicate"):
        parse_spec(write(tmp_path, text))


def test_non_contiguous_indices(tmp_path):
    text = MINIMAL + "g1 = v1\ng3 = t\nl1 = 1\n"
    with pytest.raises(SpecError, match="non-contiguous"):
        parse_spec(write(tmp_path, text))


def test_unknown_key(tmp_path):
    with pytest.raises(SpecError, match="unknown key 'frobnicate'"):
        parse_spec(write(tmp_path, MINIMAL + "frobnicate = 1\n"))


def test_alpha_range_checked(tmp_path):
    with pytest.raises(SpecError, match="alpha"):
        parse_spec(write(tmp_path, MINIMAL.replace("0.5", "1.5", 1)))


def test_bad_expression_carries_context(tmp_path):
    text = MINIMAL.replace("t + v1^2", "t + bogus")
    with pytest.raises(SpecError, match="bogus"):
        parse_spec(write(tmp_path, text))


def test_comments_and_blank_lines(tmp_path):
    text = "# header\n\nalpha = 0.5  # trailing\nL = t\nq_a1 = 0\nq_b1 = 0\n"
    assert parse_spec(write(tmp_path, text)).alpha == 0.5


def test_builtin_trajectory_expansion(tmp_path):
    text = MINIMAL + "trajectory1 = builtin:example1\n"
    spec = parse_spec(write(tmp_path, text))
    expr = parse_expression(spec.trajectory[0], ("t",))
    assert expr({"t": 1.0}) == pytest.approx(0.6018022225, rel=1e-9)


def test_control_spec_switches_variables(tmp_path):
    text = """\
alpha = 0.5
L = (u1 - 1)^2
phi1 = u1
q_a1 = 0
"""
    spec = parse_spec(write(tmp_path, text))
    assert spec.is_control
    assert "u1" in spec.field_variables()
    assert "v1" not in spec.field_variables()
