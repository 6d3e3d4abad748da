"""Arithmetic expressions and the plain-text problem spec format.

The expression grammar is deliberately tiny so spec files stay portable:
+, -, *, /, ^ (right-associative), parentheses, numeric literals, named
variables, and the gamma() function.  Specs are flat `key = value` files;
see docs/formats.md for the full key reference.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .gammafn import gamma

__all__ = ["SpecError", "Expression", "parse_expression", "ProblemSpec", "parse_spec"]


class SpecError(ValueError):
    """Invalid spec file or expression; carries line information if known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


# --------------------------------------------------------------------------
# expression parsing (recursive descent)
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\^|[+\-*/(),]))"
)

_FUNCTIONS: dict[str, Callable] = {"gamma": np.vectorize(gamma, otypes=[float])}


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise SpecError(f"unexpected character {text[pos]!r} in expression {text!r}")
        pos = match.end()
        for kind in ("num", "name", "op"):
            tok = match.group(kind)
            if tok is not None:
                tokens.append((kind, tok))
                break
    tokens.append(("end", ""))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]], variables: set[str], text: str):
        self.tokens = tokens
        self.pos = 0
        self.variables = variables
        self.text = text

    def peek(self) -> tuple[str, str]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str) -> None:
        kind, tok = self.take()
        if tok != value:
            raise SpecError(f"expected {value!r}, found {tok or 'end of input'!r} in {self.text!r}")

    def parse(self) -> Callable:
        node = self.expr()
        if self.peek()[0] != "end":
            raise SpecError(f"trailing input {self.peek()[1]!r} in {self.text!r}")
        return node

    def expr(self) -> Callable:
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = (lambda a, b: lambda env: a(env) + b(env))(node, rhs) if op == "+" else (
                lambda a, b: lambda env: a(env) - b(env)
            )(node, rhs)
        return node

    def term(self) -> Callable:
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            node = (lambda a, b: lambda env: a(env) * b(env))(node, rhs) if op == "*" else (
                lambda a, b: lambda env: a(env) / b(env)
            )(node, rhs)
        return node

    def unary(self) -> Callable:
        if self.peek()[1] == "-":
            self.take()
            inner = self.unary()
            return lambda env: -inner(env)
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Callable:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            expo = self.unary()
            return lambda env: base(env) ** expo(env)
        return base

    def atom(self) -> Callable:
        kind, tok = self.take()
        if kind == "num":
            value = float(tok)
            return lambda env: value
        if kind == "name":
            if tok in _FUNCTIONS:
                fn = _FUNCTIONS[tok]
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return lambda env: fn(arg(env))
            if tok not in self.variables:
                raise SpecError(
                    f"unknown variable {tok!r} in {self.text!r} "
                    f"(allowed: {', '.join(sorted(self.variables)) or 'none'})"
                )
            name = tok
            return lambda env: env[name]
        if tok == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise SpecError(f"unexpected {tok or 'end of input'!r} in {self.text!r}")


@dataclass(frozen=True)
class Expression:
    """A compiled expression; call with a variable environment."""

    text: str
    variables: tuple[str, ...]
    _fn: Callable = field(repr=False)

    def __call__(self, env: Mapping[str, float | np.ndarray] | None = None) -> float | np.ndarray:
        return self._fn(env or {})


def parse_expression(text: str, variables: tuple[str, ...] = ()) -> Expression:
    fn = _Parser(_tokenize(text), set(variables), text).parse()
    return Expression(text=text, variables=tuple(variables), _fn=fn)


# --------------------------------------------------------------------------
# spec files
# --------------------------------------------------------------------------

BUILTIN_TRAJECTORIES = {
    "example1": "2*t^(2.5)/gamma(3.5)",
}

@dataclass
class ProblemSpec:
    """Parsed, validated contents of a problem spec file."""

    alpha: float
    a: float
    b: float
    m: int
    dim: int
    control_dim: int
    lagrangian: str
    constraints: list[str]
    levels: list[float]
    q_a: list[float]
    q_b: list[float] | None
    multipliers: list[float] | None
    trajectory: list[str] | None
    tau: str | None
    xi: list[str] | None
    dynamics: list[str] | None
    control: list[str] | None
    costate: list[str] | None

    @property
    def is_control(self) -> bool:
        return self.dynamics is not None

    @property
    def k(self) -> int:
        return len(self.constraints)

    def field_variables(self) -> tuple[str, ...]:
        qs = tuple(f"q{i + 1}" for i in range(self.dim))
        if self.is_control:
            return ("t",) + qs + tuple(f"u{i + 1}" for i in range(self.control_dim))
        return ("t",) + qs + tuple(f"v{i + 1}" for i in range(self.dim))


def _read_pairs(path: str) -> dict[str, tuple[str, int]]:
    pairs: dict[str, tuple[str, int]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SpecError(f"expected 'key = value', got {line!r}", lineno)
            key, value = (part.strip() for part in line.split("=", 1))
            if not key or not value:
                raise SpecError(f"empty key or value in {line!r}", lineno)
            if key in pairs:
                raise SpecError(f"duplicate key {key!r}", lineno)
            pairs[key] = (value, lineno)
    if not pairs:
        raise SpecError(f"spec file {path!r} is empty")
    return pairs


def _const(pairs: dict, key: str, default: float | None = None) -> float | None:
    if key not in pairs:
        return default
    value, lineno = pairs.pop(key)
    try:
        return float(parse_expression(value)({}))
    except SpecError as exc:
        raise SpecError(f"in constant {key}: {exc}", lineno) from exc


def _indexed(pairs: dict, stem: str) -> list[tuple[str, int]]:
    out = []
    i = 1
    while f"{stem}{i}" in pairs:
        out.append(pairs.pop(f"{stem}{i}"))
        i += 1
    stray = [k for k in pairs if re.fullmatch(f"{re.escape(stem)}\\d+", k)]
    if stray:
        raise SpecError(
            f"non-contiguous indices for {stem!r}: found {stray[0]} but {stem}{i} is missing",
            pairs[stray[0]][1],
        )
    return out


def parse_spec(path: str) -> ProblemSpec:
    """Read and validate a spec file; raises SpecError with line info."""
    pairs = _read_pairs(path)

    alpha = _const(pairs, "alpha")
    if alpha is None:
        raise SpecError("missing required key 'alpha'")
    if not 0.0 < alpha <= 1.0:
        raise SpecError(f"alpha must lie in (0, 1], got {alpha}")
    a = _const(pairs, "a", 0.0)
    b = _const(pairs, "b", 1.0)
    m = int(_const(pairs, "m", 500))
    dim = int(_const(pairs, "dim", 1))
    control_dim = int(_const(pairs, "controls", 1))
    if a >= b:
        raise SpecError(f"need a < b, got [{a}, {b}]")
    if m < 2 or dim < 1 or control_dim < 1:
        raise SpecError("m must be >= 2 and dimensions >= 1")

    if "L" not in pairs:
        raise SpecError("missing required key 'L'")
    lagrangian = pairs.pop("L")[0]

    gs = [v for v, _ in _indexed(pairs, "g")]
    levels_raw = _indexed(pairs, "l")
    if len(levels_raw) != len(gs):
        raise SpecError(
            f"{len(gs)} constraint expressions but {len(levels_raw)} levels"
        )
    levels = []
    for value, lineno in levels_raw:
        try:
            levels.append(float(parse_expression(value)({})))
        except SpecError as exc:
            raise SpecError(f"in constraint level: {exc}", lineno) from exc

    def const_list(stem: str, expected: int, what: str) -> list[float] | None:
        raw = _indexed(pairs, stem)
        if not raw:
            return None
        if len(raw) != expected:
            raise SpecError(f"expected {expected} {what} entries, got {len(raw)}", raw[0][1])
        out = []
        for value, lineno in raw:
            try:
                out.append(float(parse_expression(value)({})))
            except SpecError as exc:
                raise SpecError(f"in {what}: {exc}", lineno) from exc
        return out

    q_a = const_list("q_a", dim, "initial boundary")
    if q_a is None:
        raise SpecError("missing required key(s) 'q_a1..'")
    q_b = const_list("q_b", dim, "final boundary")
    multipliers = const_list("lambda", len(gs), "multiplier") if gs else None

    def expr_list(stem: str, expected: int) -> list[str] | None:
        raw = _indexed(pairs, stem)
        if not raw:
            return None
        if len(raw) != expected:
            raise SpecError(f"expected {expected} {stem!r} entries, got {len(raw)}", raw[0][1])
        return [v for v, _ in raw]

    trajectory = expr_list("trajectory", dim)
    if trajectory is not None:
        trajectory = [
            BUILTIN_TRAJECTORIES[t.split(":", 1)[1]]
            if t.startswith("builtin:") and t.split(":", 1)[1] in BUILTIN_TRAJECTORIES
            else t
            for t in trajectory
        ]
    tau = pairs.pop("tau", (None, 0))[0]
    xi = expr_list("xi", dim)
    dynamics = expr_list("phi", dim)
    control = expr_list("control", control_dim)
    costate = expr_list("costate", dim)

    if pairs:
        key = next(iter(pairs))
        raise SpecError(f"unknown key {key!r}", pairs[key][1])

    spec = ProblemSpec(
        alpha=alpha,
        a=a,
        b=b,
        m=m,
        dim=dim,
        control_dim=control_dim,
        lagrangian=lagrangian,
        constraints=gs,
        levels=levels,
        q_a=q_a,
        q_b=q_b,
        multipliers=multipliers,
        trajectory=trajectory,
        tau=tau,
        xi=xi,
        dynamics=dynamics,
        control=control,
        costate=costate,
    )

    # compile every expression once so bad syntax is a parse-time diagnostic
    fvars = spec.field_variables()
    parse_expression(spec.lagrangian, fvars)
    for gexpr in spec.constraints:
        parse_expression(gexpr, fvars)
    tq = ("t",) + tuple(f"q{i + 1}" for i in range(dim))
    if spec.tau is not None:
        parse_expression(spec.tau, tq)
    for group in (spec.xi,):
        if group:
            for e in group:
                parse_expression(e, tq)
    for group in (spec.trajectory, spec.control, spec.costate):
        if group:
            for e in group:
                parse_expression(e, ("t",))
    if spec.dynamics:
        for e in spec.dynamics:
            parse_expression(e, fvars)
    return spec
