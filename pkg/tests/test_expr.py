import math

import pytest

from cutkit.errors import DomainError, InvalidInput
from cutkit.expr import Expr, as_expr, parse, var


def test_parse_and_evaluate():
    e = parse("x1**2 + s*sin(x1) - 1/2")
    assert e.evaluate({"x1": 0.5, "s": 2.0}) == pytest.approx(0.25 + 2 * math.sin(0.5) - 0.5)


def test_imaginary_unit():
    e = parse("exp(I*x1)")
    assert e.evaluate({"x1": math.pi / 2}) == pytest.approx(1j)


def test_symbolic_derivative_matches_numeric():
    e = parse("cos(x1*s) * exp(s) + x1**3")
    d = e.diff("s")
    env = {"x1": 0.7, "s": 0.3}
    h = 1e-6
    num = (e.evaluate({**env, "s": 0.3 + h}) - e.evaluate({**env, "s": 0.3 - h})) / (2 * h)
    assert d.evaluate(env) == pytest.approx(num, abs=1e-8)


def test_simplification():
    assert parse("x1 + 0") == var("x1")
    assert parse("1*x1") == var("x1")
    assert parse("sqrt(s)**2") == var("s")
    assert parse("2*3").is_const(6)


def test_json_roundtrip_and_sub():
    e = parse("x1 - s**2/3")
    assert Expr.from_json(e.to_json()) == e
    assert Expr.from_json({"op": "sub", "args": ["x1", {"op": "const", "value": "1/2"}]}).evaluate({"x1": 1}) == 0.5


def test_substitution():
    e = parse("x1*s").subs({"s": parse("u*u + v*v")})
    assert e.variables() == {"x1", "u", "v"}


def test_domain_errors():
    with pytest.raises(DomainError):
        parse("sqrt(s)").evaluate({"s": -1.0})
    with pytest.raises(DomainError):
        parse("1/x1").evaluate({"x1": 0.0})
    with pytest.raises(InvalidInput):
        parse("x1").evaluate({})


def test_rejects_unknown_syntax():
    with pytest.raises(InvalidInput):
        parse("foo(x1)")


def test_float_literals_are_exact():
    assert as_expr(0.1).value.re == pytest.approx(0.1)
    assert parse("0.25").is_const(as_expr(0.25).value)


def test_printing_negative_constant():
    assert str(parse("cos(s) - 1")) == "cos(s) - 1"
