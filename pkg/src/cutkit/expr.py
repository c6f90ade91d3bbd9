"""Small expression trees for maps: exact rational leaves, symbolic partials, numeric evaluation.

JSON form is ``{"op": "add", "args": [...]}`` with ``{"op": "const", "value": "p/q"}``
and ``{"op": "var", "name": "x1"}`` leaves.  Strings such as ``"x1 + s*sin(x1)"``
are also accepted and parsed with :mod:`ast` (Python syntax, ``I`` is the
imaginary unit).
"""

from __future__ import annotations

import ast
import cmath
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DomainError, InvalidInput
from .funcalg import CRational

__all__ = ["Expr", "const", "var", "sin", "cos", "exp", "sqrt", "re", "im", "conj", "parse", "as_expr"]

_UNARY = ("neg", "sin", "cos", "exp", "sqrt", "re", "im", "conj")
_OPS = ("const", "var", "add", "mul", "div", "pow") + _UNARY


class Expr:
    __slots__ = ("op", "args", "value", "_hash")

    def __init__(self, op: str, args: tuple = (), value=None):
        if op not in _OPS:
            raise InvalidInput(f"unknown expression op {op!r}")
        self.op = op
        self.args = tuple(args)
        self.value = value
        self._hash = None

    # construction helpers ----------------------------------------------
    def __add__(self, other):
        return _add(self, as_expr(other))

    def __radd__(self, other):
        return _add(as_expr(other), self)

    def __sub__(self, other):
        return _add(self, _neg(as_expr(other)))

    def __rsub__(self, other):
        return _add(as_expr(other), _neg(self))

    def __mul__(self, other):
        return _mul(self, as_expr(other))

    def __rmul__(self, other):
        return _mul(as_expr(other), self)

    def __truediv__(self, other):
        return _div(self, as_expr(other))

    def __rtruediv__(self, other):
        return _div(as_expr(other), self)

    def __neg__(self):
        return _neg(self)

    def __pow__(self, n):
        return _pow(self, int(n))

    # structure ----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Expr):
            return NotImplemented
        return self.op == other.op and self.value == other.value and self.args == other.args

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.op, self.value, self.args))
        return self._hash

    def is_const(self, value=None) -> bool:
        if self.op != "const":
            return False
        return value is None or self.value == CRational.coerce(value)

    def variables(self) -> set[str]:
        if self.op == "var":
            return {self.value}
        out: set[str] = set()
        for a in self.args:
            out |= a.variables()
        return out

    def subs(self, mapping: Mapping[str, "Expr"]) -> "Expr":
        """Simultaneous substitution of variables."""
        if self.op == "var":
            return as_expr(mapping[self.value]) if self.value in mapping else self
        if self.op == "const":
            return self
        return _rebuild(self, [a.subs(mapping) for a in self.args])

    def diff(self, name: str) -> "Expr":
        op, a = self.op, self.args
        if op == "const":
            return ZERO
        if op == "var":
            return ONE if self.value == name else ZERO
        if op == "add":
            return _add(*[x.diff(name) for x in a])
        if op == "mul":
            terms = []
            for i, x in enumerate(a):
                dx = x.diff(name)
                if dx.is_const(0):
                    continue
                terms.append(_mul(*(a[:i] + (dx,) + a[i + 1:])))
            return _add(*terms)
        if op == "neg":
            return _neg(a[0].diff(name))
        if op == "div":
            num, den = a
            return _div(_add(_mul(num.diff(name), den), _neg(_mul(num, den.diff(name)))), _pow(den, 2))
        if op == "pow":
            n = self.value
            return _mul(const(n), _pow(a[0], n - 1), a[0].diff(name))
        inner = a[0].diff(name)
        if inner.is_const(0):
            return ZERO
        if op == "sin":
            return _mul(cos(a[0]), inner)
        if op == "cos":
            return _neg(_mul(sin(a[0]), inner))
        if op == "exp":
            return _mul(self, inner)
        if op == "sqrt":
            return _div(inner, _mul(const(2), self))
        if op in ("re", "im", "conj"):
            return _rebuild(self, [inner])
        raise AssertionError(op)

    # numerics -----------------------------------------------------------
    def evaluate(self, env: Mapping[str, complex]) -> complex:
        op, a = self.op, self.args
        if op == "const":
            return complex(self.value)
        if op == "var":
            try:
                return complex(env[self.value])
            except KeyError:
                raise InvalidInput(f"no value for variable {self.value!r}") from None
        if op == "add":
            return sum((x.evaluate(env) for x in a), 0j)
        if op == "mul":
            out = 1 + 0j
            for x in a:
                out *= x.evaluate(env)
            return out
        if op == "div":
            den = a[1].evaluate(env)
            if den == 0:
                raise DomainError("division by zero in expression")
            return a[0].evaluate(env) / den
        if op == "pow":
            base = a[0].evaluate(env)
            if self.value < 0 and base == 0:
                raise DomainError("negative power of zero")
            return base ** self.value
        val = a[0].evaluate(env)
        if op == "neg":
            return -val
        if op == "sin":
            return cmath.sin(val)
        if op == "cos":
            return cmath.cos(val)
        if op == "exp":
            return cmath.exp(val)
        if op == "sqrt":
            if val.imag == 0 and val.real < 0:
                raise DomainError(f"sqrt of negative value {val.real}")
            return cmath.sqrt(val)
        if op == "re":
            return complex(val.real, 0)
        if op == "im":
            return complex(val.imag, 0)
        if op == "conj":
            return val.conjugate()
        raise AssertionError(op)

    def __call__(self, **env) -> complex:
        return self.evaluate(env)

    # serialization ------------------------------------------------------
    def to_json(self):
        if self.op == "const":
            v = self.value
            return {"op": "const", "value": str(v.re) if not v.im else _crat_str(v)}
        if self.op == "var":
            return {"op": "var", "name": self.value}
        out = {"op": self.op, "args": [x.to_json() for x in self.args]}
        if self.op == "pow":
            out["exp"] = self.value
        return out

    @classmethod
    def from_json(cls, data) -> "Expr":
        if isinstance(data, Expr):
            return data
        if isinstance(data, (int, Fraction)):
            return const(data)
        if isinstance(data, str):
            return parse(data)
        if not isinstance(data, Mapping) or "op" not in data:
            raise InvalidInput(f"not an expression: {data!r}")
        op = data["op"]
        if op == "const":
            return const(CRational.parse(str(data["value"])))
        if op == "var":
            return var(data["name"])
        args = [cls.from_json(x) for x in data.get("args", [])]
        if op == "pow":
            return _pow(args[0], int(data["exp"]))
        if op == "sub":
            return _add(args[0], _neg(args[1]))
        if op in _UNARY:
            if len(args) != 1:
                raise InvalidInput(f"{op} takes one argument")
            return _rebuild(Expr(op, args), args)
        if op == "add":
            return _add(*args)
        if op == "mul":
            return _mul(*args)
        if op == "div":
            return _div(*args)
        raise InvalidInput(f"unknown expression op {op!r}")

    def __str__(self):
        op, a = self.op, self.args
        if op == "const":
            return str(self.value)
        if op == "var":
            return self.value
        if op == "add":
            out = str(a[0])
            for x in a[1:]:
                text = str(x)
                negative = x.op == "neg" or (x.op == "const" and not x.value.im and x.value.re < 0)
                out += f" - {text[1:]}" if negative else f" + {text}"
            return out
        if op == "mul":
            return "*".join(_paren(x, ("add", "neg")) for x in a)
        if op == "div":
            return f"{_paren(a[0], ('add',))}/{_paren(a[1], ('add', 'mul', 'div', 'neg'))}"
        if op == "pow":
            return f"{_paren(a[0], ('add', 'mul', 'div', 'neg', 'pow'))}**{self.value}"
        if op == "neg":
            return "-" + _paren(a[0], ("add",))
        return f"{op}({a[0]})"

    def __repr__(self):
        return f"Expr({str(self)!r})"


def _crat_str(v: CRational) -> str:
    sign = "+" if v.im >= 0 else "-"
    return f"{v.re}{sign}{abs(v.im)}i"


def _paren(x, ops):
    return f"({x})" if x.op in ops else str(x)


def const(value) -> Expr:
    return Expr("const", (), CRational.coerce(value) if not isinstance(value, float) else CRational(Fraction(str(value))))


def var(name: str) -> Expr:
    return Expr("var", (), str(name))


ZERO = const(0)
ONE = const(1)
I = const(CRational(0, 1))


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction, CRational, complex, float)):
        return const(x)
    return Expr.from_json(x)


def _add(*args: Expr) -> Expr:
    flat = []
    total = CRational(0)
    for x in args:
        parts = x.args if x.op == "add" else (x,)
        for p in parts:
            if p.op == "const":
                total = total + p.value
            else:
                flat.append(p)
    if total:
        flat.append(const(total))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Expr("add", flat)


def _mul(*args: Expr) -> Expr:
    flat = []
    total = CRational(1)
    for x in args:
        parts = x.args if x.op == "mul" else (x,)
        for p in parts:
            if p.op == "const":
                total = total * p.value
            else:
                flat.append(p)
    if not total:
        return ZERO
    if total != 1:
        flat.insert(0, const(total))
    if not flat:
        return ONE
    if len(flat) == 1:
        return flat[0]
    return Expr("mul", flat)


def _neg(x: Expr) -> Expr:
    if x.op == "const":
        return const(-x.value)
    if x.op == "neg":
        return x.args[0]
    return Expr("neg", (x,))


def _div(a: Expr, b: Expr) -> Expr:
    if b.op == "const":
        if not b.value:
            raise DomainError("division by the constant zero")
        return _mul(a, const(CRational(1) / b.value))
    if a.is_const(0):
        return ZERO
    return Expr("div", (a, b))


def _pow(a: Expr, n: int) -> Expr:
    if n == 0:
        return ONE
    if n == 1:
        return a
    if a.op == "sqrt" and n % 2 == 0:
        return _pow(a.args[0], n // 2)
    if a.op == "const":
        if n > 0:
            out = CRational(1)
            for _ in range(n):
                out = out * a.value
            return const(out)
        return _div(ONE, _pow(a, -n))
    return Expr("pow", (a,), n)


def _unary(op: str, x: Expr) -> Expr:
    if x.op == "const":
        v = x.value
        if op == "re":
            return const(v.re)
        if op == "im":
            return const(v.im)
        if op == "conj":
            return const(v.conjugate())
        if not v:
            if op in ("sin", "sqrt"):
                return ZERO
            if op in ("cos", "exp"):
                return ONE
        if op == "sqrt" and v == 1:
            return ONE
    if op == "neg":
        return _neg(x)
    return Expr(op, (x,))


def _rebuild(node: Expr, args) -> Expr:
    op = node.op
    if op == "add":
        return _add(*args)
    if op == "mul":
        return _mul(*args)
    if op == "div":
        return _div(*args)
    if op == "pow":
        return _pow(args[0], node.value)
    return _unary(op, args[0])


def sin(x) -> Expr:
    return _unary("sin", as_expr(x))


def cos(x) -> Expr:
    return _unary("cos", as_expr(x))


def exp(x) -> Expr:
    return _unary("exp", as_expr(x))


def sqrt(x) -> Expr:
    return _unary("sqrt", as_expr(x))


def re(x) -> Expr:
    return _unary("re", as_expr(x))


def im(x) -> Expr:
    return _unary("im", as_expr(x))


def conj(x) -> Expr:
    return _unary("conj", as_expr(x))


_FUNCS = {"sin": sin, "cos": cos, "exp": exp, "sqrt": sqrt, "re": re, "im": im, "conj": conj}


def parse(text: str) -> Expr:
    """Parse a Python-syntax arithmetic expression into an :class:`Expr`."""
    stripped = text.strip()
    try:
        return const(CRational.parse(stripped))
    except (ValueError, ZeroDivisionError):
        pass
    try:
        tree = ast.parse(stripped, mode="eval")
    except SyntaxError as exc:
        raise InvalidInput(f"cannot parse expression {text!r}: {exc.msg}") from None
    return _from_ast(tree.body, text)


def _from_ast(node, text) -> Expr:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)) and not isinstance(node.value, bool):
        v = node.value
        if isinstance(v, complex):
            return const(CRational(Fraction(str(v.real)), Fraction(str(v.imag))))
        return const(Fraction(str(v)) if isinstance(v, float) else v)
    if isinstance(node, ast.Name):
        return I if node.id == "I" else var(node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        x = _from_ast(node.operand, text)
        return _neg(x) if isinstance(node.op, ast.USub) else x
    if isinstance(node, ast.BinOp):
        left = _from_ast(node.left, text)
        right = _from_ast(node.right, text)
        if isinstance(node.op, ast.Add):
            return _add(left, right)
        if isinstance(node.op, ast.Sub):
            return _add(left, _neg(right))
        if isinstance(node.op, ast.Mult):
            return _mul(left, right)
        if isinstance(node.op, ast.Div):
            return _div(left, right)
        if isinstance(node.op, ast.Pow):
            if right.op != "const" or right.value.im or right.value.re.denominator != 1:
                raise InvalidInput(f"only integer powers are supported in {text!r}")
            return _pow(left, int(right.value.re))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS:
        if len(node.args) != 1 or node.keywords:
            raise InvalidInput(f"{node.func.id} takes one argument in {text!r}")
        return _FUNCS[node.func.id](_from_ast(node.args[0], text))
    raise InvalidInput(f"unsupported syntax in expression {text!r}")


def evaluate_all(exprs: Iterable[Expr], env: Mapping[str, complex]) -> list[complex]:
    return [e.evaluate(env) for e in exprs]
