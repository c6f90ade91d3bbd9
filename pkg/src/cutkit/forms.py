"""Differential forms with exact coefficients on the half and disc models.

Basis order is fixed: ``(dx_1, ..., dx_d, dtheta, ds)`` on the half model and
``(dx_1, ..., dx_d, du, dv)`` on the disc model.  A form is stored as a map
from strictly increasing index tuples to nonzero coefficient functions, so two
forms are equal iff their term tables are equal.

``*`` between forms is the wedge product; functions and scalars act as
0-forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError, InvalidInput, ModelMismatch
from .funcalg import DiscFunc, HalfFunc, _ExactFunc

__all__ = [
    "Form",
    "HalfForm",
    "DiscForm",
    "BoundaryForm",
    "BasicInvariance",
    "wedge",
    "ext_d",
    "contract",
    "lie_derivative",
    "is_basic_invariant",
    "boundary_pullback",
    "eval_at",
]


def _sort_sign(key: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``key``; 0 if an index repeats."""
    if len(set(key)) != len(key):
        return 0, ()
    inversions = sum(1 for a, b in itertools.combinations(key, 2) if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(key))


class Form:
    """Common implementation; use :class:`HalfForm` or :class:`DiscForm`."""

    model = ""
    func_cls: type[_ExactFunc] = _ExactFunc
    _last_names: tuple[str, str] = ("", "")

    __slots__ = ("dim", "degree", "_terms", "_hash")

    def __init__(self, dim: int, degree: int, terms: Mapping | None = None):
        if degree < 0 or degree > dim + 2:
            raise InvalidInput(f"degree {degree} impossible on a model of dimension {dim + 2}")
        acc: dict = {}
        for key, coeff in (terms or {}).items():
            idx = tuple(self.index_of(dim, k) for k in key)
            if len(idx) != degree:
                raise InvalidInput(f"key {key!r} has length {len(idx)}, expected degree {degree}")
            sign, canon = _sort_sign(idx)
            if sign == 0:
                continue
            c = self._coerce_coeff(dim, coeff)
            acc[canon] = acc.get(canon, self.func_cls.zero(dim)) + c * sign
        self._set(dim, degree, acc)

    def _set(self, dim, degree, terms):
        self.dim = dim
        self.degree = degree
        self._terms = {k: c for k, c in terms.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, dim, degree, terms):
        obj = cls.__new__(cls)
        obj._set(dim, degree, terms)
        return obj

    @classmethod
    def _coerce_coeff(cls, dim, coeff):
        if isinstance(coeff, _ExactFunc):
            if not isinstance(coeff, cls.func_cls):
                raise ModelMismatch(f"{cls.__name__} needs {cls.func_cls.__name__} coefficients")
            if coeff.dim != dim:
                raise ModelMismatch(f"coefficient base dimension {coeff.dim} != {dim}")
            return coeff
        return cls.func_cls.constant(dim, coeff)

    # coordinates --------------------------------------------------------
    @classmethod
    def basis_names(cls, dim: int) -> list[str]:
        return [f"dx{i + 1}" for i in range(dim)] + ["d" + n for n in cls._last_names]

    @classmethod
    def coordinate_names(cls, dim: int) -> list[str]:
        return [f"x{i + 1}" for i in range(dim)] + list(cls._last_names)

    @classmethod
    def index_of(cls, dim: int, name) -> int:
        if isinstance(name, (int, np.integer)):
            if not 0 <= name < dim + 2:
                raise InvalidInput(f"coordinate index {name} out of range")
            return int(name)
        name = str(name)
        for prefix in ("d/d", "d"):
            if name.startswith(prefix) and name[len(prefix):] in cls.coordinate_names(dim):
                name = name[len(prefix):]
                break
        names = cls.coordinate_names(dim)
        if name not in names:
            raise InvalidInput(f"unknown coordinate {name!r} on the {cls.model} model (dim {dim})")
        return names.index(name)

    @property
    def n(self) -> int:
        return self.dim + 2

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, dim: int, degree: int = 0):
        return cls._raw(dim, degree, {})

    @classmethod
    def function(cls, f) -> "Form":
        if not isinstance(f, cls.func_cls):
            raise ModelMismatch(f"expected {cls.func_cls.__name__}")
        return cls._raw(f.dim, 0, {(): f} if f else {})

    @classmethod
    def basis(cls, dim: int, *names) -> "Form":
        """Wedge of basis covectors, e.g. ``HalfForm.basis(0, "ds", "dtheta")``."""
        return cls(dim, len(names), {tuple(names): 1})

    # inspection ---------------------------------------------------------
    @property
    def terms(self) -> list[tuple[tuple[int, ...], _ExactFunc]]:
        return sorted(self._terms.items())

    def coeff(self, key) -> _ExactFunc:
        idx = tuple(self.index_of(self.dim, k) for k in key)
        sign, canon = _sort_sign(idx)
        c = self._terms.get(canon)
        if sign == 0 or c is None:
            return self.func_cls.zero(self.dim)
        return c * sign

    def key_names(self, key) -> list[str]:
        names = self.basis_names(self.dim)
        return [names[i] for i in key]

    def is_zero(self) -> bool:
        return not self._terms

    def is_real(self) -> bool:
        return all(c.is_real() for c in self._terms.values())

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return (
            type(self).model == type(other).model
            and self.dim == other.dim
            and self.degree == other.degree
            and self._terms == other._terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.model, self.dim, self.degree, frozenset(self._terms.items())))
        return self._hash

    # algebra ------------------------------------------------------------
    def _check_same(self, other: "Form"):
        if type(self).model != type(other).model:
            raise ModelMismatch(f"cannot combine {self.model} and {other.model} forms")
        if self.dim != other.dim:
            raise ModelMismatch(f"base dimension mismatch {self.dim} vs {other.dim}")

    def _as_form(self, other) -> "Form":
        if isinstance(other, Form):
            self._check_same(other)
            return other
        if isinstance(other, _ExactFunc):
            return self.function(self._coerce_coeff(self.dim, other))
        return self.function(self.func_cls.constant(self.dim, other))

    def __add__(self, other):
        other = self._as_form(other)
        if other.degree != self.degree:
            if other.is_zero():
                return self
            if self.is_zero():
                return other
            raise InvalidInput(f"cannot add forms of degrees {self.degree} and {other.degree}")
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return self._raw(self.dim, self.degree, out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self.dim, self.degree, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._as_form(other))

    def __rsub__(self, other):
        return self._as_form(other) - self

    def __mul__(self, other):
        return wedge(self, self._as_form(other))

    def __rmul__(self, other):
        return wedge(self._as_form(other), self)

    def __pow__(self, n: int):
        out = self.function(self.func_cls.constant(self.dim, 1))
        for _ in range(n):
            out = wedge(out, self)
        return out

    def map_coefficients(self, fn) -> "Form":
        return self._raw(self.dim, self.degree, {k: fn(c) for k, c in self._terms.items()})

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "degree": self.degree,
            "terms": [{"key": self.key_names(k), "coeff": c.to_json()} for k, c in self.terms],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Form":
        dim = int(data["dim"])
        terms: dict = {}
        for t in data.get("terms", []):
            key = tuple(t["key"])
            c = cls.func_cls.from_json(t["coeff"])
            terms[key] = terms[key] + c if key in terms else c
        return cls(dim, int(data["degree"]), terms)

    def __repr__(self):
        return f"{type(self).__name__}({self.dim}, {self.degree}, {str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        out = ""
        for key, c in self.terms:
            names, c = self._display(key, c)
            basis = "^".join(names)
            text = str(c)
            negative = False
            compound = " + " in text or " - " in text[1:]
            if not compound and text.startswith("-"):
                negative, text = True, text[1:]
            if compound:
                text = f"({text})"
            if basis:
                body = basis if text == "1" else f"{text} {basis}"
            else:
                body = text
            if not out:
                out = ("-" if negative else "") + body
            else:
                out += (" - " if negative else " + ") + body
        return out

    def _display(self, key, c):
        return self.key_names(key), c

    # numerics -----------------------------------------------------------
    def _eval_coeff(self, c, point) -> complex:
        raise NotImplementedError

    def _check_point(self, point):
        point = [float(p) for p in point]
        if len(point) != self.n:
            raise DomainError(f"expected {self.n} coordinates, got {len(point)}")
        return point

    def eval_at(self, point) -> np.ndarray:
        """Antisymmetric array of coefficient values at ``point`` (shape ``(n,)*degree``)."""
        point = self._check_point(point)
        real = self.is_real()
        dtype = float if real else complex
        arr = np.zeros((self.n,) * self.degree, dtype=dtype)
        for key, c in self._terms.items():
            val = self._eval_coeff(c, point)
            val = val.real if real else val
            if self.degree == 0:
                arr[()] += val
                continue
            for perm in itertools.permutations(range(self.degree)):
                sign, _ = _sort_sign(perm)
                arr[tuple(key[p] for p in perm)] += sign * val
        return arr

    def component_at(self, key, point) -> complex:
        c = self.coeff(key)
        return self._eval_coeff(c, self._check_point(point))


class HalfForm(Form):
    model = "half"
    func_cls = HalfFunc
    _last_names = ("theta", "s")
    __slots__ = ()

    @property
    def theta(self) -> int:
        return self.dim

    @property
    def s(self) -> int:
        return self.dim + 1

    def _display(self, key, c):
        # print ds^dtheta rather than -dtheta^ds
        names = self.key_names(key)
        if self.theta in key and self.s in key:
            return names[:-2] + ["ds", "dtheta"], -c
        return names, c

    def _check_point(self, point):
        point = super()._check_point(point)
        if point[self.dim + 1] < 0:
            raise DomainError(f"s = {point[self.dim + 1]} < 0 is outside the half model")
        return point

    def _eval_coeff(self, c, point):
        d = self.dim
        return c.evaluate(point[:d], point[d], point[d + 1])


class DiscForm(Form):
    model = "disc"
    func_cls = DiscFunc
    _last_names = ("u", "v")
    __slots__ = ()

    def _eval_coeff(self, c, point):
        d = self.dim
        return c.evaluate(point[:d], point[d], point[d + 1])


class BoundaryForm(HalfForm):
    """Pullback of a half-model form to ``{s = 0}``: no ``ds`` and no positive s-powers."""

    __slots__ = ()

    def _set(self, dim, degree, terms):
        super()._set(dim, degree, terms)
        for key, c in self._terms.items():
            if dim + 1 in key:
                raise InvalidInput(f"boundary form contains ds in {key!r}")
            if any(m for _, _, m in c.keys()):
                raise InvalidInput("boundary form coefficients must not depend on s")


# operations -------------------------------------------------------------

def wedge(a: Form, b: Form) -> Form:
    a._check_same(b)
    out: dict = {}
    for k1, c1 in a._terms.items():
        for k2, c2 in b._terms.items():
            sign, key = _sort_sign(k1 + k2)
            if sign == 0:
                continue
            prod = c1 * c2
            if sign < 0:
                prod = -prod
            out[key] = out[key] + prod if key in out else prod
    cls = type(a) if not isinstance(a, BoundaryForm) else HalfForm
    return cls._raw(a.dim, a.degree + b.degree, out)


def ext_d(beta: Form) -> Form:
    """Exterior derivative; raises SingularDifferential on ``d(s^(1/2))``."""
    out: dict = {}
    cls = type(beta) if not isinstance(beta, BoundaryForm) else HalfForm
    if beta.degree >= beta.n:
        return cls._raw(beta.dim, beta.degree + 1, {})
    for key, c in beta._terms.items():
        for i in range(beta.n):
            if i in key:
                continue
            dc = c.partial(i)
            if not dc:
                continue
            sign, new = _sort_sign((i,) + key)
            term = dc if sign > 0 else -dc
            out[new] = out[new] + term if new in out else term
    return cls._raw(beta.dim, beta.degree + 1, out)


def contract(v, beta: Form) -> Form:
    """Interior product with the coordinate vector field ``d/d(v)``."""
    if beta.degree == 0:
        raise InvalidInput("cannot contract a vector field with a 0-form")
    i = beta.index_of(beta.dim, v)
    out: dict = {}
    for key, c in beta._terms.items():
        if i not in key:
            continue
        pos = key.index(i)
        new = key[:pos] + key[pos + 1:]
        term = c if pos % 2 == 0 else -c
        out[new] = out[new] + term if new in out else term
    cls = type(beta) if not isinstance(beta, BoundaryForm) else HalfForm
    return cls._raw(beta.dim, beta.degree - 1, out)


def lie_derivative(v, beta: Form) -> Form:
    """Cartan's formula ``L_v = i_v d + d i_v`` for a coordinate field."""
    d_beta = ext_d(beta)
    first = contract(v, d_beta) if d_beta.degree > 0 else d_beta
    if beta.degree == 0:
        return first
    return first + ext_d(contract(v, beta))


@dataclass(frozen=True)
class BasicInvariance:
    ok: bool
    witness: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def __iter__(self):
        return iter((self.ok, self.witness))


def is_basic_invariant(beta: HalfForm) -> BasicInvariance:
    """Invariant (no theta-dependence) and basic on ``{s=0}``.

    Basic means the dtheta-part that survives pullback to the boundary
    vanishes there; in this function class that is divisibility by ``s`` of
    every coefficient whose key has dtheta but not ds.
    """
    if not isinstance(beta, HalfForm):
        raise ModelMismatch("is_basic_invariant needs a half-model form")
    witness = []
    for key, c in beta.terms:
        names = beta.key_names(key)
        bad_modes = sorted({k for _, k, _ in c.keys() if k != 0})
        if bad_modes:
            witness.append({"key": names, "reason": "theta-dependent coefficient", "modes": bad_modes})
        if beta.theta in key and beta.s not in key and c.divide_by_s() is None:
            witness.append({"key": names, "reason": "dtheta coefficient not divisible by s"})
    return BasicInvariance(not witness, witness)


def boundary_pullback(beta: HalfForm) -> BoundaryForm:
    out = {}
    for key, c in beta._terms.items():
        if beta.s in key:
            continue
        c0 = c.at_boundary()
        if c0:
            out[key] = c0
    return BoundaryForm._raw(beta.dim, beta.degree, out)


def eval_at(beta: Form, point) -> np.ndarray:
    return beta.eval_at(point)
