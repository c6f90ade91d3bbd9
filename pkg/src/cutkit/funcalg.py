"""Exact functions on the two local models and the smooth-descent test.

Half model ``D^d x S^1 x [0, eps)`` with coordinates ``(x, theta, s)``:
a :class:`HalfFunc` is a finite sum ``c * x^alpha * s^(m/2) * e^(i k theta)``.

Disc model ``D^d x D^2`` with coordinates ``(x, u, v)`` and ``z = u + i v``:
a :class:`DiscFunc` is a finite sum ``c * x^alpha * z^p * zbar^q``.

The quotient map sends ``(x, theta, s)`` to ``(x, sqrt(s) e^(i theta))``, so a
half-model monomial is the pullback of a polynomial exactly when
``s^(m/2) e^(ik theta) = z^((m+k)/2) zbar^((m-k)/2)`` has nonnegative integer
exponents.  Everything here is exact: coefficients are Gaussian rationals.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import SingularDifferential

__all__ = [
    "CRational",
    "HalfFunc",
    "DiscFunc",
    "DescentVerdict",
    "mono_descends",
    "descend_function",
    "lift_function",
    "is_smooth_on_half",
    "is_invariant",
    "rescale_boundary_function",
    "split_sqrt",
]


class CRational:
    """Exact complex rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value) -> "CRational":
        if isinstance(value, CRational):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, str):
            return cls.parse(value)
        return cls(value, 0)

    @classmethod
    def parse(cls, text: str) -> "CRational":
        text = text.strip().replace(" ", "")
        if text.endswith("i"):
            body = text[:-1]
            # split "a+b" / "a-b" at the last sign that is not a leading sign
            for pos in range(len(body) - 1, 0, -1):
                if body[pos] in "+-" and body[pos - 1] not in "eE/":
                    im = body[pos:]
                    im = im + "1" if im in "+-" else im
                    return cls(Fraction(body[:pos]), Fraction(im))
            im = body if body not in ("", "+", "-") else body + "1"
            return cls(0, Fraction(im))
        return cls(Fraction(text), 0)

    def __add__(self, other):
        other = CRational.coerce(other)
        return CRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = CRational.coerce(other)
        return CRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return CRational.coerce(other) - self

    def __neg__(self):
        return CRational(-self.re, -self.im)

    def __mul__(self, other):
        other = CRational.coerce(other)
        return CRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = CRational.coerce(other)
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero")
        num = self * other.conjugate()
        return CRational(num.re / den, num.im / den)

    def conjugate(self) -> "CRational":
        return CRational(self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CRational, complex)):
            other = CRational.coerce(other)
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"CRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{_fmt_imag(self.im)}"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{_fmt_imag(abs(self.im))})"


def _fmt_imag(im: Fraction) -> str:
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    return f"{im}i"


ZERO = CRational(0)
ONE = CRational(1)
I_UNIT = CRational(0, 1)


_SCALARS = (int, Fraction, CRational, complex, str)


def split_sqrt(value) -> tuple[Fraction, int]:
    """Write ``sqrt(value) = rho * sqrt(r)`` with ``rho`` rational, ``r`` squarefree."""
    value = Fraction(value)
    if value <= 0:
        raise ValueError("split_sqrt needs a positive rational")
    n = value.numerator * value.denominator
    outside, d = 1, 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
            outside *= d
        d += 1
    return Fraction(outside, value.denominator), n


class _ExactFunc:
    """Shared sparse-dictionary arithmetic for the two function classes.

    ``radical`` is a squarefree integer ``r``; terms of odd parity carry an
    implicit factor ``sqrt(r)``.  It is 1 unless produced by rescaling with a
    non-square factor.
    """

    __slots__ = ("dim", "_terms", "radical", "_hash")

    def __init__(self, dim: int, terms: Mapping | None = None, radical: int = 1):
        if dim < 0:
            raise ValueError("base dimension must be nonnegative")
        clean = {}
        for key, coeff in (terms or {}).items():
            key = self._normalize_key(dim, key)
            c = CRational.coerce(coeff)
            clean[key] = clean.get(key, ZERO) + c
        self._set(dim, clean, radical)

    def _set(self, dim, terms, radical):
        self.dim = dim
        self._terms = {k: c for k, c in terms.items() if c}
        if not any(self._is_odd(k) for k in self._terms):
            radical = 1
        self.radical = int(radical)
        self._hash = None

    @classmethod
    def _raw(cls, dim, terms, radical=1):
        obj = cls.__new__(cls)
        obj._set(dim, terms, radical)
        return obj

    # subclass hooks -----------------------------------------------------
    @staticmethod
    def _normalize_key(dim, key):
        raise NotImplementedError

    @staticmethod
    def _mul_key(a, b):
        raise NotImplementedError

    @staticmethod
    def _conj_key(key):
        raise NotImplementedError

    @staticmethod
    def _is_odd(key) -> bool:
        raise NotImplementedError

    # basic protocol -----------------------------------------------------
    @property
    def terms(self) -> list[tuple[tuple, CRational]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def coeff(self, key) -> CRational:
        return self._terms.get(key, ZERO)

    def keys(self):
        return sorted(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def has_odd_terms(self) -> bool:
        return any(self._is_odd(k) for k in self._terms)

    def is_real(self) -> bool:
        """Reality flag: coefficients are conjugate-symmetric under the key involution."""
        return all(
            self._terms.get(self._conj_key(k), ZERO) == c.conjugate()
            for k, c in self._terms.items()
        )

    def __eq__(self, other):
        if type(other) is not type(self):
            if isinstance(other, (int, Fraction, CRational)):
                return self == self.constant(self.dim, other)
            return NotImplemented
        return (
            self.dim == other.dim
            and self.radical == other.radical
            and self._terms == other._terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.dim, self.radical, frozenset(self._terms.items())))
        return self._hash

    # arithmetic ---------------------------------------------------------
    @classmethod
    def constant(cls, dim, value=1):
        return cls(dim, {cls._zero_key(dim): value})

    @classmethod
    def zero(cls, dim):
        return cls._raw(dim, {}, 1)

    def _lift_scalar(self, other):
        if isinstance(other, _ExactFunc):
            if type(other) is not type(self):
                raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
            if other.dim != self.dim:
                raise ValueError(f"base dimension mismatch: {self.dim} vs {other.dim}")
            return other
        return self.constant(self.dim, other)

    def _joint_radical(self, other) -> int:
        if self.radical == other.radical:
            return self.radical
        if not self.has_odd_terms():
            return other.radical
        if not other.has_odd_terms():
            return self.radical
        raise ValueError(
            f"cannot combine functions carrying sqrt({self.radical}) and sqrt({other.radical})"
        )

    def __add__(self, other):
        if not isinstance(other, _SCALARS + (_ExactFunc,)):
            return NotImplemented
        other = self._lift_scalar(other)
        r = self._joint_radical(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, ZERO) + c
        return self._raw(self.dim, out, r)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self.dim, {k: -c for k, c in self._terms.items()}, self.radical)

    def __sub__(self, other):
        return self + (-self._lift_scalar(other))

    def __rsub__(self, other):
        return self._lift_scalar(other) - self

    def __mul__(self, other):
        if not isinstance(other, _SCALARS + (_ExactFunc,)):
            return NotImplemented
        if not isinstance(other, _ExactFunc):
            c = CRational.coerce(other)
            return self._raw(self.dim, {k: v * c for k, v in self._terms.items()}, self.radical)
        other = self._lift_scalar(other)
        r = self._joint_radical(other)
        out: dict = {}
        for k1, c1 in self._terms.items():
            odd1 = self._is_odd(k1)
            for k2, c2 in other._terms.items():
                c = c1 * c2
                if odd1 and self._is_odd(k2):
                    c = c * r
                key = self._mul_key(k1, k2)
                out[key] = out.get(key, ZERO) + c
        return self._raw(self.dim, out, r)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not in the class")
        out = self.constant(self.dim, 1)
        for _ in range(n):
            out = out * self
        return out

    def conjugate(self):
        return self._raw(
            self.dim,
            {self._conj_key(k): c.conjugate() for k, c in self._terms.items()},
            self.radical,
        )

    def map_terms(self, fn):
        """Rebuild from ``fn(key, coeff) -> iterable of (key, coeff)``."""
        out: dict = {}
        for k, c in self._terms.items():
            for k2, c2 in fn(k, c):
                out[k2] = out.get(k2, ZERO) + c2
        return self._raw(self.dim, out, self.radical)

    def _radical_factor(self, key) -> float:
        return math.sqrt(self.radical) if self.radical != 1 and self._is_odd(key) else 1.0


class HalfFunc(_ExactFunc):
    """``sum c * x^alpha * s^(m/2) * e^(i k theta)``; keys are ``(alpha, k, m)``."""

    __slots__ = ()

    @staticmethod
    def _normalize_key(dim, key):
        alpha, k, m = key
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != dim or any(a < 0 for a in alpha):
            raise ValueError(f"bad multi-index {alpha!r} for base dimension {dim}")
        if int(m) < 0:
            raise ValueError(f"half-power m={m} must be nonnegative")
        return (alpha, int(k), int(m))

    @staticmethod
    def _zero_key(dim):
        return ((0,) * dim, 0, 0)

    @staticmethod
    def _mul_key(a, b):
        return (tuple(x + y for x, y in zip(a[0], b[0])), a[1] + b[1], a[2] + b[2])

    @staticmethod
    def _conj_key(key):
        return (key[0], -key[1], key[2])

    @staticmethod
    def _is_odd(key):
        return key[2] % 2 == 1

    # constructors -------------------------------------------------------
    @classmethod
    def monomial(cls, dim, alpha=None, k=0, m=0, coeff=1):
        alpha = tuple(alpha) if alpha is not None else (0,) * dim
        return cls(dim, {(alpha, k, m): coeff})

    @classmethod
    def x(cls, dim, i):
        alpha = [0] * dim
        alpha[i] = 1
        return cls.monomial(dim, alpha)

    @classmethod
    def s(cls, dim=0, power=1):
        return cls.monomial(dim, m=2 * power)

    @classmethod
    def sqrt_s(cls, dim=0):
        return cls.monomial(dim, m=1)

    @classmethod
    def expi(cls, dim=0, k=1):
        return cls.monomial(dim, k=k)

    @classmethod
    def cos(cls, dim=0, k=1):
        half = Fraction(1, 2)
        return cls(dim, {((0,) * dim, k, 0): half, ((0,) * dim, -k, 0): half})

    @classmethod
    def sin(cls, dim=0, k=1):
        return cls(
            dim,
            {((0,) * dim, k, 0): CRational(0, Fraction(-1, 2)), ((0,) * dim, -k, 0): CRational(0, Fraction(1, 2))},
        )

    # calculus -----------------------------------------------------------
    def partial(self, i: int) -> "HalfFunc":
        """Partial derivative along basis direction ``i`` in the order (x_1..x_d, theta, s)."""
        d = self.dim
        if i < d:
            def rule(key, c):
                alpha, k, m = key
                if alpha[i]:
                    new = list(alpha)
                    new[i] -= 1
                    yield (tuple(new), k, m), c * alpha[i]
        elif i == d:
            def rule(key, c):
                alpha, k, m = key
                if k:
                    yield (alpha, k, m), c * CRational(0, k)
        elif i == d + 1:
            def rule(key, c):
                alpha, k, m = key
                if m == 1:
                    raise SingularDifferential(key)
                if m:
                    yield (alpha, k, m - 2), c * Fraction(m, 2)
        else:
            raise IndexError(f"no coordinate {i} on a half model of base dimension {d}")
        return self.map_terms(rule)

    def evaluate(self, x, theta, s) -> complex:
        total = 0j
        for (alpha, k, m), c in self._terms.items():
            val = complex(c) * self._radical_factor((alpha, k, m))
            for xi, a in zip(x, alpha):
                val *= xi ** a
            if m:
                val *= s ** (m / 2)
            if k:
                val *= cmath.exp(1j * k * theta)
            total += val
        return total

    def at_boundary(self) -> "HalfFunc":
        """Restriction to ``s = 0``: drop every term with a positive power of ``s``."""
        return self._raw(self.dim, {k: c for k, c in self._terms.items() if k[2] == 0}, self.radical)

    def divide_by_s(self) -> "HalfFunc | None":
        if any(k[2] < 2 for k in self._terms):
            return None
        return self._raw(self.dim, {(a, k, m - 2): c for (a, k, m), c in self._terms.items()}, self.radical)

    def min_half_power(self) -> int | None:
        return min((k[2] for k in self._terms), default=None)

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        out = {
            "dim": self.dim,
            "terms": [
                {"alpha": list(a), "k": k, "m": m, "re": str(c.re), "im": str(c.im)}
                for (a, k, m), c in self.terms
            ],
        }
        if self.radical != 1:
            out["radical"] = str(self.radical)
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "HalfFunc":
        dim = int(data["dim"])
        terms = {}
        for t in data.get("terms", []):
            key = (tuple(t.get("alpha", [0] * dim)), int(t.get("k", 0)), int(t.get("m", 0)))
            c = CRational(Fraction(t.get("re", "0")), Fraction(t.get("im", "0")))
            terms[key] = terms.get(key, ZERO) + c
        return cls(dim, terms, int(data.get("radical", 1)))

    def __repr__(self):
        return f"HalfFunc({self.dim}, {dict(self.terms)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        if self.is_real():
            pieces = []
            for (alpha, k, m), c in self.terms:
                if k < 0:
                    continue
                factors = _x_factors(alpha) + _s_factor(m) + self._radical_str((alpha, k, m))
                if k == 0:
                    pieces.append((c.re, factors))
                else:
                    pieces.append((2 * c.re, factors + [f"cos({_k_theta(k)})"]))
                    pieces.append((-2 * c.im, factors + [f"sin({_k_theta(k)})"]))
            return _join_real(pieces)
        pieces = []
        for (alpha, k, m), c in self.terms:
            factors = _x_factors(alpha) + _s_factor(m) + self._radical_str((alpha, k, m))
            if k:
                factors.append(f"e^({_k_theta(k, imaginary=True)})")
            pieces.append((c, factors))
        return _join_complex(pieces)

    def _radical_str(self, key):
        return [f"sqrt({self.radical})"] if self.radical != 1 and self._is_odd(key) else []


class DiscFunc(_ExactFunc):
    """``sum c * x^alpha * z^p * zbar^q``; keys are ``(alpha, p, q)``."""

    __slots__ = ()

    @staticmethod
    def _normalize_key(dim, key):
        alpha, p, q = key
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != dim or any(a < 0 for a in alpha):
            raise ValueError(f"bad multi-index {alpha!r} for base dimension {dim}")
        if int(p) < 0 or int(q) < 0:
            raise ValueError("z exponents must be nonnegative")
        return (alpha, int(p), int(q))

    @staticmethod
    def _zero_key(dim):
        return ((0,) * dim, 0, 0)

    @staticmethod
    def _mul_key(a, b):
        return (tuple(x + y for x, y in zip(a[0], b[0])), a[1] + b[1], a[2] + b[2])

    @staticmethod
    def _conj_key(key):
        return (key[0], key[2], key[1])

    @staticmethod
    def _is_odd(key):
        return (key[1] + key[2]) % 2 == 1

    @classmethod
    def monomial(cls, dim, alpha=None, p=0, q=0, coeff=1):
        alpha = tuple(alpha) if alpha is not None else (0,) * dim
        return cls(dim, {(alpha, p, q): coeff})

    @classmethod
    def x(cls, dim, i):
        alpha = [0] * dim
        alpha[i] = 1
        return cls.monomial(dim, alpha)

    @classmethod
    def z(cls, dim=0):
        return cls.monomial(dim, p=1)

    @classmethod
    def zbar(cls, dim=0):
        return cls.monomial(dim, q=1)

    @classmethod
    def u(cls, dim=0):
        half = Fraction(1, 2)
        return cls(dim, {((0,) * dim, 1, 0): half, ((0,) * dim, 0, 1): half})

    @classmethod
    def v(cls, dim=0):
        return cls(
            dim,
            {((0,) * dim, 1, 0): CRational(0, Fraction(-1, 2)), ((0,) * dim, 0, 1): CRational(0, Fraction(1, 2))},
        )

    @classmethod
    def norm2(cls, dim=0, power=1):
        """``|z|^(2*power) = (u^2 + v^2)^power``."""
        return cls.monomial(dim, p=power, q=power)

    def partial(self, i: int) -> "DiscFunc":
        """Partial derivative along basis direction ``i`` in the order (x_1..x_d, u, v)."""
        d = self.dim
        if i < d:
            def rule(key, c):
                alpha, p, q = key
                if alpha[i]:
                    new = list(alpha)
                    new[i] -= 1
                    yield (tuple(new), p, q), c * alpha[i]
        elif i in (d, d + 1):
            # d/du = d/dz + d/dzbar ; d/dv = i d/dz - i d/dzbar
            wz, wzb = (ONE, ONE) if i == d else (I_UNIT, -I_UNIT)

            def rule(key, c):
                alpha, p, q = key
                if p:
                    yield (alpha, p - 1, q), c * p * wz
                if q:
                    yield (alpha, p, q - 1), c * q * wzb
        else:
            raise IndexError(f"no coordinate {i} on a disc model of base dimension {d}")
        return self.map_terms(rule)

    def evaluate(self, x, u, v) -> complex:
        z = complex(u, v)
        zb = z.conjugate()
        total = 0j
        for (alpha, p, q), c in self._terms.items():
            val = complex(c) * self._radical_factor((alpha, p, q))
            for xi, a in zip(x, alpha):
                val *= xi ** a
            total += val * z ** p * zb ** q
        return total

    def at_origin(self) -> "DiscFunc":
        """Restriction to ``z = 0``."""
        return self._raw(self.dim, {k: c for k, c in self._terms.items() if k[1] == k[2] == 0}, self.radical)

    def real_uv_terms(self) -> dict:
        """Expand in real monomials ``x^alpha u^a v^b``; values are CRational."""
        out: dict = {}
        for (alpha, p, q), c in self._terms.items():
            # (u + i v)^p (u - i v)^q
            poly = {(0, 0): ONE}
            for factor in [CRational(0, 1)] * p + [CRational(0, -1)] * q:
                nxt: dict = {}
                for (a, b), w in poly.items():
                    nxt[(a + 1, b)] = nxt.get((a + 1, b), ZERO) + w
                    nxt[(a, b + 1)] = nxt.get((a, b + 1), ZERO) + w * factor
                poly = nxt
            for (a, b), w in poly.items():
                key = (alpha, a, b)
                out[key] = out.get(key, ZERO) + c * w
        return {k: v for k, v in out.items() if v}

    def to_json(self) -> dict:
        out = {
            "dim": self.dim,
            "terms": [
                {"alpha": list(a), "p": p, "q": q, "re": str(c.re), "im": str(c.im)}
                for (a, p, q), c in self.terms
            ],
        }
        if self.radical != 1:
            out["radical"] = str(self.radical)
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "DiscFunc":
        dim = int(data["dim"])
        terms = {}
        for t in data.get("terms", []):
            key = (tuple(t.get("alpha", [0] * dim)), int(t.get("p", 0)), int(t.get("q", 0)))
            c = CRational(Fraction(t.get("re", "0")), Fraction(t.get("im", "0")))
            terms[key] = terms.get(key, ZERO) + c
        return cls(dim, terms, int(data.get("radical", 1)))

    def __repr__(self):
        return f"DiscFunc({self.dim}, {dict(self.terms)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        rad = f"sqrt({self.radical})" if self.radical != 1 else None
        if self.is_real():
            pieces = []
            for (alpha, a, b), c in sorted(self.real_uv_terms().items(), key=lambda kv: (kv[0][0], -kv[0][1], -kv[0][2])):
                factors = _x_factors(alpha) + _pow("u", a) + _pow("v", b)
                if rad and (a + b) % 2:
                    factors.append(rad)
                pieces.append((c.re, factors))
            return _join_real(pieces)
        pieces = []
        for (alpha, p, q), c in self.terms:
            factors = _x_factors(alpha) + _pow("z", p) + _pow("zbar", q)
            if rad and (p + q) % 2:
                factors.append(rad)
            pieces.append((c, factors))
        return _join_complex(pieces)


# display helpers -------------------------------------------------------

def _pow(name, e):
    if e == 0:
        return []
    return [name] if e == 1 else [f"{name}^{e}"]


def _x_factors(alpha):
    out = []
    for i, a in enumerate(alpha):
        out += _pow(f"x{i + 1}", a)
    return out


def _s_factor(m):
    if m == 0:
        return []
    if m % 2 == 0:
        return _pow("s", m // 2)
    return [f"s^({m}/2)"]


def _k_theta(k, imaginary=False):
    k = abs(k) if not imaginary else k
    prefix = "i " if imaginary else ""
    if k == 1:
        return f"{prefix}theta"
    if k == -1:
        return f"-{prefix}theta"
    return f"{k}{prefix}theta"


def _join_real(pieces):
    parts = []
    for c, factors in pieces:
        if c == 0:
            continue
        mag = abs(c)
        body = " ".join(factors)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag} {body}"
        parts.append(("-" if c < 0 else "+", text))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out


def _join_complex(pieces):
    parts = []
    for c, factors in pieces:
        body = " ".join(factors)
        if not body:
            parts.append(str(c))
        elif c == 1:
            parts.append(body)
        else:
            parts.append(f"{c} {body}")
    return " + ".join(parts) if parts else "0"


# descent ---------------------------------------------------------------

def mono_descends(m: int, k: int) -> bool:
    """Is ``s^(m/2) e^(ik theta)`` the pullback of ``z^a zbar^b`` with ``a, b >= 0``?"""
    return m >= abs(k) and (m - k) % 2 == 0


@dataclass(frozen=True)
class DescentVerdict:
    descends: bool
    image: DiscFunc | None = None
    offending_modes: list = field(default_factory=list)

    def __post_init__(self):
        if self.descends != (not self.offending_modes) or self.descends != (self.image is not None):
            raise ValueError("inconsistent descent verdict")

    def to_json(self) -> dict:
        return {
            "descends": self.descends,
            "image": self.image.to_json() if self.image is not None else None,
            "offending_modes": [
                {"alpha": list(a), "k": k, "m": m} for a, k, m in self.offending_modes
            ],
        }


def descend_function(f: HalfFunc) -> DescentVerdict:
    """Decide whether ``f`` is the pullback of a polynomial in ``(x, z, zbar)``."""
    offending = [key for key in f.keys() if not mono_descends(key[2], key[1])]
    if offending:
        return DescentVerdict(False, None, offending)
    image = {
        (alpha, (m + k) // 2, (m - k) // 2): c for (alpha, k, m), c in f.terms
    }
    return DescentVerdict(True, DiscFunc._raw(f.dim, image, f.radical), [])


def lift_function(g: DiscFunc) -> HalfFunc:
    """Pull back along ``(x, theta, s) -> (x, sqrt(s) e^(i theta))``."""
    terms = {(alpha, p - q, p + q): c for (alpha, p, q), c in g.terms}
    return HalfFunc._raw(g.dim, terms, g.radical)


def is_smooth_on_half(f: HalfFunc) -> bool:
    return all(m % 2 == 0 for _, _, m in f.keys())


def is_invariant(f: HalfFunc) -> bool:
    return all(k == 0 for _, k, _ in f.keys())


def rescale_boundary_function(f: HalfFunc, lam) -> HalfFunc:
    """Substitute ``s -> lam * s``.

    Odd half-powers need ``sqrt(lam)``; a non-square factor is kept exactly as
    a radical on the result instead of being approximated.
    """
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError(f"rescaling factor must be positive, got {lam}")
    rho, r = split_sqrt(lam)
    # odd terms already carry sqrt(f.radical); merge the two radicals
    rho_merge, new_radical = split_sqrt(r * f.radical)
    terms = {}
    for (alpha, k, m), c in f.terms:
        scaled = c * (rho ** m) * (Fraction(r) ** (m // 2))
        if m % 2:
            scaled = scaled * rho_merge
        terms[(alpha, k, m)] = scaled
    return HalfFunc._raw(f.dim, terms, new_radical if f.has_odd_terms() else 1)

