"""Seeded random objects for the property suites.

Sizes follow the suite defaults: base dimension at most 3, degree at most 3,
at most 6 terms per form, half-powers ``m <= 6`` and modes ``|k| <= 3``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .blowup import BlowupLiftInput, PolarDiffeoPair
from .cutting import LocalMap
from .expr import Expr, as_expr, cos, exp, parse, sin, var
from .forms import DiscForm, HalfForm
from .funcalg import CRational, DiscFunc, HalfFunc

MAX_DIM = 3
MAX_DEGREE = 3
MAX_TERMS = 6
MAX_M = 6
MAX_K = 3


def rational(rng, lo: int = -3, hi: int = 3, nonzero: bool = True) -> Fraction:
    while True:
        p = int(rng.integers(lo, hi + 1))
        q = int(rng.integers(1, 4))
        if p or not nonzero:
            return Fraction(p, q)


def coefficient(rng, complex_prob: float = 0.2) -> CRational:
    re = rational(rng)
    im = rational(rng, nonzero=False) if rng.random() < complex_prob else 0
    return CRational(re, im)


def _alpha(rng, dim, max_exp=2):
    return tuple(int(a) for a in rng.integers(0, max_exp + 1, size=dim))


def half_func(rng, dim: int, terms: int | None = None, invariant: bool = False, even: bool = False,
              allow_m1: bool = True, max_m: int = MAX_M) -> HalfFunc:
    terms = int(rng.integers(1, 4)) if terms is None else terms
    out = {}
    for _ in range(terms):
        k = 0 if invariant else int(rng.integers(-MAX_K, MAX_K + 1))
        if even:
            m = 2 * int(rng.integers(0, max_m // 2 + 1))
        else:
            choices = [m for m in range(max_m + 1) if allow_m1 or m != 1]
            m = int(rng.choice(choices))
        out[(_alpha(rng, dim), k, m)] = coefficient(rng)
    f = HalfFunc(dim, out)
    return f if f else HalfFunc.constant(dim, 1)


def disc_func(rng, dim: int, terms: int | None = None, invariant: bool = False, max_pq: int = 3) -> DiscFunc:
    terms = int(rng.integers(1, 4)) if terms is None else terms
    out = {}
    for _ in range(terms):
        p = int(rng.integers(0, max_pq + 1))
        q = p if invariant else int(rng.integers(0, max_pq + 1))
        out[(_alpha(rng, dim), p, q)] = coefficient(rng)
    g = DiscFunc(dim, out)
    return g if g else DiscFunc.constant(dim, 1)


def _keys(rng, n, degree, count):
    all_keys = list(itertools.combinations(range(n), degree))
    idx = rng.choice(len(all_keys), size=min(count, len(all_keys)), replace=False)
    return [all_keys[i] for i in sorted(int(i) for i in idx)]


def _dim_degree(rng, dim, degree):
    dim = int(rng.integers(0, MAX_DIM + 1)) if dim is None else dim
    if degree is None:
        degree = int(rng.integers(0, min(MAX_DEGREE, dim + 2) + 1))
    return dim, degree


def basic_form(rng, dim: int | None = None, degree: int | None = None, max_terms: int = MAX_TERMS) -> HalfForm:
    """A random form that is basic on the boundary and invariant (so it can be cut).

    Coefficients have ``k = 0`` and even half-powers; dtheta terms without ds
    are pre-multiplied by ``s``.
    """
    dim, degree = _dim_degree(rng, dim, degree)
    th, s = dim, dim + 1
    terms = {}
    for key in _keys(rng, dim + 2, degree, int(rng.integers(1, max_terms + 1))):
        needs_s = th in key and s not in key
        c = half_func(rng, dim, invariant=True, even=True, max_m=MAX_M - 2 if needs_s else MAX_M)
        if needs_s:
            c = c * HalfFunc.s(dim)
        terms[key] = c
    return HalfForm(dim, degree, terms)


def half_form(rng, dim: int | None = None, degree: int | None = None, max_terms: int = MAX_TERMS,
              allow_m1: bool = False) -> HalfForm:
    """Any form on the half model (coefficients with ``m = 1`` excluded by default so d is defined)."""
    dim, degree = _dim_degree(rng, dim, degree)
    terms = {}
    for key in _keys(rng, dim + 2, degree, int(rng.integers(1, max_terms + 1))):
        terms[key] = half_func(rng, dim, allow_m1=allow_m1)
    return HalfForm(dim, degree, terms)


def disc_form(rng, dim: int | None = None, degree: int | None = None, max_terms: int = MAX_TERMS) -> DiscForm:
    dim, degree = _dim_degree(rng, dim, degree)
    terms = {}
    for key in _keys(rng, dim + 2, degree, int(rng.integers(1, max_terms + 1))):
        terms[key] = disc_func(rng, dim)
    return DiscForm(dim, degree, terms)


def invariant_disc_form(rng, dim: int | None = None, factors: int | None = None) -> DiscForm:
    """Wedge of invariant building blocks: dx_i, u du + v dv, u dv - v du, du^dv, times |z|^2-polynomials.

    Occasionally a bare du or dv is mixed in so the suite also meets forms
    outside the image of cutting.
    """
    dim = int(rng.integers(0, MAX_DIM + 1)) if dim is None else dim
    u, v = DiscFunc.u(dim), DiscFunc.v(dim)
    du, dv = DiscForm.basis(dim, "du"), DiscForm.basis(dim, "dv")
    blocks = [du * u + dv * v, dv * u - du * v, DiscForm.basis(dim, "du", "dv")]
    blocks += [DiscForm.basis(dim, f"dx{i + 1}") for i in range(dim)]
    if rng.random() < 0.2:
        blocks += [du, dv]
    factors = int(rng.integers(0, 3)) if factors is None else factors
    out = DiscForm.function(disc_func(rng, dim, invariant=True))
    for _ in range(factors):
        out = out * blocks[int(rng.integers(len(blocks)))]
    if out.is_zero():
        out = DiscForm.function(disc_func(rng, dim, invariant=True))
    return out


# maps ---------------------------------------------------------------------

def _small_expr(rng, names, depth: int = 2) -> Expr:
    """Random smooth real expression in the given variables."""
    kind = int(rng.integers(0, 5 if depth > 0 else 2))
    c = as_expr(rational(rng, -2, 2))
    x = var(names[int(rng.integers(len(names)))])
    if kind == 0:
        return c * x
    if kind == 1:
        return c * x * var(names[int(rng.integers(len(names)))])
    inner = _small_expr(rng, names, depth - 1)
    if kind == 2:
        return c * sin(inner)
    if kind == 3:
        return c * cos(inner) - c
    return c * exp(inner) - c


def local_map(rng, source_dim: int | None = None, target_dim: int | None = None, degenerate_prob: float = 0.2) -> LocalMap:
    d = int(rng.integers(1, MAX_DIM + 1)) if source_dim is None else source_dim
    dp = int(rng.integers(1, MAX_DIM + 1)) if target_dim is None else target_dim
    names = [f"x{i + 1}" for i in range(d)] + ["s"]
    degenerate = rng.random() < degenerate_prob
    comps = []
    for i in range(dp):
        lead = 0 if degenerate else i % d
        base = var(f"x{lead + 1}")
        comps.append(base + _small_expr(rng, names) * Fraction(1, 4) + var("s") * rational(rng, -1, 1, nonzero=False))
    phase = _small_expr(rng, names)
    b = exp(parse("I") * phase)
    return LocalMap(d, dp, tuple(comps), b)


def local_map_pair(rng) -> tuple[LocalMap, LocalMap]:
    d1, d2, d3 = (int(x) for x in rng.integers(1, MAX_DIM + 1, size=3))
    return local_map(rng, d1, d2), local_map(rng, d2, d3)


def lift_input(rng, form: str = "hadamard", t_dim: int = 1, x_dim: int = 2) -> BlowupLiftInput:
    """Random Hadamard data with ``A(t, 0)`` close to a positive multiple of the identity."""
    ts = [f"t{i + 1}" for i in range(t_dim)]
    if form == "hadamard":
        xs = [f"x{i + 1}" for i in range(x_dim)]
        names = ts + xs
    else:
        names = ts + ["s"]
    phi1 = []
    for i in range(t_dim):
        phi1.append(var(ts[i]) + _small_expr(rng, names) * Fraction(1, 3))
    scale = Fraction(int(rng.integers(1, 4)), 1)
    A = []
    for i in range(x_dim):
        row = []
        for j in range(x_dim):
            entry = _small_expr(rng, names, depth=1) * Fraction(1, 10)
            if i == j:
                entry = entry + scale
            row.append(entry)
        A.append(tuple(row))
    return BlowupLiftInput(t_dim, x_dim, tuple(phi1), tuple(A), form)


def radial_invariant_input(rng, t_dim: int = 1, x_dim: int = 2) -> BlowupLiftInput:
    """Hadamard-form data that depends on x only through ``|x|^2`` (accepted by the squared lift)."""
    inv = lift_input(rng, "invariant", t_dim, x_dim)
    xs = [var(f"x{i + 1}") for i in range(x_dim)]
    r2 = as_expr(0)
    for x in xs:
        r2 = r2 + x * x
    sub = {"s": r2}
    return BlowupLiftInput(
        t_dim, x_dim,
        tuple(e.subs(sub) for e in inv.phi1),
        tuple(tuple(e.subs(sub) for e in row) for row in inv.A),
        "hadamard",
    )


def shear_input(rng, t_dim: int = 1, x_dim: int = 2) -> BlowupLiftInput:
    """``phi(t, x) = (t + L(x), x)`` with L linear and nonzero."""
    coeffs = [rational(rng, -2, 2, nonzero=False) for _ in range(x_dim)]
    if not any(coeffs):
        coeffs[0] = Fraction(1)
    L = as_expr(0)
    for i, c in enumerate(coeffs):
        L = L + var(f"x{i + 1}") * c
    phi1 = [var(f"t{i + 1}") + (L if i == 0 else 0) for i in range(t_dim)]
    A = tuple(tuple(as_expr(1 if i == j else 0) for j in range(x_dim)) for i in range(x_dim))
    return BlowupLiftInput(t_dim, x_dim, tuple(phi1), A, "hadamard")


def polar_pair(rng) -> PolarDiffeoPair:
    s = var("s")
    phase = s * rational(rng, -2, 2, nonzero=False) + s * s * rational(rng, -1, 1, nonzero=False)
    g = as_expr(Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 3)))) + s * s * Fraction(int(rng.integers(0, 3)), 2)
    return PolarDiffeoPair(exp(parse("I") * phase), g)


def boundary_points(rng, dim: int, count: int, zero_x_prob: float = 0.3) -> list[tuple[float, ...]]:
    pts = []
    for _ in range(count):
        if rng.random() < zero_x_prob:
            x = [0.0] * dim
        else:
            x = [float(c) for c in rng.uniform(-0.8, 0.8, dim)]
        pts.append(tuple(x) + (float(rng.uniform(0, 2 * np.pi)), 0.0))
    return pts
