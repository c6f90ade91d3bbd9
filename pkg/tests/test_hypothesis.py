"""Hypothesis-driven algebraic laws for the exact layer."""

import itertools
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from cutkit.blowup import blowup_pullback
from cutkit.cutting import cut_form, reduced_form, restrict_to_red
from cutkit.expr import Expr, parse
from cutkit.forms import DiscForm, HalfForm, ext_d, wedge
from cutkit.funcalg import CRational, DiscFunc, HalfFunc, descend_function, lift_function, mono_descends

SETTINGS = settings(max_examples=60, deadline=None)

fractions = st.fractions(min_value=-3, max_value=3, max_denominator=4)
crationals = st.builds(CRational, fractions, st.one_of(st.just(Fraction(0)), fractions))
dims = st.integers(0, 2)


def alphas(dim):
    return st.tuples(*[st.integers(0, 2)] * dim)


@st.composite
def disc_funcs(draw, dim=None):
    dim = draw(dims) if dim is None else dim
    keys = st.tuples(alphas(dim), st.integers(0, 3), st.integers(0, 3))
    return DiscFunc(dim, draw(st.dictionaries(keys, crationals, max_size=4)))


@st.composite
def half_funcs(draw, dim=None, invariant=False, even=False):
    dim = draw(dims) if dim is None else dim
    k = st.just(0) if invariant else st.integers(-3, 3)
    m = st.integers(0, 3).map(lambda n: 2 * n) if even else st.integers(0, 6)
    keys = st.tuples(alphas(dim), k, m)
    return HalfFunc(dim, draw(st.dictionaries(keys, crationals, max_size=4)))


@st.composite
def basic_forms(draw, dim=None, degree=None):
    """Invariant forms whose dtheta terms without ds carry a factor s."""
    dim = draw(dims) if dim is None else dim
    n = dim + 2
    degree = draw(st.integers(0, min(3, n))) if degree is None else degree
    keys = list(itertools.combinations(range(n), degree))
    chosen = draw(st.lists(st.sampled_from(keys), max_size=4, unique=True))
    terms = {}
    for key in chosen:
        c = draw(half_funcs(dim, invariant=True, even=True))
        if dim in key and dim + 1 not in key:
            c = c * HalfFunc.s(dim)
        names = HalfForm.basis_names(dim)
        terms[tuple(names[i] for i in key)] = c
    return HalfForm(dim, degree, terms)


@st.composite
def basic_pairs(draw):
    dim = draw(dims)
    p = draw(st.integers(0, min(3, dim + 2)))
    q = draw(st.integers(0, dim + 2 - p))
    return draw(basic_forms(dim, p)), draw(basic_forms(dim, q))


@st.composite
def disc_forms(draw):
    dim = draw(dims)
    n = dim + 2
    degree = draw(st.integers(0, n))
    keys = list(itertools.combinations(range(n), degree))
    chosen = draw(st.lists(st.sampled_from(keys), max_size=4, unique=True))
    names = DiscForm.basis_names(dim)
    return DiscForm(dim, degree, {tuple(names[i] for i in k): draw(disc_funcs(dim)) for k in chosen})


@SETTINGS
@given(disc_funcs())
def test_descend_of_lift_is_identity(g):
    v = descend_function(lift_function(g))
    assert v.descends and v.image == g


@SETTINGS
@given(st.data())
def test_lift_is_ring_homomorphism(data):
    dim = data.draw(dims)
    a, b = data.draw(disc_funcs(dim)), data.draw(disc_funcs(dim))
    assert lift_function(a * b) == lift_function(a) * lift_function(b)
    assert lift_function(a + b) == lift_function(a) + lift_function(b)


@SETTINGS
@given(st.integers(0, 12), st.integers(-12, 12))
def test_mono_descends_matches_exponent_solve(m, k):
    exists = any(p + q == m and p - q == k for p in range(m + 1) for q in range(m + 1))
    assert mono_descends(m, k) == exists


@SETTINGS
@given(half_funcs())
def test_descent_verdict_matches_monomials(f):
    v = descend_function(f)
    assert v.descends == all(mono_descends(m, k) for _, k, m in f.keys())
    if v.descends:
        assert lift_function(v.image) == f


@SETTINGS
@given(disc_forms())
def test_dd_zero_disc(beta):
    if beta.degree + 2 <= beta.n:
        assert ext_d(ext_d(beta)).is_zero()


@SETTINGS
@given(basic_forms())
def test_cut_commutes_with_d(beta):
    if beta.degree < beta.n:
        assert cut_form(ext_d(beta)) == ext_d(cut_form(beta))


@SETTINGS
@given(basic_pairs())
def test_cut_commutes_with_wedge(pair):
    a, b = pair
    assert cut_form(wedge(a, b)) == wedge(cut_form(a), cut_form(b))


@SETTINGS
@given(basic_forms())
def test_blowup_inverts_cut(beta):
    assert blowup_pullback(cut_form(beta)) == beta


@SETTINGS
@given(basic_forms())
def test_reduced_is_restriction(beta):
    assert reduced_form(beta) == restrict_to_red(cut_form(beta))


@SETTINGS
@given(crationals, crationals, crationals)
def test_crational_field_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


exprs = st.recursive(
    st.sampled_from(["x1", "s", "1/2", "3", "I"]),
    lambda inner: st.one_of(
        st.tuples(inner, inner).map(lambda t: f"({t[0]}) + ({t[1]})"),
        st.tuples(inner, inner).map(lambda t: f"({t[0]}) * ({t[1]})"),
        inner.map(lambda e: f"sin({e})"),
        inner.map(lambda e: f"exp({e})"),
    ),
    max_leaves=6,
)


@SETTINGS
@given(exprs, st.floats(-1, 1), st.floats(0, 1))
def test_expr_json_roundtrip_preserves_values(text, x, s):
    e = parse(text)
    back = Expr.from_json(e.to_json())
    env = {"x1": x, "s": s}
    assert abs(back.evaluate(env) - e.evaluate(env)) <= 1e-9 * (1 + abs(e.evaluate(env)))
