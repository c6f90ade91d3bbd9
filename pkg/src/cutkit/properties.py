"""Registered randomized properties; ``cutkit suite`` runs all of them."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from . import generators as gen
from .blowup import (
    lift_map_radial,
    lift_map_radial_squared,
    lift_sample_points,
    polar_correspondence,
    roundtrip_check,
)
from .cutting import (
    cut_form,
    cut_map,
    functoriality_check,
    identity_check,
    is_contact,
    is_symplectic,
    map_sample_points,
    rank_check,
    reduced_form,
    restrict_to_red,
)
from .errors import NonInvariantInput
from .forms import HalfForm, ext_d, lie_derivative, wedge
from .funcalg import HalfFunc, descend_function, lift_function, mono_descends, rescale_boundary_function
from .verify import TOLERANCES, Property, SamplePlan, cut_point, descent_oracle, jacobian_at, jacobian_fd, register

EXACT = {"exact": 0}


def _prop(id, generate, trials=100, tolerances=None, description=""):
    def wrap(check):
        register(Property(id, generate, check, trials, description or (check.__doc__ or "").strip(),
                          tolerances or EXACT))
        return check
    return wrap


# funcalg ------------------------------------------------------------------

@_prop("descent_lift_roundtrip", lambda rng: gen.disc_func(rng, int(rng.integers(0, 4))))
def _descent_lift(g):
    """descend(lift(g)) == g exactly."""
    v = descend_function(lift_function(g))
    return v.descends and v.image == g, {}


def _descending_pair(rng):
    dim = int(rng.integers(0, 4))
    return lift_function(gen.disc_func(rng, dim)), lift_function(gen.disc_func(rng, dim))


@_prop("descent_ring_hom", _descending_pair)
def _ring_hom(case):
    """descend is additive and multiplicative on descending functions."""
    f, g = case
    df, dg = descend_function(f).image, descend_function(g).image
    add = descend_function(f + g)
    mul = descend_function(f * g)
    return add.image == df + dg and mul.image == df * dg, {}


def _rescale_case(rng):
    dim = int(rng.integers(0, 3))
    lam = Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 5)))
    return gen.half_func(rng, dim), lam


@_prop("rescale_verdict", _rescale_case)
def _rescale(case):
    """The descent verdict and offending modes do not change under s -> lam s."""
    f, lam = case
    a, b = descend_function(f), descend_function(rescale_boundary_function(f, lam))
    return a.descends == b.descends and a.offending_modes == b.offending_modes, {}


def _mode(rng):
    return int(rng.integers(0, 9)), int(rng.integers(-8, 9))


@_prop("descent_oracle", _mode, trials=40, tolerances={"oracle_residual": TOLERANCES["oracle_residual"]})
def _oracle(case):
    """mono_descends agrees with the least-squares polynomial oracle."""
    m, k = case
    res = descent_oracle(m, k)
    return mono_descends(m, k) == (res < TOLERANCES["oracle_residual"]), {"residual": res}


# forms --------------------------------------------------------------------

def _any_form(rng):
    if rng.random() < 0.5:
        return gen.half_form(rng)
    return gen.disc_form(rng)


@_prop("dd_zero", _any_form)
def _dd(beta):
    """d(d beta) = 0 exactly."""
    return ext_d(ext_d(beta)).is_zero(), {}


def _wedgeable_degrees(rng):
    """Base dimension and two degrees whose sum fits on the model."""
    dim = int(rng.integers(0, gen.MAX_DIM + 1))
    n = dim + 2
    p = int(rng.integers(0, min(gen.MAX_DEGREE, n) + 1))
    q = int(rng.integers(0, min(gen.MAX_DEGREE, n - p) + 1))
    return dim, p, q


def _form_pair(rng):
    dim, p, q = _wedgeable_degrees(rng)
    if rng.random() < 0.5:
        return gen.half_form(rng, dim, p), gen.half_form(rng, dim, q)
    return gen.disc_form(rng, dim, p), gen.disc_form(rng, dim, q)


@_prop("leibniz", _form_pair)
def _leibniz(case):
    """d(a ^ b) = da ^ b + (-1)^|a| a ^ db."""
    a, b = case
    lhs = ext_d(wedge(a, b))
    rhs = wedge(ext_d(a), b) + wedge(a, ext_d(b)) * (-1) ** a.degree
    return lhs == rhs, {}


def _cartan_case(rng):
    if rng.random() < 0.5:
        return gen.basic_form(rng)
    return gen.half_form(rng)


@_prop("cartan_invariance", _cartan_case)
def _cartan(beta):
    """L_{d/dtheta} beta = 0 iff every coefficient has k = 0."""
    invariant = all(k == 0 for _, c in beta.terms for _, k, _ in c.keys())
    return lie_derivative("theta", beta).is_zero() == invariant, {"invariant": invariant}


def _fd_d(beta, point, h=1e-4):
    n = beta.n
    grads = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        grads.append((beta.eval_at(np.array(point) + e) - beta.eval_at(np.array(point) - e)) / (2 * h))
    k = beta.degree
    out = np.zeros((n,) * (k + 1), dtype=complex)
    for idx in itertools.product(range(n), repeat=k + 1):
        total = 0j
        for j in range(k + 1):
            rest = idx[:j] + idx[j + 1:]
            total += (-1) ** j * grads[idx[j]][rest]
        out[idx] = total
    return out


@_prop("ext_d_finite_difference", lambda rng: gen.half_form(rng, dim=int(rng.integers(0, 3)), degree=int(rng.integers(0, 2)), max_terms=3),
       trials=20, tolerances={"finite_difference": TOLERANCES["finite_difference"], "step": 1e-4})
def _ext_d_fd(beta):
    """Symbolic ext_d agrees with central differences at interior points."""
    plan = SamplePlan("half", beta.dim, interior=20, boundary=0, near_boundary=0, seed=beta.degree)
    d_beta = ext_d(beta)
    worst = 0.0
    for p in plan.points():
        sym = d_beta.eval_at(p)
        num = _fd_d(beta, p)
        worst = max(worst, float(np.max(np.abs(sym - num))) if sym.size else 0.0)
    return worst < TOLERANCES["finite_difference"], {"max_error": worst}


# cutting ------------------------------------------------------------------

@_prop("d_commutes_cut", lambda rng: gen.basic_form(rng))
def _d_cut(beta):
    """cut(d beta) = d cut(beta)."""
    return cut_form(ext_d(beta)) == ext_d(cut_form(beta)), {}


def _basic_pair(rng):
    dim, p, q = _wedgeable_degrees(rng)
    return gen.basic_form(rng, dim, p), gen.basic_form(rng, dim, q)


@_prop("wedge_commutes_cut", _basic_pair)
def _wedge_cut(case):
    """cut(a ^ b) = cut(a) ^ cut(b)."""
    a, b = case
    return cut_form(wedge(a, b)) == wedge(cut_form(a), cut_form(b)), {}


def _maybe_closed(rng):
    beta = gen.basic_form(rng)
    if rng.random() < 0.5 and beta.degree < beta.n:
        return ext_d(beta)
    return beta


@_prop("closed_iff_cut_closed", _maybe_closed)
def _closed(beta):
    """beta is closed iff its cut is closed."""
    closed = ext_d(beta).is_zero()
    return closed == ext_d(cut_form(beta)).is_zero(), {"closed": closed}


@_prop("reduction_compatible", lambda rng: gen.basic_form(rng))
def _red(beta):
    """reduced_form(beta) is the restriction of cut(beta) to u = v = 0."""
    return reduced_form(beta) == restrict_to_red(cut_form(beta)), {}


def _split_parts(beta: HalfForm):
    """The pieces beta_k, beta_{k-1} ^ ds and beta_{k-2} ^ ds ^ dtheta of the decomposition."""
    th, s = beta.theta, beta.s
    parts = {"top": {}, "ds": {}, "ds_dtheta": {}}
    for key, c in beta.terms:
        if s in key and th in key:
            parts["ds_dtheta"][key] = c
        elif s in key:
            parts["ds"][key] = c
        elif th not in key:
            parts["top"][key] = c
    return {name: HalfForm._raw(beta.dim, beta.degree, t) for name, t in parts.items()}


def _zero_at(form, point):
    arr = np.asarray(form.eval_at(point))
    return bool(np.max(np.abs(arr)) <= 1e-12) if arr.size else True


def _nonvanishing_case(rng):
    dim = int(rng.integers(0, 4))
    beta = gen.basic_form(rng, dim, int(rng.integers(1, min(3, dim + 2) + 1)))
    # force some coefficients to vanish at x = 0 so both outcomes occur
    if beta.dim and rng.random() < 0.5:
        beta = beta.map_coefficients(lambda c: c * HalfFunc.x(beta.dim, 0))
    return beta, tuple(gen.boundary_points(rng, beta.dim, 20))


@_prop("nonvanishing_boundary", _nonvanishing_case)
def _nonvanishing(case):
    """At s = 0: cut(beta)(c(p)) = 0 iff beta_k(p) = 0 and beta_{k-2}(p) = 0.

    When beta has no ds-part without dtheta this is the statement that beta
    vanishes at p exactly when its cut vanishes at c(p).
    """
    beta, points = case
    parts = _split_parts(beta)
    cut = cut_form(beta)
    zeros = 0
    for p in points:
        q = cut_point(p, beta.dim)
        cut_zero = _zero_at(cut, q)
        pred = _zero_at(parts["top"], p) and _zero_at(parts["ds_dtheta"], p)
        if cut_zero != pred:
            return False, {"point": list(p)}
        if parts["ds"].is_zero() and cut_zero != _zero_at(beta, p):
            return False, {"point": list(p), "without_ds_part": True}
        zeros += cut_zero
    return True, {"zero_cases": zeros > 0}


def _symplectic_case(rng):
    dim = 2 * int(rng.integers(0, 2))
    omega = HalfForm.basis(dim, "ds", "dtheta")
    for i in range(0, dim, 2):
        omega = omega + HalfForm.basis(dim, f"dx{i + 1}", f"dx{i + 2}") * gen.rational(rng, 1, 3)
    alpha = gen.basic_form(rng, dim, 1, max_terms=3)
    return omega + ext_d(alpha) * Fraction(1, 40)


@_prop("symplectic_reduction", _symplectic_case, trials=30)
def _symp_red(omega):
    """A symplectic cut-able form has a symplectic reduced form."""
    if not is_symplectic(omega):
        return True, {"skipped": True}
    if not is_symplectic(cut_form(omega)):
        return False, {"cut": "not symplectic"}
    red = reduced_form(omega)
    coords = [f"x{i + 1}" for i in range(omega.dim)]
    if not coords:
        return True, {"symplectic": True}
    plan = SamplePlan("disc", omega.dim, interior=10, boundary=0, near_boundary=0, seed=3)
    pts = [p[:omega.dim] for p in plan.points()]
    return bool(is_symplectic(red, pts, coords=coords)), {"symplectic": True}


def _contact_case(rng):
    dim = 1 + 2 * int(rng.integers(0, 2))
    beta = HalfForm.basis(dim, f"dx{dim}") + HalfForm.basis(dim, "dtheta") * HalfFunc.s(dim)
    if dim == 3:
        beta = beta + HalfForm.basis(3, "dx2") * HalfFunc.x(3, 0)
    alpha = gen.basic_form(rng, dim, 1, max_terms=2)
    return beta + alpha * Fraction(1, 40)


@_prop("contact_reduction", _contact_case, trials=30)
def _contact_red(beta):
    """A contact cut-able form has a contact cut and a contact reduced form."""
    if not is_contact(beta):
        return True, {"skipped": True}
    if not is_contact(cut_form(beta)):
        return False, {"cut": "not contact"}
    coords = [f"x{i + 1}" for i in range(beta.dim)]
    plan = SamplePlan("disc", beta.dim, interior=10, boundary=0, near_boundary=0, seed=5)
    pts = [p[:beta.dim] for p in plan.points()]
    return bool(is_contact(reduced_form(beta), pts, coords=coords)), {"contact": True}


# blowup -------------------------------------------------------------------

@_prop("roundtrip", lambda rng: gen.basic_form(rng))
def _roundtrip(beta):
    """blowup_pullback(cut_form(beta)) == beta."""
    return bool(roundtrip_check(beta)), {}


@_prop("roundtrip_disc", lambda rng: gen.invariant_disc_form(rng))
def _roundtrip_disc(gamma):
    """cut_form(blowup_pullback(gamma)) == gamma wherever the pullback is smooth."""
    r = roundtrip_check(gamma)
    return r.ok, {"defined": r.defined}


# maps ---------------------------------------------------------------------

@_prop("functoriality", gen.local_map_pair, trials=25,
       tolerances={"commuting_square": TOLERANCES["commuting_square"], "points": 50})
def _functoriality(case):
    """cut(psi2 o psi1) = cut(psi2) o cut(psi1) at 50 points."""
    psi1, psi2 = case
    v = functoriality_check(psi1, psi2, 50, seed=psi1.source_dim * 7 + psi2.target_dim)
    return v.ok, {"max_residual": v.data.get("max_residual", 0.0)}


@_prop("identity_cut", lambda rng: int(rng.integers(1, 4)), trials=5,
       tolerances={"commuting_square": TOLERANCES["commuting_square"]})
def _identity(dim):
    """The cut of the identity is the identity."""
    v = identity_check(dim, seed=dim)
    return v.ok, {"max_residual": v.data["max_residual"]}


@_prop("rank_preservation", lambda rng: gen.local_map(rng), trials=25,
       tolerances={"rank": TOLERANCES["rank"], "boundary_points": 20})
def _ranks(psi):
    """rank d(psi) = rank d(psi_cut) = rank d_x psi_bar + 2 at boundary points."""
    v = rank_check(psi, 20, seed=psi.target_dim)
    return v.ok, {"immersion": bool(v.data.get("immersion")), "submersion": bool(v.data.get("submersion"))} if v.ok else {"witness": list(v.witnesses)}


@_prop("jacobian_fallback", lambda rng: gen.local_map(rng), trials=20,
       tolerances={"finite_difference": TOLERANCES["finite_difference"]})
def _jac(psi):
    """Symbolic and finite-difference Jacobians agree."""
    cm = cut_map(psi)
    worst = 0.0
    for p in map_sample_points(psi.source_dim, 10, seed=1):
        sym = jacobian_at(cm.components, cm.variables, p)
        num = jacobian_fd(cm.components, cm.variables, p)
        worst = max(worst, float(np.max(np.abs(sym - num))))
    return worst < TOLERANCES["finite_difference"], {"max_error": worst}


# lifts ----------------------------------------------------------------------

@_prop("lift_radial", lambda rng: gen.lift_input(rng), trials=10,
       tolerances={"commuting_square": TOLERANCES["commuting_square"], "samples": 100})
def _lift_radial(inp):
    """The radial lift commutes with the blow-down maps and has a boundary-defining last component."""
    lifted = lift_map_radial(inp)
    ok = lifted.checks["commutes"] and lifted.checks["boundary_defining"]
    return ok, {"max_residual": lifted.checks["max_commuting_residual"]}


def _squared_case(rng):
    if rng.random() < 0.5:
        return gen.lift_input(rng, "invariant")
    return gen.radial_invariant_input(rng)


@_prop("lift_radial_squared", _squared_case, trials=10,
       tolerances={"commuting_square": TOLERANCES["commuting_square"], "samples": 100})
def _lift_sq(inp):
    """The radial-squared lift commutes with (t, u, s) -> (t, sqrt(s) u)."""
    lifted = lift_map_radial_squared(inp)
    return lifted.checks["commutes"], {"max_residual": lifted.checks["max_commuting_residual"]}


@_prop("shear_rejection", lambda rng: gen.shear_input(rng), trials=10)
def _shear(inp):
    """A linear shear is lifted radially but rejected by the squared lift."""
    radial = lift_map_radial(inp, lift_sample_points(inp, count=20))
    try:
        lift_map_radial_squared(inp)
    except NonInvariantInput:
        return radial.checks["commutes"], {}
    return False, {"squared_lift": "accepted"}


@_prop("polar_pairs", lambda rng: gen.polar_pair(rng), trials=10,
       tolerances={"commuting_square": TOLERANCES["commuting_square"], "probe": 1e-2})
def _polar(pair):
    """E o psi = phi o E, psi is a local diffeomorphism and phi passes the smoothness probe."""
    rep = polar_correspondence(pair)
    return rep.ok, {"max_residual": rep.max_commuting_residual}

