"""Inverse constructions: pullback along the radial-squared blowdown, map lifts, polar diffeomorphisms."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .cutting import cut_form
from .errors import (
    DegenerateA,
    InvalidInput,
    NonInvariantInput,
    NotBasicInvariant,
    ResidualNegativePower,
)
from .expr import Expr, as_expr, im, parse, re, sqrt, var
from .forms import DiscForm, HalfForm, wedge
from .funcalg import CRational, DiscFunc, HalfFunc, descend_function, lift_function
from .verify import TOLERANCES, jacobian_at

__all__ = [
    "blowup_pullback",
    "roundtrip_check",
    "Roundtrip",
    "BlowupLiftInput",
    "LiftedMap",
    "lift_map_radial",
    "lift_map_radial_squared",
    "naive_squared_lift",
    "s_smoothness_probe",
    "PolarDiffeoPair",
    "PolarReport",
    "polar_correspondence",
    "smoothness_probe",
]


# forms --------------------------------------------------------------------

def _pulled_differentials(dim: int):
    """``du`` and ``dv`` on the half model; coefficients carry ``s^(-1/2)`` until cancellation."""
    zero = (0,) * dim
    half = Fraction(1, 2)
    quarter = Fraction(1, 4)
    # du = (cos th / (2 sqrt s)) ds - sqrt s sin th dtheta
    du = {
        (dim + 1,): HalfFunc._raw(dim, {(zero, 1, -1): CRational(quarter), (zero, -1, -1): CRational(quarter)}),
        (dim,): HalfFunc._raw(dim, {(zero, 1, 1): CRational(0, half), (zero, -1, 1): CRational(0, -half)}),
    }
    # dv = (sin th / (2 sqrt s)) ds + sqrt s cos th dtheta
    dv = {
        (dim + 1,): HalfFunc._raw(dim, {(zero, 1, -1): CRational(0, -quarter), (zero, -1, -1): CRational(0, quarter)}),
        (dim,): HalfFunc._raw(dim, {(zero, 1, 1): CRational(half), (zero, -1, 1): CRational(half)}),
    }
    return HalfForm._raw(dim, 1, du), HalfForm._raw(dim, 1, dv)


def blowup_pullback(gamma: DiscForm) -> HalfForm:
    """Substitute ``u = sqrt(s) cos th``, ``v = sqrt(s) sin th`` and expand."""
    if not isinstance(gamma, DiscForm):
        raise InvalidInput("blowup_pullback needs a disc-model form")
    d = gamma.dim
    if any(c.radical != 1 for _, c in gamma.terms):
        raise InvalidInput("coefficients with a stored radical are not supported by blowup_pullback")
    du, dv = _pulled_differentials(d)
    out = HalfForm.zero(d, gamma.degree)
    for key, c in gamma.terms:
        piece = HalfForm.function(lift_function(c))
        for i in key:
            if i < d:
                factor = HalfForm.basis(d, f"dx{i + 1}")
            else:
                factor = du if i == d else dv
            piece = wedge(piece, factor)
        out = out + piece
    negative = [
        {"key": out.key_names(key), "term": [list(t[0]), t[1], t[2]]}
        for key, c in out.terms
        for t in c.keys()
        if t[2] < 0
    ]
    if negative:
        raise ResidualNegativePower(negative)
    return out


@dataclass(frozen=True)
class Roundtrip:
    defined: bool
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"defined": self.defined, "ok": self.ok, "reason": self.reason}


def roundtrip_check(obj) -> Roundtrip:
    """Exact cut/blowup roundtrip for half forms, disc forms (where defined) and disc functions."""
    if isinstance(obj, HalfForm):
        back = blowup_pullback(cut_form(obj))
        return Roundtrip(True, back == obj, "" if back == obj else f"blowup(cut(beta)) = {back}")
    if isinstance(obj, DiscForm):
        try:
            pulled = blowup_pullback(obj)
            again = cut_form(pulled)
        except ResidualNegativePower:
            return Roundtrip(False, True, "blowup pullback leaves negative powers of s")
        except NotBasicInvariant:
            return Roundtrip(False, True, "pullback is not basic-invariant, so it has no cut")
        return Roundtrip(True, again == obj, "" if again == obj else f"cut(blowup(gamma)) = {again}")
    if isinstance(obj, DiscFunc):
        verdict = descend_function(lift_function(obj))
        ok = verdict.descends and verdict.image == obj
        return Roundtrip(True, ok, "" if ok else "descent of the lift differs")
    if isinstance(obj, HalfFunc):
        verdict = descend_function(obj)
        if not verdict.descends:
            return Roundtrip(False, True, "function does not descend")
        ok = lift_function(verdict.image) == obj
        return Roundtrip(True, ok, "" if ok else "lift of the descent differs")
    raise InvalidInput(f"roundtrip_check does not handle {type(obj).__name__}")


# map lifts -----------------------------------------------------------------

def _names(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]


@dataclass(frozen=True)
class BlowupLiftInput:
    """Hadamard data ``phi(t, x) = (phi1(t, x), A(t, x) x)``.

    ``form="hadamard"``: expressions in ``t1..ta, x1..xk``.
    ``form="invariant"``: expressions in ``t1..ta, s`` standing for
    ``phi1~(t, |x|^2)`` and ``A~(t, |x|^2)``.
    """

    t_dim: int
    x_dim: int
    phi1: tuple
    A: tuple
    form: str = "hadamard"

    def __post_init__(self):
        if self.form not in ("hadamard", "invariant"):
            raise InvalidInput(f"unknown lift input form {self.form!r}")
        object.__setattr__(self, "phi1", tuple(as_expr(e) for e in self.phi1))
        rows = tuple(tuple(as_expr(e) for e in row) for row in self.A)
        object.__setattr__(self, "A", rows)
        if not rows or any(len(r) != self.x_dim for r in rows):
            raise InvalidInput(f"A must have {self.x_dim} columns")
        allowed = set(self.variables)
        for e in self.phi1 + tuple(x for r in rows for x in r):
            extra = e.variables() - allowed
            if extra:
                raise InvalidInput(f"unknown variables {sorted(extra)} in {e}")

    @property
    def variables(self) -> list[str]:
        tail = _names("x", self.x_dim) if self.form == "hadamard" else ["s"]
        return _names("t", self.t_dim) + tail

    @property
    def target_x_dim(self) -> int:
        return len(self.A)

    def phi_components(self) -> tuple[list[str], list[Expr]]:
        """The map ``phi`` itself as expressions in ``(t, x)``."""
        xs = [var(n) for n in _names("x", self.x_dim)]
        if self.form == "hadamard":
            phi1, A = list(self.phi1), self.A
        else:
            sub = {"s": _norm2(xs)}
            phi1 = [e.subs(sub) for e in self.phi1]
            A = tuple(tuple(e.subs(sub) for e in row) for row in self.A)
        ax = [sum((A[i][j] * xs[j] for j in range(self.x_dim)), as_expr(0)) for i in range(len(A))]
        return _names("t", self.t_dim) + _names("x", self.x_dim), phi1 + ax

    def A_at_origin(self, t) -> np.ndarray:
        env = dict(zip(_names("t", self.t_dim), t))
        env.update({n: 0.0 for n in _names("x", self.x_dim)})
        env["s"] = 0.0
        return np.array([[e.evaluate(env).real for e in row] for row in self.A])

    def to_json(self) -> dict:
        return {
            "t_dim": self.t_dim,
            "x_dim": self.x_dim,
            "form": self.form,
            "phi1": [e.to_json() for e in self.phi1],
            "A": [[e.to_json() for e in row] for row in self.A],
        }

    @classmethod
    def from_json(cls, data) -> "BlowupLiftInput":
        return cls(int(data["t_dim"]), int(data["x_dim"]), tuple(data["phi1"]), tuple(tuple(r) for r in data["A"]),
                   data.get("form", "hadamard"))


def _norm2(xs):
    out = as_expr(0)
    for x in xs:
        out = out + x * x
    return out


@dataclass
class LiftedMap:
    kind: str
    variables: list
    components: list
    source: BlowupLiftInput
    checks: dict = field(default_factory=dict)

    def evaluate(self, point) -> np.ndarray:
        env = dict(zip(self.variables, point))
        return np.array([e.evaluate(env).real for e in self.components])

    def blowdown_source(self, point) -> list[float]:
        a, k = self.source.t_dim, self.source.x_dim
        t, u, last = list(point[:a]), np.array(point[a:a + k]), point[a + k]
        scale = last if self.kind == "radial" else math.sqrt(last)
        return t + list(scale * u)

    def blowdown_target(self, image) -> np.ndarray:
        a = len(self.source.phi1)
        k = self.source.target_x_dim
        t, u, last = image[:a], image[a:a + k], image[a + k]
        scale = last if self.kind == "radial" else math.sqrt(max(last, 0.0))
        return np.concatenate([t, scale * u])

    def commuting_residual(self, point) -> float:
        names, phi = self.source.phi_components()
        env = dict(zip(names, self.blowdown_source(point)))
        down = np.array([e.evaluate(env).real for e in phi])
        return float(np.max(np.abs(self.blowdown_target(self.evaluate(point)) - down)))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "variables": self.variables,
            "components": [str(e) for e in self.components],
            "checks": self.checks,
        }


def lift_sample_points(inp: BlowupLiftInput, count: int = 100, seed: int = 0, boundary_fraction: float = 0.2):
    """Points ``(t, u, r)`` with ``u`` on the unit sphere; some with ``r = 0``."""
    rng = np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, inp.t_dim, inp.x_dim, 11])
    pts = []
    n_bdry = max(1, int(round(count * boundary_fraction)))
    for i in range(count):
        t = list(rng.uniform(-0.9, 0.9, inp.t_dim))
        u = rng.normal(size=inp.x_dim)
        u /= np.linalg.norm(u)
        r = 0.0 if i < n_bdry else float(rng.uniform(0.0, 0.9))
        pts.append(tuple(float(c) for c in t) + tuple(float(c) for c in u) + (r,))
    return pts


def _check_A(inp: BlowupLiftInput, points):
    for p in points:
        t = p[:inp.t_dim]
        sv = np.linalg.svd(inp.A_at_origin(t), compute_uv=False)
        smin = float(sv[-1]) if inp.target_x_dim >= inp.x_dim else 0.0
        if smin <= TOLERANCES["rank"]:
            raise DegenerateA(list(t), smin)


def _lift_checks(lifted: LiftedMap, points) -> dict:
    worst = 0.0
    worst_at = None
    for p in points:
        res = lifted.commuting_residual(p)
        if res > worst:
            worst, worst_at = res, list(p)
    checks = {
        "samples": len(points),
        "max_commuting_residual": worst,
        "commutes": worst < TOLERANCES["commuting_square"],
    }
    if worst_at is not None and not checks["commutes"]:
        checks["witness"] = worst_at
    return checks


def lift_map_radial(inp: BlowupLiftInput, samples: Sequence | None = None, seed: int = 0) -> LiftedMap:
    """``(t, u, r) -> (phi1(t, ru), A(t, ru)u / |A(t, ru)u|, r |A(t, ru)u|)``."""
    if inp.form != "hadamard":
        raise InvalidInput("the radial lift consumes Hadamard data in (t, x)")
    points = list(samples) if samples is not None else lift_sample_points(inp, seed=seed)
    _check_A(inp, points)
    us = [var(n) for n in _names("u", inp.x_dim)]
    r = var("r")
    sub = {f"x{i + 1}": r * us[i] for i in range(inp.x_dim)}
    phi1 = [e.subs(sub) for e in inp.phi1]
    au = [sum((row[j].subs(sub) * us[j] for j in range(inp.x_dim)), as_expr(0)) for row in inp.A]
    norm = sqrt(_norm2(au))
    comps = phi1 + [c / norm for c in au] + [r * norm]
    variables = _names("t", inp.t_dim) + _names("u", inp.x_dim) + ["r"]
    lifted = LiftedMap("radial", variables, comps, inp)
    checks = _lift_checks(lifted, points)
    # the last component must be a boundary defining function: zero on r = 0, positive d/dr there
    bdf_ok = True
    min_slope = math.inf
    last = len(variables) - 1
    for p in points:
        if p[-1] != 0.0:
            continue
        val = lifted.evaluate(p)[-1]
        slope = jacobian_at([comps[-1]], variables, p, lower={"r": 0.0})[0, last]
        min_slope = min(min_slope, slope)
        if val != 0.0 or slope <= 0:
            bdf_ok = False
    checks["boundary_defining"] = bdf_ok
    checks["min_boundary_slope"] = float(min_slope) if math.isfinite(min_slope) else None
    lifted.checks = checks
    return lifted


def _rotation(rng, k: int) -> np.ndarray:
    if k == 1:
        return np.array([[-1.0]])
    q, rr = np.linalg.qr(rng.normal(size=(k, k)))
    q = q * np.sign(np.diag(rr))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def invariance_deviation(inp: BlowupLiftInput, probes: int = 20, seed: int = 0) -> tuple[str, float]:
    """Largest change of phi1 or A under rotating x, with the offending component."""
    rng = np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, 97])
    tn, xn = _names("t", inp.t_dim), _names("x", inp.x_dim)
    worst = ("phi1", 0.0)
    for _ in range(probes):
        t = rng.uniform(-0.9, 0.9, inp.t_dim)
        x = rng.uniform(-0.7, 0.7, inp.x_dim)
        rot = _rotation(rng, inp.x_dim)
        env1 = dict(zip(tn, t)) | dict(zip(xn, x))
        env2 = dict(zip(tn, t)) | dict(zip(xn, rot @ x))
        for label, exprs in (("phi1", inp.phi1), ("A", [e for row in inp.A for e in row])):
            for e in exprs:
                dev = abs(e.evaluate(env1) - e.evaluate(env2))
                if dev > worst[1]:
                    worst = (label, dev)
    return worst


def _to_invariant(inp: BlowupLiftInput, seed: int = 0) -> BlowupLiftInput:
    if inp.form == "invariant":
        return inp
    label, dev = invariance_deviation(inp, seed=seed)
    if dev > TOLERANCES["rank"]:
        raise NonInvariantInput(label, dev)
    # restrict to the ray x = (sqrt(s), 0, ..., 0), which recovers the |x|^2 dependence
    sub = {f"x{i + 1}": (sqrt(var("s")) if i == 0 else as_expr(0)) for i in range(inp.x_dim)}
    phi1 = tuple(e.subs(sub) for e in inp.phi1)
    A = tuple(tuple(e.subs(sub) for e in row) for row in inp.A)
    return BlowupLiftInput(inp.t_dim, inp.x_dim, phi1, A, "invariant")


def lift_map_radial_squared(inp: BlowupLiftInput, samples: Sequence | None = None, seed: int = 0) -> LiftedMap:
    """``(t, u, s) -> (phi1~(t, s), A~(t, s)u / |A~(t, s)u|, s |A~(t, s)u|^2)``.

    Hadamard-form input is accepted only when it depends on x through
    ``|x|^2``; otherwise :class:`NonInvariantInput` is raised.
    """
    inv = _to_invariant(inp, seed=seed)
    points = list(samples) if samples is not None else lift_sample_points(inp, seed=seed)
    _check_A(inv, points)
    us = [var(n) for n in _names("u", inp.x_dim)]
    au = [sum((row[j] * us[j] for j in range(inp.x_dim)), as_expr(0)) for row in inv.A]
    n2 = _norm2(au)
    comps = list(inv.phi1) + [c / sqrt(n2) for c in au] + [var("s") * n2]
    variables = _names("t", inp.t_dim) + _names("u", inp.x_dim) + ["s"]
    lifted = LiftedMap("radial_squared", variables, comps, inp)
    lifted.checks = _lift_checks(lifted, points)
    lifted.checks["invariant_form"] = inp.form == "invariant"
    return lifted


def naive_squared_lift(inp: BlowupLiftInput) -> LiftedMap:
    """The would-be squared lift obtained by plugging ``x = sqrt(s) u`` into Hadamard data directly."""
    if inp.form != "hadamard":
        raise InvalidInput("naive_squared_lift needs Hadamard data")
    us = [var(n) for n in _names("u", inp.x_dim)]
    root = sqrt(var("s"))
    sub = {f"x{i + 1}": root * us[i] for i in range(inp.x_dim)}
    au = [sum((row[j].subs(sub) * us[j] for j in range(inp.x_dim)), as_expr(0)) for row in inp.A]
    n2 = _norm2(au)
    comps = [e.subs(sub) for e in inp.phi1] + [c / sqrt(n2) for c in au] + [var("s") * n2]
    variables = _names("t", inp.t_dim) + _names("u", inp.x_dim) + ["s"]
    return LiftedMap("radial_squared", variables, comps, inp)


SCALES = (1e-2, 1e-3, 1e-4, 1e-5)


def s_smoothness_probe(lifted: LiftedMap, point) -> dict:
    """One-sided s-difference quotients at ``s = 0``; divergence as ``h -> 0`` signals non-smoothness."""
    base = list(point)
    base[-1] = 0.0
    f0 = lifted.evaluate(base)
    quotients = []
    for h in SCALES:
        p = list(base)
        p[-1] = h
        quotients.append((lifted.evaluate(p) - f0) / h)
    jump = float(np.max(np.abs(quotients[-1] - quotients[-2])))
    scale = 1.0 + float(np.max(np.abs(quotients[-2])))
    return {"point": base, "divergence": jump / scale, "smooth": jump / scale <= 1e-2}


# polar diffeomorphisms ------------------------------------------------------

def smoothness_probe(f: Callable[[complex], complex], rays: int = 8) -> dict:
    """Heuristic test of smoothness at ``z = 0`` from difference quotients along rays.

    Three symptoms are measured: one-sided first quotients that are not
    real-linear in the direction, symmetric first quotients that still drift
    at first order in ``h`` (an odd term such as ``|z|``), and symmetric
    second quotients that are not a quadratic form in the direction.
    """
    angles = [2 * math.pi * j / rays for j in range(rays)]
    dirs = [cmath.exp(1j * a) for a in angles]
    f0 = f(0j)
    lin = np.array([[math.cos(a), math.sin(a)] for a in angles])
    quad = np.array([[math.cos(a) ** 2, math.cos(a) * math.sin(a), math.sin(a) ** 2] for a in angles])

    def fit_residual(design, values):
        coef, *_ = np.linalg.lstsq(design.astype(complex), values, rcond=None)
        return float(np.max(np.abs(design @ coef - values))) / (1.0 + float(np.max(np.abs(values))))

    h1 = SCALES[-2]
    one_sided = np.array([(f(h1 * w) - f0) / h1 for w in dirs])
    linear_residual = fit_residual(lin, one_sided)

    sym = {h: np.array([(f(h * w) - f(-h * w)) / (2 * h) for w in dirs]) for h in SCALES[-2:]}
    drift = float(np.max(np.abs(sym[SCALES[-2]] - sym[SCALES[-1]]))) / SCALES[-2]

    h2 = SCALES[1]
    second = np.array([(f(h2 * w) + f(-h2 * w) - 2 * f0) / h2 ** 2 for w in dirs])
    quadratic_residual = fit_residual(quad, second)

    worst = max(linear_residual, drift, quadratic_residual)
    return {
        "linear_residual": linear_residual,
        "first_order_drift": drift,
        "quadratic_residual": quadratic_residual,
        "smooth": worst <= 1e-2,
    }


@dataclass(frozen=True)
class PolarDiffeoPair:
    """``a`` unit-complex and ``g`` positive, both expressions in ``s``."""

    a: Expr
    g: Expr

    def __post_init__(self):
        object.__setattr__(self, "a", as_expr(self.a))
        object.__setattr__(self, "g", as_expr(self.g))
        for e in (self.a, self.g):
            if e.variables() - {"s"}:
                raise InvalidInput(f"polar data must depend on s only: {e}")

    def phi(self, z: complex) -> complex:
        env = {"s": abs(z) ** 2}
        return cmath.sqrt(self.g.evaluate(env)) * self.a.evaluate(env) * z

    def psi(self, w: complex, s: float) -> tuple[complex, float]:
        env = {"s": s}
        return self.a.evaluate(env) * w, (self.g.evaluate(env) * s).real

    def phi_expressions(self) -> list[Expr]:
        u, v = var("u"), var("v")
        z = u + parse("I") * v
        sub = {"s": u * u + v * v}
        w = sqrt(self.g.subs(sub)) * self.a.subs(sub) * z
        return [re(w), im(w)]

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "g": self.g.to_json()}


@dataclass
class PolarReport:
    max_commuting_residual: float
    min_jacobian: float
    phi_probe: dict
    ordinary_polar_probe: dict
    samples: int

    @property
    def commutes(self) -> bool:
        return self.max_commuting_residual < TOLERANCES["commuting_square"]

    @property
    def diffeomorphic(self) -> bool:
        return self.min_jacobian > TOLERANCES["determinant"]

    @property
    def counterexample_flagged(self) -> bool:
        return not self.ordinary_polar_probe["smooth"]

    @property
    def ok(self) -> bool:
        return self.commutes and self.diffeomorphic and self.phi_probe["smooth"] and self.counterexample_flagged

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "commutes": self.commutes,
            "max_commuting_residual": self.max_commuting_residual,
            "diffeomorphic": self.diffeomorphic,
            "min_jacobian": self.min_jacobian,
            "phi_probe": self.phi_probe,
            "ordinary_polar_probe": self.ordinary_polar_probe,
            "counterexample_flagged": self.counterexample_flagged,
            "samples": self.samples,
        }


def ordinary_polar_phi(z: complex) -> complex:
    """Map induced by ``(u, r) -> (u e^{ir}, r)`` in ordinary polar coordinates: ``z e^{i|z|}``."""
    return z * cmath.exp(1j * abs(z))


def polar_correspondence(pair: PolarDiffeoPair, samples: int = 50, seed: int = 0) -> PolarReport:
    """Check ``E o psi = phi o E`` with ``E(u, s) = sqrt(s) u`` and that psi is a local diffeomorphism."""
    rng = np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, 14])
    ss = [0.0] + [float(x) for x in rng.uniform(0.0, 0.9, samples - 1)]
    thetas = [float(x) for x in rng.uniform(0.0, 2 * math.pi, samples)]
    jac_expr = (pair.g * var("s")).diff("s")
    worst = 0.0
    min_jac = math.inf
    for s, th in zip(ss, thetas):
        env = {"s": s}
        a = pair.a.evaluate(env)
        g = pair.g.evaluate(env)
        if abs(abs(a) - 1.0) > TOLERANCES["unit"]:
            raise InvalidInput(f"|a(s)| = {abs(a)} is not 1 at s = {s}")
        if abs(g.imag) > TOLERANCES["unit"] or g.real <= 0:
            raise InvalidInput(f"g(s) = {g} is not positive at s = {s}")
        w = cmath.exp(1j * th)
        w2, s2 = pair.psi(w, s)
        lhs = math.sqrt(max(s2, 0.0)) * w2
        rhs = pair.phi(math.sqrt(s) * w)
        worst = max(worst, abs(lhs - rhs))
        # in (theta, s) coordinates psi is (theta + arg a(s), g(s) s): determinant d(g s)/ds
        min_jac = min(min_jac, abs(jac_expr.evaluate(env)))
    return PolarReport(worst, min_jac, smoothness_probe(pair.phi), smoothness_probe(ordinary_polar_phi), samples)

