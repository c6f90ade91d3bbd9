"""Numeric verification harness: sample plans, Jacobians, ranks, check results and the property runner."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DomainError, InvalidInput
from .expr import as_expr

__all__ = [
    "TOLERANCES",
    "SamplePlan",
    "CheckResult",
    "cut_point",
    "jacobian_at",
    "jacobian_fd",
    "rank_at",
    "descent_oracle",
    "Property",
    "register",
    "registered_properties",
    "run_property",
]

TOLERANCES = {
    "commuting_square": 1e-10,
    "determinant": 1e-9,
    "finite_difference": 1e-6,
    "rank": 1e-8,
    "unit": 1e-10,
    "oracle_residual": 1e-8,
}


# samples ----------------------------------------------------------------

@dataclass(frozen=True)
class SamplePlan:
    """Deterministic sample points on the half model ``(x, theta, s)`` or disc model ``(x, u, v)``.

    Disc points are the images ``c(p) = (x, sqrt(s) e^{i theta})`` of half
    points, so boundary points land on ``z = 0``.
    """

    model: str = "half"
    dim: int = 0
    interior: int = 8
    boundary: int = 4
    near_boundary: int = 4
    seed: int = 0
    delta: float = 1e-3
    radius: float = 0.9
    extra: tuple = ()

    def __post_init__(self):
        if self.model not in ("half", "disc"):
            raise InvalidInput(f"unknown model {self.model!r}")
        if self.delta <= 0:
            raise InvalidInput("delta must be positive")

    def half_points(self) -> list[tuple[float, ...]]:
        rng = np.random.default_rng([self.seed & 0xFFFFFFFFFFFFFFFF, self.dim, 7])
        pts = []
        for region, count in (("interior", self.interior), ("boundary", self.boundary), ("near", self.near_boundary)):
            for _ in range(count):
                x = _ball(rng, self.dim, self.radius)
                theta = float(rng.uniform(0.0, 2 * math.pi))
                if region == "interior":
                    s = float(rng.uniform(0.05, self.radius))
                elif region == "boundary":
                    s = 0.0
                else:
                    s = float(rng.uniform(0.0, self.delta))
                pts.append(tuple(x) + (theta, s))
        return pts

    def points(self) -> list[tuple[float, ...]]:
        pts = self.half_points()
        if self.model == "disc":
            pts = [cut_point(p, self.dim) for p in pts]
        return pts + [tuple(float(c) for c in p) for p in self.extra]

    def boundary_points(self) -> list[tuple[float, ...]]:
        return [p for p in self.points() if (p[self.dim + 1] == 0.0 if self.model == "half" else p[self.dim] == p[self.dim + 1] == 0.0)]

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "dim": self.dim,
            "interior": self.interior,
            "boundary": self.boundary,
            "near_boundary": self.near_boundary,
            "seed": self.seed,
            "delta": self.delta,
        }


def _ball(rng, dim, radius):
    if dim == 0:
        return []
    v = rng.normal(size=dim)
    v /= np.linalg.norm(v) or 1.0
    return [float(c) for c in v * radius * rng.uniform() ** (1.0 / dim)]


def cut_point(p: Sequence[float], dim: int) -> tuple[float, ...]:
    """Image of a half-model point under ``(x, theta, s) -> (x, sqrt(s) e^{i theta})``."""
    theta, s = p[dim], p[dim + 1]
    r = math.sqrt(s)
    return tuple(p[:dim]) + (r * math.cos(theta), r * math.sin(theta))


# check results ------------------------------------------------------------

def _jsonable(value):
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else str(value)
    if isinstance(value, complex):
        if value.imag == 0:
            return _jsonable(value.real)
        return {"re": _jsonable(value.real), "im": _jsonable(value.imag)}
    if isinstance(value, np.generic):
        return _jsonable(value.item())
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    return str(value)


@dataclass
class CheckResult:
    name: str
    status: str
    witnesses: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    seed: int | None = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in ("pass", "fail", "error"):
            raise InvalidInput(f"bad status {self.status!r}")
        if self.status == "fail" and not self.witnesses:
            raise InvalidInput("a failing check needs at least one witness")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "status": self.status,
            "witnesses": _jsonable(self.witnesses),
            "tolerances": _jsonable(self.tolerances),
            "seed": self.seed,
        }
        if self.details:
            out["details"] = _jsonable(self.details)
        return out


# jacobians ---------------------------------------------------------------

def _env(variables, point):
    if len(variables) != len(point):
        raise InvalidInput(f"{len(variables)} variables but {len(point)} coordinates")
    return dict(zip(variables, (float(p) for p in point)))


def _eval_real(exprs, env):
    return np.array([e.evaluate(env).real for e in exprs], dtype=float)


def jacobian_fd(exprs, variables, point, h: float = 1e-5, lower: Mapping[str, float] | None = None) -> np.ndarray:
    """Finite-difference Jacobian: central where possible, one-sided second order at a lower bound."""
    exprs = [as_expr(e) for e in exprs]
    lower = dict(lower or {})
    base = _env(variables, point)
    jac = np.zeros((len(exprs), len(variables)))
    for j, name in enumerate(variables):
        def at(offset):
            env = dict(base)
            env[name] = base[name] + offset
            return _eval_real(exprs, env)

        central = name not in lower or base[name] - h >= lower[name]
        if central:
            try:
                jac[:, j] = (at(h) - at(-h)) / (2 * h)
                continue
            except DomainError:
                pass
        jac[:, j] = (-3 * at(0.0) + 4 * at(h) - at(2 * h)) / (2 * h)
    return jac


def jacobian_at(exprs, variables, point, lower: Mapping[str, float] | None = None) -> np.ndarray:
    """Jacobian of real-valued expressions; symbolic partials with a finite-difference fallback."""
    exprs = [as_expr(e) for e in exprs]
    env = _env(variables, point)
    try:
        return np.array([[e.diff(v).evaluate(env).real for v in variables] for e in exprs], dtype=float).reshape(
            len(exprs), len(variables)
        )
    except DomainError:
        return jacobian_fd(exprs, variables, point, lower=lower)


def rank_at(exprs, variables, point, tol: float = TOLERANCES["rank"], lower=None) -> int:
    jac = jacobian_at(exprs, variables, point, lower=lower)
    if jac.size == 0:
        return 0
    sv = np.linalg.svd(jac, compute_uv=False)
    return int(np.sum(sv > tol))


# descent oracle ----------------------------------------------------------

def descent_oracle(m: int, k: int, degree: int | None = None, points: int = 200, seed: int = 0) -> float:
    """Relative residual of the best polynomial fit in ``(u, v)`` to ``s^(m/2) e^{ik theta}`` on the disc.

    Independent of the exact criterion: it only samples the induced function
    ``|z|^m (z/|z|)^k`` and solves a least-squares problem.
    """
    degree = m if degree is None else degree
    rng = np.random.default_rng(seed)
    r = np.sqrt(rng.uniform(0.0, 1.0, points))
    phi = rng.uniform(0.0, 2 * math.pi, points)
    u, v = r * np.cos(phi), r * np.sin(phi)
    target = r ** m * np.exp(1j * k * phi)
    cols = [u ** a * v ** b for a in range(degree + 1) for b in range(degree + 1 - a)]
    basis = np.stack(cols, axis=1).astype(complex)
    coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
    resid = basis @ coef - target
    return float(np.sqrt(np.mean(np.abs(resid) ** 2)) / np.sqrt(np.mean(np.abs(target) ** 2)))


# property runner ---------------------------------------------------------

@dataclass(frozen=True)
class Property:
    """A randomized property: ``generate(rng)`` builds a case, ``check(case)`` returns ``(ok, detail)``."""

    id: str
    generate: Callable
    check: Callable
    trials: int = 100
    description: str = ""
    tolerances: dict = field(default_factory=dict)


_REGISTRY: dict[str, Property] = {}


def register(prop: Property) -> Property:
    _REGISTRY[prop.id] = prop
    return prop


def registered_properties() -> dict[str, Property]:
    from . import properties  # noqa: F401  populates the registry

    return dict(sorted(_REGISTRY.items()))


def _shrink_candidates(case):
    from .forms import Form

    if isinstance(case, Form):
        keys = sorted(case._terms)
        for key in keys:
            yield type(case)._raw(case.dim, case.degree, {k: c for k, c in case._terms.items() if k != key})
        for key in keys:
            c = case._terms[key]
            if len(c) > 1:
                for t in c.keys():
                    smaller = type(c)._raw(c.dim, {k: v for k, v in c._terms.items() if k != t}, c.radical)
                    yield type(case)._raw(case.dim, case.degree, {**case._terms, key: smaller})
    elif isinstance(case, tuple):
        for i, part in enumerate(case):
            for smaller in _shrink_candidates(part):
                yield case[:i] + (smaller,) + case[i + 1:]


def _still_fails(prop, case):
    try:
        ok, _ = prop.check(case)
    except Exception:
        return False
    return not ok


def shrink(prop: Property, case, limit: int = 200):
    """Greedy term dropping while the property keeps failing."""
    steps = 0
    improved = True
    while improved and steps < limit:
        improved = False
        for cand in _shrink_candidates(case):
            steps += 1
            if _still_fails(prop, cand):
                case = cand
                improved = True
                break
    return case


def _describe(case):
    if isinstance(case, tuple):
        return [_describe(c) for c in case]
    if hasattr(case, "to_json"):
        return {"text": str(case), "json": case.to_json()}
    return str(case)


def run_property(name: str, seed: int, property_id: str, trials: int | None = None) -> CheckResult:
    props = registered_properties()
    if property_id not in props:
        raise InvalidInput(f"unknown property {property_id!r}")
    prop = props[property_id]
    trials = prop.trials if trials is None else trials
    tol = prop.tolerances or {"exact": 0}
    stats: dict = {"trials": 0}
    for trial in range(trials):
        rng = np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, trial, _stable_hash(property_id)])
        case = prop.generate(rng)
        try:
            ok, detail = prop.check(case)
        except Exception as exc:  # a crash inside a property is an error, not a failure
            return CheckResult(
                name, "error", [{"trial": trial, "case": _describe(case), "error": f"{type(exc).__name__}: {exc}"}],
                tol, seed, stats,
            )
        stats["trials"] += 1
        if isinstance(detail, Mapping):
            for key, val in detail.items():
                if isinstance(val, bool):
                    stats[key] = stats.get(key, 0) + int(val)
                elif isinstance(val, (int, float)) and key.startswith("max_"):
                    stats[key] = max(stats.get(key, 0.0), float(val))
        if not ok:
            small = shrink(prop, case)
            _, small_detail = prop.check(small)
            return CheckResult(
                name, "fail",
                [{"trial": trial, "case": _describe(small), "detail": small_detail}],
                tol, seed, stats,
            )
    return CheckResult(name, "pass", [], tol, seed, stats)


def _stable_hash(text: str) -> int:
    h = 0
    for ch in text.encode():
        h = (h * 131 + ch) & 0xFFFFFFFF
    return h

