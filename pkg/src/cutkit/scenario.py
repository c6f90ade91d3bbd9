"""Scenario files: declarative objects plus a list of jobs with expectations.

A scenario is validated against ``scenario.schema.json``; object ids used by a
job must be defined in ``objects`` or stored by an earlier job.  Functions can
be written as expression strings (``"x1*s + cos(2*theta)"``), forms as a
mapping from wedge keys to coefficient strings (``{"ds^dtheta": "1"}``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any, Callable, Mapping

import jsonschema
import numpy as np

from . import blowup, cutting, forms, funcalg
from .errors import CutkitError, InvalidInput
from .expr import Expr, as_expr, var
from .forms import DiscForm, Form, HalfForm
from .funcalg import CRational, DiscFunc, HalfFunc, _ExactFunc
from .verify import CheckResult, SamplePlan, _jsonable, run_property

SCHEMA_ID = "cutkit.scenario/1"


class ScenarioError(CutkitError):
    """The scenario file is malformed (schema violation, unknown id, bad object)."""


def load_schema() -> dict:
    text = resources.files("cutkit").joinpath("scenario.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate(data: Any) -> None:
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        lines = [f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in errors[:10]]
        raise ScenarioError("scenario does not match the schema:\n  " + "\n  ".join(lines))
    known = set(data.get("objects", {}))
    for obj_id, spec in data.get("objects", {}).items():
        if spec["type"] == "frame":
            for ref in spec.get("forms", []):
                if isinstance(ref, str) and ref not in known:
                    raise ScenarioError(f"frame {obj_id!r} refers to unknown object {ref!r}")
    for job in data["jobs"]:
        for ref in job.get("args", []):
            if ref not in known:
                raise ScenarioError(f"job {job['name']!r} refers to unknown object {ref!r}")
        if "store" in job:
            known.add(job["store"])


# expressions to exact functions --------------------------------------------

def _linear_theta(arg: Expr) -> CRational | None:
    """Coefficient c when ``arg == c * theta``, else None."""
    if arg.variables() - {"theta"}:
        return None
    slope = arg.diff("theta")
    if slope.op != "const" or arg.evaluate({"theta": 0.0}) != 0:
        return None
    if (arg - slope * var("theta")).evaluate({"theta": 1.0}) != 0:
        return None
    return slope.value


def _integer(c: CRational, what: str) -> int:
    if c.im != 0 or c.re.denominator != 1:
        raise InvalidInput(f"{what} must be an integer multiple of theta")
    return int(c.re)


def expr_to_func(e: Expr, model: str, dim: int) -> _ExactFunc:
    """Convert an expression into an exact :class:`HalfFunc` or :class:`DiscFunc`.

    Half model: polynomials in ``x_i``, ``s``, ``sqrt(s)`` and ``cos/sin/exp`` of
    integer multiples of ``theta``.  Disc model: polynomials in ``x_i``, ``u``,
    ``v``, ``z`` and ``zbar``.
    """
    cls = HalfFunc if model == "half" else DiscFunc

    def rec(node: Expr) -> _ExactFunc:
        op, a = node.op, node.args
        if op == "const":
            return cls.constant(dim, node.value)
        if op == "var":
            name = node.value
            if name.startswith("x") and name[1:].isdigit() and 1 <= int(name[1:]) <= dim:
                return cls.x(dim, int(name[1:]) - 1)
            if model == "half" and name == "s":
                return HalfFunc.s(dim)
            if model == "disc" and name in ("u", "v", "z", "zbar"):
                return getattr(DiscFunc, name)(dim)
            raise InvalidInput(f"variable {name!r} is not allowed in a {model}-model function of dim {dim}")
        if op == "add":
            out = cls.zero(dim)
            for x in a:
                out = out + rec(x)
            return out
        if op == "mul":
            out = cls.constant(dim, 1)
            for x in a:
                out = out * rec(x)
            return out
        if op == "neg":
            return -rec(a[0])
        if op == "pow":
            if node.value < 0:
                raise InvalidInput("negative powers are not polynomial")
            base = rec(a[0])
            out = cls.constant(dim, 1)
            for _ in range(node.value):
                out = out * base
            return out
        if op == "div" and a[1].op == "const":
            return rec(a[0]) * (CRational(1) / a[1].value)
        if model == "half":
            if op == "sqrt" and a[0] == var("s"):
                return HalfFunc.sqrt_s(dim)
            if op in ("cos", "sin"):
                c = _linear_theta(a[0])
                if c is not None:
                    return getattr(HalfFunc, op)(dim, _integer(c, f"{op} argument"))
            if op == "exp":
                c = _linear_theta(a[0])
                if c is not None:
                    k = c * CRational(0, -1)
                    return HalfFunc.expi(dim, _integer(k, "exp argument / I"))
        if model == "disc" and op == "conj":
            return rec(a[0]).conjugate()
        raise InvalidInput(f"cannot express {node} exactly as a {model}-model function")

    return rec(e)


def _func(spec, model: str, dim: int) -> _ExactFunc:
    cls = HalfFunc if model == "half" else DiscFunc
    if isinstance(spec, _ExactFunc):
        return spec
    if isinstance(spec, (int, Fraction)):
        return cls.constant(dim, spec)
    if isinstance(spec, str):
        return expr_to_func(as_expr(spec), model, dim)
    if isinstance(spec, Mapping):
        if "expr" in spec:
            return expr_to_func(as_expr(spec["expr"]), model, dim)
        data = dict(spec)
        data.setdefault("dim", dim)
        return cls.from_json(data)
    raise InvalidInput(f"not a function: {spec!r}")


def _form(spec: Mapping, model: str) -> Form:
    cls = HalfForm if model == "half" else DiscForm
    dim = int(spec.get("dim", 0))
    terms = spec.get("terms", {})
    if isinstance(terms, list):
        data = {"dim": dim, "degree": spec.get("degree", len(terms[0]["key"]) if terms else 0), "terms": []}
        for t in terms:
            coeff = _func(t["coeff"], model, dim)
            data["terms"].append({"key": t["key"], "coeff": coeff.to_json()})
        return cls.from_json(data)
    parsed = {}
    degree = spec.get("degree")
    for key_text, coeff in terms.items():
        key = tuple(k.strip() for k in key_text.split("^") if k.strip())
        if degree is None:
            degree = len(key)
        parsed[key] = parsed[key] + _func(coeff, model, dim) if key in parsed else _func(coeff, model, dim)
    return cls(dim, int(degree or 0), parsed)


def build_object(spec: Mapping, objects: Mapping[str, Any] | None = None):
    kind = spec["type"]
    objects = objects or {}
    if kind in ("half_func", "disc_func"):
        model = kind.split("_")[0]
        dim = int(spec.get("dim", 0))
        f = _func(spec if "expr" in spec else {k: v for k, v in spec.items() if k != "type"}, model, dim)
        return f
    if kind in ("half_form", "disc_form"):
        return _form(spec, kind.split("_")[0])
    if kind == "local_map":
        return cutting.LocalMap.from_json(spec)
    if kind == "frame":
        items = []
        for ref in spec.get("forms", []):
            items.append(objects[ref] if isinstance(ref, str) else build_object({"type": "half_form", **ref}))
        return cutting.DistributionFrame(tuple(items))
    if kind == "lift_input":
        return blowup.BlowupLiftInput.from_json(spec)
    if kind == "polar_pair":
        return blowup.PolarDiffeoPair(as_expr(spec["a"]), as_expr(spec["g"]))
    if kind == "value":
        return spec.get("value")
    raise InvalidInput(f"unknown object type {kind!r}")


# operations -----------------------------------------------------------------

@dataclass
class Context:
    seed: int
    job: Mapping

    @property
    def params(self) -> Mapping:
        return self.job.get("params", {})

    def samples(self, obj) -> list | None:
        spec = self.job.get("samples")
        if spec is None:
            return None
        model = "half" if isinstance(obj, HalfForm) else "disc"
        plan = SamplePlan(model, obj.dim, interior=spec.get("interior", 8), boundary=spec.get("boundary", 4),
                          near_boundary=spec.get("near_boundary", 4), seed=self.seed,
                          delta=spec.get("delta", 1e-3), extra=[tuple(p) for p in spec.get("extra", [])])
        return plan.points()


def _naive_probe(inp, ctx):
    lifted = blowup.naive_squared_lift(inp)
    count = int(ctx.params.get("points", 5))
    pts = [p for p in blowup.lift_sample_points(inp, count=count, seed=ctx.seed, boundary_fraction=1.0)]
    probes = [blowup.s_smoothness_probe(lifted, p) for p in pts]
    worst = max(probes, key=lambda r: r["divergence"])
    return {"smooth": all(r["smooth"] for r in probes), "max_divergence": worst["divergence"],
            "worst_point": worst["point"], "points": len(probes)}


def _property(ctx):
    pid = ctx.params.get("property")
    if not pid:
        raise InvalidInput("run_property needs params.property")
    return run_property(pid, ctx.seed, pid, ctx.params.get("trials"))


OPS: dict[str, Callable] = {
    "mono_descends": lambda ctx: funcalg.mono_descends(int(ctx.params["m"]), int(ctx.params["k"])),
    "descend_function": lambda ctx, f: funcalg.descend_function(f),
    "lift_function": lambda ctx, g: funcalg.lift_function(g),
    "is_smooth_on_half": lambda ctx, f: funcalg.is_smooth_on_half(f),
    "is_invariant": lambda ctx, f: funcalg.is_invariant(f),
    "rescale_boundary_function": lambda ctx, f: funcalg.rescale_boundary_function(f, Fraction(str(ctx.params["lambda"]))),
    "wedge": lambda ctx, a, b: forms.wedge(a, b),
    "ext_d": lambda ctx, a: forms.ext_d(a),
    "contract": lambda ctx, a: forms.contract(ctx.params["vector"], a),
    "lie_derivative": lambda ctx, a: forms.lie_derivative(ctx.params["vector"], a),
    "is_basic_invariant": lambda ctx, a: forms.is_basic_invariant(a),
    "boundary_pullback": lambda ctx, a: forms.boundary_pullback(a),
    "eval_at": lambda ctx, a: forms.eval_at(a, ctx.params["point"]),
    "cut_form": lambda ctx, a: cutting.cut_form(a),
    "reduced_form": lambda ctx, a: cutting.reduced_form(a),
    "cut_map": lambda ctx, psi: cutting.cut_map(psi),
    "compose_maps": lambda ctx, p1, p2: cutting.compose_maps(p1, p2),
    "momentum_check": lambda ctx, omega, mu: cutting.momentum_check(omega, mu),
    "contact_momentum": lambda ctx, beta: cutting.contact_momentum(beta),
    "is_symplectic": lambda ctx, w: cutting.is_symplectic(w, ctx.samples(w), ctx.params.get("coords")),
    "is_contact": lambda ctx, b: cutting.is_contact(b, ctx.samples(b), ctx.params.get("coords")),
    "cut_distribution": lambda ctx, frame: cutting.cut_distribution(
        frame, ctx.samples(frame.forms[0]), seed=ctx.seed),
    "check_functoriality": lambda ctx, p1, p2: cutting.functoriality_check(
        p1, p2, int(ctx.params.get("points", 50)), seed=ctx.seed),
    "check_ranks": lambda ctx, psi: cutting.rank_check(psi, int(ctx.params.get("points", 20)), seed=ctx.seed),
    "check_identity": lambda ctx: cutting.identity_check(int(ctx.params["dim"]), int(ctx.params.get("points", 20)),
                                                         seed=ctx.seed),
    "blowup_pullback": lambda ctx, gamma: blowup.blowup_pullback(gamma),
    "roundtrip_check": lambda ctx, obj: blowup.roundtrip_check(obj),
    "lift_map_radial": lambda ctx, inp: blowup.lift_map_radial(
        inp, blowup.lift_sample_points(inp, int(ctx.params.get("points", 100)), seed=ctx.seed), seed=ctx.seed),
    "lift_map_radial_squared": lambda ctx, inp: blowup.lift_map_radial_squared(
        inp, blowup.lift_sample_points(inp, int(ctx.params.get("points", 100)), seed=ctx.seed), seed=ctx.seed),
    "naive_squared_lift_probe": lambda ctx, inp: _naive_probe(inp, ctx),
    "polar_correspondence": lambda ctx, pair: blowup.polar_correspondence(
        pair, int(ctx.params.get("points", 50)), seed=ctx.seed),
    "run_property": _property,
}


# results and expectations ----------------------------------------------------

def result_json(result) -> Any:
    if isinstance(result, (Form, _ExactFunc)):
        return {"text": str(result), **result.to_json()}
    if isinstance(result, funcalg.DescentVerdict):
        data = result.to_json()
        if result.image is not None:
            data["image"]["text"] = str(result.image)
        return data
    if isinstance(result, forms.BasicInvariance):
        return {"ok": result.ok, "witness": _jsonable(result.witness)}
    return _jsonable(result)


def truth(result) -> bool | None:
    """Pass/fail reading of a verdict-like result (None when the result is plain data)."""
    if isinstance(result, (bool, np.bool_)):
        return bool(result)
    if isinstance(result, funcalg.DescentVerdict):
        return result.descends
    if isinstance(result, cutting.DistributionReport):
        return result.consistent
    if isinstance(result, blowup.LiftedMap):
        return bool(result.checks.get("commutes"))
    if isinstance(result, CheckResult):
        return result.passed
    if isinstance(result, Mapping):
        for key in ("ok", "smooth"):
            if key in result:
                return bool(result[key])
        return None
    ok = getattr(result, "ok", None)
    return bool(ok) if isinstance(ok, (bool, np.bool_)) else None


def summary(result) -> str:
    if isinstance(result, (Form, _ExactFunc, Expr, cutting.LocalMap, cutting.CutMap)):
        return str(result)
    if isinstance(result, funcalg.DescentVerdict):
        if result.descends:
            return f"descends to {result.image}"
        return "does not descend; offending (k, m): " + ", ".join(f"({k}, {m})" for _, k, m in result.offending_modes)
    t = truth(result)
    reason = getattr(result, "reason", "")
    if t is not None:
        return ("ok" if t else "not ok") + (f" ({reason})" if reason else "")
    return json.dumps(result_json(result), sort_keys=True)[:200]


def _close(a, b) -> bool:
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b or a == b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12)
    if isinstance(a, Mapping) and isinstance(b, Mapping):
        return all(k in a and _close(a[k], v) for k, v in b.items())
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(_close(x, y) for x, y in zip(a, b))
    return a == b


def _expected_value(expected, result):
    """Build the expected object in the same category as ``result``."""
    if isinstance(result, Form):
        model = "half" if isinstance(result, HalfForm) else "disc"
        if isinstance(expected, str):
            return expected
        return _form({"dim": result.dim, "degree": result.degree, **expected}, model)
    if isinstance(result, _ExactFunc):
        model = "half" if isinstance(result, HalfFunc) else "disc"
        return _func(expected, model, result.dim)
    if isinstance(result, cutting.LocalMap):
        return cutting.LocalMap.from_json(expected)
    return expected


def _lookup(data, path: str):
    cur = data
    for part in path.split("."):
        if isinstance(cur, list):
            cur = cur[int(part)]
        else:
            cur = cur[part]
    return cur


def check_expectation(expect: Mapping, result) -> tuple[bool, str]:
    if "equals" in expect:
        want = _expected_value(expect["equals"], result)
        if isinstance(result, Form) and isinstance(want, str):
            same = str(result) == want
        elif isinstance(result, np.ndarray):
            same = np.allclose(result, np.asarray(want, dtype=complex), atol=1e-12)
        elif isinstance(result, (Form, _ExactFunc, cutting.LocalMap)):
            same = result == want
        else:
            same = _close(result_json(result), want)
        if not same:
            return False, f"expected {expect['equals']!r}, got {summary(result)}"
    if "ok" in expect:
        t = truth(result)
        if t is None:
            return False, f"result {summary(result)} has no pass/fail reading"
        if t != expect["ok"]:
            return False, f"expected ok={expect['ok']}, got {summary(result)}"
    data = result_json(result) if ("fields" in expect or "less_than" in expect) else None
    for path, want in expect.get("fields", {}).items():
        try:
            got = _lookup(data, path)
        except (KeyError, IndexError, TypeError, ValueError):
            return False, f"result has no field {path!r}"
        if not _close(got, want):
            return False, f"field {path}: expected {want!r}, got {got!r}"
    for path, bound in expect.get("less_than", {}).items():
        try:
            got = _lookup(data, path)
        except (KeyError, IndexError, TypeError, ValueError):
            return False, f"result has no field {path!r}"
        if not (isinstance(got, (int, float)) and got < bound):
            return False, f"field {path}: {got!r} is not below {bound}"
    if not expect:
        t = truth(result)
        if t is False:
            return False, summary(result)
    return True, ""


# running ---------------------------------------------------------------------

@dataclass
class JobResult:
    name: str
    op: str
    status: str  # pass | fail | error
    summary: str = ""
    message: str = ""
    result: Any = None

    def to_json(self) -> dict:
        return {"name": self.name, "op": self.op, "status": self.status, "summary": self.summary,
                "message": self.message, "result": self.result}


@dataclass
class Report:
    scenario: str
    seed: int
    jobs: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if any(j.status == "error" for j in self.jobs):
            return "error"
        return "fail" if any(j.status == "fail" for j in self.jobs) else "pass"

    def counts(self) -> dict:
        return {s: sum(j.status == s for j in self.jobs) for s in ("pass", "fail", "error")}

    def to_json(self) -> dict:
        return {"scenario": self.scenario, "seed": self.seed, "status": self.status, "counts": self.counts(),
                "jobs": [j.to_json() for j in self.jobs]}

    def text(self) -> str:
        lines = [f"scenario {self.scenario} (seed {self.seed})"]
        width = max((len(j.name) for j in self.jobs), default=0)
        for j in self.jobs:
            line = f"  {j.status.upper():5} {j.name:<{width}}  {j.op}: {j.summary}"
            if j.message and j.status != "pass":
                line += f"\n        {j.message}"
            lines.append(line)
        c = self.counts()
        lines.append(f"{c['pass']}/{len(self.jobs)} jobs passed" + (f", {c['error']} errors" if c["error"] else ""))
        return "\n".join(lines)


def _raised_matches(exc: BaseException, name: str) -> bool:
    return any(cls.__name__ == name for cls in type(exc).__mro__)


def run_job(job: Mapping, objects: dict, seed: int) -> JobResult:
    op = job["op"]
    ctx = Context(seed, job)
    args = [objects[a] for a in job.get("args", [])]
    expect = job.get("expect", {})
    try:
        result = OPS[op](ctx, *args)
    except CutkitError as exc:
        raised = type(exc).__name__
        if "raises" in expect and _raised_matches(exc, expect["raises"]):
            return JobResult(job["name"], op, "pass", f"raised {raised}", str(exc), {"raised": raised})
        return JobResult(job["name"], op, "fail", f"raised {raised}", str(exc), {"raised": raised})
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        # bad params or argument types in the scenario surface here
        return JobResult(job["name"], op, "error", f"{type(exc).__name__}", str(exc))
    if "store" in job:
        objects[job["store"]] = result
    if "raises" in expect:
        return JobResult(job["name"], op, "fail", summary(result), f"expected {expect['raises']}",
                         result_json(result))
    ok, message = check_expectation(expect, result)
    return JobResult(job["name"], op, "pass" if ok else "fail", summary(result), message, result_json(result))


def load(source) -> dict:
    if isinstance(source, Mapping):
        return dict(source)
    try:
        with open(source, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{source}: invalid JSON ({exc})") from None


def run_scenario(data: Mapping, seed: int | None = None, name_filter: str | None = None) -> Report:
    validate(data)
    seed = int(data.get("seed", 0)) if seed is None else int(seed)
    objects: dict = {}
    for obj_id, spec in data.get("objects", {}).items():
        try:
            objects[obj_id] = build_object(spec, objects)
        except (CutkitError, KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"object {obj_id!r}: {exc}") from None
    report = Report(data["name"], seed)
    for job in data["jobs"]:
        if name_filter and name_filter not in job["name"]:
            continue
        report.jobs.append(run_job(job, objects, seed))
    return report


def corpus_names() -> list[str]:
    folder = resources.files("cutkit").joinpath("corpus")
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def corpus_scenario(name: str) -> dict:
    path = resources.files("cutkit").joinpath("corpus", f"{name}.json")
    if not path.is_file():
        raise ScenarioError(f"no corpus scenario named {name!r}")
    return json.loads(path.read_text(encoding="utf-8"))
