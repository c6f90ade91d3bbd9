import copy
from fractions import Fraction

import pytest

from cutkit.errors import InvalidInput
from cutkit.expr import parse
from cutkit.forms import HalfForm
from cutkit.funcalg import DiscFunc, HalfFunc
from cutkit.scenario import (
    ScenarioError,
    build_object,
    corpus_names,
    corpus_scenario,
    expr_to_func,
    run_scenario,
    validate,
)

REQUIRED = {
    "cylinder_symplectic", "contact_model", "dependence_on_action", "roundtrip_forms", "functoriality_maps",
    "immersion_ranks", "distribution_cut", "momentum_checks", "radial_lift", "radial_squared_lift",
    "polar_correspondence", "nonequivariant_shear_rejection",
}


def minimal(jobs, objects=None):
    return {"schema": "cutkit.scenario/1", "name": "t", "objects": objects or {}, "jobs": jobs}


def test_corpus_is_complete():
    assert REQUIRED <= set(corpus_names())


@pytest.mark.parametrize("name", sorted(REQUIRED))
def test_corpus_scenario_passes(name):
    report = run_scenario(corpus_scenario(name))
    failing = [(j.name, j.message) for j in report.jobs if j.status != "pass"]
    assert report.status == "pass", failing


class TestExprToFunc:
    def test_half(self):
        f = expr_to_func(parse("x1*s + sqrt(s)*exp(I*theta) + cos(2*theta)"), "half", 1)
        expected = HalfFunc.x(1, 0) * HalfFunc.s(1) + HalfFunc.sqrt_s(1) * HalfFunc.expi(1) + HalfFunc.cos(1, 2)
        assert f == expected

    def test_disc(self):
        g = expr_to_func(parse("z*zbar - u**2 - v**2 + x1/2"), "disc", 1)
        assert g == DiscFunc.x(1, 0) * Fraction(1, 2)

    def test_rejects_non_polynomial(self):
        with pytest.raises(InvalidInput):
            expr_to_func(parse("sin(s)"), "half", 0)
        with pytest.raises(InvalidInput):
            expr_to_func(parse("cos(theta/2)"), "half", 0)
        with pytest.raises(InvalidInput):
            expr_to_func(parse("x2"), "disc", 1)


def test_form_objects():
    beta = build_object({"type": "half_form", "dim": 1, "terms": {"dx1": "1", "dtheta": "s"}})
    assert beta == HalfForm.basis(1, "dx1") + HalfForm.basis(1, "dtheta") * HalfFunc.s(1)
    swapped = build_object({"type": "half_form", "dim": 0, "terms": {"dtheta^ds": "1"}})
    assert swapped == HalfForm.basis(0, "ds", "dtheta") * -1
    canonical = build_object({"type": "half_form", **beta.to_json()})
    assert canonical == beta


class TestValidation:
    def test_missing_schema(self):
        with pytest.raises(ScenarioError):
            validate({"name": "x", "jobs": [{"name": "a", "op": "check_identity"}]})

    def test_unknown_op(self):
        with pytest.raises(ScenarioError):
            validate(minimal([{"name": "a", "op": "frobnicate"}]))

    def test_unknown_reference(self):
        with pytest.raises(ScenarioError, match="unknown object"):
            validate(minimal([{"name": "a", "op": "cut_form", "args": ["w"]}]))

    def test_stored_reference_is_known(self):
        objects = {"w": {"type": "half_form", "terms": {"ds^dtheta": "1"}}}
        jobs = [{"name": "a", "op": "cut_form", "args": ["w"], "store": "c"},
                {"name": "b", "op": "is_symplectic", "args": ["c"], "expect": {"ok": True}}]
        assert run_scenario(minimal(jobs, objects)).status == "pass"

    def test_bad_object(self):
        objects = {"w": {"type": "half_form", "terms": {"dq": "1"}}}
        with pytest.raises(ScenarioError, match="object 'w'"):
            run_scenario(minimal([{"name": "a", "op": "cut_form", "args": ["w"]}], objects))


class TestExpectations:
    objects = {"w": {"type": "half_form", "terms": {"ds^dtheta": "1"}}}

    def run(self, expect, op="cut_form", **extra):
        job = {"name": "a", "op": op, "args": ["w"], "expect": expect, **extra}
        return run_scenario(minimal([job], copy.deepcopy(self.objects))).jobs[0]

    def test_equals(self):
        assert self.run({"equals": {"terms": {"du^dv": "2"}}}).status == "pass"
        assert self.run({"equals": {"terms": {"du^dv": "1"}}}).status == "fail"

    def test_raises(self):
        objects = {"w": {"type": "half_form", "terms": {"dtheta": "1"}}}
        job = {"name": "a", "op": "cut_form", "args": ["w"], "expect": {"raises": "NotBasicInvariant"}}
        assert run_scenario(minimal([job], objects)).status == "pass"
        job["expect"] = {"raises": "CutkitError"}
        assert run_scenario(minimal([job], objects)).status == "pass"

    def test_expected_raise_missing(self):
        assert self.run({"raises": "NotBasicInvariant"}).status == "fail"

    def test_unexpected_raise(self):
        assert self.run({"ok": True}, op="is_contact").status == "fail"

    def test_fields_and_less_than(self):
        job = self.run({"fields": {"ok": True}}, op="is_symplectic")
        assert job.status == "pass"
        assert self.run({"fields": {"missing": 1}}, op="is_symplectic").status == "fail"
        jobs = [{"name": "a", "op": "check_identity", "params": {"dim": 2},
                 "expect": {"less_than": {"data.max_residual": 1e-10}}}]
        assert run_scenario(minimal(jobs)).status == "pass"
        jobs[0]["expect"] = {"less_than": {"data.max_residual": 0}}
        assert run_scenario(minimal(jobs)).status == "fail"

    def test_bad_params_are_errors(self):
        job = self.run({}, op="eval_at")
        assert job.status == "error"

    def test_filter_and_seed(self):
        jobs = [{"name": "keep", "op": "check_identity", "params": {"dim": 1}},
                {"name": "drop", "op": "check_identity", "params": {"dim": 2}}]
        report = run_scenario(minimal(jobs), seed=9, name_filter="keep")
        assert [j.name for j in report.jobs] == ["keep"] and report.seed == 9
