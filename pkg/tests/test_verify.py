import json

import numpy as np
import pytest

from cutkit import verify
from cutkit.errors import InvalidInput
from cutkit.expr import parse
from cutkit.forms import HalfForm
from cutkit.funcalg import HalfFunc, mono_descends
from cutkit.verify import (
    CheckResult,
    Property,
    SamplePlan,
    cut_point,
    descent_oracle,
    jacobian_at,
    jacobian_fd,
    rank_at,
    run_property,
    shrink,
)


class TestSamplePlan:
    def test_deterministic(self):
        a = SamplePlan("half", 2, seed=5).points()
        b = SamplePlan("half", 2, seed=5).points()
        assert a == b

    def test_boundary_and_near(self):
        plan = SamplePlan("half", 1, interior=3, boundary=2, near_boundary=2, seed=0, delta=1e-3)
        pts = plan.points()
        ss = [p[-1] for p in pts]
        assert len(pts) == 7
        assert sum(s == 0.0 for s in ss) == 2
        assert all(s >= 0 for s in ss)
        assert sum(0 < s <= 1e-3 for s in ss) >= 2

    def test_disc_points_match_cut_point(self):
        half = SamplePlan("half", 1, seed=3).half_points()
        disc = SamplePlan("disc", 1, seed=3).points()
        assert disc == [cut_point(p, 1) for p in half]


def test_cut_point():
    u, v = cut_point((0.5, np.pi / 2, 0.25), 1)[1:]
    assert u == pytest.approx(0.0, abs=1e-15) and v == pytest.approx(0.5)


class TestCheckResult:
    def test_fail_needs_witness(self):
        with pytest.raises(InvalidInput):
            CheckResult("x", "fail")

    def test_json(self):
        res = CheckResult("x", "pass", [], {"exact": 0}, 1, {"max_r": np.float64(1e-3)})
        assert json.loads(json.dumps(res.to_json()))["details"]["max_r"] == 1e-3


class TestJacobians:
    def test_identity(self):
        exprs = [parse("x1"), parse("u"), parse("v")]
        assert np.allclose(jacobian_at(exprs, ["x1", "u", "v"], [0.2, 0.3, 0.1]), np.eye(3))

    def test_rotation_block(self):
        exprs = [parse("x1"), parse("-v"), parse("u")]
        jac = jacobian_at(exprs, ["x1", "u", "v"], [0.0, 1.0, 0.0])
        assert np.allclose(jac, [[1, 0, 0], [0, 0, -1], [0, 1, 0]])

    def test_scaled_last(self):
        exprs = [parse("t1"), parse("u1"), parse("u2"), parse("2*s")]
        jac = jacobian_at(exprs, ["t1", "u1", "u2", "s"], [0.1, 0.6, 0.8, 0.3])
        assert np.allclose(jac, np.diag([1, 1, 1, 2]))

    def test_fd_agrees(self):
        exprs = [parse("sin(x1)*s"), parse("exp(x1 + s**2)")]
        pt = [0.4, 0.3]
        assert np.allclose(jacobian_at(exprs, ["x1", "s"], pt), jacobian_fd(exprs, ["x1", "s"], pt), atol=1e-6)

    def test_fd_one_sided_at_boundary(self):
        exprs = [parse("sqrt(s)*sqrt(s)*exp(s)")]  # equals s e^s but undefined for s < 0
        jac = jacobian_fd(exprs, ["s"], [0.0], lower={"s": 0.0})
        assert jac[0, 0] == pytest.approx(1.0, abs=1e-6)

    def test_ranks(self):
        names = ["x1", "s"]
        assert rank_at([parse("x1"), parse("s")], names, [0.1, 0.2]) == 2
        assert rank_at([parse("1"), parse("2")], names, [0.1, 0.2]) == 0
        assert rank_at([parse("x1"), parse("0")], names, [0.1, 0.2]) == 1


class TestDescentOracle:
    @pytest.mark.parametrize("m,k", [(1, 1), (2, 0), (1, 3), (3, 1), (2, 1), (0, 2)])
    def test_agrees(self, m, k):
        assert (descent_oracle(m, k) < 1e-8) == mono_descends(m, k)

    def test_non_descending_residual_is_large(self):
        assert descent_oracle(1, 3) > 1e-3


class TestRunner:
    def test_examples_pass(self):
        for pid in ("d_commutes_cut", "dd_zero", "roundtrip"):
            assert run_property(pid, 42, pid, 30).passed

    def test_deterministic(self):
        a = json.dumps(run_property("leibniz", 7, "leibniz", 20).to_json(), sort_keys=True)
        b = json.dumps(run_property("leibniz", 7, "leibniz", 20).to_json(), sort_keys=True)
        assert a == b

    def test_unknown(self):
        with pytest.raises(InvalidInput):
            run_property("nope", 0, "nope")

    def test_failure_is_shrunk(self, monkeypatch):
        def gen(rng):
            return HalfForm(1, 1, {("dx1",): 1, ("ds",): HalfFunc.s(1) + 1, ("dtheta",): HalfFunc.s(1)})

        def check(beta):
            return beta.coeff(("ds",)).is_zero(), {}

        prop = Property("toy_fail", gen, check, trials=3)
        monkeypatch.setitem(verify._REGISTRY, "toy_fail", prop)
        res = run_property("toy_fail", 0, "toy_fail")
        assert res.status == "fail"
        assert res.witnesses[0]["case"]["text"] in ("ds", "s ds")

    def test_crash_is_error(self, monkeypatch):
        prop = Property("toy_crash", lambda rng: 0, lambda c: 1 / c, trials=1)
        monkeypatch.setitem(verify._REGISTRY, "toy_crash", prop)
        assert run_property("toy_crash", 0, "toy_crash").status == "error"

    def test_shrink_keeps_failing(self):
        prop = Property("p", None, lambda f: (f.coeff(("dx1",)).is_zero(), {}))
        big = HalfForm(1, 1, {("dx1",): HalfFunc.x(1, 0) + 2, ("ds",): 1})
        small = shrink(prop, big)
        assert list(small.key_names(k) for k, _ in small.terms) == [["dx1"]]
        assert len(small.coeff(("dx1",))) == 1
