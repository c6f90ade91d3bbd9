import numpy as np
import pytest

from cutkit.errors import DomainError, InvalidInput, ModelMismatch, SingularDifferential
from cutkit.forms import (
    DiscForm,
    HalfForm,
    boundary_pullback,
    contract,
    eval_at,
    ext_d,
    is_basic_invariant,
    lie_derivative,
    wedge,
)
from cutkit.funcalg import DiscFunc, HalfFunc

S = HalfFunc.s


def hb(dim, *names):
    return HalfForm.basis(dim, *names)


def db(dim, *names):
    return DiscForm.basis(dim, *names)


class TestWedge:
    def test_basis(self):
        w = wedge(hb(2, "dx1"), hb(2, "dx2"))
        assert w == hb(2, "dx1", "dx2")
        assert w.coeff(("dx1", "dx2")) == HalfFunc.constant(2, 1)
        assert w.coeff(("dx2", "dx1")) == HalfFunc.constant(2, -1)

    def test_antisymmetry(self):
        assert wedge(hb(0, "ds"), hb(0, "ds")).is_zero()

    def test_distributes(self):
        beta = hb(1, "dx1") + hb(1, "dtheta") * S(1)
        assert wedge(beta, hb(1, "ds", "dtheta")) == hb(1, "dx1", "ds", "dtheta")

    def test_model_mismatch(self):
        with pytest.raises((ModelMismatch, TypeError)):
            wedge(hb(0, "ds"), db(0, "du"))


class TestExtD:
    def test_s_dtheta(self):
        assert ext_d(hb(0, "dtheta") * S(0)) == hb(0, "ds", "dtheta")

    def test_rotation_form(self):
        u, v = DiscFunc.u(0), DiscFunc.v(0)
        assert ext_d(db(0, "dv") * u - db(0, "du") * v) == db(0, "du", "dv") * 2

    def test_closed_basis(self):
        assert ext_d(hb(1, "dx1")).is_zero()

    def test_theta_derivative(self):
        f = HalfForm.function(HalfFunc.cos(0, 1))
        assert ext_d(f) == hb(0, "dtheta") * (-HalfFunc.sin(0, 1))

    def test_sqrt_s_is_singular(self):
        with pytest.raises(SingularDifferential):
            ext_d(HalfForm.function(HalfFunc.sqrt_s(0)))


class TestContractAndLie:
    def test_contract_sign(self):
        assert contract("theta", hb(0, "ds", "dtheta")) == hb(0, "ds") * -1

    def test_contract_one_form(self):
        assert contract("theta", hb(0, "dtheta") * S(0)) == HalfForm.function(S(0))

    def test_contract_zero(self):
        assert contract("theta", hb(1, "dx1")).is_zero()

    def test_contract_degree_zero(self):
        with pytest.raises(InvalidInput):
            contract("theta", HalfForm.function(S(0)))

    def test_lie(self):
        assert lie_derivative("theta", hb(0, "dtheta") * S(0)).is_zero()
        assert lie_derivative("theta", hb(1, "dx1") * HalfFunc.cos(1, 1)) == hb(1, "dx1") * -HalfFunc.sin(1, 1)
        assert lie_derivative("theta", hb(0, "ds")).is_zero()


class TestBasicInvariant:
    def test_s_dtheta(self):
        assert is_basic_invariant(hb(0, "dtheta") * S(0)).ok

    def test_dtheta(self):
        res = is_basic_invariant(hb(0, "dtheta"))
        assert not res.ok and res.witness

    def test_theta_dependent(self):
        ok, witness = is_basic_invariant(hb(1, "dx1") * HalfFunc.cos(1, 1))
        assert not ok
        assert witness[0]["reason"] == "theta-dependent coefficient"

    def test_ds_dtheta_needs_no_factor(self):
        assert is_basic_invariant(hb(0, "ds", "dtheta")).ok


class TestBoundaryPullback:
    def test_everything_dies(self):
        beta = hb(2, "dx1", "ds") + hb(2, "dtheta", "dx2") * S(2)
        assert boundary_pullback(beta).is_zero()

    def test_keeps_m0(self):
        b = HalfFunc.x(1, 0) + 1
        assert boundary_pullback(hb(1, "dx1") * b) == hb(1, "dx1") * b

    def test_s_squared(self):
        assert boundary_pullback(hb(1, "dx1") * S(1, 2)).is_zero()


class TestEval:
    def test_cylinder(self):
        arr = eval_at(hb(0, "ds", "dtheta"), [0.3, 0.1])
        assert np.allclose(arr, [[0, -1], [1, 0]])

    def test_disc_area(self):
        arr = eval_at(db(0, "du", "dv") * 2, [0.0, 0.0])
        assert np.allclose(arr, [[0, 2], [-2, 0]])

    def test_one_form(self):
        arr = eval_at(hb(0, "dtheta") * S(0), [0.0, 0.25])
        assert np.allclose(arr, [0.25, 0.0])

    def test_outside_domain(self):
        with pytest.raises(DomainError):
            eval_at(hb(0, "ds"), [0.0, -0.1])


def test_printing():
    assert str(hb(0, "ds", "dtheta")) == "ds^dtheta"
    assert str(db(1, "dx1") * 2) == "2 dx1"
    assert str(HalfForm.zero(0, 1)) == "0"


def test_json_roundtrip():
    beta = hb(1, "dx1", "ds") * (HalfFunc.x(1, 0) + S(1)) + hb(1, "ds", "dtheta")
    assert HalfForm.from_json(beta.to_json()) == beta


def test_bad_degree():
    with pytest.raises(InvalidInput):
        HalfForm(0, 3)
