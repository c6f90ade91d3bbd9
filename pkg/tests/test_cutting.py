import numpy as np
import pytest

from cutkit.cutting import (
    DistributionFrame,
    LocalMap,
    compose_maps,
    contact_momentum,
    cut_distribution,
    cut_form,
    cut_map,
    functoriality_check,
    identity_check,
    is_contact,
    is_involutive,
    is_symplectic,
    momentum_check,
    rank_check,
    rank_profile,
    reduced_form,
    restrict_to_red,
)
from cutkit.errors import DegenerateFrame, InvalidInput, NotBasicInvariant
from cutkit.expr import parse
from cutkit.forms import DiscForm, HalfForm
from cutkit.funcalg import DiscFunc, HalfFunc

S = HalfFunc.s


def hb(dim, *names):
    return HalfForm.basis(dim, *names)


def db(dim, *names):
    return DiscForm.basis(dim, *names)


class TestCutForm:
    def test_area(self):
        assert cut_form(hb(0, "ds", "dtheta")) == db(0, "du", "dv") * 2
        assert str(cut_form(hb(0, "ds", "dtheta"))) == "2 du^dv"

    def test_rotation(self):
        u, v = DiscFunc.u(0), DiscFunc.v(0)
        assert cut_form(hb(0, "dtheta") * S(0)) == db(0, "dv") * u - db(0, "du") * v

    def test_radial(self):
        u, v = DiscFunc.u(1), DiscFunc.v(1)
        expected = db(1, "dx1", "du") * (u * 2) + db(1, "dx1", "dv") * (v * 2)
        assert cut_form(hb(1, "dx1", "ds")) == expected

    def test_rejects_non_basic(self):
        with pytest.raises(NotBasicInvariant):
            cut_form(hb(0, "dtheta"))
        with pytest.raises(NotBasicInvariant):
            cut_form(hb(1, "dx1") * HalfFunc.cos(1, 1))


class TestReduced:
    def test_product(self):
        omega = hb(2, "dx1", "dx2") + hb(2, "ds", "dtheta")
        assert reduced_form(omega) == db(2, "dx1", "dx2")

    def test_s_dtheta(self):
        assert reduced_form(hb(0, "dtheta") * S(0)).is_zero()

    def test_function_coefficient(self):
        b = HalfFunc.x(1, 0) ** 2 + 1
        assert reduced_form(hb(1, "dx1") * b) == db(1, "dx1") * (DiscFunc.x(1, 0) ** 2 + 1)

    def test_matches_restriction_of_cut(self):
        beta = hb(1, "dx1") * (S(1) + 1) + hb(1, "dtheta") * S(1)
        assert reduced_form(beta) == restrict_to_red(cut_form(beta))


class TestSymplecticContact:
    def test_cylinder(self):
        assert is_symplectic(hb(0, "ds", "dtheta"))
        assert is_symplectic(db(0, "du", "dv") * 2)

    def test_degenerate(self):
        v = is_symplectic(hb(0, "ds", "dtheta") * S(0))
        assert not v and v.witnesses

    def test_not_closed(self):
        assert is_symplectic(hb(2, "dx1", "dx2") + hb(2, "ds", "dtheta"))
        bad = hb(2, "dx2", "ds") * HalfFunc.x(2, 0) + hb(2, "dx1", "dx2") + hb(2, "ds", "dtheta")
        assert not is_symplectic(bad)

    def test_odd_dimension(self):
        with pytest.raises(InvalidInput):
            is_symplectic(hb(1, "ds", "dtheta"))

    def test_contact(self):
        beta = hb(1, "dx1") + hb(1, "dtheta") * S(1)
        assert is_contact(beta)
        assert is_contact(cut_form(beta))
        assert not is_contact(hb(1, "dx1"))

    def test_contact_even_dimension(self):
        with pytest.raises(InvalidInput):
            is_contact(hb(0, "ds"))


class TestMomentum:
    def test_examples(self):
        omega = hb(0, "ds", "dtheta")
        assert momentum_check(omega, S(0))
        assert not momentum_check(omega, S(0, 2))
        assert momentum_check(hb(2, "dx1", "dx2"), HalfFunc.zero(2))

    def test_contact_momentum(self):
        assert contact_momentum(hb(1, "dx1") + hb(1, "dtheta") * S(1)) == S(1)
        assert contact_momentum(hb(1, "dx1")).is_zero()
        assert contact_momentum(hb(1, "dtheta")) == HalfFunc.constant(1, 1)


class TestMaps:
    def test_identity(self):
        cm = cut_map(LocalMap.identity(2))
        assert np.allclose(cm.evaluate([0.1, 0.2, 0.3, -0.4]), [0.1, 0.2, 0.3, -0.4])

    def test_constant_twist(self):
        cm = cut_map(LocalMap(1, 1, ("x1",), "I"))
        assert np.allclose(cm.evaluate([0.5, 0.3, 0.4]), [0.5, -0.4, 0.3])

    def test_shift(self):
        cm = cut_map(LocalMap(1, 1, ("x1 + s",), 1))
        assert np.allclose(cm.evaluate([0.5, 0.3, 0.4]), [0.75, 0.3, 0.4])

    def test_compose_twists(self):
        i = LocalMap(1, 1, ("x1",), "I")
        assert compose_maps(i, i).b.evaluate({}) == pytest.approx(-1)
        psi = LocalMap(1, 2, ("x1", "x1*s"), "exp(I*x1)")
        assert compose_maps(LocalMap.identity(1), psi) == psi

    def test_compose_dim_mismatch(self):
        with pytest.raises(InvalidInput):
            compose_maps(LocalMap.identity(1), LocalMap.identity(2))

    def test_functoriality(self):
        p1 = LocalMap(1, 2, ("x1 + s", "sin(x1)"), "exp(I*s)")
        p2 = LocalMap(2, 1, ("x1*x2 + s",), "exp(I*x2)")
        v = functoriality_check(p1, p2, 50)
        assert v and v.data["max_residual"] < 1e-10

    def test_identity_check(self):
        assert identity_check(3)

    def test_rank_profile_immersion(self):
        psi = LocalMap(1, 2, ("x1", "x1**2 + s"), "exp(I*x1)")
        prof = rank_profile(psi, [0.2])
        assert prof["rank_psi"] == prof["rank_cut"] == 3
        assert prof["immersion"] and prof["cut_immersion"]
        assert rank_check(psi).data["immersion"]

    def test_unit_twist(self):
        psi = LocalMap(1, 1, ("x1",), "2")
        assert not psi.check_unit_twist(psi.sample_points())

    def test_unknown_variable(self):
        with pytest.raises(InvalidInput):
            LocalMap(1, 1, ("y",), 1)

    def test_json(self):
        psi = LocalMap(1, 1, (parse("x1 + s"),), parse("exp(I*x1)"))
        assert LocalMap.from_json(psi.to_json()) == psi


class TestDistribution:
    def test_foliation(self):
        frame = DistributionFrame((hb(2, "dx1"),))
        rep = cut_distribution(frame)
        assert rep.cut_frame.forms == (db(2, "dx1"),)
        assert rep.involutive_before and rep.involutive_after and rep.consistent

    def test_contact(self):
        frame = DistributionFrame((hb(1, "dx1") + hb(1, "dtheta") * S(1),))
        rep = cut_distribution(frame)
        assert rep.contact_before and rep.contact_after and rep.transverse

    def test_ds(self):
        rep = cut_distribution(DistributionFrame((hb(1, "ds"),)))
        u, v = DiscFunc.u(1), DiscFunc.v(1)
        assert rep.cut_frame.forms[0] == db(1, "du") * (u * 2) + db(1, "dv") * (v * 2)
        assert rep.involutive_before and rep.involutive_after
        assert not rep.transverse and not rep.cut_nondegenerate

    def test_degenerate_frame(self):
        with pytest.raises(DegenerateFrame):
            cut_distribution(DistributionFrame((hb(1, "dx1") * S(1),)))

    def test_not_basic(self):
        with pytest.raises(NotBasicInvariant):
            cut_distribution(DistributionFrame((hb(1, "dtheta"),)))

    def test_involutive(self):
        assert is_involutive(DistributionFrame((hb(1, "dx1"),)))
        assert not is_involutive(DistributionFrame((hb(1, "dx1") + hb(1, "dtheta") * S(1),)))
