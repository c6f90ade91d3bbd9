"""The cutting functor on the local models: forms, maps, distributions, momentum maps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateFrame, InvalidInput, ModelMismatch, NonDescendingCoefficient, NotBasicInvariant
from .expr import Expr, as_expr, cos, im, parse, re, sin, var
from .forms import (
    DiscForm,
    Form,
    HalfForm,
    boundary_pullback,
    contract,
    ext_d,
    is_basic_invariant,
    wedge,
)
from .funcalg import DiscFunc, HalfFunc, descend_function
from .verify import TOLERANCES, SamplePlan, cut_point, jacobian_at

__all__ = [
    "Verdict",
    "cut_form",
    "reduced_form",
    "restrict_to_red",
    "LocalMap",
    "CutMap",
    "cut_map",
    "compose_maps",
    "rank_profile",
    "rank_check",
    "functoriality_check",
    "identity_check",
    "map_sample_points",
    "momentum_check",
    "momentum_residual",
    "contact_momentum",
    "contact_volume",
    "is_symplectic",
    "is_contact",
    "DistributionFrame",
    "DistributionReport",
    "cut_distribution",
    "is_involutive",
]


@dataclass(frozen=True)
class Verdict:
    """Boolean outcome with the evidence behind it."""

    ok: bool
    reason: str = ""
    witnesses: tuple = ()
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        out = {"ok": self.ok, "reason": self.reason, "witnesses": list(self.witnesses)}
        if self.data:
            out["data"] = dict(self.data)
        return out


# forms ------------------------------------------------------------------

def _descend_coeff(c: HalfFunc, key_names) -> DiscFunc:
    verdict = descend_function(c)
    if not verdict.descends:
        raise NonDescendingCoefficient(key_names, verdict.offending_modes)
    return verdict.image


def _disc_pieces(dim: int):
    """The substitutions for ds, s dtheta and ds^dtheta on the disc model."""
    u, v = DiscFunc.u(dim), DiscFunc.v(dim)
    du = DiscForm.basis(dim, "du")
    dv = DiscForm.basis(dim, "dv")
    ds = du * (u * 2) + dv * (v * 2)
    s_dtheta = dv * u - du * v
    ds_dtheta = DiscForm.basis(dim, "du", "dv") * 2
    return ds, s_dtheta, ds_dtheta


def cut_form(beta: HalfForm) -> DiscForm:
    """The form on the disc model whose pullback to the interior is ``beta``."""
    if not isinstance(beta, HalfForm):
        raise ModelMismatch("cut_form needs a half-model form")
    basic = is_basic_invariant(beta)
    if not basic:
        raise NotBasicInvariant(basic.witness)
    d = beta.dim
    th, s = beta.theta, beta.s
    ds, s_dtheta, ds_dtheta = _disc_pieces(d)
    out = DiscForm.zero(d, beta.degree)
    for key, c in beta.terms:
        names = beta.key_names(key)
        xs = tuple(i for i in key if i < d)
        dx = DiscForm(d, len(xs), {xs: 1})
        if th in key and s in key:
            # dx_I ^ dtheta ^ ds = -(dx_I ^ ds ^ dtheta)
            piece = dx * ds_dtheta * _descend_coeff(-c, names)
        elif s in key:
            piece = dx * ds * _descend_coeff(c, names)
        elif th in key:
            piece = dx * s_dtheta * _descend_coeff(c.divide_by_s(), names)
        else:
            piece = dx * _descend_coeff(c, names)
        out = out + piece
    return out


def restrict_to_red(gamma: DiscForm) -> DiscForm:
    """Pullback to ``{u = v = 0}``: drop du, dv and evaluate coefficients at ``z = 0``."""
    d = gamma.dim
    out = {}
    for key, c in gamma.terms:
        if any(i >= d for i in key):
            continue
        c0 = c.at_origin()
        if c0:
            out[key] = c0
    return DiscForm._raw(d, gamma.degree, out)


def reduced_form(beta: HalfForm) -> DiscForm:
    """``sum b_I(x, 0) dx_I``: the boundary pullback with every dtheta term removed."""
    cut_form(beta)  # same admissibility conditions and errors
    bdry = boundary_pullback(beta)
    d = beta.dim
    out = {}
    for key, c in bdry.terms:
        if beta.theta in key:
            continue
        out[key] = DiscFunc._raw(d, {(alpha, 0, 0): coeff for (alpha, _, _), coeff in c.terms}, c.radical)
    return DiscForm._raw(d, beta.degree, out)


# symplectic / contact ----------------------------------------------------

def _default_samples(form: Form, seed: int = 0):
    return SamplePlan(form.model, form.dim, seed=seed).points()


def _coords(form: Form, coords):
    if coords is None:
        return list(range(form.n))
    return [form.index_of(form.dim, c) for c in coords]


def _red_point(form: Form, point, coords):
    """Pad a point given only on ``coords`` with zeros for the other coordinates."""
    point = list(point)
    if len(point) == form.n:
        return point
    if len(point) != len(coords):
        raise InvalidInput(f"point {point!r} does not match coordinates {coords!r}")
    full = [0.0] * form.n
    for i, val in zip(coords, point):
        full[i] = val
    return full


def is_symplectic(omega: Form, samples: Sequence | None = None, coords=None) -> Verdict:
    """Closed and nondegenerate at every sample.

    ``coords`` restricts to a coordinate subspace, e.g. the x-coordinates for
    a reduced form living on ``{u = v = 0}``.
    """
    if omega.degree != 2:
        raise InvalidInput("is_symplectic needs a 2-form")
    idx = _coords(omega, coords)
    if len(idx) % 2:
        raise InvalidInput(f"symplectic forms need even dimension, got {len(idx)}")
    d_omega = ext_d(omega)
    if not d_omega.is_zero():
        return Verdict(False, "not closed", ({"d_omega": str(d_omega)},))
    if samples is None:
        samples = _default_samples(omega)
        if coords is not None:
            samples = [_red_only(omega, p, idx) for p in samples]
    bad = []
    for p in samples:
        full = _red_point(omega, p, idx)
        mat = np.asarray(omega.eval_at(full))[np.ix_(idx, idx)]
        det = float(abs(np.linalg.det(mat))) if idx else 1.0
        if det <= TOLERANCES["determinant"]:
            bad.append({"point": full, "det": det})
    if bad:
        return Verdict(False, "degenerate at sample points", tuple(bad))
    return Verdict(True, "closed and nondegenerate at all samples")


def _red_only(form, p, idx):
    return [p[i] if i in idx else 0.0 for i in range(form.n)]


def contact_volume(beta: Form, coords=None) -> Form:
    """``beta ^ (d beta)^n`` on a ``2n+1``-dimensional (sub)space."""
    idx = _coords(beta, coords)
    if len(idx) % 2 == 0:
        raise InvalidInput(f"contact forms need odd dimension, got {len(idx)}")
    n = (len(idx) - 1) // 2
    d_beta = ext_d(beta)
    out = beta
    for _ in range(n):
        out = wedge(out, d_beta)
    return out


def is_contact(beta: Form, samples: Sequence | None = None, coords=None) -> Verdict:
    if beta.degree != 1:
        raise InvalidInput("is_contact needs a 1-form")
    idx = _coords(beta, coords)
    vol = contact_volume(beta, coords)
    top = tuple(sorted(idx))
    coeff = vol.coeff(top)
    if not coeff:
        return Verdict(False, "beta ^ (d beta)^n vanishes identically", ({"volume": str(vol)},))
    if samples is None:
        samples = _default_samples(beta)
        if coords is not None:
            samples = [_red_only(beta, p, idx) for p in samples]
    bad = []
    for p in samples:
        full = _red_point(beta, p, idx)
        val = abs(vol.component_at(top, full))
        if val <= TOLERANCES["determinant"]:
            bad.append({"point": full, "volume": val})
    if bad:
        return Verdict(False, "beta ^ (d beta)^n vanishes at sample points", tuple(bad))
    return Verdict(True, f"beta ^ (d beta)^n = {vol}")


# momentum maps -----------------------------------------------------------

def momentum_residual(omega: HalfForm, mu: HalfFunc) -> HalfForm:
    """``i_{d/dtheta} omega + d mu``; zero exactly when mu is a momentum map."""
    if omega.degree != 2:
        raise InvalidInput("momentum_check needs a 2-form")
    return contract("theta", omega) + ext_d(HalfForm.function(mu) if mu else HalfForm.zero(omega.dim))


def momentum_check(omega: HalfForm, mu: HalfFunc) -> Verdict:
    res = momentum_residual(omega, mu)
    if res.is_zero():
        return Verdict(True, "i_xi omega = -d mu")
    return Verdict(False, "i_xi omega + d mu != 0", ({"residual": str(res)},))


def contact_momentum(beta: HalfForm) -> HalfFunc:
    if beta.degree != 1:
        raise InvalidInput("contact_momentum needs a 1-form")
    return contract("theta", beta).coeff(())


# maps --------------------------------------------------------------------

def _x_names(d: int) -> list[str]:
    return [f"x{i + 1}" for i in range(d)]


@dataclass(frozen=True)
class LocalMap:
    """Equivariant transverse map in normal form ``(x, a, s) -> (psi_bar(x, s), a b(x, s), s)``.

    ``psi_bar`` and ``b`` are expressions in ``x1..xd`` and ``s``.
    """

    source_dim: int
    target_dim: int
    psi_bar: tuple
    b: Expr

    def __post_init__(self):
        object.__setattr__(self, "psi_bar", tuple(as_expr(e) for e in self.psi_bar))
        object.__setattr__(self, "b", as_expr(self.b))
        if len(self.psi_bar) != self.target_dim:
            raise InvalidInput(f"psi_bar has {len(self.psi_bar)} components, expected {self.target_dim}")
        allowed = set(self.variables)
        for e in self.psi_bar + (self.b,):
            extra = e.variables() - allowed
            if extra:
                raise InvalidInput(f"unknown variables {sorted(extra)} in {e}")

    @property
    def variables(self) -> list[str]:
        return _x_names(self.source_dim) + ["s"]

    @classmethod
    def identity(cls, dim: int) -> "LocalMap":
        return cls(dim, dim, tuple(var(n) for n in _x_names(dim)), as_expr(1))

    def check_unit_twist(self, points, tol: float = TOLERANCES["unit"]) -> Verdict:
        bad = []
        for p in points:
            env = dict(zip(self.variables, p))
            dev = abs(abs(self.b.evaluate(env)) ** 2 - 1.0)
            if dev > tol:
                bad.append({"point": list(p), "deviation": dev})
        return Verdict(not bad, "|b|^2 = 1 at samples" if not bad else "twist is not unit", tuple(bad))

    def sample_points(self, seed: int = 0, count: int = 20) -> list[tuple[float, ...]]:
        """Points ``(x, s)`` with some on ``s = 0``."""
        plan = SamplePlan("half", self.source_dim, interior=count // 2, boundary=count - count // 2 - count // 4,
                          near_boundary=count // 4, seed=seed)
        d = self.source_dim
        return [tuple(p[:d]) + (p[d + 1],) for p in plan.points()]

    def evaluate(self, x, theta, s):
        """Image ``(x', theta', s')`` of a half-model point, with theta' taken from ``arg(e^{i theta} b)``."""
        env = dict(zip(self.variables, list(x) + [s]))
        xb = [e.evaluate(env).real for e in self.psi_bar]
        w = complex(math.cos(theta), math.sin(theta)) * self.b.evaluate(env)
        return xb, math.atan2(w.imag, w.real), s

    def half_components(self) -> tuple[list[str], list[Expr]]:
        """Real expressions in ``(x, theta, s)`` with the circle embedded in the plane."""
        th = var("theta")
        rot = cos(th) + parse("I") * sin(th)
        w = rot * self.b
        return _x_names(self.source_dim) + ["theta", "s"], list(self.psi_bar) + [re(w), im(w), var("s")]

    def to_json(self) -> dict:
        return {
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
            "psi_bar": [e.to_json() for e in self.psi_bar],
            "b": self.b.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "LocalMap":
        psi = [as_expr(e) for e in data["psi_bar"]]
        return cls(int(data["source_dim"]), int(data.get("target_dim", len(psi))), tuple(psi), as_expr(data.get("b", 1)))

    def __str__(self):
        return f"(x,a,s) -> (({', '.join(map(str, self.psi_bar))}), a*({self.b}), s)"


@dataclass(frozen=True)
class CutMap:
    """``(x, z) -> (psi_bar(x, |z|^2), z b(x, |z|^2))`` as real components in ``(x, u, v)``."""

    source_dim: int
    target_dim: int
    components: tuple

    @property
    def variables(self) -> list[str]:
        return _x_names(self.source_dim) + ["u", "v"]

    def evaluate(self, point) -> np.ndarray:
        env = dict(zip(self.variables, point))
        return np.array([e.evaluate(env).real for e in self.components])

    def jacobian(self, point) -> np.ndarray:
        return jacobian_at(self.components, self.variables, point)

    def to_json(self) -> dict:
        return {"source_dim": self.source_dim, "target_dim": self.target_dim,
                "components": [e.to_json() for e in self.components]}

    def __str__(self):
        return f"({', '.join(self.variables)}) -> ({', '.join(map(str, self.components))})"


def cut_map(psi: LocalMap) -> CutMap:
    u, v = var("u"), var("v")
    z = u + parse("I") * v
    sub = {"s": u * u + v * v}
    xb = [e.subs(sub) for e in psi.psi_bar]
    w = z * psi.b.subs(sub)
    return CutMap(psi.source_dim, psi.target_dim, tuple(xb) + (re(w), im(w)))


def compose_maps(psi1: LocalMap, psi2: LocalMap) -> LocalMap:
    """``psi2 o psi1`` in normal form."""
    if psi1.target_dim != psi2.source_dim:
        raise InvalidInput(f"cannot compose: target dim {psi1.target_dim} != source dim {psi2.source_dim}")
    sub = dict(zip(_x_names(psi2.source_dim), psi1.psi_bar))
    sub["s"] = var("s")
    psi_bar = tuple(e.subs(sub) for e in psi2.psi_bar)
    b = psi2.b.subs(sub) * psi1.b
    return LocalMap(psi1.source_dim, psi2.target_dim, psi_bar, b)


def rank_profile(psi: LocalMap, point_xs, theta: float = 0.3) -> dict:
    """Ranks at a boundary point ``(x, s=0)`` of psi, of psi_cut at ``(x, 0)`` and of ``d psi_bar/dx (x, 0)``."""
    from .verify import rank_at

    d = psi.source_dim
    x = list(point_xs[:d])
    names, comps = psi.half_components()
    r_psi = rank_at(comps, names, x + [theta, 0.0], lower={"s": 0.0})
    cm = cut_map(psi)
    r_cut = rank_at(cm.components, cm.variables, x + [0.0, 0.0])
    jac_bar = jacobian_at(psi.psi_bar, psi.variables, x + [0.0], lower={"s": 0.0})[:, :d]
    r_bar = int(np.sum(np.linalg.svd(jac_bar, compute_uv=False) > TOLERANCES["rank"])) if jac_bar.size else 0
    return {"rank_psi": r_psi, "rank_cut": r_cut, "rank_psi_bar_x": r_bar,
            "immersion": r_psi == d + 2, "submersion": r_psi == psi.target_dim + 2,
            "cut_immersion": r_cut == d + 2, "cut_submersion": r_cut == psi.target_dim + 2}


def map_sample_points(dim: int, count: int, seed: int = 0) -> list[tuple[float, ...]]:
    """Disc-model points ``(x, u, v)``, a fifth of them on ``z = 0``."""
    plan = SamplePlan("disc", dim, interior=count - count // 5, boundary=count // 5, near_boundary=0, seed=seed)
    return plan.points()


def functoriality_check(psi1: LocalMap, psi2: LocalMap, count: int = 50, seed: int = 0) -> Verdict:
    """Compare ``cut(psi2 o psi1)`` with ``cut(psi2) o cut(psi1)`` at sample points."""
    comp = cut_map(compose_maps(psi1, psi2))
    c1, c2 = cut_map(psi1), cut_map(psi2)
    worst, worst_at = 0.0, None
    for p in map_sample_points(psi1.source_dim, count, seed):
        res = float(np.max(np.abs(comp.evaluate(p) - c2.evaluate(c1.evaluate(p)))))
        if res > worst:
            worst, worst_at = res, list(p)
    ok = worst < TOLERANCES["commuting_square"]
    witnesses = () if ok else ({"point": worst_at, "residual": worst},)
    return Verdict(ok, "compose-then-cut matches cut-then-compose" if ok else "functoriality residual too large",
                   witnesses, {"max_residual": worst, "points": count})


def identity_check(dim: int, count: int = 20, seed: int = 0) -> Verdict:
    cm = cut_map(LocalMap.identity(dim))
    worst = max(float(np.max(np.abs(cm.evaluate(p) - np.array(p)))) for p in map_sample_points(dim, count, seed))
    ok = worst < TOLERANCES["commuting_square"]
    return Verdict(ok, "cut of the identity is the identity" if ok else "identity is not preserved",
                   () if ok else ({"residual": worst},), {"max_residual": worst})


def rank_check(psi: LocalMap, count: int = 20, seed: int = 0) -> Verdict:
    """At boundary points: rank d(psi) = rank d(psi_cut) = rank d_x psi_bar(., 0) + 2."""
    plan = SamplePlan("half", psi.source_dim, interior=0, boundary=count, near_boundary=0, seed=seed)
    d = psi.source_dim
    immersion = submersion = True
    for p in plan.points():
        prof = rank_profile(psi, p[:d], theta=p[d])
        if not (prof["rank_psi"] == prof["rank_cut"] == prof["rank_psi_bar_x"] + 2):
            return Verdict(False, "rank mismatch", ({"point": list(p), **prof},))
        if prof["immersion"] != prof["cut_immersion"] or prof["submersion"] != prof["cut_submersion"]:
            return Verdict(False, "immersion/submersion not preserved", ({"point": list(p), **prof},))
        immersion &= prof["immersion"]
        submersion &= prof["submersion"]
    return Verdict(True, "ranks agree at all boundary points", (),
                   {"points": count, "immersion": immersion, "submersion": submersion})


# distributions -----------------------------------------------------------

@dataclass(frozen=True)
class DistributionFrame:
    """Annihilating one-forms ``beta_1..beta_k`` of a codimension-k distribution."""

    forms: tuple

    def __post_init__(self):
        forms = tuple(self.forms)
        object.__setattr__(self, "forms", forms)
        if not forms:
            raise InvalidInput("a frame needs at least one form")
        dims = {f.dim for f in forms}
        if len(dims) != 1 or any(f.degree != 1 for f in forms):
            raise InvalidInput("frame forms must be one-forms on a common model")
        if len({type(f) for f in forms}) != 1:
            raise ModelMismatch("frame mixes models")

    @property
    def codim(self) -> int:
        return len(self.forms)

    @property
    def dim(self) -> int:
        return self.forms[0].dim

    def volume(self) -> Form:
        out = self.forms[0]
        for f in self.forms[1:]:
            out = wedge(out, f)
        return out

    def to_json(self) -> dict:
        return {"forms": [f.to_json() for f in self.forms]}


def is_involutive(frame: DistributionFrame) -> bool:
    vol = frame.volume()
    return all(wedge(ext_d(b), vol).is_zero() for b in frame.forms)


def _nonzero_at(form: Form, point) -> bool:
    arr = np.asarray(form.eval_at(point))
    return bool(np.max(np.abs(arr)) > TOLERANCES["determinant"]) if arr.size else False


@dataclass
class DistributionReport:
    frame: DistributionFrame
    cut_frame: DistributionFrame
    involutive_before: bool
    involutive_after: bool
    contact_before: bool | None
    contact_after: bool | None
    transverse: bool
    cut_nondegenerate: bool
    witnesses: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.involutive_before == self.involutive_after and self.contact_before == self.contact_after

    def to_json(self) -> dict:
        return {
            "cut_frame": [str(f) for f in self.cut_frame.forms],
            "involutive_before": self.involutive_before,
            "involutive_after": self.involutive_after,
            "contact_before": self.contact_before,
            "contact_after": self.contact_after,
            "transverse": self.transverse,
            "cut_nondegenerate": self.cut_nondegenerate,
            "consistent": self.consistent,
            "witnesses": self.witnesses,
        }


def cut_distribution(frame: DistributionFrame, samples: Sequence | None = None, seed: int = 0) -> DistributionReport:
    """Cut each annihilating form and compare involutivity and contactness on both sides.

    Transversality to the boundary is the open condition
    ``beta_1 ^ .. ^ beta_k ^ ds != 0`` at boundary samples; it is reported,
    as is nondegeneracy of the cut frame at ``z = 0``.
    """
    d = frame.dim
    if not isinstance(frame.forms[0], HalfForm):
        raise ModelMismatch("cut_distribution needs a half-model frame")
    plan = SamplePlan("half", d, seed=seed)
    half_pts = list(samples) if samples is not None else plan.points()
    vol = frame.volume()
    for p in half_pts:
        if not _nonzero_at(vol, p):
            raise DegenerateFrame(list(p))
    cut_forms = tuple(cut_form(b) for b in frame.forms)  # raises NotBasicInvariant
    cut_frame = DistributionFrame(cut_forms)

    witnesses = []
    with_ds = wedge(vol, HalfForm.basis(d, "ds"))
    boundary = [p for p in half_pts if p[d + 1] == 0.0]
    transverse = True
    for p in boundary:
        if not _nonzero_at(with_ds, p):
            transverse = False
            witnesses.append({"not_transverse_at": list(p)})
            break
    cut_vol = cut_frame.volume()
    cut_nondegenerate = True
    for p in [cut_point(q, d) for q in half_pts]:
        if not _nonzero_at(cut_vol, p):
            cut_nondegenerate = False
            witnesses.append({"cut_frame_degenerate_at": list(p)})
            break

    contact_before = contact_after = None
    if frame.codim == 1 and (d + 2) % 2 == 1:
        contact_before = bool(is_contact(frame.forms[0], half_pts))
        contact_after = bool(is_contact(cut_forms[0], [cut_point(q, d) for q in half_pts]))
    return DistributionReport(
        frame, cut_frame, is_involutive(frame), is_involutive(cut_frame),
        contact_before, contact_after, transverse, cut_nondegenerate, witnesses,
    )

