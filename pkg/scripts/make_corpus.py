"""Regenerate the bundled scenario files under src/cutkit/corpus/."""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "cutkit" / "corpus"


def half_form(dim, terms):
    return {"type": "half_form", "dim": dim, "terms": terms}


def disc_form(dim, terms):
    return {"type": "disc_form", "dim": dim, "terms": terms}


def job(name, op, args=(), expect=None, **extra):
    out = {"name": name, "op": op}
    if args:
        out["args"] = list(args)
    if expect is not None:
        out["expect"] = expect
    out.update(extra)
    return out


SCENARIOS = {}


def scenario(name, description, objects, jobs, seed=0):
    SCENARIOS[name] = {
        "schema": "cutkit.scenario/1",
        "name": name,
        "description": description,
        "seed": seed,
        "objects": objects,
        "jobs": jobs,
    }


scenario(
    "cylinder_symplectic",
    "Cylinder form ds^dtheta cuts to 2 du^dv; symplectic on both sides, with a degenerate control.",
    {
        "omega": half_form(0, {"ds^dtheta": "1"}),
        "omega2": half_form(2, {"dx1^dx2": "1", "ds^dtheta": "1"}),
        "degenerate": half_form(0, {"ds^dtheta": "s"}),
    },
    [
        job("cut_cylinder", "cut_form", ["omega"], {"equals": "2 du^dv"}, store="omega_cut"),
        job("cylinder_symplectic", "is_symplectic", ["omega"], {"ok": True}),
        job("cut_symplectic", "is_symplectic", ["omega_cut"], {"ok": True}),
        job("cut_product", "cut_form", ["omega2"], {"equals": {"terms": {"dx1^dx2": "1", "du^dv": "2"}}},
            store="omega2_cut"),
        job("product_symplectic", "is_symplectic", ["omega2_cut"], {"ok": True}),
        job("reduced_product", "reduced_form", ["omega2"], {"equals": {"terms": {"dx1^dx2": "1"}}},
            store="omega2_red"),
        job("reduced_symplectic", "is_symplectic", ["omega2_red"], {"ok": True}, params={"coords": ["x1", "x2"]}),
        job("degenerate_control", "is_symplectic", ["degenerate"], {"ok": False}),
    ],
)

scenario(
    "contact_model",
    "dx + s dtheta is contact, its cut dx + u dv - v du is contact, and the reduced form is dx on the reduced space.",
    {
        "beta": half_form(1, {"dx1": "1", "dtheta": "s"}),
        "dx_only": half_form(1, {"dx1": "1"}),
    },
    [
        job("beta_contact", "is_contact", ["beta"], {"ok": True}),
        job("cut_beta", "cut_form", ["beta"], {"equals": {"terms": {"dx1": "1", "du": "-v", "dv": "u"}}},
            store="beta_cut"),
        job("cut_contact", "is_contact", ["beta_cut"], {"ok": True}),
        job("reduced_beta", "reduced_form", ["beta"], {"equals": {"terms": {"dx1": "1"}}}, store="beta_red"),
        job("reduced_contact", "is_contact", ["beta_red"], {"ok": True}, params={"coords": ["x1"]}),
        job("dx_control", "is_contact", ["dx_only"], {"ok": False}),
        job("contact_momentum", "contact_momentum", ["beta"], {"equals": "s"}),
    ],
)

scenario(
    "dependence_on_action",
    "Descent of g(e^{i theta}) sqrt(s) cos(theta): succeeds for constant g, fails for g(w) = w.",
    {
        "g_const": {"type": "half_func", "dim": 0, "expr": "sqrt(s)*cos(theta)"},
        "g_const3": {"type": "half_func", "dim": 0, "expr": "3*sqrt(s)*cos(theta)"},
        "g_w": {"type": "half_func", "dim": 0, "expr": "exp(I*theta)*sqrt(s)*cos(theta)"},
        "g_w2": {"type": "half_func", "dim": 0, "expr": "exp(2*I*theta)*sqrt(s)*cos(theta)"},
        "g_wbar": {"type": "half_func", "dim": 0, "expr": "exp(-I*theta)*sqrt(s)*cos(theta)"},
    },
    [
        job("constant_descends", "descend_function", ["g_const"],
            {"ok": True, "fields": {"image.text": "u"}}),
        job("constant3_descends", "descend_function", ["g_const3"], {"ok": True, "fields": {"image.text": "3 u"}}),
        job("w_fails", "descend_function", ["g_w"], {
            "ok": False,
            "fields": {"offending_modes": [{"alpha": [], "k": 0, "m": 1}, {"alpha": [], "k": 2, "m": 1}]},
        }),
        job("w2_fails", "descend_function", ["g_w2"], {"ok": False}),
        job("wbar_fails", "descend_function", ["g_wbar"], {"ok": False}),
        job("mode_1_1", "mono_descends", expect={"equals": True}, params={"m": 1, "k": 1}),
        job("mode_1_0", "mono_descends", expect={"equals": False}, params={"m": 1, "k": 0}),
        job("mode_1_2", "mono_descends", expect={"equals": False}, params={"m": 1, "k": 2}),
        job("mode_2_0", "mono_descends", expect={"equals": True}, params={"m": 2, "k": 0}),
    ],
)

scenario(
    "roundtrip_forms",
    "blowup_pullback(cut_form(beta)) = beta exactly, and cut_form(blowup_pullback(gamma)) = gamma where defined.",
    {
        "omega": half_form(0, {"ds^dtheta": "1"}),
        "s_dtheta": half_form(0, {"dtheta": "s"}),
        "mixed": half_form(1, {"dx1^ds": "x1 + s", "dx1^dtheta": "s**2", "ds^dtheta": "x1**2"}),
        "area": disc_form(0, {"du^dv": "2"}),
        "rotation": disc_form(0, {"du": "-v", "dv": "u"}),
        "dv_only": disc_form(0, {"dv": "1"}),
        "radial": disc_form(1, {"dx1^du": "2*u", "dx1^dv": "2*v"}),
    },
    [
        job("cut_s_dtheta", "cut_form", ["s_dtheta"], {"equals": "-v du + u dv"}),
        job("roundtrip_omega", "roundtrip_check", ["omega"], {"ok": True, "fields": {"defined": True}}),
        job("roundtrip_s_dtheta", "roundtrip_check", ["s_dtheta"], {"ok": True}),
        job("roundtrip_mixed", "roundtrip_check", ["mixed"], {"ok": True}),
        job("pullback_area", "blowup_pullback", ["area"], {"equals": {"terms": {"ds^dtheta": "1"}}}),
        job("pullback_rotation", "blowup_pullback", ["rotation"], {"equals": {"terms": {"dtheta": "s"}}}),
        job("pullback_radial", "blowup_pullback", ["radial"], {"equals": {"terms": {"dx1^ds": "1"}}}),
        job("roundtrip_area", "roundtrip_check", ["area"], {"ok": True, "fields": {"defined": True}}),
        job("roundtrip_radial", "roundtrip_check", ["radial"], {"ok": True, "fields": {"defined": True}}),
        job("dv_negative_power", "blowup_pullback", ["dv_only"], {"raises": "ResidualNegativePower"}),
        job("dv_roundtrip_undefined", "roundtrip_check", ["dv_only"], {"fields": {"defined": False}}),
        job("roundtrip_suite", "run_property", expect={"ok": True}, params={"property": "roundtrip", "trials": 50}),
    ],
)

scenario(
    "functoriality_maps",
    "cut(psi2 o psi1) = cut(psi2) o cut(psi1) and cut(id) = id for explicit equivariant maps.",
    {
        "psi1": {"type": "local_map", "source_dim": 1, "target_dim": 2,
                 "psi_bar": ["x1 + s", "sin(x1) + x1*s"], "b": "exp(I*(x1 + s))"},
        "psi2": {"type": "local_map", "source_dim": 2, "target_dim": 1,
                 "psi_bar": ["x1*x2 + cos(s) - 1"], "b": "exp(I*x2*s)"},
    },
    [
        job("compose", "compose_maps", ["psi1", "psi2"], store="psi21"),
        job("cut_composite", "cut_map", ["psi21"]),
        job("functoriality", "check_functoriality", ["psi1", "psi2"],
            {"ok": True, "less_than": {"data.max_residual": 1e-10}}, params={"points": 50}),
        job("identity_dim1", "check_identity", expect={"ok": True}, params={"dim": 1}),
        job("identity_dim3", "check_identity", expect={"ok": True}, params={"dim": 3}),
        job("functoriality_suite", "run_property", expect={"ok": True},
            params={"property": "functoriality", "trials": 5}),
    ],
)

scenario(
    "immersion_ranks",
    "rank d(psi) = rank d(psi_cut) = rank d_x psi_bar + 2 at boundary points; immersions and submersions are preserved.",
    {
        "immersion": {"type": "local_map", "source_dim": 1, "target_dim": 2,
                      "psi_bar": ["x1", "x1**2 + s"], "b": "exp(I*x1)"},
        "submersion": {"type": "local_map", "source_dim": 2, "target_dim": 1,
                       "psi_bar": ["x1 + x2*s"], "b": "1"},
        "collapse": {"type": "local_map", "source_dim": 1, "target_dim": 1, "psi_bar": ["s"], "b": "1"},
    },
    [
        job("immersion_ranks", "check_ranks", ["immersion"],
            {"ok": True, "fields": {"data.immersion": True, "data.submersion": False}}, params={"points": 20}),
        job("submersion_ranks", "check_ranks", ["submersion"],
            {"ok": True, "fields": {"data.submersion": True, "data.immersion": False}}, params={"points": 20}),
        job("collapse_ranks", "check_ranks", ["collapse"],
            {"ok": True, "fields": {"data.immersion": False, "data.submersion": False}}, params={"points": 20}),
    ],
)

scenario(
    "distribution_cut",
    "Cutting annihilating frames: contact and involutive frames keep their type; ds is not transverse.",
    {
        "contact": half_form(1, {"dx1": "1", "dtheta": "s"}),
        "dx1": half_form(1, {"dx1": "1"}),
        "ds": half_form(1, {"ds": "1"}),
        "dtheta": half_form(1, {"dtheta": "1"}),
        "contact_frame": {"type": "frame", "forms": ["contact"]},
        "dx1_frame": {"type": "frame", "forms": ["dx1"]},
        "ds_frame": {"type": "frame", "forms": ["ds"]},
        "dtheta_frame": {"type": "frame", "forms": ["dtheta"]},
    },
    [
        job("contact_frame", "cut_distribution", ["contact_frame"], {"ok": True, "fields": {
            "contact_before": True, "contact_after": True, "transverse": True, "cut_nondegenerate": True,
            "cut_frame": ["dx1 - v du + u dv"]}}),
        job("foliation_frame", "cut_distribution", ["dx1_frame"], {"ok": True, "fields": {
            "involutive_before": True, "involutive_after": True, "contact_before": False, "contact_after": False}}),
        job("ds_not_transverse", "cut_distribution", ["ds_frame"], {"fields": {
            "transverse": False, "cut_nondegenerate": False, "cut_frame": ["2 u du + 2 v dv"]}}),
        job("dtheta_not_basic", "cut_distribution", ["dtheta_frame"], {"raises": "NotBasicInvariant"}),
    ],
)

scenario(
    "momentum_checks",
    "Sign convention i_xi omega = -d mu: mu = s for ds^dtheta; s^2 fails; contact momentum of dx + s dtheta is s.",
    {
        "omega": half_form(0, {"ds^dtheta": "1"}),
        "omega2": half_form(2, {"dx1^dx2": "1", "ds^dtheta": "1"}),
        "mu": {"type": "half_func", "dim": 0, "expr": "s"},
        "mu_sq": {"type": "half_func", "dim": 0, "expr": "s**2"},
        "mu2": {"type": "half_func", "dim": 2, "expr": "s"},
        "beta": half_form(1, {"dx1": "1", "dtheta": "s"}),
    },
    [
        job("momentum_s", "momentum_check", ["omega", "mu"], {"ok": True}),
        job("momentum_s_squared", "momentum_check", ["omega", "mu_sq"], {"ok": False}),
        job("momentum_product", "momentum_check", ["omega2", "mu2"], {"ok": True}),
        job("contact_momentum", "contact_momentum", ["beta"], {"equals": "s"}, store="beta_mu"),
        job("contact_momentum_vanishes", "descend_function", ["beta_mu"], {"ok": True,
                                                                         "fields": {"image.text": "u^2 + v^2"}}),
    ],
)

scenario(
    "radial_lift",
    "Radial lift (t, u, r) -> (phi1, Au/|Au|, r|Au|) commutes with blow-down; singular A(t, 0) is rejected.",
    {
        "hadamard": {"type": "lift_input", "t_dim": 1, "x_dim": 2, "phi1": ["t1 + x1*x2/3"],
                     "A": [["2 + sin(t1)/10", "x1/10"], ["x2/10", "2 + t1*x2/10"]]},
        "wide": {"type": "lift_input", "t_dim": 2, "x_dim": 1, "phi1": ["t1 + x1", "t2*cos(x1)"],
                 "A": [["1 + t1**2"], ["x1"]]},
        "singular": {"type": "lift_input", "t_dim": 1, "x_dim": 2, "phi1": ["t1"],
                     "A": [["x1", "0"], ["0", "1"]]},
    },
    [
        job("radial_commutes", "lift_map_radial", ["hadamard"], {"ok": True, "less_than": {
            "checks.max_commuting_residual": 1e-10}, "fields": {"checks.boundary_defining": True}},
            params={"points": 100}),
        job("rectangular_A", "lift_map_radial", ["wide"], {"ok": True}, params={"points": 100}),
        job("singular_A", "lift_map_radial", ["singular"], {"raises": "DegenerateA"}),
        job("radial_suite", "run_property", expect={"ok": True}, params={"property": "lift_radial", "trials": 3}),
    ],
)

scenario(
    "radial_squared_lift",
    "Radial-squared lift (t, u, s) -> (phi1~(t, s), A~u/|A~u|, s|A~u|^2) for invariant input commutes with blow-down.",
    {
        "invariant": {"type": "lift_input", "t_dim": 1, "x_dim": 2, "form": "invariant",
                      "phi1": ["t1 + s/2"], "A": [["1 + s", "s*t1/5"], ["0", "1 + t1**2"]]},
        "radial_hadamard": {"type": "lift_input", "t_dim": 1, "x_dim": 2,
                            "phi1": ["t1 + (x1**2 + x2**2)/2"],
                            "A": [["1 + x1**2 + x2**2", "0"], ["0", "1 + t1**2"]]},
    },
    [
        job("squared_commutes", "lift_map_radial_squared", ["invariant"],
            {"ok": True, "less_than": {"checks.max_commuting_residual": 1e-10}}, params={"points": 100}),
        job("squared_from_hadamard", "lift_map_radial_squared", ["radial_hadamard"],
            {"ok": True, "less_than": {"checks.max_commuting_residual": 1e-10}}, params={"points": 100}),
        job("squared_suite", "run_property", expect={"ok": True},
            params={"property": "lift_radial_squared", "trials": 3}),
    ],
)

scenario(
    "polar_correspondence",
    "Diffeomorphisms psi(w, s) = (a(s)w, g(s)s) match phi(z) = sqrt(g)a z; ordinary polar z e^{i|z|} is flagged.",
    {
        "twist": {"type": "polar_pair", "a": "exp(I*s)", "g": "1"},
        "twist_scale": {"type": "polar_pair", "a": "exp(I*(s - s**2/2))", "g": "2 + s**2"},
        "not_unit": {"type": "polar_pair", "a": "2", "g": "1"},
    },
    [
        job("twist", "polar_correspondence", ["twist"], {"ok": True, "fields": {
            "counterexample_flagged": True, "phi_probe.smooth": True, "ordinary_polar_probe.smooth": False}},
            params={"points": 50}),
        job("twist_scale", "polar_correspondence", ["twist_scale"], {"ok": True}, params={"points": 50}),
        job("not_unit_rejected", "polar_correspondence", ["not_unit"], {"raises": "InvalidInput"}),
    ],
)

scenario(
    "nonequivariant_shear_rejection",
    "phi(t, x) = (t + x1, x): the radial lift exists, the squared lift is rejected and the naive one is not smooth.",
    {
        "shear": {"type": "lift_input", "t_dim": 1, "x_dim": 2, "phi1": ["t1 + x1"],
                  "A": [["1", "0"], ["0", "1"]]},
    },
    [
        job("radial_accepts", "lift_map_radial", ["shear"], {"ok": True}, params={"points": 100}),
        job("squared_rejects", "lift_map_radial_squared", ["shear"], {"raises": "NonInvariantInput"}),
        job("naive_not_smooth", "naive_squared_lift_probe", ["shear"], {"ok": False}, params={"points": 5}),
        job("shear_suite", "run_property", expect={"ok": True},
            params={"property": "shear_rejection", "trials": 3}),
    ],
)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, data in SCENARIOS.items():
        (OUT / f"{name}.json").write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(SCENARIOS)} scenarios to {OUT}")


if __name__ == "__main__":
    main()
