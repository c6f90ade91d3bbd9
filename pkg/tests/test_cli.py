import json

import pytest

from cutkit.cli import main


def write(tmp_path, data, name="s.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def scenario(jobs, objects=None, **extra):
    return {"schema": "cutkit.scenario/1", "name": "t", "objects": objects or {}, "jobs": jobs, **extra}


CYL = {"w": {"type": "half_form", "terms": {"ds^dtheta": "1"}}}


def test_run_corpus_by_name(capsys):
    assert main(["run", "cylinder_symplectic"]) == 0
    out = capsys.readouterr().out
    assert "cut_form: 2 du^dv" in out
    assert "8/8 jobs passed" in out


def test_run_json_report(tmp_path):
    out = tmp_path / "r.json"
    assert main(["run", "contact_model", "--json", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["status"] == "pass" and report["scenario"] == "contact_model"
    assert {j["name"] for j in report["jobs"]} >= {"cut_beta", "reduced_contact"}


def test_failure_exit_code(tmp_path, capsys):
    path = write(tmp_path, scenario([{"name": "a", "op": "cut_form", "args": ["w"],
                                      "expect": {"equals": "du^dv"}}], CYL))
    assert main(["run", path]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_schema_exit_code(tmp_path, capsys):
    path = write(tmp_path, {"schema": "cutkit.scenario/2", "name": "t", "jobs": []})
    assert main(["run", path]) == 2
    assert "schema error" in capsys.readouterr().err
    bad_ref = write(tmp_path, scenario([{"name": "a", "op": "cut_form", "args": ["nope"]}]), "b.json")
    assert main(["run", bad_ref]) == 2
    broken = tmp_path / "c.json"
    broken.write_text("{not json")
    assert main(["run", str(broken)]) == 2
    assert main(["run", str(tmp_path / "missing.json")]) == 2


def test_internal_error_exit_code(tmp_path):
    path = write(tmp_path, scenario([{"name": "a", "op": "eval_at", "args": ["w"]}], CYL))
    assert main(["run", path]) == 3


def test_seed_precedence(tmp_path, monkeypatch):
    path = write(tmp_path, scenario([{"name": "a", "op": "check_identity", "params": {"dim": 1}}], seed=5))
    out = tmp_path / "r.json"
    main(["run", path, "--json", str(out)])
    assert json.loads(out.read_text())["seed"] == 5
    monkeypatch.setenv("CUTKIT_SEED", "11")
    main(["run", path, "--json", str(out)])
    assert json.loads(out.read_text())["seed"] == 11
    main(["run", path, "--json", str(out), "--seed", "3"])
    assert json.loads(out.read_text())["seed"] == 3


def test_bad_env_seed(monkeypatch):
    monkeypatch.setenv("CUTKIT_SEED", "abc")
    assert main(["run", "contact_model"]) == 2


def test_filter(tmp_path, capsys):
    assert main(["run", "momentum_checks", "--filter", "momentum_s"]) == 0
    out = capsys.readouterr().out
    assert "momentum_s_squared" in out and "contact_momentum" not in out


def test_list_corpus(capsys):
    assert main(["run", "--list-corpus"]) == 0
    assert "polar_correspondence" in capsys.readouterr().out
    assert main(["corpus", "--list"]) == 0
    assert "radial_lift" in capsys.readouterr().out


def test_corpus_single_and_all(capsys, tmp_path):
    assert main(["corpus", "immersion_ranks"]) == 0
    out = tmp_path / "all.json"
    assert main(["corpus", "--all", "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data["scenarios"]) >= 12
    assert all(s["status"] == "pass" for s in data["scenarios"])


def test_suite_single_property(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["suite", "--seed", "3", "--property", "dd_zero", "--trials", "10", "--json", str(a)]) == 0
    assert main(["suite", "--seed", "3", "--property", "dd_zero", "--trials", "10", "--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text())
    assert report["properties"][0]["details"]["trials"] == 10


def test_suite_unknown_property():
    assert main(["suite", "--property", "nope"]) == 2


def test_json_to_stdout(capsys):
    assert main(["run", "momentum_checks", "--json", "-"]) == 0
    assert json.loads(capsys.readouterr().out)["status"] == "pass"


def test_requires_command():
    with pytest.raises(SystemExit):
        main([])
