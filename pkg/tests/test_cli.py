import json
from importlib import resources

import pytest

from tautdual.cli import main, run
from tautdual.instance import BUNDLED, ValidationError, bundled_instance_json, load_instance


def strip_timing(report):
    return {k: v for k, v in report.items() if k != "timing"}


def write_instance(tmp_path, obj, name="inst.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_bfun_quadric():
    code, rep = run(["bfun", "quadric-cone"])
    assert code == 0
    res = rep["result"]
    assert res["b"] == "s^2 - s" and res["roots"] == ["0", "1"]
    assert res["certificate"] and res["lower_powers_independent"]
    assert res["symmetry"] == {"gamma_e": "1", "gamma_source": "CI-formula", "holds": True}


def test_reports_are_deterministic():
    a = run(["bfun", "segre-cone", "--json"])
    b = run(["bfun", "segre-cone"])
    assert a[0] == b[0] == 0
    assert strip_timing(a[1]) == strip_timing(b[1])
    assert a[1]["result"]["b"] == "s^2 - 2 s"


def test_build_and_parallel_agree():
    seq = run(["build", "quadric-cone"])
    par = run(["build", "quadric-cone", "--parallel"])
    assert seq[0] == par[0] == 0
    assert seq[1]["result"] == par[1]["result"]
    nonzero = {r["character"]: r["nonzero"] for r in seq[1]["result"]["results"]}
    assert nonzero == {"beta_e=0": True, "beta_e=1": True, "beta_e=1/2": False}


def test_dual_commands():
    code, rep = run(["dual", "gkz-twisted-cubic-plane", "--character", "beta=(0,0)"])
    assert code == 0
    r = rep["result"]["results"][0]
    assert r["beta_tilde"] == ["1", "1"] and r["theorem"] == "GKZ"
    code, rep = run(["dual", "quadric-cone", "--beta-e", "1"])
    assert code == 0
    r = rep["result"]["results"][0]
    assert r["beta_tilde"] == ["0", "0", "0", "0"] and r["shift"] == -2


def test_cycle_and_lfd():
    code, rep = run(["cycle", "--veronese", "2", "2"])
    assert code == 0 and rep["result"]["passed"] and rep["result"]["residual"] == ""
    assert run(["cycle", "--veronese", "3", "2"])[0] == 3
    code, rep = run(["lfd", "lfd-synthetic"])
    assert code == 0 and rep["result"]["exception_set"] == ["1"]
    code, rep = run(["lfd", "--roots", "-1", "--n", "3", "--beta-e", "1/3"])
    assert rep["result"]["classifications"][0]["conclusions"] == ["dag-image", "plus-image", "simple-pure"]
    assert run(["lfd", "--roots", "-1"])[0] == 2


def test_random_cochain_is_not_a_cycle(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("[0^1] x1 d2 + 3\n[1^2] d1\n")
    code, rep = run(["cycle", "quadric-cone", "--cochain", str(path)])
    assert code == 0
    assert rep["result"]["passed"] is False and rep["result"]["residual"]


def test_profile_command():
    code, rep = run(["profile", "quadric-cone", "--cap", "4", "--character", "beta_e=1"])
    assert code == 0
    res = rep["result"]
    assert res["profile"]["truncated"] is True
    assert res["stabilization"]["previous_cap"] == 2
    assert res["dim_Y_minus_m"] == -2
    assert run(["profile", "quadric-cone", "--cap", "4", "--max-columns", "5"])[0] == 4


def test_exit_codes(tmp_path):
    assert run(["bfun", "quadric-cone", "--cap", "1"])[0] == 4
    assert run(["bfun", "no-such-instance"])[0] == 2
    assert run(["build", "quadric-cone", "--order", "lex"])[0] == 2
    assert run(["bfun", "quadric-cone", "--character", "missing"])[0] == 2
    assert run(["bfun", "quadric-cone", "--cap", "-1"])[0] == 2
    bad = tmp_path / "broken.json"
    bad.write_text("{not json")
    assert run(["bfun", str(bad)])[0] == 2


def test_malformed_bracket_is_named(tmp_path):
    obj = bundled_instance_json("quadric-cone")
    obj["lie"]["brackets"][0][2] = ["0", "0", "3", "0"]
    code, rep = run(["build", write_instance(tmp_path, obj)])
    assert code == 2
    assert "respect the bracket" in rep["error"] or "Jacobi" in rep["error"]


def test_unstable_ideal_is_rejected(tmp_path):
    obj = bundled_instance_json("quadric-cone")
    obj["ideal"] = ["x1 x3 - 2 x2^2"]
    code, rep = run(["build", write_instance(tmp_path, obj)])
    assert code == 2 and "not stable" in rep["error"]


def test_unit_ideal_gives_zero_module(tmp_path):
    obj = bundled_instance_json("quadric-cone")
    obj["ideal"] = ["1"]
    obj.pop("ci_degrees")
    code, rep = run(["bfun", write_instance(tmp_path, obj)])
    assert code == 0 and rep["result"]["status"] == "zero-module"


def test_bundled_files_match_constructors():
    for name in BUNDLED:
        inst = load_instance(name)
        assert inst.name == name and len(inst.input_hash) == 64
        on_disk = json.loads(resources.files("tautdual.instances").joinpath(f"{name}.json").read_text())
        assert on_disk == bundled_instance_json(name)
    with pytest.raises(ValidationError):
        load_instance("nowhere")


def test_main_prints_text_and_json(capsys):
    assert main(["lfd", "lfd-synthetic"]) == 0
    text = capsys.readouterr().out
    assert "exception_set" in text and "{" not in text.splitlines()[0]
    assert main(["lfd", "lfd-synthetic", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["status"] == "ok"


def test_reports_name_the_bases():
    code, rep = run(["dual", "segre-cone", "--beta-e", "1"])
    assert code == 0
    assert rep["basis"]["lie"] == ["e", "h1", "E1", "F1", "h2", "E2", "F2"]
    assert rep["basis"]["coordinates"] == ["x1", "x2", "x3", "x4"]
