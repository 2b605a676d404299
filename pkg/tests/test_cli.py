"""Command line behaviour: schemas, exit codes, determinism."""

import json

import pytest

from alexmod.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture
def circle_json(tmp_path):
    path = tmp_path / "circle.json"
    path.write_text(json.dumps({"generators": 1, "relators": [], "epimorphism": [1]}))
    return str(path)


@pytest.fixture
def trefoil_json(tmp_path):
    path = tmp_path / "trefoil.json"
    path.write_text(
        json.dumps({"generators": 2, "relators": [[1, 2, 1, -2, -1, -2]], "epimorphism": [1, 1]})
    )
    return str(path)


@pytest.fixture
def central3_json(tmp_path):
    from alexmod.arrangements import central_arrangement

    path = tmp_path / "central3.json"
    path.write_text(json.dumps(central_arrangement(3).to_json()))
    return str(path)


def test_alexander_both_circle(capsys, circle_json):
    code, out = run_cli(capsys, "alexander", circle_json, "--degree", "1", "--via", "both")
    assert code == 0
    assert out["torsion_psi"]["invariant_factors"] == ["t - 1"]
    assert out["pipelines_agree"] is True


def test_alexander_trefoil_degree2(capsys, trefoil_json):
    code, out = run_cli(capsys, "alexander", trefoil_json, "--degree", "2", "--via", "both")
    assert code == 0
    assert out["torsion_psi"]["invariant_factors"] == ["t^2 - t + 1"]


def test_arrangement_hodge(capsys, central3_json):
    code, out = run_cli(capsys, "arrangement", central3_json, "--report", "hodge")
    assert code == 0
    assert out["hodge"]["h11"] == 2
    assert out["hodge"]["h10"] == 1
    assert out["hodge"]["provenance"] == "closed-form"


def test_check_failing_roots(capsys, tmp_path):
    mod = tmp_path / "m.json"
    mod.write_text(json.dumps({"free_rank": 0, "invariant_factors": ["t - 2"]}))
    code, out = run_cli(capsys, "check", str(mod), "--suite", "roots")
    assert code == 1
    assert out["checks"]["roots"]["offending"] == "t - 2"


def test_check_passing(capsys, tmp_path):
    mod = tmp_path / "m.json"
    mod.write_text(json.dumps({"free_rank": 0, "invariant_factors": ["t^2 + t + 1"]}))
    code, out = run_cli(
        capsys, "check", str(mod), "--suite", "roots,jordan,semisimple", "--degree", "1", "--dim", "2"
    )
    assert code == 0
    assert all(entry["ok"] for entry in out["checks"].values())


def test_thicken_command(capsys, tmp_path):
    from alexmod.arrangements import central_arrangement, os_algebra

    cdga = tmp_path / "os3.json"
    cdga.write_text(json.dumps(os_algebra(central_arrangement(3)).to_json()))
    code, out = run_cli(capsys, "thicken", str(cdga), "--eta", "1,1,1", "-m", "2", "--checks")
    assert code == 0
    assert out["betti"] == {"0": 1, "1": 3, "2": 2}
    assert out["torsion"]["2"]["invariant_factors"] == ["t - 1", "t - 1"]
    assert all(out["checks"].values())


def test_malformed_input(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    code, out = run_cli(capsys, "alexander", str(bad))
    assert code == 2
    assert out["error"] == "MalformedInput"


def test_math_error_exit_code(capsys, tmp_path):
    arr = tmp_path / "parallel.json"
    arr.write_text(json.dumps({"lines": [["1", "0", "0"], ["1", "0", "1"]]}))
    code, out = run_cli(capsys, "arrangement", str(arr), "--report", "hodge")
    assert code == 1
    assert out["error"] == "NotEssential"


def test_determinism(capsys, trefoil_json):
    code1 = main(["alexander", trefoil_json, "--degree", "2", "--via", "both"])
    out1 = capsys.readouterr().out
    code2 = main(["alexander", trefoil_json, "--degree", "2", "--via", "both"])
    out2 = capsys.readouterr().out
    assert (code1, out1) == (code2, out2)


def test_duplicate_line_rejected(capsys, tmp_path):
    arr = tmp_path / "dup.json"
    arr.write_text(json.dumps({"lines": [["1", "0", "0"], ["2", "0", "0"]]}))
    code, out = run_cli(capsys, "arrangement", str(arr))
    assert code == 1
    assert out["error"] == "DuplicateLine"
