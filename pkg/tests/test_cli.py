import json

import pytest

from cubekit import builders
from cubekit.cli import run
from cubekit.median import graph_to_text
from cubekit.action import action_to_text


@pytest.fixture
def files(tmp_path):
    paths = {}

    def put(name, text):
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
        return paths[name]

    put("q3.graph", graph_to_text(builders.hypercube(3)))
    put("tri.graph", graph_to_text(builders.triangle()))
    put("path.graph", graph_to_text(builders.path_graph(4)))
    a = builders.free_group_action(4)
    put("f2.graph", graph_to_text(a.graph))
    put("f2.action", action_to_text(a))
    put("walls.txt", "p w\np x\np y\np z\n"
        "w 0: w | x y z\nw 1: x | w y z\nw 2: y | w x z\n")
    paths["put"] = put
    return paths


def test_validate_ok(files, capsys):
    assert run(["validate", files["q3.graph"]]) == 0
    out = capsys.readouterr().out
    assert "median: OK (8 vertices, 3 hyperplanes)" in out


def test_validate_negative(files, capsys):
    assert run(["validate", files["tri.graph"]]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_validate_json(files, capsys):
    assert run(["--format", "json", "validate", files["q3.graph"]]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj == {"median": True, "vertices": 8, "hyperplanes": 3}


def test_missing_file_is_error(files, capsys):
    assert run(["validate", "/nonexistent.graph"]) == 2
    assert "error" in capsys.readouterr().err


def test_usage_error_exit_code(files):
    assert run(["no-such-command"]) == 2


def test_hyperplanes_report(files, capsys):
    assert run(["hyperplanes", files["path.graph"]]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("H0: edges=")


def test_separation_yes_and_no(files, capsys):
    assert run(["separation", files["f2.graph"], "H0", "H5"]) == 0
    assert "strongly separated: yes" in capsys.readouterr().out
    assert run(["separation", files["q3.graph"], "H0", "H1"]) == 1
    assert "strongly separated: no" in capsys.readouterr().out


def test_facing_negative_on_q3(files, capsys):
    assert run(["facing", files["q3.graph"], "--k", "2"]) == 1


def test_facing_triple_on_tree(files, capsys):
    assert run(["facing", files["path.graph"], "--k", "2", "--limit", "1"]) == 0
    assert capsys.readouterr().out.strip() == "H0- H1+"


def test_decompose(files, capsys):
    assert run(["decompose", files["q3.graph"]]) == 0
    assert "irreducible factors: 3" in capsys.readouterr().out


def test_dual_and_roundtrip(files, capsys):
    assert run(["dual", files["walls.txt"]]) == 0
    out = capsys.readouterr().out
    assert out.count("\nv ") + out.startswith("v ") == 4
    assert run(["roundtrip", files["q3.graph"]]) == 0


def test_action_validate(files, capsys):
    assert run(["action-validate", files["f2.graph"], files["f2.action"]]) == 0
    out = capsys.readouterr().out
    assert "action: valid" in out and "R_eff: 3" in out


def test_orbit_and_flip(files, capsys):
    assert run(["orbit", files["f2.graph"], files["f2.action"],
                "--halfspace", "H0+", "-L", "2"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 17
    assert run(["flip", files["f2.graph"], files["f2.action"],
                "--halfspace", "H0-", "-L", "2"]) == 0


def test_flip_budget_inconclusive(files, capsys):
    # trivial action cannot flip anything: budget exit, not negative
    t = builders.trivial_action(builders.path_graph(4))
    files["put"]("t.graph", graph_to_text(t.graph))
    files["put"]("t.action", action_to_text(t))
    assert run(["flip", files["t.graph"], files["t.action"],
                "--halfspace", "H1+", "-L", "3"]) == 3
    assert "inconclusive" in capsys.readouterr().err


def test_pingpong_verify_cycle(files, tmp_path, capsys):
    # depth-1 quadruple: the four outward subtrees at the basepoint;
    # x = ab moves U two steps off its boundary, so delta-witness is 2
    assert run(["pingpong", files["f2.graph"], files["f2.action"],
                "--quadruple", "H0+ H1+ H2+ H3+",
                "--g", "a", "--h", "b", "--m-max", "1"]) == 0
    cert = capsys.readouterr().out
    assert "delta-witness: 2" in cert
    cpath = tmp_path / "cert.txt"
    cpath.write_text(cert)
    assert run(["verify", files["f2.graph"], files["f2.action"],
                str(cpath)]) == 0
    assert "verified" in capsys.readouterr().out
    cpath.write_text(cert.replace("delta-witness: 2", "delta-witness: 7"))
    assert run(["verify", files["f2.graph"], files["f2.action"],
                str(cpath)]) == 1


def test_schreier_and_spectral(files, capsys):
    assert run(["schreier", files["f2.graph"], files["f2.action"],
                "--halfspace", "H0+", "--radius", "2"]) == 0
    assert "# frontier:" in capsys.readouterr().out
    assert run(["spectral", files["f2.graph"], files["f2.action"],
                "--halfspace", "H0+", "--radii", "2,3"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "radius,estimate,residual"
    assert len(lines) == 3


def test_elliptic(files, capsys):
    assert run(["elliptic", files["f2.graph"], files["f2.action"],
                "--words", "1", "--hyperplane", "H0"]) == 0
    assert "fixed edge" in capsys.readouterr().out


def test_report(files, capsys):
    assert run(["report", files["q3.graph"]]) == 0
    assert "shape:" in capsys.readouterr().out


def test_threads_flag_does_not_change_output(files, capsys):
    assert run(["--threads", "1", "hyperplanes", files["q3.graph"]]) == 0
    one = capsys.readouterr().out
    assert run(["--threads", "4", "hyperplanes", files["q3.graph"]]) == 0
    assert capsys.readouterr().out == one
