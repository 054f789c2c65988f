import json
import logging

import pytest

import toric_cli
from toricpy.polytope import interval, product

main = toric_cli.main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_polytope_command(capsys, tmp_path):
    svg = tmp_path / "delta.svg"
    code, out = run(capsys, "-q", "polytope", "double-blowup", "--n", "2",
                    "--alpha", "1/6", "--svg", str(svg), "--mark", "11/48,1/6")
    assert code == 0
    data = json.loads(out)
    assert data["delzant"]["ok"]
    assert ["1/1", "0/1"] in data["vertices"]
    assert svg.read_text().startswith("<?xml")


def test_probes_command(capsys):
    code, out = run(capsys, "-q", "probes", "--polytope", "blowup", "--n", "2",
                    "--k", "0", "--lam", "1/8", "--grid", "24",
                    "--dir-bound", "3")
    assert code == 0
    assert json.loads(out)["survivors"] == [["1/8", "1/8"], ["1/3", "1/3"]]


def test_potential_command_with_oracle(capsys):
    code, out = run(capsys, "-q", "potential", "--polytope", "blowup",
                    "--n", "3", "--k", "1", "--lam", "1/8", "--oracle")
    assert code == 0
    data = json.loads(out)
    assert data["oracle"]["agrees"]
    assert {"vector": ["1/4", "1/4", "1/4"], "multiplicity": 4,
            "degenerate": False} in data["classes"]


def test_classify_command(capsys):
    code, out = run(capsys, "-q", "classify", "--polytope", "blowup",
                    "--n", "2", "--lam", "1/2", "--grid", "8")
    assert code == 0
    assert json.loads(out)["stem"]


def test_reduce_pipeline(capsys):
    code, out = run(capsys, "-q", "reduce", "--n", "2", "--alpha", "1/6",
                    "--lam", "1/16")
    assert code == 0
    data = json.loads(out)
    assert data["equal"]
    assert data["fiber_after"] == ["11/48", "1/6"]


def test_reduce_sweep(capsys):
    code, out = run(capsys, "-q", "reduce", "--n", "2", "--alpha", "1/6",
                    "--lam", "1/16,1/8")
    assert code == 0
    assert len(json.loads(out)["reports"]) == 2


def test_reduce_irregular_level_exits_1(capsys):
    code, out = run(capsys, "-q", "reduce", "--n", "2", "--alpha", "1/6",
                    "--lam", "0")
    assert code == 1
    data = json.loads(out)
    assert not data["regularity"]["regular"]
    assert data["regularity"]["offending_faces"]


def test_reduce_file(capsys, tmp_path):
    path = tmp_path / "square.json"
    path.write_text(product(interval(0, 1), interval(0, 1)).to_json())
    code, out = run(capsys, "-q", "reduce", "--file", str(path), "--M", "1,1",
                    "--c", "1/2", "--P", "1,0")
    assert code == 0
    data = json.loads(out)
    assert data["fiber_map"] == [[1, 0]]
    assert data["regularity"]["regular"]


def test_polytope_product_family(capsys):
    code, out = run(capsys, "-q", "polytope", "product", "--factor", "cpn:n=2",
                    "--factor", "interval:lo=0,hi=1/2")
    assert code == 0
    data = json.loads(out)
    assert data["delzant"]["ok"]
    assert len(data["vertices"]) == 6
    assert ["0/1", "1/1", "1/2"] in data["vertices"]
    assert run(capsys, "polytope", "product", "--factor", "cpn:n=2")[0] == 2
    assert run(capsys, "polytope", "product", "--factor", "cpn:n=2",
               "--factor", "interval:lo=0,hi=1,k=3")[0] == 2


def test_reduce_file_needs_slice_exits_2(capsys, caplog, tmp_path):
    path = tmp_path / "square.json"
    path.write_text(product(interval(0, 1), interval(0, 1)).to_json())
    with caplog.at_level(logging.ERROR):
        code, _ = run(capsys, "reduce", "--file", str(path), "--c", "1/2")
    assert code == 2
    assert "--M" in caplog.text
    assert run(capsys, "reduce", "--file", str(path), "--M", "1,1")[0] == 2


def test_bad_input_exits_2(capsys, caplog):
    with caplog.at_level(logging.ERROR):
        code, _ = run(capsys, "reduce", "--n", "2", "--alpha", "1/6",
                      "--lam", "1/0")
    assert code == 2
    assert "1/0" in caplog.text
    code, _ = run(capsys, "polytope", "blowup", "--n", "2", "--k", "1",
                  "--lam", "1/8")
    assert code == 2
    assert run(capsys, "verify", "nope")[0] == 2
    assert run(capsys, "run", "missing.yaml")[0] == 2


def test_verify_newton_suite(capsys):
    code, out = run(capsys, "-q", "verify", "newton")
    assert code == 0
    assert json.loads(out)["passed"]


def test_run_survey(tmp_path, capsys):
    config = tmp_path / "survey.yaml"
    config.write_text("name: small\n"
                      "polytope: {type: blowup, n: 2, k: 0, lam: 1/8}\n"
                      "probes: {grid: 24}\n")
    out_dir = tmp_path / "out"
    assert main(["-q", "run", str(config), "-o", str(out_dir)]) == 0
    report = json.loads((out_dir / "small.json").read_text())
    assert report["consistent"]
    assert report["probes"]["survivors"] == [["1/8", "1/8"], ["1/3", "1/3"]]
    assert (out_dir / "small.svg").exists()
