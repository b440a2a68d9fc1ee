import json
import subprocess
import sys

import pytest

from sepcycle import convex
from sepcycle.cli import main
from sepcycle.instances_io import (
    gen_convex,
    gen_grid_hard,
    gen_infeasible_triangle,
    gen_matching,
    gen_random_hypergraph,
    save_instance,
)


@pytest.fixture
def write(tmp_path):
    def _write(inst, name="inst.json"):
        path = tmp_path / name
        save_instance(inst, path)
        return str(path)

    return _write


def report(capsys):
    out = capsys.readouterr().out.strip().splitlines()
    return dict(line.split("=", 1) for line in out)


def test_check_triangle(write, capsys):
    assert main(["check", write(gen_infeasible_triangle())]) == 1
    r = report(capsys)
    assert r["status"] == "INFEASIBLE"
    assert len(r["witness"].split()) == 3


def test_check_matching(write, capsys):
    assert main(["check", write(gen_matching(5, 0))]) == 0
    assert report(capsys)["status"] == "FEASIBLE"


def test_size_guard(write, capsys):
    path = write(gen_random_hypergraph(30, 10, 0, sizes=(3, 3)))
    assert main(["check", path]) == 2
    assert "size guard" in capsys.readouterr().err
    assert main(["check", path, "--size-guard", "40"]) == 0


def test_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2, "points": [[0, 0], [1, 0]], "edges": [[1]]}')
    assert main(["check", str(bad)]) == 2
    assert "singleton edge" in capsys.readouterr().err


def test_oracle_and_ptas(write, capsys):
    path = write(gen_convex(10, 3))
    assert main(["solve", path, "--mode", "oracle"]) == 0
    opt = float(report(capsys)["length"])
    assert opt == pytest.approx(convex.oracle_convex(gen_convex(10, 3)).length)
    assert main(["solve", path, "--mode", "ptas", "--eps", "0.5", "--json"]) == 0
    r = json.loads(capsys.readouterr().out)
    assert r["length"] <= 1.5 * opt
    assert r["ratio"] >= 1.0


def test_sqrt_on_grid(write, capsys, tmp_path):
    svg = tmp_path / "g.svg"
    assert main(["solve", write(gen_grid_hard(4)), "--mode", "sqrt", "--render", str(svg)]) == 0
    r = report(capsys)
    assert float(r["ratio"]) <= 10 * 4
    assert svg.read_text().startswith("<?xml")
    sol = json.loads(open(r["solution"]).read())
    assert sol["length"] == pytest.approx(float(r["length"]))


def test_mode_mismatch(write, capsys):
    assert main(["solve", write(gen_matching(3, 0)), "--mode", "poly3d"]) == 2
    assert main(["solve", write(gen_matching(3, 0, dim=3)), "--mode", "ptas"]) == 2


def test_poly3d_writes_off(write, capsys):
    assert main(["solve", write(gen_matching(4, 1, dim=3)), "--mode", "poly3d"]) == 0
    r = report(capsys)
    assert open(r["solution"]).readline().strip() == "OFF"


def test_solve_infeasible(write, capsys):
    assert main(["solve", write(gen_infeasible_triangle())]) == 1


def test_bench(tmp_path, capsys):
    assert main(["bench", "nope"]) == 2
    out = tmp_path / "l.csv"
    assert main(["bench", "lemma4", "--seeds", "2", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0].startswith("m,seed,eps,q,bound,contained")
    assert all(",true," in r for r in rows[1:])


def test_generate_and_module_entry(tmp_path):
    out = tmp_path / "g.json"
    subprocess.run([sys.executable, "-m", "sepcycle", "generate", "grid-hard", "--k", "2", "--out", str(out)], check=True)
    res = subprocess.run([sys.executable, "-m", "sepcycle", "check", str(out)], capture_output=True, text=True)
    assert res.returncode == 0 and "FEASIBLE" in res.stdout
