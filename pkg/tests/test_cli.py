from __future__ import annotations

import json
import subprocess
import sys

import pytest

from drdomination.cli import main
from drdomination.generators import complete_bipartite, path
from drdomination.graph import Graph, format_edge_list, parse_edge_list


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, g in {"k55": complete_bipartite(5, 5), "p4": path(4), "p5": path(5),
                    "two": Graph(2, (0, 0))}.items():
        p = tmp_path / f"{name}.el"
        p.write_text(format_edge_list(g))
        out[name] = str(p)
    bad = tmp_path / "bad.el"
    bad.write_text("2 2\n0 1\n1 0\n")
    out["bad"] = str(bad)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_k55(files, capsys):
    code, out, _ = run(capsys, "solve", "--input", files["k55"], "-d", "1", "-r", "1",
                       "--method", "dp-extended", "--json")
    report = json.loads(out)
    assert code == 0
    assert report["methods"]["dp-extended"]["size"] == 2
    assert report["methods"]["dp-extended"]["valid"] is True
    assert list(report)[:8] == ["n", "m", "d", "r", "params", "methods", "divergences", "seed"]


def test_solve_p5_radius_two(files, capsys):
    code, out, _ = run(capsys, "solve", "--input", files["p5"], "-d", "1", "-r", "2", "--json")
    assert code == 0 and json.loads(out)["solution"] == [2]


def test_solve_budget_exit_codes(files, capsys):
    assert run(capsys, "solve", "--input", files["p4"], "--budget", "1")[0] == 1
    assert run(capsys, "solve", "--input", files["p4"], "--budget", "2")[0] == 0


@pytest.mark.parametrize("method", ["brute", "dp-paper", "dp-extended", "ilp", "auto"])
def test_solve_methods(files, capsys, method):
    code, out, _ = run(capsys, "solve", "--input", files["k55"], "--method", method, "--json")
    (name, result), = json.loads(out)["methods"].items()
    size = result["size"]
    assert code == 0 and name == ("brute" if method == "auto" else method)
    assert size == (5 if method == "dp-paper" else 2)


def test_solve_human_output(files, capsys):
    code, out, _ = run(capsys, "solve", "--input", files["p4"])
    assert code == 0 and "verified" in out and "mw=4" in out


def test_dump_tables(files, capsys, tmp_path):
    target = tmp_path / "tables.json"
    run(capsys, "solve", "--input", files["k55"], "--method", "dp-paper", "--dump-tables", str(target))
    assert json.loads(target.read_text())["variant"] == "paper"


def test_parse_error_exit_2(files, capsys):
    code, _, err = run(capsys, "solve", "--input", files["bad"])
    assert code == 2 and "line 3" in err


def test_missing_file_exit_2(capsys, tmp_path):
    assert run(capsys, "solve", "--input", str(tmp_path / "nope.el"))[0] == 2


def test_kernel_command(files, capsys, tmp_path):
    target = tmp_path / "kernel.el"
    code, out, _ = run(capsys, "kernel", "--input", files["k55"], "-d", "1", "-o", str(target))
    assert code == 0
    assert parse_edge_list(target.read_text()) == complete_bipartite(2, 2)
    assert json.loads(out)["bound"] == 4


def test_compress_colored(files, capsys):
    code, out, err = run(capsys, "compress", "--input", files["k55"], "--target", "colored", "--budget", "2")
    assert code == 0
    assert json.loads(out) == {"h_edges": [[0, 1]], "colors": "BB", "budget": 2}
    assert json.loads(err)["h_vertices"] == 2


def test_compress_colored_disconnected(files, capsys):
    code, _, err = run(capsys, "compress", "--input", files["two"], "--target", "colored")
    assert code == 2 and "connected" in err


def test_compress_ilp(files, capsys, tmp_path):
    target = tmp_path / "p4.lp"
    code, out, _ = run(capsys, "compress", "--input", files["p4"], "--target", "ilp", "--budget", "2",
                       "-o", str(target))
    assert code == 0
    assert "Subject To" in target.read_text()
    assert json.loads(out)["itp"] == 4


def test_power_command(files, capsys):
    code, out, _ = run(capsys, "power", "--input", files["p4"], "-r", "2")
    assert code == 0 and parse_edge_list(out).m == 5


def test_decompose_command(files, capsys):
    code, out, _ = run(capsys, "decompose", "--input", files["p4"], "--json")
    data = json.loads(out)
    assert code == 0 and data["params"] == {"mw": 4, "nd": 4, "itp": 4}
    assert data["tree"]["kind"] == "prime"


def test_harness_command_complete_bipartite(capsys):
    code, out, _ = run(capsys, "harness", "--family", "complete-bipartite", "--trials", "20", "-d", "1", "--json")
    summary = json.loads(out)["summary"]
    assert code == 0
    paper = summary["agreement"]["dp-paper/oracle"]
    assert paper["agree"] < paper["total"]
    ext = summary["agreement"]["dp-extended/oracle"]
    assert ext["agree"] == ext["total"] == 20


def test_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "drdomination.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "solve" in proc.stdout
