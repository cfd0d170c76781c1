import json

import pytest

from packdp.cli import main
from packdp.graph import complete_graph, cycle_graph, emit_gr
from packdp.treedec import emit_td, heuristic_treedec


@pytest.fixture
def k4(tmp_path):
    g = complete_graph(4)
    (tmp_path / "g.gr").write_text(emit_gr(g))
    (tmp_path / "g.td").write_text(emit_td(heuristic_treedec(g)))
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_solve_clique_pack(k4, capsys):
    code, out = run_json(capsys, "solve", "clique-pack", "--c", 1, "--d", 3, k4 / "g.gr", "--td", k4 / "g.td")
    assert code == 0 and out == {"value": 1}
    code, out = run_json(capsys, "solve", "clique-pack", "--c", 3, "--variant", "arb", "--witness", k4 / "g.gr")
    assert out["value"] == 4 and len(out["witness"]) == 4


def test_solve_partition_exit_codes(k4, capsys):
    assert run_json(capsys, "solve", "clique-part", "--c", 1, k4 / "g.gr")[0] == 2
    assert run_json(capsys, "solve", "clique-part", "--c", 3, "--variant", "arb", k4 / "g.gr")[0] == 0
    assert run_json(capsys, "solve", "h-part", "--pattern", "K3", k4 / "g.gr")[0] == 2
    assert run_json(capsys, "solve", "h-pack", "--pattern", "C4", k4 / "g.gr") == (0, {"value": 1})


def test_solve_validates_td(k4, capsys):
    (k4 / "bad.td").write_text("s td 1 2 4\nb 1 1 2\n")
    code, out = run_json(capsys, "solve", "clique-pack", k4 / "g.gr", "--td", k4 / "bad.td")
    assert code == 3 and out["error"] == "TDError"


def test_td_commands(k4, capsys):
    (k4 / "bad.td").write_text("s td 1 2 4\nb 1 1 2\n")
    code, out = run_json(capsys, "td", "validate", k4 / "g.gr", k4 / "bad.td")
    assert code == 2 and not out["valid"]
    code, out = run_json(capsys, "td", "validate", k4 / "g.gr", k4 / "g.td")
    assert code == 0 and out["width"] == 3
    code, out = run_json(capsys, "td", "heuristic", k4 / "g.gr", "-o", k4 / "h.td")
    assert code == 0 and (k4 / "h.td").exists()


def test_oracle_commands(k4, capsys):
    assert run_json(capsys, "oracle", "pack", k4 / "g.gr", "--c", 3, "--variant", "arb")[1]["value"] == 4
    assert run_json(capsys, "oracle", "cover", k4 / "g.gr", "--c", 1)[0] == 2
    (k4 / "dem.json").write_text(json.dumps({"1": 3, "2": 3, "3": 3, "4": 3}))
    code, out = run_json(capsys, "oracle", "cover", k4 / "g.gr", "--variant", "arb", "--demand", k4 / "dem.json")
    assert code == 0 and out["feasible"]


def test_budget_exit(k4, capsys, monkeypatch):
    monkeypatch.setenv("PACKDP_BUDGET", "3")
    code, out = run_json(capsys, "oracle", "pack", k4 / "g.gr", "--c", 3, "--variant", "arb")
    assert code == 4 and out["error"] == "budget"


def test_gadget_build_and_verify(tmp_path, capsys):
    path = tmp_path / "neq.json"
    assert run_json(capsys, "gadget", "build", "--kind", "neq", "--c", 1, "--d", 3, "-o", path)[0] == 0
    code, out = run_json(capsys, "gadget", "verify", path)
    assert code == 0 and out["dist_ok"] and out["arb_ok"]
    code, out = run_json(capsys, "oracle", "relation", path)
    assert out["relation"]["tuples"] == [[0, 1], [1, 0]]
    bad = json.loads(path.read_text())
    bad["claimed"]["tuples"] = [[1, 0]]
    path.write_text(json.dumps(bad))
    code, out = run_json(capsys, "gadget", "verify", path)
    assert code == 2 and out["extra"]["dist"] == [[0, 1]]


def test_reduce_commands(tmp_path, capsys):
    (tmp_path / "k3.gr").write_text(emit_gr(complete_graph(3)))
    code, out = run_json(capsys, "reduce", "single", tmp_path / "k3.gr", "-o", tmp_path / "o" / "k3")
    assert code == 0 and (tmp_path / "o" / "k3.td").exists()
    code, out = run_json(capsys, "td", "validate", tmp_path / "o" / "k3.gr", tmp_path / "o" / "k3.td")
    assert code == 0
    (tmp_path / "csp.json").write_text(json.dumps({"n": 2, "B": 1, "constraints": [{"i": 0, "j": 1, "allowed": []}]}))
    code, out = run_json(capsys, "reduce", "csp", tmp_path / "csp.json")
    assert code == 2 and out["status"] == "unsatisfiable"
    (tmp_path / "pi.json").write_text(json.dumps({"k": 2, "edges": [[[0, 0], [1, 1]]]}))
    code, out = run_json(capsys, "reduce", "permiset", tmp_path / "pi.json", "--pattern", "paw")
    assert code == 3
    code, out = run_json(capsys, "reduce", "permiset", tmp_path / "pi.json", "--pattern", "C4",
                         "-o", tmp_path / "pi")
    assert code == 0 and out["width"] <= 60


def test_input_errors(tmp_path, capsys):
    assert run_json(capsys, "solve", "nope", "x.gr")[0] == 3
    assert run_json(capsys, "solve", "clique-pack", tmp_path / "missing.gr")[0] == 3
    (tmp_path / "bad.gr").write_text("p tw 2 5\n1 2\n")
    assert run_json(capsys, "solve", "clique-pack", tmp_path / "bad.gr")[0] == 3
    (tmp_path / "c.gr").write_text(emit_gr(cycle_graph(4)))
    code, out = run_json(capsys, "solve", "h-pack", "--pattern", "K11", tmp_path / "c.gr")
    assert code == 3 and "10" in out["message"]


def test_batch(tmp_path, capsys):
    code, out = run_json(capsys, "batch", "unknown-suite")
    assert code == 3 and "unknown suite" in out["message"]
    code, out = run_json(capsys, "batch", "join-fidelity", "--seed", 3, "--out", tmp_path)
    assert code == 0 and out["passed"]
    assert (tmp_path / "join-fidelity.csv").exists() and (tmp_path / "join-fidelity-timings.png").exists()


def test_human_output(k4, capsys):
    code, out = run(capsys, "--human", "solve", "clique-pack", k4 / "g.gr")
    assert code == 0 and out.strip() == "value: 1"
