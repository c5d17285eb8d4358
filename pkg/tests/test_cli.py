import csv
import io
import json

import pytest

from qarith import cli
from qarith.arch import ArchModel


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_table2_report(capsys):
    code, out, _ = run(capsys, "report", "table2")
    assert code == 0
    rows = {(r["algo"], r["arch"]): r for r in _csv(out)}
    for algo in ("D", "E"):
        r = rows[(algo, "ntc")]
        assert r["ccnot"] == r["cnot"] == r["ratio"] == "N/A"
    # ratios come from the emitted cells, not a lookup
    base = float(rows[("cvbe", "ac")]["ccnot"])
    for algo in ("D", "E", "F", "G"):
        r = rows[(algo, "ac")]
        assert float(r["ratio"]) == pytest.approx(base / float(r["ccnot"]), abs=0.006)
    assert rows[("D", "ac")]["space"] == "11969"


def test_reports_are_deterministic(capsys):
    _, a, _ = run(capsys, "report", "table2")
    _, b, _ = run(capsys, "report", "table2")
    assert a == b


def test_report_to_file(capsys, tmp_path):
    dest = tmp_path / "t1.json"
    code, out, _ = run(capsys, "report", "table1", "--format", "json", "--out", str(dest))
    assert code == 0 and out == ""
    rows = json.loads(dest.read_text())
    assert {r["algo"] for r in rows} >= {"D", "E", "F", "G"}


def test_ntc_gap_report(capsys):
    code, out, _ = run(capsys, "report", "ntc-gap", "--max-n", "4")
    assert code == 0
    rows = _csv(out)
    vbe = [r for r in rows if r["adder"] == "vbe"]
    assert [int(r["n"]) for r in vbe] == [3, 4]
    assert all(int(r["slots"]) <= int(r["limit_22n"]) for r in vbe)
    assert vbe[0]["gap"] == "0"


def test_schedule_json(capsys):
    code, out, _ = run(capsys, "schedule", "--adder", "vbe", "--n", "3", "--arch", "ntc")
    assert code == 0
    doc = json.loads(out)
    assert doc["num_slots"] == len(doc["slots"]) == 45
    assert sorted(doc["line_order"]) == list(range(len(doc["line_order"])))
    ArchModel.ntc(doc["line_order"])


def test_schedule_limit(capsys):
    _, out, _ = run(capsys, "schedule", "--adder", "vbe", "--n", "3", "--arch", "ntc", "--limit", "2")
    doc = json.loads(out)
    assert doc["max_concurrency"] <= 2 and doc["num_slots"] == 45


def test_schedule_csv(capsys):
    _, out, _ = run(capsys, "schedule", "--adder", "cuccaro", "--n", "3", "--format", "csv")
    rows = _csv(out)
    assert rows[0]["slot"] == "0" and rows[0]["class"] in ("ccnot", "cnot", "not")


def test_verify_adder_exhaustive(capsys):
    code, out, _ = run(capsys, "verify", "--adder", "vbe", "--n", "3")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and doc["cases"] == 64 and doc["domain"] == "exhaustive"


def test_verify_modexp(capsys):
    code, out, _ = run(capsys, "verify", "--algo", "G", "--n", "4", "--N", "15", "--x", "7")
    assert code == 0 and json.loads(out)["pass"]


def test_seed_env_overrides_flag(capsys, monkeypatch):
    monkeypatch.setenv("QARITH_SEED", "5")
    _, out, _ = run(capsys, "verify", "--adder", "vbe", "--n", "8", "--cases", "10", "--seed", "1")
    assert json.loads(out)["seed"] == 5
    monkeypatch.setenv("QARITH_SEED", "x")
    code, _, err = run(capsys, "verify", "--adder", "vbe", "--n", "8", "--cases", "10")
    assert code == 2 and "QARITH_SEED" in err


def test_usage_errors_exit_2(capsys):
    code, _, err = run(capsys, "verify", "--algo", "G", "--n", "4", "--N", "14", "--x", "3")
    assert code == 2 and "odd" in err
    code, _, err = run(capsys, "cost", "--formula", "R_I", "--param", "n=128", "--param", "s=12")
    assert code == 2 and "'w'" in err
    code, _, _ = run(capsys, "table", "--N", "15")
    assert code == 2


def test_argparse_rejects_unknown(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["cost", "--bogus"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["frobnicate"])
    assert e.value.code == 2


def test_infeasible_exit_3(capsys):
    code, _, err = run(capsys, "optimize", "--algo", "cvbe", "--space-multiple", "7")
    assert code == 3 and "897" in err


def test_cost_formula_and_algo(capsys):
    _, out, _ = run(capsys, "cost", "--formula", "t_ADD", "--param", "n=3")
    doc = json.loads(out)
    assert doc["value"] == [8, 9, 0] and doc["params"] == {"n": 3}
    _, out, _ = run(capsys, "cost", "--formula", "R_M", "--param", "n=128", "--param", "b=1024")
    assert json.loads(out)["value"] == "2049/8"
    code, out, _ = run(capsys, "cost", "--algo", "D")
    assert code == 0 and json.loads(out)["space"] == 11969
    _, out, _ = run(capsys, "cost", "--algo", "D", "--s", "4")
    assert json.loads(out)["name"] == "custom"


def test_optimize_reproduces_e(capsys):
    code, out, _ = run(capsys, "optimize", "--algo", "E")
    doc = json.loads(out)
    assert code == 0
    assert (doc["params"]["s"], doc["params"]["w"], doc["params"]["p"]) == (16, 2, 10)


def test_sweep_single_point(capsys):
    code, out, _ = run(capsys, "sweep", "--over", "n", "--values", "32", "--algos", "E")
    rows = _csv(out)
    assert code == 0 and len(rows) == 1 and rows[0]["algo"] == "E"


def test_plan_and_table(capsys):
    _, out, _ = run(capsys, "plan", "--s", "12", "--w", "2", "--literal")
    assert json.loads(out)["calls"] == 28
    _, out, _ = run(capsys, "plan", "--n", "4", "--additions", "4", "--p", "3")
    d = json.loads(out)["deferred"]
    assert d["chain_calls"] == 9 and d["vbe_calls"] == 20
    _, out, _ = run(capsys, "table", "--N", "15", "--x", "7", "--w", "2")
    assert json.loads(out) == ["1", "7", "4", "13"]


def test_build_dumps_circuit(capsys):
    _, out, _ = run(capsys, "build", "--adder", "cuccaro", "--n", "3")
    doc = json.loads(out)
    assert doc["gates"] == len(doc["circuit"]["gates"])
    assert doc["qubits"] == 8


def test_verify_suite_small(capsys):
    code, out, _ = run(capsys, "verify-suite", "--max-n", "2")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and "reduced coverage" in doc["note"]


def test_verify_suite_mutated_fails(capsys):
    code, out, _ = run(capsys, "verify-suite", "--max-n", "2", "--mutate")
    doc = json.loads(out)
    assert code == 1 and not doc["pass"] and doc["failures"]
