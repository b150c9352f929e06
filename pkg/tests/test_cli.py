import json
from fractions import Fraction

import treea1.verify
from treea1 import extremal_exact, weight_from_text, weight_to_text
from treea1.cli import main


def run_cli(argv):
    try:
        return main(argv)
    except SystemExit as exc:  # argparse usage errors
        return exc.code


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0] == "# manifest: manifest.json"
    header = lines[1].split(",")
    return header, [line.split(",") for line in lines[2:]]


def test_verify_exhaustive_small_grid(tmp_path):
    out = tmp_path / "run"
    code = run_cli(
        ["verify", "--k", "2", "--depth", "2", "--grid", "1,2,3", "--exhaustive", "--out", str(out)]
    )
    assert code == 0
    header, rows = read_csv(out / "report.csv")
    assert len(rows) == 81
    assert header[:2] == ["trial", "weight_hash"]
    flag_columns = header.index("bound_holds")
    assert all(all(cell == "true" for cell in row[flag_columns:]) for row in rows)
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "verify"
    assert manifest["outputs"] == ["report.csv"]
    assert manifest["parameters"]["exhaustive"] is True


def test_verify_random_campaign(tmp_path):
    out = tmp_path / "run"
    code = run_cli(
        ["verify", "--k", "3", "--depth", "2", "--trials", "20", "--seed", "7",
         "--grid", "1,2,5", "--out", str(out)]
    )
    assert code == 0
    _, rows = read_csv(out / "report.csv")
    assert len(rows) == 20


def test_verify_usage_errors(tmp_path):
    assert run_cli(["verify", "--k", "1", "--depth", "2", "--out", str(tmp_path / "x")]) == 2
    assert run_cli(["verify", "--k", "2", "--depth", "2", "--grid", "1,zebra",
                    "--out", str(tmp_path / "y")]) == 2
    assert run_cli(["verify"]) == 2  # missing required flags


def test_verify_is_byte_deterministic(tmp_path):
    args = ["verify", "--k", "2", "--depth", "3", "--trials", "15", "--seed", "3",
            "--grid", "1,2,3"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--out", str(b)]) == 0
    assert (a / "report.csv").read_bytes() == (b / "report.csv").read_bytes()


def test_verify_violation_exits_1_with_counterexample(tmp_path, monkeypatch):
    monkeypatch.setattr(treea1.verify, "check_decomposition", lambda w: False)
    out = tmp_path / "run"
    code = run_cli(
        ["verify", "--k", "2", "--depth", "1", "--trials", "3", "--seed", "1",
         "--grid", "1,2", "--out", str(out)]
    )
    assert code == 1
    counterexample = (out / "counterexample.txt").read_text()
    assert counterexample.startswith("2 1 ")
    assert "check: decomposition" in counterexample
    assert not (out / "report.csv").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["outputs"] == ["counterexample.txt"]


def test_extremal_exact_mode(tmp_path):
    out = tmp_path / "run"
    code = run_cli(["extremal", "--k", "2", "--c", "2", "--mode", "exact", "--out", str(out)])
    assert code == 0
    header, rows = read_csv(out / "sweep.csv")
    assert len(rows) == 1
    row = dict(zip(header, rows[0]))
    assert row["measured_c"] == "2"
    assert row["sup_ratio"] == "3"
    assert row["gap"] == "0"


def test_extremal_family_mode(tmp_path):
    out = tmp_path / "run"
    code = run_cli(
        ["extremal", "--k", "2", "--c", "2", "--mode", "paper", "--depths", "4,6,8", "--out", str(out)]
    )
    assert code == 0
    header, rows = read_csv(out / "sweep.csv")
    assert len(rows) == 3
    idx = header.index("ratio_at_branch_scale")
    ratios = [Fraction(row[idx]) for row in rows]
    assert ratios == sorted(ratios)
    assert all(r < 3 for r in ratios)
    first = dict(zip(header, rows[0]))
    assert first["nominal_c"] == "7/4"
    assert first["measured_c"] == "5/2"


def test_extremal_usage_errors(tmp_path):
    assert run_cli(["extremal", "--k", "2", "--c", "0.5", "--out", str(tmp_path / "x")]) == 2
    assert run_cli(
        ["extremal", "--k", "2", "--c", "2", "--mode", "paper", "--depths", "4",
         "--delta-steps", "1/3", "--out", str(tmp_path / "y")]
    ) == 2
    assert run_cli(["extremal", "--k", "2", "--c", "2", "--mode", "bogus",
                    "--out", str(tmp_path / "z")]) == 2


def test_search_command(tmp_path):
    out = tmp_path / "run"
    code = run_cli(
        ["search", "--k", "2", "--depth", "2", "--iters", "200", "--restarts", "2",
         "--seed", "1", "--out", str(out)]
    )
    assert code == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["objective_at_most_one"] is True
    assert 0 < summary["best_objective"] <= 1 + 2.0**-40
    best = weight_from_text((out / "best_weight.txt").read_text())
    assert best.shape.leaf_count == 4
    trace_lines = (out / "trace.csv").read_text().splitlines()
    assert trace_lines[1] == "iteration,objective"
    assert len(trace_lines) == 2 + 400


def test_search_usage_error(tmp_path):
    assert run_cli(
        ["search", "--k", "2", "--depth", "2", "--iters", "0", "--restarts", "1",
         "--out", str(tmp_path / "x")]
    ) == 2


def test_verify_threads_flag_matches_serial(tmp_path):
    args = ["verify", "--k", "2", "--depth", "2", "--trials", "10", "--seed", "4", "--grid", "1,2"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--threads", "2", "--out", str(b)]) == 0
    assert (a / "report.csv").read_bytes() == (b / "report.csv").read_bytes()


def test_search_is_byte_deterministic(tmp_path):
    args = ["search", "--k", "2", "--depth", "2", "--iters", "100", "--restarts", "2", "--seed", "9"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--out", str(b)]) == 0
    for name in ("trace.csv", "best_weight.txt", "summary.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_inspect_json(tmp_path, capsys):
    weight_file = tmp_path / "w.txt"
    weight_file.write_text(weight_to_text(extremal_exact(2, 2)))
    code = run_cli(["inspect", "--weight", str(weight_file), "--t", "3/4", "--json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["a1_constant"] == "2"
    assert payload["bound"] == "3"
    assert payload["maximal_function"] == ["3", "2", "3", "2"]
    members = {(m["level"], m["index"]): m for m in payload["stopping_family"]}
    assert set(members) == {(0, 0), (2, 0), (2, 2)}
    assert members[(2, 0)]["star"] == [0, 0]
    assert members[(0, 0)]["leaves"] == [1, 3]
    assert payload["profile"]["pieces"] == [["1/2", "3"], ["1/2", "1"]]
    assert payload["audit"]["passed"] is True
    assert payload["audit"]["nodes"] == [[2, 0], [2, 2]]


def test_inspect_text_mode(tmp_path, capsys):
    weight_file = tmp_path / "w.txt"
    weight_file.write_text("2 1 4 1\n")
    code = run_cli(["inspect", "--weight", str(weight_file)])
    assert code == 0
    out = capsys.readouterr().out
    assert "a1 constant" in out and "5/2" in out


def test_inspect_unreadable_file(tmp_path):
    assert run_cli(["inspect", "--weight", str(tmp_path / "missing.txt")]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("not a weight\n")
    assert run_cli(["inspect", "--weight", str(bad)]) == 2
