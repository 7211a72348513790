"""Command-line surface: parsing, payload shapes, determinism, exit codes."""

import csv
import json
import math

import pytest

from mplparity import cli


def run_cli(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(argv, capsys, expect=0):
    code, out, err = run_cli(argv, capsys)
    assert code == expect, (code, err, out[:400])
    return json.loads(out)


# --- token parsing ----------------------------------------------------------------


def test_parse_complex_token_forms():
    assert cli.parse_complex_token("-2") == -2
    assert cli.parse_complex_token("−2") == -2  # unicode minus
    assert cli.parse_complex_token("1.5+2i") == 1.5 + 2j
    assert cli.parse_complex_token("1.5+2j") == 1.5 + 2j
    assert cli.parse_complex_token("3") == 3


def test_parse_root_shorthands_exact():
    assert cli.parse_complex_token("ru:4:1") == 1j
    assert cli.parse_complex_token("(4,3)") == -1j
    assert cli.parse_complex_token("ru:2:1") == -1
    assert cli.parse_complex_token("ru:8:2") == 1j
    w = cli.parse_complex_token("ru:8:1")
    assert w == pytest.approx(complex(math.cos(math.pi / 4), math.sin(math.pi / 4)))


def test_root_of_unity_quarter_table():
    assert cli.root_of_unity(4, 0) == 1
    assert cli.root_of_unity(4, 2) == -1
    assert cli.root_of_unity(12, 9) == -1j
    assert cli.root_of_unity(3, 3) == 1


def test_bad_tokens_raise():
    with pytest.raises(cli.CliError):
        cli.parse_complex_token("ru:4")
    with pytest.raises(cli.CliError):
        cli.parse_complex_token("zzz")


def test_split_top_level():
    assert cli._split_top_level("a,(b,c),d") == ["a", "(b,c)", "d"]
    assert cli._split_top_level("(4,1),(2,1)") == ["(4,1)", "(2,1)"]


def test_parse_index_and_args_specs():
    assert cli.parse_index_spec("2,1") == (2, 1)
    assert cli.parse_index_spec([2, 1]) == (2, 1)
    assert cli.parse_args_spec("ru:4:1,-2") == (1j, -2)
    assert cli.parse_args_spec([[0.0, 1.0], "-2", 3]) == (1j, -2, 3)
    with pytest.raises(cli.CliError):
        cli.parse_index_spec("2,0")


# --- eval -------------------------------------------------------------------------


def test_eval_series_point(capsys):
    payload = run_json(["eval", "-k", "2", "-z", "0.5"], capsys)
    assert payload["schema"] == 1
    rec = payload["record"]
    want = math.pi ** 2 / 12 - math.log(2) ** 2 / 2
    assert rec["value"][0] == pytest.approx(want, abs=1e-12)
    assert rec["value"][1] == 0
    assert rec["method"] == "series"
    assert payload["config"]["index"] == [2]


def test_eval_regularized_point(capsys):
    payload = run_json(["eval", "-k", "1,1", "-z", "1,1", "--mode", "stuffle"], capsys)
    rec = payload["record"]
    assert rec["method"] == "regularized"
    assert rec["value"][0] == pytest.approx(-math.pi ** 2 / 12, abs=1e-12)


def test_eval_human_note_on_stderr(capsys):
    code, out, err = run_cli(["eval", "-k", "1", "-z", "0.5"], capsys)
    assert code == 0
    json.loads(out)  # stdout is pure JSON
    assert "value" in err


def test_eval_domain_error(capsys):
    code, out, err = run_cli(["eval", "-k", "2,1", "-z", "3,0.5"], capsys)
    assert code == 2
    payload = json.loads(out)
    assert payload["error"]["type"] == "DomainError"
    assert payload["error"]["violations"] == [[1, 2, [1.5, 0.0]]]


# --- check ------------------------------------------------------------------------


def test_check_main_passes(capsys):
    payload = run_json(["check", "--theorem", "main", "-k", "2", "--args=-2"], capsys)
    assert payload["schema"] == 1
    rec = payload["record"]
    assert rec["theorem"] == "main"
    assert rec["status"] == "pass"
    assert payload["summary"]["n_pass"] == 1
    assert payload["summary"]["max_residual"] < 1e-8


def test_check_fails_at_tiny_tol(capsys):
    code, out, _ = run_cli(
        ["check", "--theorem", "hirose", "-k", "1,2", "--tol", "1e-30"], capsys)
    assert code == 1
    payload = json.loads(out)
    assert payload["record"]["status"] == "fail"


def test_check_hirose_forbids_z(capsys):
    code, _, err = run_cli(["check", "--theorem", "hirose", "-k", "2", "-z", "1"],
                           capsys)
    assert code == 2 and "argument" in err


def test_check_main_mode_validation(capsys):
    code, _, _ = run_cli(
        ["check", "--theorem", "main", "-k", "2", "--args=-2", "--mode", "stuffle"],
        capsys)
    assert code == 2


def test_check_domain_guard(capsys):
    code, out, _ = run_cli(["check", "--theorem", "main", "-k", "1", "-z", "2"], capsys)
    assert code == 2
    assert json.loads(out)["error"]["type"] == "DomainError"


def test_check_reg_each_branch(capsys):
    for branch in ("1", "-1"):
        payload = run_json(
            ["check", "--theorem", "reg", "-k", "1,1", "-z", "ru:4:1,(4,3)",
             "--branch", branch], capsys)
        rec = payload["record"]
        assert rec["branch"] == int(branch)
        assert rec["residual"] < 1e-7


# --- sweep ------------------------------------------------------------------------


def test_sweep_main_small(tmp_path, capsys):
    out = tmp_path / "main.json"
    code, _, _ = run_cli(
        ["sweep", "--theorem", "main", "--depth-max", "1", "--weight-max", "2",
         "--points", "3", "--seed", "5", "--out", str(out)], capsys)
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["schema"] == 1
    assert payload["summary"]["n_fail"] == 0
    assert payload["summary"]["n_error"] == 0
    assert payload["summary"]["max_residual"] < 1e-8
    assert payload["summary"]["routes_independent"] is True
    ks = {tuple(rec["k"]) for rec in payload["records"]}
    assert ks == {(1,), (2,)}


def test_sweep_determinism_and_workers(tmp_path, capsys):
    argv = ["sweep", "--theorem", "reg", "--depth-max", "1", "--weight-max", "2",
            "--seed", "3"]
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    c = tmp_path / "c.json"
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--out", str(b)]) == 0
    assert cli.main(argv + ["--out", str(c), "--workers", "2"]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_sweep_hirose_enumerates(tmp_path, capsys):
    out = tmp_path / "h.json"
    code, _, _ = run_cli(
        ["sweep", "--theorem", "hirose", "--depth-max", "2", "--weight-max", "3",
         "--out", str(out)], capsys)
    assert code == 0
    payload = json.loads(out.read_text())
    ks = [tuple(rec["k"]) for rec in payload["records"]]
    assert ks == [(1,), (2,), (3,), (1, 1), (1, 2), (2, 1)]
    assert payload["summary"]["max_residual"] < 1e-7


def test_sweep_reg_branch_gap(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run_cli(
        ["sweep", "--theorem", "reg", "--depth-max", "1", "--weight-max", "2",
         "--out", str(out)], capsys)
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["summary"]["max_branch_gap"] < 1e-9
    branches = {rec["branch"] for rec in payload["records"]}
    assert branches == {1, -1}


def test_sweep_fail_exit(tmp_path, capsys):
    out = tmp_path / "f.json"
    code, _, _ = run_cli(
        ["sweep", "--theorem", "main", "--depth-max", "1", "--weight-max", "1",
         "--points", "2", "--tol", "1e-30", "--out", str(out)], capsys)
    assert code == 1
    assert json.loads(out.read_text())["summary"]["n_fail"] > 0


# --- config files -------------------------------------------------------------------


def test_config_file_round_trip(tmp_path, capsys):
    cfg = {"command": "check", "theorem": "reg", "mode": "stuffle",
           "index": [1, 1], "args": ["ru:4:1", "(4,3)"], "branch": 1}
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    payload = run_json(["check", "--config", str(path)], capsys)
    assert payload["config"]["theorem"] == "reg"
    assert payload["record"]["z"] == [[0.0, 1.0], [0.0, -1.0]]


def test_config_unknown_key_rejected(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"theorem": "main", "speed": "fast"}))
    code, _, err = run_cli(["check", "--config", str(path), "-k", "1", "--args=-2"],
                           capsys)
    assert code == 2 and "speed" in err


def test_flag_beats_config(tmp_path, capsys):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"index": [2], "args": ["-2"]}))
    payload = run_json(["eval", "--config", str(path), "-k", "3"], capsys)
    assert payload["config"]["index"] == [3]
    assert payload["config"]["args"] == [[-2.0, 0.0]]


def test_positional_specs(capsys):
    # leading-dash argument values go through k=/z= positionals
    payload = run_json(["eval", "k=2", "z=-2"], capsys)
    assert payload["config"]["index"] == [2]
    assert payload["config"]["args"] == [[-2.0, 0.0]]


# --- formats ------------------------------------------------------------------------


def test_csv_output(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    code, _, _ = run_cli(
        ["check", "--theorem", "main", "k=2,1", "z=-1.5,2i",
         "--format", "csv", "--out", str(out)], capsys)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].split(",")[:4] == ["point", "theorem", "mode", "branch"]
    assert len(lines) == 2
    assert "pass" in lines[1]


def test_csv_stdout_matches_json_values(capsys):
    base = ["check", "--theorem", "main", "-k", "2", "--args=-2"]
    payload = run_json(base, capsys)
    code, out, _ = run_cli(base + ["--format", "csv"], capsys)
    assert code == 0
    row = next(csv.DictReader(out.splitlines()))
    assert float(row["residual"]) == payload["record"]["residual"]


# --- selftest -----------------------------------------------------------------------


def test_selftest_clean(capsys):
    payload = run_json(["selftest", "--seed", "1", "--format", "json"], capsys)
    assert payload["schema"] == 1
    assert payload["summary"]["n_fail"] == 0
    groups = {rec["group"] for rec in payload["records"]}
    assert groups == {"wordalg", "rho", "oracle", "deriv", "probe"}
    assert all(rec["passed"] for rec in payload["records"])


def test_selftest_only_filter(capsys):
    payload = run_json(["selftest", "--only", "wordalg,rho"], capsys)
    groups = {rec["group"] for rec in payload["records"]}
    assert groups == {"wordalg", "rho"}


def test_selftest_unknown_group(capsys):
    code, _, _ = run_cli(["selftest", "--only", "nosuch"], capsys)
    assert code == 2


def test_selftest_corrupt_zeta_trips(capsys):
    code, out, _ = run_cli(["selftest", "--corrupt-zeta", "--only", "rho"], capsys)
    assert code == 1
    payload = json.loads(out)
    failed = [rec for rec in payload["records"] if not rec["passed"]]
    assert failed and all(rec["witnesses"] for rec in failed)
