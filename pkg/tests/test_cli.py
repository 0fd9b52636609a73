import json
import subprocess
import sys



from qhsplit.cli import (
    EXIT_BUDGET,
    EXIT_FAILURE,
    EXIT_MALFORMED_RATIONAL,
    EXIT_OK,
    EXIT_USAGE,
    RunConfig,
    main,
)


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "qhsplit", *args],
                          capture_output=True, text=True)


# --- run config round trip ---------------------------------------------------

def test_run_config_round_trip():
    config = RunConfig("blowup", "split", n=2, eps="1/10", fmt="md", out="r.md")
    assert RunConfig.from_args(config.to_args()) == config
    plain = RunConfig("oc", "matrix", n=3, eps="", fmt="csv")
    assert RunConfig.from_args(plain.to_args()) == plain


# --- happy paths -------------------------------------------------------------

def test_blowup_split_report():
    result = run_cli("blowup", "split", "--n", "2", "--eps", "1/10")
    assert result.returncode == EXIT_OK
    payload = json.loads(result.stdout)
    assert payload["report"]["total_dim"] == 4
    assert payload["report"]["generation"] == "generates"
    assert payload["meta"]["cutoff"] == "3"


def test_potential_crit_lists_three_points():
    result = run_cli("potential", "crit", "--kind", "pn", "--n", "2")
    assert result.returncode == EXIT_OK
    payload = json.loads(result.stdout)
    assert payload["count"] == 3
    assert payload["meta"]["cyclotomic_order"] == 3


def test_oc_matrix_csv_two_by_two():
    result = run_cli("oc", "matrix", "--n", "1", "--kind", "pn", "--format", "csv")
    assert result.returncode == EXIT_OK
    lines = result.stdout.strip().split("\n")
    assert lines[0].startswith("#")
    assert lines[1] == "row,pt0,pt1"
    assert len(lines) == 4  # meta comment + header + two rows


def test_trees_enumerate_csv():
    result = run_cli("trees", "enumerate", "--boundary", "3", "--interior", "0")
    assert result.returncode == EXIT_OK
    assert result.stdout.splitlines()[0].startswith("#")
    assert result.stdout.splitlines()[1] == "dimension,count"
    assert "total,3" in result.stdout


def test_ainfty_verify_round_trip(tmp_path):
    from qhsplit import toric
    W = toric.PotentialFunction.clifford_torus(1)
    alg = toric.brane_algebra(W, toric.critical_points(W)[0])
    path = tmp_path / "algebra.json"
    path.write_text(json.dumps(alg.to_json_dict()), encoding="utf-8")
    result = run_cli("ainfty", "verify", str(path))
    assert result.returncode == EXIT_OK
    assert json.loads(result.stdout)["ok"] is True


def test_hh_dims_csv(tmp_path):
    from qhsplit import toric
    W = toric.PotentialFunction.clifford_torus(1)
    alg = toric.brane_algebra(W, toric.critical_points(W)[0])
    path = tmp_path / "algebra.json"
    path.write_text(json.dumps(alg.to_json_dict()), encoding="utf-8")
    result = run_cli("hh", "dims", str(path), "--length", "5")
    assert result.returncode == EXIT_OK
    lines = result.stdout.strip().split("\n")
    assert lines[0].startswith("#")
    assert lines[1] == "degree,dimension,stable"
    assert "total,1,true" in lines[-1]


# --- error paths ----------------------------------------------------------------

def test_malformed_rational_exit_code():
    result = run_cli("blowup", "split", "--n", "2", "--eps", "0.1")
    assert result.returncode == EXIT_MALFORMED_RATIONAL
    error = json.loads(result.stderr)
    assert error["error"] == "malformed rational"


def test_unknown_flag_exit_code():
    result = run_cli("blowup", "split", "--n", "2", "--eps", "1/10", "--bogus", "1")
    assert result.returncode == EXIT_USAGE


def test_budget_exit_code():
    result = run_cli("trees", "enumerate", "--boundary", "4", "--budget", "1")
    assert result.returncode == EXIT_BUDGET
    assert json.loads(result.stderr)["error"] == "enumeration budget"


def test_failing_report_exit_code():
    result = run_cli("blowup", "split", "--n", "2", "--eps", "1")
    assert result.returncode == EXIT_FAILURE


# --- determinism -------------------------------------------------------------------

def test_reports_byte_identical():
    for args in (("blowup", "split", "--n", "2", "--eps", "1/10"),
                 ("oc", "matrix", "--n", "2", "--kind", "pn", "--format", "md"),
                 ("potential", "crit", "--kind", "exceptional", "--n", "3",
                  "--eps", "1/10")):
        first = run_cli(*args)
        second = run_cli(*args)
        assert first.stdout == second.stdout
        assert first.returncode == second.returncode


def test_main_in_process():
    assert main(["trees", "enumerate", "--boundary", "2"]) == EXIT_OK


def test_oc_matrix_json_reports_determinant_split():
    result = run_cli("oc", "matrix", "--n", "2", "--kind", "pn")
    payload = json.loads(result.stdout)
    det = payload["determinant"]
    assert det["surjectivity"] == "surjective"
    assert det["det_below"] != "0"
    assert det["split_at"] == "2"


def test_blowup_report_contains_ranks_and_gram():
    result = run_cli("blowup", "split", "--n", "3", "--eps", "1/3")
    report = json.loads(result.stdout)["report"]
    assert report["old_block_rank"] == 4
    assert report["exceptional_block_rank"] == 2
    assert all(entry == "0" for row in report["cross_gram"] for entry in row)


def test_oc_matrix_order_override():
    result = run_cli("oc", "matrix", "--n", "2", "--kind", "pn", "--order", "6")
    payload = json.loads(result.stdout)
    assert payload["meta"]["cyclotomic_order"] == 6
    assert all(entry["order"] == 6
               for row in payload["entries"] for entry in row)
    bad = run_cli("oc", "matrix", "--n", "2", "--kind", "pn", "--order", "4")
    assert bad.returncode == EXIT_FAILURE
