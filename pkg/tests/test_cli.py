import csv
import json
import subprocess
import sys

import pytest

from hypcount.cli import main
from hypcount.constants import BOLZA_COUNTS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_no_command_is_usage_error(capsys):
    code, _, err = run(capsys)
    assert code == 1 and "usage" in err


def test_bad_flag_is_usage_error(capsys):
    code, _, err = run(capsys, "count", "--nope")
    assert code == 1
    assert json.loads(err.strip().splitlines()[-1])["error"] == "USAGE"


def test_count(tmp_path, capsys):
    code, out, _ = run(capsys, "count", "--X", "25", "--out", str(tmp_path))
    assert code == 0 and int(out) == BOLZA_COUNTS[25]
    rows = list(csv.reader((tmp_path / "count.csv").open()))
    assert rows[0] == ["B", "a", "b", "c", "d", "word"] and len(rows) == BOLZA_COUNTS[25] + 1
    doc = json.loads((tmp_path / "count.json").read_text())
    assert doc["N"] == BOLZA_COUNTS[25] and doc["config"]["command"] == "count"
    assert "threads" not in doc["config"]


def test_count_rejects_small_x(tmp_path, capsys):
    code, _, err = run(capsys, "count", "--X", "0.5", "--out", str(tmp_path))
    assert code == 1 and json.loads(err)["error"] == "INVALID_ARGUMENT"


def test_missing_group_file(tmp_path, capsys):
    code, _, err = run(capsys, "count", "--X", "5", "--group", str(tmp_path / "none.json"),
                       "--out", str(tmp_path))
    assert code == 2 and json.loads(err)["error"] == "FILE_NOT_FOUND"


def test_bad_group_file(tmp_path, capsys):
    bad = tmp_path / "g.json"
    bad.write_text("[]")
    code, _, err = run(capsys, "count", "--X", "5", "--group", str(bad), "--out", str(tmp_path))
    assert code == 2 and json.loads(err)["error"] == "SCHEMA"


def test_resonate(tmp_path, capsys):
    code, out, _ = run(capsys, "resonate", "--rs", "1,1.4142135623730951", "--M", "1", "--T", "4",
                       "--method", "both", "--out", str(tmp_path))
    assert code == 0 and "pigeonhole" in out and "brute" in out
    doc = json.loads((tmp_path / "resonate.json").read_text())
    assert all(r["max_defect"] < r["bound"] for r in doc["results"])


def test_resonate_duplicate_is_numerical(tmp_path, capsys):
    code, _, err = run(capsys, "resonate", "--rs", "1,1", "--M", "1", "--T", "4", "--out", str(tmp_path))
    assert code == 3 and json.loads(err)["error"] == "DEGENERATE"


def test_resonate_budget(tmp_path, capsys):
    rs = ",".join(str(1 + 0.1 * j) for j in range(9))
    code, _, err = run(capsys, "resonate", "--rs", rs, "--M", "1", "--T", "10", "--out", str(tmp_path))
    assert json.loads(err)["error"] == "BUDGET_EXCEEDED" and code == 3


def test_error_series_outputs(tmp_path, capsys):
    code, out, _ = run(capsys, "error-series", "--grid", "10,20,40", "--out", str(tmp_path))
    assert code == 0 and out.startswith("X,N,M,E")
    doc = json.loads((tmp_path / "error_series.json").read_text())
    assert doc["kind"] == "error_series" and "slope_log_abs_E_vs_log_X" in doc["fitted_constants"]


def test_meanvalue(tmp_path, capsys):
    code, _, _ = run(capsys, "meanvalue", "--X", "20,40", "--samples", "32", "--out", str(tmp_path))
    doc = json.loads((tmp_path / "mean_value.json").read_text())
    assert code == 0 and doc["verdict"] in ("pass", "fail")


def test_synth_and_omega(tmp_path, capsys):
    sp = tmp_path / "sp.txt"
    code, out, _ = run(capsys, "synth-spectrum", "--len-l", "3.0571418389619964", "--t-max", "40",
                       "--seed", "3", "--output", str(sp))
    assert code == 0 and sp.exists()
    code, out, _ = run(capsys, "omega", "--spectrum", str(sp), "--schedule", "0.2", "--random", "4",
                       "--threads", "1", "--out", str(tmp_path))
    assert code == 0 and "verdict:" in out
    doc = json.loads((tmp_path / "omega.json").read_text())
    assert doc["inputs"]["spectrum_seed"] is None  # loaded from a file


def test_specfun_check(tmp_path, capsys):
    code, out, _ = run(capsys, "specfun-check", "--out", str(tmp_path))
    assert code == 0 and "FAIL" not in out and "pinned:" in out
    doc = json.loads((tmp_path / "specfun_check.json").read_text())
    assert all(c["ok"] for c in doc["checks"])


def test_reports_are_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        run(capsys, "count", "--X", "10", "--out", str(d))
    assert (a / "count.csv").read_bytes() == (b / "count.csv").read_bytes()


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "hypcount", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "hypcount" in proc.stdout


@pytest.mark.parametrize("argv", [["count"], ["resonate", "--rs", "1"], ["synth-spectrum", "--len-l", "1"]])
def test_required_arguments(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 1
