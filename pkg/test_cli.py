"""Tests for the command-line front end."""

import json

import pandas as pd
import pytest

from config import EXIT_CHECK_FAILED, EXIT_CONFIG_ERROR, EXIT_OK
from main import main


def test_run_writes_per_run_csv(tmp_path):
    code = main(["run", "--policy", "sus-act", "--topology", "cycle", "--m", "20", "--A", "5",
                 "--T", "100", "--out", str(tmp_path)])
    assert code == EXIT_OK
    frame = pd.read_csv(tmp_path / "run_sus-act_cycle_m20_seed0.csv")
    assert frame.columns.tolist() == ["round", "agent", "action", "regret_cum", "msg_bits_total"]
    assert len(frame) == 100 * 20


def test_identical_command_lines_give_identical_bytes(tmp_path):
    args = ["run", "--topology", "star", "--m", "5", "--T", "80", "--gap", "0.2", "--master-seed", "7"]
    assert main(args + ["--out", str(tmp_path / "a")]) == EXIT_OK
    assert main(args + ["--out", str(tmp_path / "b")]) == EXIT_OK
    name = "run_coop-se_star_m5_seed0.csv"
    assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.parametrize("args", [
    ["run", "--policy", "sus-act", "--fast"],
    ["run", "--bogus-flag"],
    ["run", "--means", "0.5,1.5"],
    ["run", "--topology", "grid", "--m", "8"],
    ["run", "--m", "1,4"],
    ["lower-bound", "--A", "400"],
    ["run", "--preset", "no-such-preset"],
])
def test_config_errors_exit_1(tmp_path, args):
    assert main(args + ["--out", str(tmp_path)]) == EXIT_CONFIG_ERROR


def test_sweep_writes_one_row_per_m(tmp_path):
    code = main(["sweep", "--topology", "complete", "--A", "3", "--T", "50", "--m", "1,2,4",
                 "--seeds", "2", "--fast", "--out", str(tmp_path)])
    assert code == EXIT_OK
    table = pd.read_csv(tmp_path / "sweep.csv")
    assert table["m"].tolist() == [1, 2, 4]
    assert (table["seed_count"] == 2).all()


def test_verify_covers_every_policy(tmp_path):
    code = main(["verify", "--topology", "path", "--m", "3", "--A", "3", "--T", "100",
                 "--seeds", "2", "--out", str(tmp_path)])
    assert code == EXIT_OK
    reports = sorted(p.name for p in tmp_path.glob("verify_*.json"))
    assert len(reports) == 5
    low = json.loads((tmp_path / "verify_low-comm_path_m3.json").read_text())
    assert low["passed"] is True
    assert low["deterministic"]["delay_lowcomm"] == 0


def test_lower_bound_reports_the_floor(tmp_path):
    code = main(["lower-bound", "--A", "441", "--T", "12", "--seeds", "10", "--out", str(tmp_path)])
    assert code == EXIT_OK
    summary = json.loads((tmp_path / "lower_bound_summary.json").read_text())
    assert summary["floor"] == pytest.approx(0.0495)
    assert summary["mean_middle_regret"] >= summary["threshold"]


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.env"
    cfg.write_text("policy=restricted\ntopology=star\nm=4\nT=40\nA=3\n")
    code = main(["run", "--config", str(cfg), "--policy", "coop-se", "--out", str(tmp_path)])
    assert code == EXIT_OK
    assert (tmp_path / "run_coop-se_star_m4_seed0.csv").exists()
    summary = json.loads((tmp_path / "run_coop-se_star_m4_seed0_summary.json").read_text())
    assert summary["A"] == 3 and summary["T"] == 40


def test_run_with_trace_records_verdicts(tmp_path):
    code = main(["run", "--policy", "restricted", "--topology", "line", "--m", "4", "--T", "60",
                 "--trace", "--out", str(tmp_path)])
    assert code == EXIT_OK
    summary = json.loads((tmp_path / "run_restricted_line_m4_seed0_summary.json").read_text())
    assert summary["verdicts"] == {"stage_structure": 0, "message_bounds": 0}


def test_failed_checks_exit_2(monkeypatch, tmp_path):
    monkeypatch.setattr("checkers.check_stage_structure", lambda trace: 1)
    code = main(["run", "--topology", "line", "--m", "2", "--T", "10", "--trace", "--out", str(tmp_path)])
    assert code == EXIT_CHECK_FAILED
