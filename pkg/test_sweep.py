"""Tests for sweep aggregation and the CSV/JSON artifacts."""

import json

import pandas as pd
import pytest

from checkers import trace_verdicts
from models import ExperimentSpec, InstanceSpec, SimConfig, TopologySpec
from simulator import build_graph, run
from sweep import RUN_COLUMNS, SWEEP_COLUMNS, aggregate, run_cell, run_frame, sweep, write_run, write_sweep


def base_config(**kw):
    fields = dict(instance=InstanceSpec(A=3, gap=0.3), topology=TopologySpec(name="complete", m=1),
                  T=60, seeds=[0, 1], fast_path=True)
    fields.update(kw)
    return SimConfig(**fields)


def test_one_row_per_m():
    spec = ExperimentSpec(name="regret-sweep", config=base_config(), m_values=[1, 4, 16])
    table = sweep(spec.expand())
    assert list(table.columns) == SWEEP_COLUMNS
    assert table["m"].tolist() == [1, 4, 16]
    assert (table["seed_count"] == 2).all()
    assert (table["error"] == "").all()
    assert (table["mean_max_regret"] >= 0).all()


def test_empty_seed_list_gives_an_empty_table():
    table = sweep([base_config(seeds=[])])
    assert table.empty
    assert list(table.columns) == SWEEP_COLUMNS


def test_failing_cell_does_not_abort_the_sweep():
    bad = SimConfig(policy="sus-act", instance=InstanceSpec(A=3, gap=0.3),
                    topology=TopologySpec(name="random-connected", m=20, p=0.1), T=1, seeds=[0])
    table = sweep([bad, base_config()])
    assert len(table) == 2
    assert "ConfigError" in table.loc[0, "error"]
    assert table.loc[1, "error"] == ""


def test_parallel_sweep_matches_serial():
    cells = ExperimentSpec(name="regret-sweep", config=base_config(), m_values=[1, 4]).expand()
    pd.testing.assert_frame_equal(sweep(cells, parallelism=1), sweep(cells, parallelism=2))


def test_aggregate_standard_error():
    config = base_config(seeds=[0, 1, 2])
    results = [run(config, s)[0] for s in config.seeds]
    row = aggregate(config, results)
    values = pd.Series([mt.max_regret for mt in results])
    assert row["mean_max_regret"] == pytest.approx(values.mean())
    assert row["stderr"] == pytest.approx(values.std(ddof=1) / len(values) ** 0.5)
    assert row["seed_count"] == 3


def test_run_frame_layout():
    metrics, _ = run(base_config(topology=TopologySpec(name="line", m=3), fast_path=False))
    frame = run_frame(metrics)
    assert list(frame.columns) == RUN_COLUMNS
    assert len(frame) == 60 * 3
    assert frame.loc[0:2, "round"].tolist() == [1, 1, 1]
    assert frame.loc[0:2, "agent"].tolist() == [0, 1, 2]
    assert (frame["msg_bits_total"] > 0).all()


def test_written_artifacts_are_reproducible(tmp_path):
    config = base_config(topology=TopologySpec(name="star", m=4), fast_path=False)
    first = write_run(run(config)[0], tmp_path / "a")
    second = write_run(run(config)[0], tmp_path / "b")
    assert first.read_bytes() == second.read_bytes()
    summary = json.loads((tmp_path / "a" / f"{first.stem}_summary.json").read_text())
    assert summary["policy"] == "coop-se"
    assert len(summary["final_regret"]) == 4


def test_sweep_json_mirrors_csv(tmp_path):
    table = sweep([base_config()])
    path = write_sweep(table, tmp_path)
    records = json.loads((tmp_path / "sweep.json").read_text())
    assert pd.read_csv(path).columns.tolist() == SWEEP_COLUMNS
    assert set(records[0]) == set(SWEEP_COLUMNS)


def test_traced_cells_count_checker_verdicts(monkeypatch):
    monkeypatch.setattr("checkers.check_stage_structure", lambda trace: 1)
    traced = base_config(topology=TopologySpec(name="line", m=3), fast_path=False, capture_trace=True)
    untraced = traced.model_copy(update={"capture_trace": False})
    table = sweep([traced, untraced])
    assert table["checker_violations"].tolist() == [2, 0]
    assert (table["error"] == "").all()


@pytest.mark.parametrize("policy,extra", [("coop-se", "get_info"), ("sus-act", "lockstep")])
def test_clean_traced_cell_has_zero_violations(policy, extra):
    config = base_config(policy=policy, topology=TopologySpec(name="cycle", m=4), fast_path=False,
                         capture_trace=True, T=80)
    row = run_cell(config)
    assert row["error"] == ""
    assert row["checker_violations"] == 0
    metrics, trace = run(config)
    verdicts = trace_verdicts(metrics, trace, config, build_graph(config))
    assert set(verdicts) == {"stage_structure", "message_bounds", extra}
    assert metrics.verdicts == verdicts
