"""
Full-size acceptance experiments. Deselected by default; run with

    pytest -m slow
"""

import numpy as np
import pytest

from checkers import check_good_events, check_sample_bound, check_sync
from experiments_config import get_experiment, lower_bound_instance
from graph import run_verify
from models import ExperimentSpec
from simulator import build_graph, resolve_instance, run, run_iota
from sweep import sweep

pytestmark = pytest.mark.slow


@pytest.mark.parametrize("preset", ["lockstep", "equivalence", "lowcomm-delay", "fast-oracle"])
def test_deterministic_suites_report_zero(preset):
    spec = get_experiment(preset)
    for config in spec.expand():
        result = run_verify(config)
        assert result["passed"], result["deterministic"]


def test_regret_drops_with_more_agents():
    table = sweep(get_experiment("regret-sweep").expand(), parallelism=4)
    regret = table.set_index("m")["mean_max_regret"]
    assert list(regret.index) == [1, 4, 16, 64]
    assert regret.is_monotonic_decreasing and regret.is_unique
    assert regret[16] <= 0.5 * regret[1]


def test_line_regret_does_not_depend_on_the_diameter():
    spec = get_experiment("diameter-compare")
    table = sweep(spec.expand(), parallelism=2).set_index("topology")
    single = ExperimentSpec(name="single-run", config=spec.config.model_copy(update={"fast_path": False}),
                            policies=["single-se"], m_values=[1])
    baseline = sweep(single.expand())
    assert table.loc["line", "mean_middle_regret"] <= 3 * table.loc["complete", "mean_regret"]
    assert table.loc["line", "mean_middle_regret"] <= 0.7 * baseline.loc[0, "mean_max_regret"]


def test_lower_bound_floor_is_reached():
    config, floor = lower_bound_instance(441, T=60, seeds=200)
    middle = [run(config, seed)[0].middle_regret for seed in config.seeds]
    assert np.mean(middle) >= 0.9 * floor


def test_confidence_intervals_cover_the_means():
    config = get_experiment("good-events").config.model_copy(update={"capture_trace": True})
    iota_value = run_iota(config, config.m)
    g1 = g23 = 0
    for seed in config.seeds:
        _, trace = run(config, seed)
        counts = check_good_events(trace, resolve_instance(config, seed), iota_value)
        g1 += counts["g1"]
        g23 += counts["g2"] + counts["g3"]
    assert g1 <= 2
    assert g23 <= 2


def test_neighbours_synchronize_on_a_line():
    config = get_experiment("sync").config.model_copy(update={"capture_trace": True})
    g = build_graph(config)
    iota_value = run_iota(config, config.m)
    violations = 0
    for seed in config.seeds:
        _, trace = run(config, seed, graph=g)
        violations += check_sync(trace, g) + check_sample_bound(trace, g, 0, iota_value)
    assert violations <= 1
