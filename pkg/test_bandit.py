"""Tests for bandit instances, reward draws, iota and the regret ledger."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bandit import (
    DETERMINISTIC,
    ConfidenceParams,
    RegretLedger,
    gap_means,
    iota,
    make_instance,
    reward_from_draw,
    rewards_from_draws,
    sample_reward,
)


def test_gap_shorthand_expands_to_one_optimal_action():
    means = gap_means(5, 0.2)
    assert means == pytest.approx([0.6, 0.4, 0.4, 0.4, 0.4])
    inst = make_instance(means)
    assert inst.optimal_action == 0
    assert inst.gaps == pytest.approx([0.0, 0.2, 0.2, 0.2, 0.2])
    assert inst.max_gap == pytest.approx(0.2)


def test_gap_of_one_stays_in_unit_interval():
    assert gap_means(3, 1.0) == pytest.approx([1.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        gap_means(3, 1.5)


@pytest.mark.parametrize("means", [[0.5], [0.2, 1.2], [-0.1, 0.3]])
def test_make_instance_rejects_bad_means(means):
    with pytest.raises(ValueError):
        make_instance(means)


def test_make_instance_rejects_unknown_kind():
    with pytest.raises(ValueError):
        make_instance([0.1, 0.2], kind="gaussian")


def test_iota_values():
    assert iota(1, 1, 1) == pytest.approx(math.log(3))
    assert iota(4, 1000, 5) == pytest.approx(math.log(60000))
    with pytest.raises(ValueError):
        iota(0, 10, 2)


def test_confidence_params_carry_the_log_factor():
    params = ConfidenceParams(m=4, T=1000, A=5)
    assert params.iota == pytest.approx(math.log(60000))
    with pytest.raises(ValueError):
        ConfidenceParams(m=4, T=0, A=5).iota


def test_bernoulli_reward_thresholds_on_the_draw():
    inst = make_instance([0.6, 0.4])
    assert reward_from_draw(inst, 0, 0.3) == 1.0
    assert reward_from_draw(inst, 0, 0.7) == 0.0
    assert reward_from_draw(inst, 1, 0.4) == 0.0


def test_deterministic_reward_is_the_mean():
    inst = make_instance([0.75, 0.25], kind=DETERMINISTIC)
    rng = np.random.default_rng(1)
    assert sample_reward(inst, 0, rng) == 0.75
    assert sample_reward(inst, 1, rng) == 0.25


def test_sample_reward_rejects_out_of_range_action():
    inst = make_instance([0.5, 0.5])
    with pytest.raises(ValueError):
        sample_reward(inst, 2, np.random.default_rng(0))


def test_vectorized_rewards_match_scalar_rewards():
    inst = make_instance([0.9, 0.5, 0.1])
    actions = np.array([0, 1, 2, 1])
    u = np.array([0.2, 0.6, 0.05, 0.4])
    expected = [reward_from_draw(inst, int(a), float(x)) for a, x in zip(actions, u)]
    assert rewards_from_draws(inst, actions, u).tolist() == expected


def test_ledger_adds_true_gaps():
    inst = make_instance([0.8, 0.5, 0.2])
    ledger = RegretLedger.for_agents(inst, m=2, keep_history=True)
    ledger.record([0, 1])
    ledger.record([2, 2])
    assert ledger.totals == pytest.approx([0.6, 0.9])
    assert ledger.curve().shape == (2, 2)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(0, 3), min_size=3, max_size=3), min_size=1, max_size=30))
def test_ledger_curve_is_nondecreasing(rounds):
    inst = make_instance([0.9, 0.6, 0.3, 0.1])
    ledger = RegretLedger.for_agents(inst, m=3, keep_history=True)
    for actions in rounds:
        ledger.record(actions)
    curve = ledger.curve()
    assert (np.diff(curve, axis=0) >= 0).all()
