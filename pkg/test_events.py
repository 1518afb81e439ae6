"""Tests for event widths and deduplication."""

import pytest

from events import EventWidths, dedupe, elim, encode_size_bits, prune_keys, rwd, rwd_many


def test_widths_for_a_mid_sized_run():
    # header: 2 + ceil(log2 1025) + ceil(log2 16) + ceil(log2 8) = 2 + 11 + 4 + 3
    assert encode_size_bits(elim(5, 3, 2), 16, 1024, 8) == 20
    assert encode_size_bits(rwd(5, 3, 2, 1.0), 16, 1024, 8) == 21
    # count fields: ceil(log2(16 * 1024 + 1)) = 15 bits each
    assert encode_size_bits(rwd_many(5, 3, 2, 7.0, 9), 16, 1024, 8) == 50


def test_single_agent_has_no_id_bits():
    widths = EventWidths.for_run(1, 1, 2)
    assert widths.of(elim(1, 0, 1)) == 2 + 1 + 0 + 1


def test_budgets():
    widths = EventWidths.for_run(16, 1024, 8)
    assert widths.restricted_budget == 8 * 50
    assert widths.single_event_budget == 50
    assert widths.message_bits([elim(1, 0, 0), rwd(1, 0, 1, 0.0)]) == 41


def test_rwd_many_rejects_negative_counts():
    with pytest.raises(ValueError):
        rwd_many(1, 0, 0, 0.0, -1)


def test_dedupe_ignores_the_reward_value():
    seen = set()
    fresh, _ = dedupe([rwd(1, 0, 2, 1.0), rwd(1, 0, 2, 0.0), elim(1, 0, 2)], seen)
    assert fresh == [rwd(1, 0, 2, 1.0), elim(1, 0, 2)]
    fresh, _ = dedupe([rwd(1, 0, 2, 1.0), rwd(2, 0, 2, 1.0)], seen)
    assert fresh == [rwd(2, 0, 2, 1.0)]


def test_prune_keys_drops_only_older_rounds():
    _, seen = dedupe([rwd(1, 0, 0, 1.0), elim(2, 1, 1), rwd(3, 2, 0, 0.0)], set())
    assert prune_keys(seen, 3) == 2
    assert seen == {rwd(3, 2, 0, 0.0).key}
