from itertools import product
from math import comb

import pytest

from rummikub.groups import (GroupUsageQuery, choose_usage, count_group_formations, deal_groups,
                             max_group_tiles)
from rummikub.tileset import TileSetParams


def test_formation_counts():
    assert count_group_formations(4) == 6
    assert count_group_formations(3) == 2
    assert count_group_formations(5) == 17
    assert count_group_formations(2) == 1
    for k in range(3, 9):
        assert count_group_formations(k) == 1 + sum(comb(k, i) for i in range(3, k + 1))


P = TileSetParams(13, 4, 2, 2)


@pytest.mark.parametrize("avail, mand, jokers, spend, expected", [
    ((1, 1, 1, 0), (0, 0, 0, 0), 0, 0, 3),
    ((2, 2, 2, 2), (0, 0, 0, 0), 0, 0, 8),
    ((2, 1, 1, 0), (0, 0, 0, 0), 0, 0, 3),
    ((1, 1, 0, 0), (1, 0, 0, 0), 0, 0, None),
    ((1, 1, 0, 0), (0, 0, 0, 0), 1, 1, 2),
    ((0, 0, 0, 0), (0, 0, 0, 0), 0, 0, 0),
])
def test_examples(avail, mand, jokers, spend, expected):
    q = GroupUsageQuery(avail, mand, jokers)
    for brute in (False, True):
        assert max_group_tiles(q, P, brute_force=brute).per_spend[spend] == expected


def test_two_jokers_fill_one_group():
    q = GroupUsageQuery.free((1, 0, 0, 0), jokers=2)
    # one joker alone cannot complete a group
    assert max_group_tiles(q, P).per_spend == (0, None, 1)


def test_query_rejects_oversupply():
    with pytest.raises(ValueError):
        max_group_tiles(GroupUsageQuery((2, 0, 0, 0), (1, 0, 0, 0)), P)


def test_closed_form_matches_brute_force_sweep():
    checked = 0
    for k in range(1, 6):
        for m in range(1, 4):
            for avail in product(range(m + 1), repeat=k):
                for jokers in range(3):
                    q = GroupUsageQuery.free(avail, jokers)
                    assert max_group_tiles(q) == max_group_tiles(q, brute_force=True), q
                    checked += 1
    assert checked > 4000


def test_closed_form_matches_brute_force_with_table_tiles():
    for k in range(1, 5):
        for m in (1, 2):
            for split in product(range(m + 1), repeat=k):
                for mand in product(*(range(m - a + 1) for a in split)):
                    for jokers in range(3):
                        q = GroupUsageQuery(split, mand, jokers)
                        assert max_group_tiles(q) == max_group_tiles(q, brute_force=True), q


def test_monotone_and_symmetric():
    for avail in product(range(3), repeat=4):
        base = max_group_tiles(GroupUsageQuery.free(avail, 1)).per_spend
        rotated = max_group_tiles(GroupUsageQuery.free(avail[1:] + avail[:1], 1)).per_spend
        assert base == rotated
        for i in range(4):
            if avail[i] < 2:
                bigger = list(avail)
                bigger[i] += 1
                more = max_group_tiles(GroupUsageQuery.free(bigger, 1)).per_spend
                for a, b in zip(base, more):
                    if a is not None:
                        assert b is not None and b >= a


def test_dealt_groups_are_valid():
    for avail in product(range(3), repeat=4):
        for spend in range(3):
            target = max_group_tiles(GroupUsageQuery.free(avail, spend)).per_spend[spend]
            if target is None:
                continue
            usage, g = choose_usage(avail, (0,) * 4, spend, target)
            groups = deal_groups(usage, spend, g)
            assert sum(len(s) for s, _ in groups) == target
            assert sum(z for _, z in groups) == spend
            for suits, z in groups:
                assert len(set(suits)) == len(suits)
                assert 3 <= len(suits) + z <= 4
