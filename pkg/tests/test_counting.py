import io
import random
from fractions import Fraction
from itertools import product

import pytest

from rummikub.counting import (CountRow, MemoryBudgetExceeded, catalog_sets, count_winning_hands,
                               format_ratio, partitions_into_345, total_hands, winning_counts,
                               winning_table, write_csv)
from rummikub.solver import is_fully_playable
from rummikub.tileset import Hand, TileSetParams

ORIGINAL = TileSetParams(13, 4, 2, 0)


def test_total_hands():
    assert total_hands(ORIGINAL, 14) == 37_418_772_170_780
    assert total_hands(ORIGINAL, 26) == 17_862_050_779_716_207_204
    assert total_hands(TileSetParams(2, 2, 1, 0), 2) == 6
    for params in (TileSetParams(3, 2, 2, 0), ORIGINAL):
        assert sum(total_hands(params, t) for t in range(params.total_tiles + 1)) == \
            (params.m + 1) ** params.tile_types
    with pytest.raises(ValueError):
        total_hands(ORIGINAL, 105)


def test_partitions():
    assert partitions_into_345(3) == [(3,)]
    assert partitions_into_345(14) == [(3, 3, 3, 5), (3, 3, 4, 4), (4, 5, 5)]
    assert partitions_into_345(1) == partitions_into_345(2) == []
    assert all(partitions_into_345(t) for t in range(3, 121))
    # beyond that, existence only: t is a sum of 3s, 4s and 5s for every t >= 3
    reachable = {0}
    for t in range(1, 1001):
        if any(t - p in reachable for p in (3, 4, 5)):
            reachable.add(t)
    assert set(range(3, 1001)) <= reachable
    for t in (10, 17, 23):
        parts = partitions_into_345(t)
        assert parts == sorted(parts) and len(set(parts)) == len(parts)
        assert all(sum(p) == t and list(p) == sorted(p) for p in parts)


def test_catalog():
    sets = catalog_sets(TileSetParams(13, 4, 2, 0))
    assert sum(c.kind == "RUN" for c in sets) == 120
    assert sum(c.kind == "GROUP" for c in sets) == 65
    small = catalog_sets(TileSetParams(3, 3, 1, 0))
    assert [c.kind for c in small] == ["RUN"] * 3 + ["GROUP"] * 3
    assert any(c.size == 5 for c in catalog_sets(TileSetParams(5, 5, 1, 0)) if c.kind == "GROUP")
    for c in sets:
        assert all(1 <= v <= 13 and 1 <= s <= 4 for v, s in c.tiles())


def all_hands(params: TileSetParams):
    for cells in product(range(params.m + 1), repeat=params.tile_types):
        yield Hand(tuple(cells[s * params.n:(s + 1) * params.n] for s in range(params.k)))


def test_small_universe_against_decision():
    params = TileSetParams(3, 3, 1, 0)
    by_size = [0] * (params.total_tiles + 1)
    for hand in all_hands(params):
        by_size[hand.size()] += is_fully_playable(hand, params)
    assert by_size[3] == 6
    assert [count_winning_hands(params, t) for t in range(10)] == by_size
    assert winning_counts(params) == by_size


def test_all_tiles_is_one_hand():
    for params in (TileSetParams(3, 3, 2, 0), TileSetParams(4, 3, 1, 0)):
        assert count_winning_hands(params, params.total_tiles) == 1


def test_order_and_shard_independence():
    params = TileSetParams(4, 3, 2, 0)
    rng = random.Random(1)
    order = list(range(len(catalog_sets(params))))
    for t in (6, 9, 12):
        base = count_winning_hands(params, t)
        rng.shuffle(order)
        assert count_winning_hands(params, t, order=order) == base
        assert count_winning_hands(params, t, shards=3) == base
        assert count_winning_hands(params, t, shards=2, threads=2) == base


def test_sweep_matches_partitions():
    params = TileSetParams(4, 4, 1, 0)
    assert winning_counts(params) == [count_winning_hands(params, t)
                                      for t in range(params.total_tiles + 1)]


def test_sweep_lower_bound_keeps_upper_sizes():
    params = TileSetParams(4, 3, 2, 0)
    full = winning_counts(params)
    assert winning_counts(params, t_min=15)[15:] == full[15:]


def test_memory_budget():
    params = TileSetParams(4, 3, 2, 0)
    with pytest.raises(MemoryBudgetExceeded) as info:
        winning_table(params, 3, 9, method="partition", max_keys=20)
    assert info.value.last_completed_t == 5


def test_ratio_format_and_rows():
    assert format_ratio(Fraction(6, 84)) == "7.14e-2"
    assert format_ratio(Fraction(1)) == "1.00e0"
    assert format_ratio(Fraction(10_232_524, 37_418_772_170_780)) == "2.73e-7"
    assert format_ratio(Fraction(0)) == "0.00e0"
    row = CountRow(3, 84, 6)
    assert row.ratio == Fraction(1, 14)
    assert 0 <= row.winning <= row.total
    out = io.StringIO()
    write_csv([CountRow(14, 37_418_772_170_780), row], out)
    assert out.getvalue() == "t,total,winning,ratio\n14,37418772170780,,\n3,84,6,7.14e-2\n"


def test_table_methods_agree():
    params = TileSetParams(3, 3, 2, 0)
    sweep = winning_table(params, 0, 18)
    assert sweep == winning_table(params, 0, 18, method="partition")
    assert [r.total for r in winning_table(params, 0, 18, method="totals")] == \
        [r.total for r in sweep]
    with pytest.raises(ValueError):
        winning_table(params, 5, 4)


def test_nearly_full_hands_always_win():
    # a full game hand missing up to four tiles can always be played out
    params = ORIGINAL
    rng = random.Random(9)
    full = [[2] * 13 for _ in range(4)]
    for _ in range(40):
        grid = [row[:] for row in full]
        for _ in range(rng.randint(1, 4)):
            s, v = rng.randrange(4), rng.randrange(13)
            while grid[s][v] == 0:
                s, v = rng.randrange(4), rng.randrange(13)
            grid[s][v] -= 1
        assert is_fully_playable(Hand(tuple(map(tuple, grid))), params)


def test_tail_needs_enough_suits():
    # with three suits, dropping two tiles can already leave an unplayable hand
    params = TileSetParams(4, 3, 2, 0)
    counts = winning_counts(params)
    t = params.total_tiles - 2
    assert counts[t] < total_hands(params, t)
