import random
from itertools import product

import pytest

from rummikub.oracle import BudgetExceeded, OracleBudget, oracle_max_score
from rummikub.solver import is_fully_playable, max_score
from rummikub.tileset import Hand, Problem, TileSetParams, hand_value

from conftest import random_problem

P = TileSetParams(13, 4, 2, 0)


def test_examples(sample):
    assert oracle_max_score(sample) == 39
    assert oracle_max_score(Problem(P, Hand.from_tiles(P, [(1, 1), (1, 2), (1, 3)]))) == 3
    clubs = [(v, 1) for v in range(6, 11)] + [(8, 1), (9, 1), (10, 1)]
    assert oracle_max_score(Problem(P, Hand.from_tiles(P, clubs))) == 67


def test_table_constraint():
    pr = Problem(P, Hand.from_tiles(P, [(6, 1), (7, 1)]), Hand.from_tiles(P, [(8, 1)]))
    assert oracle_max_score(pr) == 21
    assert oracle_max_score(Problem(P, Hand.empty(P), Hand.from_tiles(P, [(5, 1), (5, 2)]))) is None


def test_budget():
    big = Hand.from_tiles(P, [(v, 1) for v in range(1, 14)] + [(v, 2) for v in range(1, 6)])
    with pytest.raises(BudgetExceeded):
        oracle_max_score(Problem(P, big), OracleBudget(max_tiles=16))
    with pytest.raises(BudgetExceeded):
        oracle_max_score(Problem(P, big), OracleBudget(max_tiles=40, max_nodes=10))
    with pytest.raises(ValueError):
        OracleBudget(max_tiles=0)


def test_agrees_with_dp_including_jokers_and_table():
    rng = random.Random(3)
    for _ in range(400):
        pr = random_problem(rng)
        assert max_score(pr) == oracle_max_score(pr)


def sub_hands(hand: Hand):
    rows = [list(r) for r in hand.counts]
    cells = [(s, v) for s, r in enumerate(rows) for v, c in enumerate(r) if c]
    for picks in product(*(range(rows[s][v] + 1) for s, v in cells)):
        grid = [[0] * len(r) for r in rows]
        for (s, v), c in zip(cells, picks):
            grid[s][v] = c
        yield Hand(tuple(map(tuple, grid)))


def test_unused_value_is_minimal():
    rng = random.Random(5)
    for _ in range(60):
        pr = random_problem(rng, j=(0, 0), table_share=0.0, size=(0, 8))
        cheapest = min(hand_value(pr.hand) - hand_value(sub) for sub in sub_hands(pr.hand)
                       if is_fully_playable(sub, pr.params))
        assert hand_value(pr.hand) - oracle_max_score(pr) == cheapest
