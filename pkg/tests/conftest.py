import random

import pytest

from rummikub.tileset import Hand, Problem, TileSetParams, parse_problem

SAMPLE = "params n=13 k=4 m=2 j=0\nhand 3:2 3:1 3:3 6:1 7:1 8:1 9:1\n"


def random_problem(rng: random.Random, n=(3, 7), k=(1, 4), m=(1, 2), j=(0, 2),
                   size=(0, 10), table_share=0.3) -> Problem:
    """A random small problem; tiles land on the table with probability ``table_share``."""
    params = TileSetParams(rng.randint(*n), rng.randint(*k), rng.randint(*m), rng.randint(*j))
    hand = [[0] * params.n for _ in range(params.k)]
    table = [[0] * params.n for _ in range(params.k)]
    for _ in range(rng.randint(*size)):
        v, s = rng.randrange(params.n), rng.randrange(params.k)
        if hand[s][v] + table[s][v] < params.m:
            (table if rng.random() < table_share else hand)[s][v] += 1
    hj = rng.randint(0, params.j)
    tj = rng.randint(0, params.j - hj) if rng.random() < table_share else 0
    return Problem(params, Hand(tuple(map(tuple, hand)), hj), Hand(tuple(map(tuple, table)), tj))


def random_hand(rng: random.Random, params: TileSetParams, size: int) -> Hand:
    grid = [[0] * params.n for _ in range(params.k)]
    placed = 0
    while placed < size:
        v, s = rng.randrange(params.n), rng.randrange(params.k)
        if grid[s][v] < params.m:
            grid[s][v] += 1
            placed += 1
    return Hand(tuple(map(tuple, grid)))


@pytest.fixture
def sample() -> Problem:
    return parse_problem(SAMPLE)
