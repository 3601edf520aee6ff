"""Decision form of the DP: can every tile be placed?  (joker- and table-free)

Every tile is effectively mandatory, so incomplete runs must be extended
and the state alphabet is the plain {0, 1, 2, 3+}.  A hand is swept value by
value, carrying the set of reachable joint states.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product

from .runstate import EMPTY, FULL, make_runs
from .tileset import SET_SIZE, Hand, TileSetParams


@lru_cache(maxsize=None)
def suit_options(state: tuple[int, ...], count: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """(next state, tiles left for groups) for one suit with ``count`` mandatory tiles."""
    out = set()
    for t in make_runs(state, 0, count, 0, SET_SIZE):
        # a complete run restarted is dominated by extending it
        if any(mv.action == "restart" for mv in t.moves):
            continue
        out.add((t.state, count - t.mand_used))
    return tuple(sorted(out))


def groupable(left: tuple[int, ...]) -> bool:
    """All leftover copies fit in groups: g = max copies groups, each >= 3 members."""
    total = sum(left)
    return total == 0 or SET_SIZE * max(left) <= total


@lru_cache(maxsize=None)
def step(runs: tuple[tuple[int, ...], ...], column: tuple[int, ...]) -> frozenset:
    """Joint states reachable from ``runs`` by placing all tiles of ``column``."""
    options = [suit_options(state, c) for state, c in zip(runs, column)]
    out = set()
    for combo in product(*options):
        if groupable(tuple(left for _, left in combo)):
            out.add(tuple(state for state, _ in combo))
    return frozenset(out)


def accepting(runs: tuple[tuple[int, ...], ...]) -> bool:
    return all(s in (EMPTY, FULL) for state in runs for s in state)


def start(params: TileSetParams) -> tuple[tuple[int, ...], ...]:
    return ((EMPTY,) * params.m,) * params.k


def playable(hand: Hand, params: TileSetParams) -> bool:
    if hand.jokers:
        raise ValueError("decision sweep does not handle jokers")
    frontier = {start(params)}
    for value in range(1, params.n + 1):
        column = hand.column(value)
        nxt = set()
        for runs in frontier:
            nxt |= step(runs, column)
        if not nxt:
            return False
        frontier = nxt
    return any(accepting(r) for r in frontier)
