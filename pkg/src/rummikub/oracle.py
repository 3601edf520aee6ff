"""Exhaustive reference solver, sharing only the tile-set types with the DP.

The lowest remaining tile (in suit, value order) is either left unused or
placed in some set that contains it, built from remaining tiles and jokers.
Results are cached on the remaining multiset.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from .tileset import SET_SIZE, Problem


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_tiles: int = 16
    max_nodes: int = 2_000_000

    def __post_init__(self):
        if self.max_tiles <= 0 or self.max_nodes <= 0:
            raise ValueError("oracle budget must be positive")


def oracle_max_score(problem: Problem, budget: OracleBudget | None = None) -> int | None:
    """Best score by exhaustive search, or None if the table cannot all be placed."""
    budget = budget or OracleBudget()
    total = problem.hand.size() + problem.table.size()
    if total > budget.max_tiles:
        raise BudgetExceeded(f"{total} tiles exceed the oracle budget of {budget.max_tiles}")

    p = problem.params
    n, k = p.n, p.k
    combined = problem.combined
    nodes = 0

    def idx(value: int, suit: int) -> int:
        return suit * n + (value - 1)  # suit 0-based

    def joker_only_ok(left: int, demand: int) -> bool:
        return demand == 0 or (max(n, k) >= SET_SIZE and left >= max(demand, SET_SIZE))

    def sets_with(first: int, rem: tuple[int, ...], jokers: int):
        """Yield (positions used as real tile indices, jokers used, score) for sets holding ``first``."""
        suit, value = divmod(first, n)
        value += 1
        # runs of this suit covering ``value``
        for lo in range(max(1, value - n), value + 1):
            for hi in range(max(value, lo + SET_SIZE - 1), n + 1):
                others = [v for v in range(lo, hi + 1) if v != value]
                choices = []
                for v in others:
                    opts = [None]  # joker
                    if rem[idx(v, suit)] > 0:
                        opts.append(idx(v, suit))
                    choices.append(opts)
                for pick in product(*choices):
                    z = sum(1 for x in pick if x is None)
                    if z > jokers:
                        continue
                    reals = [first] + [x for x in pick if x is not None]
                    yield reals, z, sum(x % n + 1 for x in reals)
        # groups at this value containing ``suit``
        partners = [s for s in range(k) if s != suit and rem[idx(value, s)] > 0]
        for size in range(0, len(partners) + 1):
            for chosen in combinations(partners, size):
                for z in range(0, jokers + 1):
                    if SET_SIZE <= 1 + size + z <= k:
                        reals = [first] + [idx(value, s) for s in chosen]
                        yield reals, z, value * len(reals)

    @lru_cache(maxsize=None)
    def search(rem: tuple[int, ...], mand: tuple[int, ...], jokers: int, demand: int):
        nonlocal nodes
        nodes += 1
        if nodes > budget.max_nodes:
            raise BudgetExceeded(f"oracle search exceeded {budget.max_nodes} nodes")
        first = next((i for i, c in enumerate(rem) if c), None)
        if first is None:
            return 0 if joker_only_ok(jokers, demand) else None
        best = None
        # leave one free copy unused
        if rem[first] > mand[first]:
            r = list(rem)
            r[first] -= 1
            best = search(tuple(r), mand, jokers, demand)
        for reals, z, score in sets_with(first, rem, jokers):
            r, mm = list(rem), list(mand)
            for i in reals:
                r[i] -= 1
                # table copies are consumed first; a free copy is never worse to keep
                if mm[i]:
                    mm[i] -= 1
            sub = search(tuple(r), tuple(mm), jokers - z, max(0, demand - z))
            if sub is not None and (best is None or sub + score > best):
                best = sub + score
        return best

    rem = tuple(combined.counts[s][v - 1] for s in range(k) for v in range(1, n + 1))
    mand = tuple(problem.table.counts[s][v - 1] for s in range(k) for v in range(1, n + 1))
    return search(rem, mand, problem.jokers, problem.table.jokers)
