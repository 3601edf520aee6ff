"""Group formation at a single tile value.

A group is at least three members with pairwise distinct suits; jokers fill
member slots without a suit of their own, so a group never exceeds ``k``
members.  ``max_group_tiles`` answers: for each number of jokers spent, how
many real tiles (all mandatory ones included) can be placed in groups?
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Sequence

from .tileset import SET_SIZE, TileSetParams


def count_group_formations(k: int) -> int:
    """Ways to form groups among ``k`` suits with a single copy of each tile."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return 1 + sum(comb(k, i) for i in range(SET_SIZE, k + 1))


@dataclass(frozen=True)
class GroupUsageQuery:
    avail: tuple[int, ...]
    mandatory: tuple[int, ...]
    jokers: int = 0

    def __post_init__(self):
        object.__setattr__(self, "avail", tuple(self.avail))
        object.__setattr__(self, "mandatory", tuple(self.mandatory))
        if len(self.avail) != len(self.mandatory):
            raise ValueError("avail and mandatory must have one entry per suit")
        if min(self.avail + self.mandatory, default=0) < 0 or self.jokers < 0:
            raise ValueError("negative counts in group query")

    @classmethod
    def free(cls, avail: Sequence[int], jokers: int = 0) -> GroupUsageQuery:
        return cls(tuple(avail), (0,) * len(avail), jokers)

    def check(self, params: TileSetParams) -> None:
        if len(self.avail) != params.k:
            raise ValueError(f"query has {len(self.avail)} suits, expected {params.k}")
        for a, b in zip(self.avail, self.mandatory):
            if a + b > params.m:
                raise ValueError(f"per-suit supply {a + b} exceeds m={params.m}")


@dataclass(frozen=True)
class GroupUsageResult:
    """``per_spend[s]`` is the most real tiles usable with exactly ``s`` jokers, or None."""
    per_spend: tuple[int | None, ...]

    def best(self) -> int | None:
        feasible = [u for u in self.per_spend if u is not None]
        return max(feasible) if feasible else None


def max_group_tiles(query: GroupUsageQuery, params: TileSetParams | None = None,
                    brute_force: bool = False) -> GroupUsageResult:
    if params is not None:
        query.check(params)
    fn = _brute_force if brute_force else _closed_form
    return GroupUsageResult(fn(query.avail, query.mandatory, query.jokers))


@lru_cache(maxsize=None)
def _closed_form(avail: tuple[int, ...], mand: tuple[int, ...], jokers: int) -> tuple:
    # With g groups, usage u_i <= g per suit and 3g <= sum(u) + spend <= k*g is
    # both necessary and sufficient (deal members round-robin over the groups).
    k = len(avail)
    caps = [a + b for a, b in zip(avail, mand)]
    need = sum(mand)
    top_mand = max(mand, default=0)
    out = []
    for spend in range(jokers + 1):
        best = None
        for g in range(top_mand, (sum(caps) + spend) // SET_SIZE + 1):
            lo = max(need, SET_SIZE * g - spend)
            hi = min(sum(min(c, g) for c in caps), k * g - spend)
            if lo <= hi and (best is None or hi > best):
                best = hi
        out.append(best)
    return tuple(out)


def _group_types(k: int, jokers: int) -> list[tuple[tuple[int, ...], int]]:
    types = []
    for size in range(0, k + 1):
        for suits in combinations(range(k), size):
            for z in range(0, jokers + 1):
                if SET_SIZE <= size + z <= k:
                    types.append((suits, z))
    return types


@lru_cache(maxsize=None)
def _brute_force(avail: tuple[int, ...], mand: tuple[int, ...], jokers: int) -> tuple:
    """Exhaustive search over multisets of groups."""
    k = len(avail)
    types = _group_types(k, jokers)

    @lru_cache(maxsize=None)
    def search(idx: int, caps: tuple[int, ...], jleft: int) -> dict[int, int]:
        # maps jokers spent -> most real tiles, over multisets of types[idx:]
        if idx == len(types):
            return {0: 0}
        result = dict(search(idx + 1, caps, jleft))
        suits, z = types[idx]
        if z <= jleft and all(caps[s] > 0 for s in suits):
            left = list(caps)
            for s in suits:
                left[s] -= 1
            for spent, used in search(idx, tuple(left), jleft - z).items():
                key, val = spent + z, used + len(suits)
                if result.get(key, -1) < val:
                    result[key] = val
        return result

    # mandatory tiles must all be used: enumerate over usage vectors by
    # searching with caps and then checking the lower bound per suit
    @lru_cache(maxsize=None)
    def usages(idx: int, caps: tuple[int, ...], jleft: int) -> frozenset:
        if idx == len(types):
            return frozenset({(caps, jleft)})
        out = set(usages(idx + 1, caps, jleft))
        suits, z = types[idx]
        if z <= jleft and all(caps[s] > 0 for s in suits):
            left = list(caps)
            for s in suits:
                left[s] -= 1
            out |= usages(idx, tuple(left), jleft - z)
        return frozenset(out)

    caps = tuple(a + b for a, b in zip(avail, mand))
    per_spend: list[int | None] = [None] * (jokers + 1)
    if not any(mand):
        for spent, used in search(0, caps, jokers).items():
            per_spend[spent] = used
        return tuple(per_spend)
    for left, jleft in usages(0, caps, jokers):
        used = [c - r for c, r in zip(caps, left)]
        if all(u >= b for u, b in zip(used, mand)):
            spent, total = jokers - jleft, sum(used)
            if per_spend[spent] is None or per_spend[spent] < total:
                per_spend[spent] = total
    return tuple(per_spend)


def choose_usage(avail: Sequence[int], mand: Sequence[int], spend: int,
                 target: int) -> tuple[tuple[int, ...], int] | None:
    """Pick per-suit usage summing to ``target`` that groups with ``spend`` jokers.

    Returns ``(usage, group_count)``, or None if impossible.
    """
    k = len(avail)
    caps = [a + b for a, b in zip(avail, mand)]
    for g in range(max(mand, default=0), (sum(caps) + spend) // SET_SIZE + 1):
        if not SET_SIZE * g <= target + spend <= k * g:
            continue
        lo = list(mand)
        hi = [min(c, g) for c in caps]
        if not sum(lo) <= target <= sum(hi):
            continue
        usage, extra = lo[:], target - sum(lo)
        for i in range(k):
            add = min(extra, hi[i] - usage[i])
            usage[i] += add
            extra -= add
        return tuple(usage), g
    return None


def deal_groups(usage: Sequence[int], spend: int, g: int) -> list[tuple[tuple[int, ...], int]]:
    """Deal suit copies then jokers round-robin into ``g`` groups.

    Suits are 0-based here; returns ``(suits, jokers)`` per group.
    """
    if g == 0:
        return []
    members: list[list[int]] = [[] for _ in range(g)]
    jokers = [0] * g
    pos = 0
    for suit, u in enumerate(usage):
        for _ in range(u):
            members[pos % g].append(suit)
            pos += 1
    for _ in range(spend):
        jokers[pos % g] += 1
        pos += 1
    return [(tuple(sorted(ms)), z) for ms, z in zip(members, jokers)]
