"""Exact solver: value-by-value dynamic program over per-suit run slots.

The memoized engine handles table tiles and jokers and can reconstruct an
arrangement.  Joker- and table-free problems are routed to the dense
forward engine in :mod:`rummikub.dense` unless an engine is forced.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from itertools import product

from .groups import _closed_form, _brute_force, choose_usage, deal_groups
from .runstate import (EMPTY, FULL, JOKER, Transition, is_mandatory, is_pending,
                       joker_flags, make_runs, pending_value)
from .tileset import SET_SIZE, Hand, Problem, TileSetParams, hand_value

JOKER_PENALTY = 25


class Infeasible(Exception):
    """The table constraint (or forced joker use) cannot be satisfied."""


@dataclass(frozen=True)
class RunPlacement:
    suit: int
    start: int
    jokers: tuple[bool, ...]  # per position, True where a joker stands in

    @property
    def length(self) -> int:
        return len(self.jokers)

    @property
    def score(self) -> int:
        return sum(self.start + i for i, j in enumerate(self.jokers) if not j)

    def __str__(self) -> str:
        pos = ",".join(str(self.start + i) for i, j in enumerate(self.jokers) if j)
        return f"RUN suit={self.suit} start={self.start} len={self.length} jokers={pos or '-'}"


@dataclass(frozen=True)
class GroupPlacement:
    value: int
    suits: tuple[int, ...]
    jokers: int = 0

    @property
    def size(self) -> int:
        return len(self.suits) + self.jokers

    @property
    def score(self) -> int:
        return self.value * len(self.suits)

    def __str__(self) -> str:
        return (f"GROUP value={self.value} suits={','.join(map(str, self.suits)) or '-'} "
                f"jokers={self.jokers}")


@dataclass(frozen=True)
class Arrangement:
    runs: tuple[RunPlacement, ...] = ()
    groups: tuple[GroupPlacement, ...] = ()
    score: int = 0

    def usage(self, params: TileSetParams) -> Hand:
        """Tiles consumed, as a hand (jokers included)."""
        grid = [[0] * params.n for _ in range(params.k)]
        jokers = 0
        for r in self.runs:
            for i, j in enumerate(r.jokers):
                if j:
                    jokers += 1
                elif 1 <= r.suit <= params.k and 1 <= r.start + i <= params.n:
                    grid[r.suit - 1][r.start + i - 1] += 1
        for g in self.groups:
            jokers += g.jokers
            for s in g.suits:
                if 1 <= s <= params.k and 1 <= g.value <= params.n:
                    grid[s - 1][g.value - 1] += 1
        return Hand(tuple(map(tuple, grid)), jokers)

    def lines(self) -> list[str]:
        return [str(r) for r in self.runs] + [str(g) for g in self.groups]

    def joker_penalty(self, problem: Problem) -> int:
        """Penalty for jokers left unplaced; reported only, never part of the score."""
        placed = sum(sum(r.jokers) for r in self.runs) + sum(g.jokers for g in self.groups)
        return JOKER_PENALTY * max(0, problem.jokers - placed)


@dataclass(frozen=True)
class Verification:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_arrangement(problem: Problem, arrangement: Arrangement) -> Verification:
    """Independent check of an arrangement against the problem's supplies."""
    p = problem.params
    for r in arrangement.runs:
        if not 1 <= r.suit <= p.k:
            return Verification(False, f"run suit {r.suit} out of range")
        if r.length < SET_SIZE:
            return Verification(False, f"run of length {r.length} in suit {r.suit}")
        if r.start < 1 or r.start + r.length - 1 > p.n:
            return Verification(False, f"run {r.start}..{r.start + r.length - 1} outside 1..{p.n}")
    for g in arrangement.groups:
        if not 1 <= g.value <= p.n:
            return Verification(False, f"group value {g.value} out of range")
        if len(set(g.suits)) != len(g.suits):
            return Verification(False, f"duplicate suit in group of value {g.value}")
        if any(not 1 <= s <= p.k for s in g.suits):
            return Verification(False, f"group suit out of range at value {g.value}")
        if g.jokers < 0 or not SET_SIZE <= g.size <= p.k:
            return Verification(False, f"group of size {g.size} at value {g.value}")
    used = arrangement.usage(p)
    supply = problem.combined
    for s in range(p.k):
        for v in range(p.n):
            u, have, need = used.counts[s][v], supply.counts[s][v], problem.table.counts[s][v]
            if u > have:
                return Verification(False, f"tile {v + 1}:{s + 1} used {u} times, only {have} held")
            if u < need:
                return Verification(False, f"table tile {v + 1}:{s + 1} not placed")
    if used.jokers > problem.jokers:
        return Verification(False, f"{used.jokers} jokers used, only {problem.jokers} held")
    if used.jokers < problem.table.jokers:
        return Verification(False, "table joker not placed")
    score = hand_value(used)
    if score != arrangement.score:
        return Verification(False, f"declared score {arrangement.score}, actual {score}")
    return Verification(True)


_FAIL = None


@dataclass
class _Choice:
    transitions: tuple[Transition, ...]
    spend: int
    group_tiles: int
    next_key: tuple


@dataclass
class MemoEngine:
    """Top-down memoized search keyed on (value, per-suit states, jokers committed).

    Values are ``(score, -jokers, -tiles)`` tuples over completed sets, so
    ties prefer fewer jokers and then fewer tiles; among exact ties the
    first transition in successor-state order wins.
    """
    problem: Problem
    memo: bool = True
    early_stop: bool = True
    brute_force_groups: bool = False
    nodes: int = 0
    _table: dict = field(default_factory=dict, repr=False)
    _choice: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        p = self.problem.params
        # a joker may stand in for a tile whose real copies are all in use,
        # so each joker can open one more concurrent run in a suit
        self.n, self.k, self.m = p.n, p.k, p.m + self.problem.jokers
        self.free = [None] + [self.problem.hand.column(v) for v in range(1, p.n + 1)]
        self.mand = [None] + [self.problem.table.column(v) for v in range(1, p.n + 1)]
        self.jokers = self.problem.jokers
        self.table_jokers = self.problem.table.jokers
        combined = self.problem.combined
        # suffix sums of real tile value/count, for the early-stop bound
        self.suffix_value = [0] * (p.n + 2)
        self.suffix_count = [0] * (p.n + 2)
        for v in range(p.n, 0, -1):
            col = combined.column(v)
            self.suffix_value[v] = self.suffix_value[v + 1] + v * sum(col)
            self.suffix_count[v] = self.suffix_count[v + 1] + sum(col)
        self._groups = _brute_force if self.brute_force_groups else _closed_form

    def start_key(self) -> tuple:
        return (1, ((EMPTY,) * self.m,) * self.k, 0)

    def _ideal(self, value: int, runs: tuple) -> tuple:
        score, count = self.suffix_value[value], self.suffix_count[value]
        for state in runs:
            for sym in state:
                s, c = pending_value(sym, value)
                score += s
                count += c
        return (score, 0, -count)

    def _terminal(self, runs: tuple, used: int):
        released = 0
        for state in runs:
            for sym in state:
                if is_pending(sym):
                    if is_mandatory(sym):
                        return _FAIL
                    released += sum(joker_flags(sym))
        if used - released < self.table_jokers:
            return _FAIL
        return (0, 0, 0)

    def solve(self, key: tuple):
        if self.memo and key in self._table:
            return self._table[key]
        self.nodes += 1
        value, runs, used = key
        if value > self.n:
            result = self._terminal(runs, used)
            if self.memo:
                self._table[key] = result
            return result

        best, choice = _FAIL, None
        ideal = self._ideal(value, runs) if self.early_stop else None
        budget = self.jokers - used
        free, mand = self.free[value], self.mand[value]
        options = [make_runs(runs[i], free[i], mand[i], budget, value) for i in range(self.k)]
        done = False
        for combo in product(*options):
            placed = sum(t.jokers_placed for t in combo)
            released = sum(t.jokers_released for t in combo)
            after = used - released + placed
            if after > self.jokers:
                continue
            left_free = tuple(f - t.free_used for f, t in zip(free, combo))
            left_mand = tuple(b - t.mand_used for b, t in zip(mand, combo))
            per_spend = self._groups(left_free, left_mand, self.jokers - after)
            run_score = sum(t.score for t in combo)
            run_jokers = sum(t.done_jokers for t in combo)
            run_tiles = sum(t.done_real for t in combo)
            next_runs = tuple(t.state for t in combo)
            for spend, tiles in enumerate(per_spend):
                if tiles is None:
                    continue
                next_key = (value + 1, next_runs, after + spend)
                sub = self.solve(next_key)
                if sub is _FAIL:
                    continue
                total = (sub[0] + run_score + tiles * value,
                         sub[1] - run_jokers - spend,
                         sub[2] - run_tiles - tiles)
                if best is _FAIL or total > best:
                    best = total
                    choice = _Choice(combo, spend, tiles, next_key)
                    if total == ideal:
                        done = True
                        break
            if done:
                break
        if self.memo:
            self._table[key] = best
        # deterministic per key, so memo-free reruns store the same choice
        self._choice[key] = choice
        return best

    def run(self):
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 4 * self.n + 1000))
        try:
            return self.solve(self.start_key())
        finally:
            sys.setrecursionlimit(limit)

    def arrangement(self) -> Arrangement:
        """Walk the stored choices from the start state and build the sets."""
        result = self.run()
        if result is _FAIL:
            raise Infeasible("table constraint unsatisfiable")
        runs_out: list[RunPlacement] = []
        groups_out: list[GroupPlacement] = []
        open_runs: list[dict[int, list]] = [dict() for _ in range(self.k)]
        key = self.start_key()
        while key[0] <= self.n:
            value = key[0]
            choice = self._choice[key]
            for suit, t in enumerate(choice.transitions):
                pool = open_runs[suit]
                fresh: dict[int, list] = {}
                for mv in t.moves:
                    run = pool[mv.old].pop() if mv.old != EMPTY else None
                    if mv.action == "extend":
                        run["jokers"].append(mv.kind == JOKER)
                    elif mv.action in ("end", "restart") and run and len(run["jokers"]) >= SET_SIZE:
                        runs_out.append(RunPlacement(suit + 1, run["start"], tuple(run["jokers"])))
                    if mv.action in ("start", "restart"):
                        run = {"start": value, "jokers": [mv.kind == JOKER]}
                    if mv.new != EMPTY:
                        fresh.setdefault(mv.new, []).append(run)
                open_runs[suit] = fresh
            left_free = [f - t.free_used for f, t in zip(self.free[value], choice.transitions)]
            left_mand = [b - t.mand_used for b, t in zip(self.mand[value], choice.transitions)]
            picked = choose_usage(left_free, left_mand, choice.spend, choice.group_tiles)
            assert picked is not None
            usage, g = picked
            for suits, z in deal_groups(usage, choice.spend, g):
                groups_out.append(GroupPlacement(value, tuple(s + 1 for s in suits), z))
            key = choice.next_key
        for suit, pool in enumerate(open_runs):
            for sym, items in pool.items():
                if sym == FULL:
                    for run in items:
                        runs_out.append(RunPlacement(suit + 1, run["start"], tuple(run["jokers"])))
        runs_out.sort(key=lambda r: (r.suit, r.start, r.length, r.jokers))
        groups_out.sort(key=lambda g: (g.value, g.suits, g.jokers))
        return Arrangement(tuple(runs_out), tuple(groups_out), result[0])


def _plain(problem: Problem) -> bool:
    return problem.jokers == 0 and problem.table.size() == 0


def max_score(problem: Problem, engine: str = "auto", memo: bool = True,
              early_stop: bool = True) -> int | None:
    """Best achievable score, or None when the table constraint cannot be met.

    ``engine`` is ``"auto"``, ``"dense"`` (joker/table-free only) or ``"memo"``.
    """
    if engine == "dense" or (engine == "auto" and _plain(problem)):
        if not _plain(problem):
            raise ValueError("dense engine handles joker- and table-free problems only")
        from .dense import dense_max_score
        return dense_max_score(problem.params, problem.hand)
    result = MemoEngine(problem, memo=memo, early_stop=early_stop).run()
    return None if result is _FAIL else result[0]


def best_arrangement(problem: Problem, memo: bool = True, early_stop: bool = True) -> Arrangement:
    return MemoEngine(problem, memo=memo, early_stop=early_stop).arrangement()


def is_fully_playable(hand: Hand, params: TileSetParams) -> bool:
    """Can every tile of ``hand`` (jokers included) be placed in valid sets?"""
    if hand.jokers == 0:
        from .decision import playable
        return playable(hand, params)
    # every tile mandatory: feasibility of the table-constrained problem
    problem = Problem(params, Hand.empty(params), hand)
    try:
        arrangement = best_arrangement(problem)
    except Infeasible:
        return False
    return arrangement.usage(params) == hand
