"""Per-suit run-slot symbols and the ``make_runs`` transition generator.

Each suit carries ``m`` run slots.  A slot's symbol records the run length
clipped at three, plus, for incomplete runs, which positions hold jokers and
whether a table tile is committed (such a run may not be abandoned).

Symbol codes (small ints so states hash and sort cheaply)::

    0          empty slot
    1          run of length >= 3
    2..5       length 1: 2 + joker + 2*mandatory
    6..13      length 2: 6 + older_joker + 2*newer_joker + 4*mandatory
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from typing import NamedTuple

EMPTY = 0
FULL = 1

FREE, MAND, JOKER = "F", "M", "J"


def single(kind: str) -> int:
    return 2 + (kind == JOKER) + 2 * (kind == MAND)


def double(older: int, kind: str) -> int:
    """Extend a length-1 symbol ``older`` with a tile of ``kind``."""
    oj, om = joker_flags(older)[0], is_mandatory(older)
    return 6 + oj + 2 * (kind == JOKER) + 4 * (om or kind == MAND)


def length(sym: int) -> int:
    """Clipped run length: 0, 1, 2 or 3 (meaning three or more)."""
    if sym == EMPTY:
        return 0
    if sym == FULL:
        return 3
    return 1 if sym < 6 else 2


def joker_flags(sym: int) -> tuple[bool, ...]:
    if 2 <= sym <= 5:
        return (bool((sym - 2) & 1),)
    if 6 <= sym <= 13:
        return (bool((sym - 6) & 1), bool((sym - 6) & 2))
    return ()


def is_mandatory(sym: int) -> bool:
    if 2 <= sym <= 5:
        return bool((sym - 2) & 2)
    if 6 <= sym <= 13:
        return bool((sym - 6) & 4)
    return False


def is_pending(sym: int) -> bool:
    return sym >= 2


def describe(sym: int) -> str:
    if sym == EMPTY:
        return "0"
    if sym == FULL:
        return "3+"
    flags = "".join("J" if j else "R" for j in joker_flags(sym))
    return f"{length(sym)}{flags}{'*' if is_mandatory(sym) else ''}"


def pending_value(sym: int, value: int) -> tuple[int, int]:
    """(score, real tiles) still deferred in ``sym`` when about to process ``value``."""
    flags = joker_flags(sym)
    positions = range(value - len(flags), value)
    score = sum(p for p, j in zip(positions, flags) if not j)
    return score, sum(1 for j in flags if not j)


class Move(NamedTuple):
    old: int
    new: int
    action: str       # "keep", "start", "extend", "drop", "end", "restart"
    kind: str | None  # tile kind placed, if any


class Transition(NamedTuple):
    state: tuple[int, ...]
    score: int            # deferred run score realised at this value
    free_used: int
    mand_used: int
    jokers_placed: int
    jokers_released: int  # jokers freed by abandoning incomplete runs
    done_real: int        # real tiles that became part of complete runs
    done_jokers: int
    moves: tuple[Move, ...]


def _slot_moves(sym: int, value: int, kinds: tuple[str, ...]):
    """Yield (move, score, done_real, done_jokers) for one slot."""
    if sym == EMPTY:
        yield Move(sym, EMPTY, "keep", None), 0, 0, 0
        for kind in kinds:
            yield Move(sym, single(kind), "start", kind), 0, 0, 0
        return
    if sym == FULL:
        for kind in kinds:
            real = kind != JOKER
            yield Move(sym, FULL, "extend", kind), value * real, int(real), int(not real)
        yield Move(sym, EMPTY, "end", None), 0, 0, 0
    else:
        flags = joker_flags(sym)
        for kind in kinds:
            if len(flags) == 1:
                yield Move(sym, double(sym, kind), "extend", kind), 0, 0, 0
            else:
                score, real = pending_value(sym, value)
                real_new = kind != JOKER
                jokers = sum(flags) + (not real_new)
                yield (Move(sym, FULL, "extend", kind), score + value * real_new,
                       real + real_new, jokers)
        if is_mandatory(sym):
            return
        yield Move(sym, EMPTY, "drop", None), 0, 0, 0
    for kind in kinds:
        yield Move(sym, single(kind), "restart", kind), 0, 0, 0


@lru_cache(maxsize=None)
def make_runs(state: tuple[int, ...], free: int, mand: int, jokers: int,
              value: int) -> tuple[Transition, ...]:
    """Every distinct way to continue, end or start the runs of one suit at ``value``.

    ``free``/``mand`` are the hand/table copies of this tile available and
    ``jokers`` bounds how many jokers may be placed here.  Leftover tiles are
    for groups.  Transitions are sorted by successor state.
    """
    kinds = tuple(k for k, avail in ((FREE, free), (MAND, mand), (JOKER, jokers)) if avail)
    distinct = sorted(set(state))
    per_symbol = []
    for sym in distinct:
        options = list(_slot_moves(sym, value, kinds))
        per_symbol.append(list(combinations_with_replacement(options, state.count(sym))))

    seen: dict[tuple, Transition] = {}

    def walk(i: int, acc: list) -> None:
        if i == len(per_symbol):
            moves = [opt[0] for group in acc for opt in group]
            used = {FREE: 0, MAND: 0, JOKER: 0}
            for mv in moves:
                if mv.kind:
                    used[mv.kind] += 1
            if used[FREE] > free or used[MAND] > mand or used[JOKER] > jokers:
                return
            released = sum(sum(joker_flags(mv.old)) for mv in moves
                           if mv.action in ("drop", "restart"))
            score = sum(opt[1] for group in acc for opt in group)
            done_real = sum(opt[2] for group in acc for opt in group)
            done_jokers = sum(opt[3] for group in acc for opt in group)
            new_state = tuple(sorted(mv.new for mv in moves))
            key = (new_state, score, used[FREE], used[MAND], used[JOKER], released,
                   done_real, done_jokers)
            if key not in seen:
                seen[key] = Transition(*key, tuple(moves))
            return
        for choice in per_symbol[i]:
            acc.append(choice)
            walk(i + 1, acc)
            acc.pop()

    walk(0, [])
    return tuple(sorted(seen.values(), key=lambda t: t[:8]))


def basic_states(m: int) -> list[tuple[int, ...]]:
    """All per-suit states over the flag-free alphabet {0, 1, 2, 3+}."""
    plain = (EMPTY, single(FREE), double(single(FREE), FREE), FULL)
    return sorted(tuple(sorted(c)) for c in combinations_with_replacement(plain, m))


def reachable_states(m: int, jokers: int = 0, with_table: bool = False,
                     value: int = 5) -> set[tuple[int, ...]]:
    """Closure of ``make_runs`` from the all-empty state, over every supply level."""
    start = (EMPTY,) * m
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for state in frontier:
            for free in range(m + 1):
                for mand in range(m + 1 - free if with_table else 1):
                    for t in make_runs(state, free, mand, jokers, value):
                        if t.state not in seen:
                            seen.add(t.state)
                            nxt.append(t.state)
        frontier = nxt
    return seen


def tetrahedral(m: int) -> int:
    return (m + 1) * (m + 2) * (m + 3) // 6
