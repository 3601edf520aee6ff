"""Exact counts of hands and of winning hands (hands playable in one move).

Two independent winning-hand counters:

* ``count_winning_hands`` enumerates covers by runs/groups of size 3-5
  (any longer run splits into such pieces) and deduplicates the resulting
  hands by canonical key.
* ``winning_counts`` sweeps all hands at once through the decision DP,
  keyed by the set of reachable run states after each value, and yields the
  counts for every hand size in one pass.
"""
from __future__ import annotations

import csv
import io
import zlib
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Iterable, Sequence

import numpy as np

from .decision import groupable, start, step, suit_options
from .runstate import EMPTY, FULL
from .tileset import SET_SIZE, TileSetParams

RUN, GROUP = "RUN", "GROUP"


class MemoryBudgetExceeded(RuntimeError):
    def __init__(self, message: str, last_completed_t: int | None = None):
        super().__init__(message)
        self.last_completed_t = last_completed_t


@lru_cache(maxsize=None)
def _hand_polynomial(types: int, m: int) -> tuple[int, ...]:
    poly = [1]
    for _ in range(types):
        out = [0] * (len(poly) + m)
        for i, c in enumerate(poly):
            if c:
                for d in range(m + 1):
                    out[i + d] += c
        poly = out
    return tuple(poly)


def total_hands(params: TileSetParams, t: int) -> int:
    """Multisets of size ``t`` over ``n*k`` tile types with at most ``m`` copies each."""
    if not 0 <= t <= params.total_tiles:
        raise ValueError(f"hand size {t} outside 0..{params.total_tiles}")
    return _hand_polynomial(params.tile_types, params.m)[t]


def partitions_into_345(t: int) -> list[tuple[int, ...]]:
    """Non-decreasing tuples of parts from {3, 4, 5} summing to ``t``, lexicographic."""
    if t < 0:
        raise ValueError("t must be >= 0")
    out = []

    def walk(rest: int, low: int, acc: list[int]) -> None:
        if rest == 0:
            if acc:
                out.append(tuple(acc))
            return
        for part in range(low, 6):
            if part <= rest:
                acc.append(part)
                walk(rest - part, part, acc)
                acc.pop()

    walk(t, 3, [])
    return out


@dataclass(frozen=True)
class CandidateSet:
    kind: str
    value: int = 0                 # GROUP
    suits: tuple[int, ...] = ()    # GROUP, 1-based
    suit: int = 0                  # RUN
    start: int = 0                 # RUN
    length: int = 0                # RUN

    @property
    def size(self) -> int:
        return self.length if self.kind == RUN else len(self.suits)

    def tiles(self) -> list[tuple[int, int]]:
        """(value, suit) of each member."""
        if self.kind == RUN:
            return [(self.start + i, self.suit) for i in range(self.length)]
        return [(self.value, s) for s in self.suits]


def catalog_sets(params: TileSetParams) -> list[CandidateSet]:
    """All runs of length 3-5 and groups of 3..min(k, 5) suits."""
    n, k = params.n, params.k
    out = []
    for suit in range(1, k + 1):
        for length in range(3, 6):
            for start_value in range(1, n - length + 2):
                out.append(CandidateSet(RUN, suit=suit, start=start_value, length=length))
    for value in range(1, n + 1):
        for size in range(3, min(k, 5) + 1):
            for suits in combinations(range(1, k + 1), size):
                out.append(CandidateSet(GROUP, value=value, suits=suits))
    return out


def count_winning_hands(params: TileSetParams, t: int, shards: int = 1,
                        order: Sequence[int] | None = None, threads: int = 1,
                        max_keys: int | None = None) -> int:
    """Distinct hands of size ``t`` whose tiles can all be placed, by cover enumeration.

    ``shards`` splits the key space (by CRC of the key); each shard is
    enumerated separately and only its own keys are stored.  ``order``
    permutes the candidate list.  ``threads`` > 1 runs shards in worker
    processes.
    """
    if params.j:
        params = TileSetParams(params.n, params.k, params.m, 0)
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return 1
    if t > params.total_tiles:
        return 0
    args = [(params, t, shard, shards, tuple(order) if order else None, max_keys)
            for shard in range(shards)]
    if threads > 1 and shards > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return sum(pool.map(_count_shard, args))
    return sum(_count_shard(a) for a in args)


def _count_shard(args) -> int:
    params, t, shard, shards, order, max_keys = args
    n, m = params.n, params.m
    cands = catalog_sets(params)
    if order is not None:
        cands = [cands[i] for i in order]
    by_size: dict[int, list[tuple[int, ...]]] = {3: [], 4: [], 5: []}
    for c in cands:
        by_size[c.size].append(tuple((s - 1) * n + (v - 1) for v, s in c.tiles()))

    usage = [0] * (params.tile_types + 1)  # trailing joker byte stays 0
    seen: set[bytes] = set()

    def emit() -> None:
        key = bytes(usage)
        if shards == 1 or zlib.crc32(key) % shards == shard:
            seen.add(key)
            if max_keys is not None and len(seen) > max_keys:
                raise MemoryBudgetExceeded(
                    f"dedup set exceeded {max_keys} keys at t={t}", None)

    def fill(slots: list[int], pos: int, low: int) -> None:
        if pos == len(slots):
            emit()
            return
        size = slots[pos]
        pool = by_size[size]
        first = low if pos and slots[pos - 1] == size else 0
        for ci in range(first, len(pool)):
            members = pool[ci]
            ok = True
            for i in members:
                if usage[i] >= m:
                    ok = False
                usage[i] += 1
            if ok:
                fill(slots, pos + 1, ci)
            for i in members:
                usage[i] -= 1

    for shape in partitions_into_345(t):
        fill(list(shape), 0, 0)
    return len(seen)


def _dominates(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    """Per-suit slot multiset ``a`` can do everything ``b`` can.

    With every tile mandatory, a complete run beats any slot and an
    incomplete run of length 2 beats one of length 1.  Checked by Hall's
    condition over the four slot kinds.
    """
    ca, cb = _kind_counts(a), _kind_counts(b)
    for mask in range(1, 16):
        need = sum(cb[x] for x in range(4) if mask >> x & 1)
        reach = set()
        for x in range(4):
            if mask >> x & 1:
                reach |= _ABOVE[x]
        if sum(ca[y] for y in reach) < need:
            return False
    return True


# slot kinds: 0 empty, 1 length one, 2 length two, 3 complete
_ABOVE = {0: {0, 3}, 1: {1, 2, 3}, 2: {2, 3}, 3: {3}}


def _kind_counts(state: tuple[int, ...]) -> list[int]:
    out = [0, 0, 0, 0]
    for s in state:
        out[0 if s == 0 else 3 if s == 1 else 1 if s < 6 else 2] += 1
    return out


class _Sweep:
    """Joint run states of all suits, integer-coded as base-``f`` digits."""

    def __init__(self, params: TileSetParams):
        from scipy import sparse

        self.k, self.m = params.k, params.m
        init = start(params)[0]
        suit_states = {init}
        frontier = [init]
        while frontier:
            nxt = []
            for st in frontier:
                for c in range(self.m + 1):
                    for nst, _ in suit_options(st, c):
                        if nst not in suit_states:
                            suit_states.add(nst)
                            nxt.append(nst)
            frontier = nxt
        self.states = sorted(suit_states)
        f = self.f = len(self.states)
        index = {st: i for i, st in enumerate(self.states)}
        k = self.k
        size = f ** k
        self.size = size
        self.digits = np.array([[(x // f ** i) % f for i in range(k)] for x in range(size)],
                               dtype=np.int16)
        self.start = index[init] * sum(f ** i for i in range(k))
        self.dom = np.array([[_dominates(a, b) for b in self.states] for a in self.states])
        suit_ok = np.array([all(s in (EMPTY, FULL) for s in st) for st in self.states])
        self.accepting = suit_ok[self.digits].all(axis=1)
        weights = f ** np.arange(k)
        self.perms = np.array([(self.digits[:, list(p)] * weights).sum(axis=1)
                               for p in permutations(range(k))])

        # per suit: for (state, tiles, tiles to groups) the successor states
        nxt_by = {}
        for st in self.states:
            for c in range(self.m + 1):
                for nst, left in suit_options(st, c):
                    nxt_by.setdefault((index[st], c, left), []).append(index[nst])
        self.columns = list(product(range(self.m + 1), repeat=k))
        self.trans = []
        for col in self.columns:
            mat = None
            for g in product(*(range(c + 1) for c in col)):
                if not groupable(g):
                    continue
                part = None
                for i in range(k - 1, -1, -1):  # most significant digit first
                    blk = sparse.lil_matrix((f, f), dtype=bool)
                    for s in range(f):
                        for t in nxt_by.get((s, col[i], g[i]), ()):
                            blk[s, t] = True
                    blk = blk.tocsr()
                    part = blk if part is None else sparse.kron(part, blk, format="csr")
                mat = part if mat is None else (mat + part)
            self.trans.append(mat.tocsr().astype(bool))
        acc = self.accepting.astype(np.int8)
        self.finishes = [np.asarray(t @ acc).ravel() > 0 for t in self.trans]

    def successor(self, key: np.ndarray, ci: int) -> np.ndarray:
        sub = self.trans[ci][key]
        return np.unique(sub.indices)

    def prune(self, reach: np.ndarray) -> np.ndarray:
        d = self.digits[reach]
        beats = np.ones((len(reach), len(reach)), dtype=bool)
        for i in range(self.k):
            beats &= self.dom[d[:, i][:, None], d[:, i][None, :]]
        np.fill_diagonal(beats, False)
        return reach[~beats.any(axis=0)]

    def canonical(self, states: np.ndarray) -> bytes:
        images = np.sort(self.perms[:, states], axis=1)
        best = min(range(len(images)), key=lambda i: images[i].tobytes())
        return images[best].astype(np.int32).tobytes()


def winning_counts(params: TileSetParams, t_max: int | None = None,
                   t_min: int = 0) -> list[int]:
    """Winning-hand counts for every size 0..t_max, via the reachable-state sweep.

    Prefixes that can no longer reach ``t_min`` tiles are dropped early, so
    entries below ``t_min`` are partial and must not be used.

    Hands are processed one value column at a time; hands whose prefixes
    leave the same set of reachable joint run states (after dropping
    dominated states, up to suit relabelling) are merged, keeping a count
    per hand size.
    """
    params = TileSetParams(params.n, params.k, params.m, 0)
    top = params.total_tiles if t_max is None else min(t_max, params.total_tiles)
    sweep = _Sweep(params)
    big = (params.m + 1) ** params.tile_types >= 2 ** 62
    dtype = object if big else np.int64
    sizes = [sum(c) for c in sweep.columns]

    def zeros():
        return np.zeros(top + 1, dtype=dtype) if not big else np.array([0] * (top + 1), dtype=object)

    first = zeros()
    first[0] = 1
    layer = {sweep.canonical(np.array([sweep.start])): first}
    out = zeros()
    for value in range(1, params.n + 1):
        last = value == params.n
        nxt: dict[bytes, np.ndarray] = {}
        for key, counts in layer.items():
            states = np.frombuffer(key, dtype=np.int32)
            for ci, size in enumerate(sizes):
                if size > top:
                    continue
                if last:
                    if sweep.finishes[ci][states].any():
                        out[size:] += counts[:top + 1 - size]
                    continue
                reach = sweep.successor(states, ci)
                if not len(reach):
                    continue
                target = sweep.canonical(sweep.prune(reach))
                acc = nxt.get(target)
                if acc is None:
                    acc = nxt[target] = zeros()
                acc[size:] += counts[:top + 1 - size]
        floor = t_min - (params.n - value) * params.k * params.m
        if floor > 0:
            for key in list(nxt):
                nxt[key][:floor] = 0
                if not nxt[key].any():
                    del nxt[key]
        layer = nxt
    return [int(x) for x in out]


@dataclass(frozen=True)
class CountRow:
    t: int
    total: int
    winning: int | None = None

    @property
    def ratio(self) -> Fraction | None:
        if self.winning is None:
            return None
        return Fraction(self.winning, self.total)

    def csv_fields(self) -> list[str]:
        ratio = self.ratio
        return [str(self.t), str(self.total),
                "" if self.winning is None else str(self.winning),
                "" if ratio is None else format_ratio(ratio)]


def format_ratio(ratio: Fraction, digits: int = 3) -> str:
    """Scientific notation with ``digits`` significant digits, e.g. ``7.14e-2``."""
    if ratio == 0:
        return f"{0:.{digits - 1}f}e0"
    with localcontext() as ctx:
        ctx.prec = 60
        d = Decimal(ratio.numerator) / Decimal(ratio.denominator)
        text = f"{d:.{digits - 1}e}"
    mantissa, exp = text.split("e")
    return f"{mantissa}e{int(exp)}"


def winning_table(params: TileSetParams, t_from: int, t_to: int, method: str = "sweep",
                  **kwargs) -> list[CountRow]:
    """One row per hand size; ``method`` is ``"sweep"``, ``"partition"`` or ``"totals"``."""
    if not 0 <= t_from <= t_to <= params.total_tiles:
        raise ValueError(f"invalid range {t_from}..{t_to} for {params.total_tiles} tiles")
    sizes = range(t_from, t_to + 1)
    if method == "totals":
        return [CountRow(t, total_hands(params, t)) for t in sizes]
    if method == "sweep":
        counts = winning_counts(params, t_to, t_from)
        return [CountRow(t, total_hands(params, t), counts[t]) for t in sizes]
    if method == "partition":
        rows = []
        for t in sizes:
            try:
                winning = count_winning_hands(params, t, **kwargs)
            except MemoryBudgetExceeded as exc:
                exc.last_completed_t = rows[-1].t if rows else None
                raise
            rows.append(CountRow(t, total_hands(params, t), winning))
        return rows
    raise ValueError(f"unknown counting method {method!r}")


def write_csv(rows: Iterable[CountRow], stream: io.TextIOBase) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["t", "total", "winning", "ratio"])
    for row in rows:
        writer.writerow(row.csv_fields())
