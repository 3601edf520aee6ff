"""Tile-set parameters, hands and problems, plus the problem-file format.

Hands are count grids: ``counts[suit - 1][value - 1]`` copies of each tile,
with jokers kept as a separate count.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

SET_SIZE = 3


class ProblemError(ValueError):
    """Raised for malformed problem files or out-of-range tiles."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class TileSetParams:
    n: int = 13
    k: int = 4
    m: int = 2
    j: int = 2
    s: int = SET_SIZE

    def __post_init__(self):
        if self.n < 1 or self.k < 1 or self.m < 1:
            raise ValueError(f"n, k, m must be >= 1 (got n={self.n}, k={self.k}, m={self.m})")
        if self.j < 0:
            raise ValueError(f"j must be >= 0 (got {self.j})")
        if self.s != SET_SIZE:
            raise ValueError(f"only set size {SET_SIZE} is supported (got s={self.s})")

    @property
    def tile_types(self) -> int:
        return self.n * self.k

    @property
    def total_tiles(self) -> int:
        """Number of regular tiles in the full set (jokers excluded)."""
        return self.n * self.k * self.m


@dataclass(frozen=True, order=True)
class Tile:
    value: int
    suit: int

    def check(self, params: TileSetParams) -> None:
        if not 1 <= self.value <= params.n:
            raise ProblemError(f"tile value {self.value} outside 1..{params.n}")
        if not 1 <= self.suit <= params.k:
            raise ProblemError(f"tile suit {self.suit} outside 1..{params.k}")

    def __str__(self) -> str:
        return f"{self.value}:{self.suit}"


@dataclass(frozen=True)
class Hand:
    counts: tuple[tuple[int, ...], ...]
    jokers: int = 0

    @classmethod
    def empty(cls, params: TileSetParams) -> Hand:
        return cls(tuple((0,) * params.n for _ in range(params.k)), 0)

    @classmethod
    def from_tiles(cls, params: TileSetParams, tiles: Iterable[Tile | tuple[int, int]],
                   jokers: int = 0) -> Hand:
        """Build a hand from ``(value, suit)`` pairs, validating against ``params``."""
        grid = [[0] * params.n for _ in range(params.k)]
        for t in tiles:
            tile = t if isinstance(t, Tile) else Tile(*t)
            tile.check(params)
            grid[tile.suit - 1][tile.value - 1] += 1
        hand = cls(tuple(map(tuple, grid)), jokers)
        hand.check(params)
        return hand

    @property
    def k(self) -> int:
        return len(self.counts)

    @property
    def n(self) -> int:
        return len(self.counts[0]) if self.counts else 0

    def count(self, value: int, suit: int) -> int:
        return self.counts[suit - 1][value - 1]

    def column(self, value: int) -> tuple[int, ...]:
        """Copies held of ``value`` in every suit."""
        return tuple(row[value - 1] for row in self.counts)

    def size(self) -> int:
        return sum(map(sum, self.counts)) + self.jokers

    def tiles(self) -> Iterator[Tile]:
        """Regular tiles in (suit, value) order, repeated by multiplicity."""
        for s, row in enumerate(self.counts, 1):
            for v, c in enumerate(row, 1):
                for _ in range(c):
                    yield Tile(v, s)

    def check(self, params: TileSetParams) -> None:
        if self.k != params.k or self.n != params.n:
            raise ProblemError(f"hand grid is {self.k}x{self.n}, expected {params.k}x{params.n}")
        for s, row in enumerate(self.counts, 1):
            for v, c in enumerate(row, 1):
                if not 0 <= c <= params.m:
                    raise ProblemError(f"count {c} of tile {v}:{s} exceeds m={params.m}")
        if not 0 <= self.jokers <= params.j:
            raise ProblemError(f"{self.jokers} jokers exceed j={params.j}")

    def __add__(self, other: Hand) -> Hand:
        counts = tuple(tuple(a + b for a, b in zip(r1, r2))
                       for r1, r2 in zip(self.counts, other.counts))
        return Hand(counts, self.jokers + other.jokers)

    def permute_suits(self, perm: tuple[int, ...]) -> Hand:
        """Return the hand with suit ``i`` relabelled to ``perm[i]`` (0-based)."""
        counts = [None] * self.k
        for i, row in enumerate(self.counts):
            counts[perm[i]] = row
        return Hand(tuple(counts), self.jokers)

    def tokens(self) -> list[str]:
        return [str(t) for t in self.tiles()] + ["J"] * self.jokers


@dataclass(frozen=True)
class Problem:
    params: TileSetParams
    hand: Hand
    table: Hand = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.table is None:
            object.__setattr__(self, "table", Hand.empty(self.params))
        self.hand.check(self.params)
        self.table.check(self.params)
        for s in range(self.params.k):
            for v in range(self.params.n):
                total = self.hand.counts[s][v] + self.table.counts[s][v]
                if total > self.params.m:
                    raise ProblemError(f"tile {v + 1}:{s + 1} appears {total} times "
                                       f"in hand and table, exceeds m={self.params.m}")
        if self.hand.jokers + self.table.jokers > self.params.j:
            raise ProblemError(f"{self.hand.jokers + self.table.jokers} jokers in hand and "
                               f"table exceed j={self.params.j}")

    @property
    def combined(self) -> Hand:
        return self.hand + self.table

    @property
    def jokers(self) -> int:
        return self.hand.jokers + self.table.jokers


def hand_value(hand: Hand) -> int:
    """Sum of tile values; jokers count zero."""
    return sum(v * c for row in hand.counts for v, c in enumerate(row, 1))


def canonical_key(hand: Hand) -> bytes:
    """Suit-major count bytes followed by the joker count."""
    return bytes([c for row in hand.counts for c in row] + [hand.jokers])


def hand_from_key(key: bytes, params: TileSetParams) -> Hand:
    n, k = params.n, params.k
    return Hand(tuple(tuple(key[s * n:(s + 1) * n]) for s in range(k)), key[n * k])


_PARAM_RE = re.compile(r"^(n|k|m|j)=(\d+)$")
_TILE_RE = re.compile(r"^(\d+):(\d+)$")


def parse_params(tokens: Iterable[str], base: TileSetParams | None = None,
                 line: int | None = None) -> TileSetParams:
    """Parse ``n=13 k=4 ...`` tokens (commas also accepted as separators)."""
    values = {}
    if base is not None:
        values = {"n": base.n, "k": base.k, "m": base.m, "j": base.j}
    for tok in tokens:
        for part in filter(None, tok.split(",")):
            match = _PARAM_RE.match(part)
            if not match:
                raise ProblemError(f"bad parameter token {part!r}", line)
            values[match.group(1)] = int(match.group(2))
    missing = {"n", "k", "m", "j"} - values.keys()
    if missing:
        raise ProblemError(f"missing parameters: {', '.join(sorted(missing))}", line)
    try:
        return TileSetParams(**values)
    except ValueError as exc:
        raise ProblemError(str(exc), line) from None


def _parse_tokens(tokens: list[str], params: TileSetParams, line: int) -> Hand:
    grid = [[0] * params.n for _ in range(params.k)]
    jokers = 0
    for tok in tokens:
        if tok == "J":
            jokers += 1
            continue
        match = _TILE_RE.match(tok)
        if not match:
            raise ProblemError(f"bad tile token {tok!r}", line)
        tile = Tile(int(match.group(1)), int(match.group(2)))
        try:
            tile.check(params)
        except ProblemError as exc:
            raise ProblemError(f"{exc} (token {tok!r})", line) from None
        grid[tile.suit - 1][tile.value - 1] += 1
    hand = Hand(tuple(map(tuple, grid)), jokers)
    try:
        hand.check(params)
    except ProblemError as exc:
        raise ProblemError(str(exc), line) from None
    return hand


def parse_problem(text: str) -> Problem:
    """Parse a problem file: a ``params`` line, a ``hand`` line, optional ``table`` line."""
    lines = []
    for no, raw in enumerate(text.splitlines(), 1):
        content = raw.split("#", 1)[0].split()
        if content:
            lines.append((no, content))
    if not lines:
        raise ProblemError("empty problem file")

    no, words = lines[0]
    if words[0] != "params":
        raise ProblemError(f"expected 'params', got {words[0]!r}", no)
    params = parse_params(words[1:], line=no)

    if len(lines) < 2 or lines[1][1][0] != "hand":
        raise ProblemError("expected a 'hand' line", lines[1][0] if len(lines) > 1 else no)
    no, words = lines[1]
    hand = _parse_tokens(words[1:], params, no)

    table = Hand.empty(params)
    if len(lines) > 2:
        no, words = lines[2]
        if words[0] != "table":
            raise ProblemError(f"expected 'table', got {words[0]!r}", no)
        table = _parse_tokens(words[1:], params, no)
    if len(lines) > 3:
        raise ProblemError("unexpected content after 'table' line", lines[3][0])

    try:
        return Problem(params, hand, table)
    except ProblemError as exc:
        raise ProblemError(str(exc), lines[-1][0]) from None


def format_problem(problem: Problem) -> str:
    p = problem.params
    out = [f"params n={p.n} k={p.k} m={p.m} j={p.j}",
           " ".join(["hand", *problem.hand.tokens()])]
    if problem.table.size():
        out.append(" ".join(["table", *problem.table.tokens()]))
    return "\n".join(out) + "\n"
