"""Forward tabulation of the run-slot DP over dense score arrays.

Only for problems without jokers or table tiles, where the per-suit
alphabet is the plain {0, 1, 2, 3+} one and a state is an index into
``basic_states(m)``.  The scores of one value layer live in a k-dimensional
array; suits are folded in one at a time (max-plus contraction) with the
group count ``g`` fixed per pass, so group scoring separates by suit and
only the running group-tile total (capped at ``3g``) couples them.  Each
axis keeps just the state indices reachable in the current layer.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .runstate import EMPTY, FULL, basic_states, make_runs
from .tileset import SET_SIZE, Hand, TileSetParams

NEG = -np.inf


@lru_cache(maxsize=None)
def _alphabet(m: int):
    states = basic_states(m)
    index = {s: i for i, s in enumerate(states)}
    final = np.array([all(x in (EMPTY, FULL) for x in s) for s in states])
    return states, index, final


@lru_cache(maxsize=None)
def _moves(m: int, count: int):
    """Transitions for ``count`` tiles: (src, dst, tiles in runs, a, b).

    The run score at value ``v`` is ``a*v + b``: completing a run scores
    ``3v - 3`` and extending a complete run scores ``v``.
    """
    states, index, _ = _alphabet(m)
    rows = set()
    for i, s in enumerate(states):
        for t in make_runs(s, count, 0, 0, SET_SIZE):
            completed = sum(mv.action == "extend" and mv.old != FULL and mv.new == FULL
                            for mv in t.moves)
            extended = sum(mv.action == "extend" and mv.old == FULL for mv in t.moves)
            rows.add((i, index[t.state], t.free_used,
                      SET_SIZE * completed + extended, -SET_SIZE * completed))
    cols = list(zip(*sorted(rows)))
    return tuple(np.array(c, dtype=np.intp if n < 3 else np.float64)
                 for n, c in enumerate(cols))


def _fold(x: np.ndarray, axis: int, weights: np.ndarray, need: int) -> np.ndarray:
    """Max-plus contract ``axis`` of ``x`` (last axis = capped group tiles) with weights[S, T, u]."""
    xi = np.moveaxis(x, axis, 0)
    shape = xi.shape
    xi = xi.reshape(shape[0], -1, shape[-1])
    z = (xi[:, None, :, :, None] + weights[:, :, None, None, :]).max(axis=0)
    out = np.full(z.shape[:3], NEG)
    for u in range(z.shape[3]):
        if u == 0:
            np.maximum(out, z[..., 0], out=out)
            continue
        if need > u:
            np.maximum(out[..., u:need], z[..., :need - u, u], out=out[..., u:need])
        np.maximum(out[..., need], z[..., need - u:, u].max(axis=-1), out=out[..., need])
    out = out.reshape((weights.shape[1],) + shape[1:])
    return np.moveaxis(out, 0, axis)


def dense_max_score(params: TileSetParams, hand: Hand) -> int:
    if hand.jokers:
        raise ValueError("dense engine does not handle jokers")
    m, k = params.m, params.k
    states, _, final = _alphabet(m)
    f = len(states)
    scores = np.zeros((1,) * k)
    axes = [np.array([0])] * k  # basic_states(m)[0] is the all-empty state

    for value in range(1, params.n + 1):
        column = hand.column(value)
        per_suit = []
        new_axes = []
        for i in range(k):
            src, dst, used, a, b = _moves(m, column[i])
            pos = np.full(f, -1, dtype=np.intp)
            pos[axes[i]] = np.arange(len(axes[i]))
            keep = pos[src] >= 0
            src, dst, used = pos[src[keep]], dst[keep], used[keep]
            run_score = a[keep] * value + b[keep]
            targets = np.unique(dst)
            tpos = np.full(f, -1, dtype=np.intp)
            tpos[targets] = np.arange(len(targets))
            per_suit.append((src, tpos[dst], column[i] - used, run_score, len(axes[i]),
                             len(targets)))
            new_axes.append(targets)

        best = None
        for g in range(sum(column) // SET_SIZE + 1):
            need = SET_SIZE * g
            x = np.full(scores.shape + (need + 1,), NEG)
            x[..., 0] = scores
            for i, (src, dst, left, run_score, n_src, n_dst) in enumerate(per_suit):
                u = np.minimum(left, g)
                w = np.full((n_src, n_dst, g + 1), NEG)
                np.maximum.at(w, (src, dst, u), run_score + u * value)
                x = _fold(x, i, w, need)
            layer = x[..., need]
            best = layer if best is None else np.maximum(best, layer)

        # drop unreachable states from each axis
        alive = np.isfinite(best)
        for i in range(k):
            other = tuple(a for a in range(k) if a != i)
            mask = alive.any(axis=other) if other else alive
            best = np.compress(mask, best, axis=i)
            alive = np.compress(mask, alive, axis=i)
            new_axes[i] = new_axes[i][mask]
        scores, axes = best, new_axes

    ok = [final[ax] for ax in axes]
    sub = scores[np.ix_(*ok)]
    return int(sub.max())
