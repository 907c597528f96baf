"""Discretized counterpart of the exact planner.

Every arc is cut into equal cells.  A node is capped by the smallest mu_plus
found on its two adjacent closed cells, so the piecewise-linear interpolant
never exceeds the cap anywhere; near a downward step of the cap this makes
the grid profile lower than the exact one by about |alpha_minus| times the
cell width.  Ramp increments use the exact integral of the acceleration
bound over each cell.
"""
from __future__ import annotations

import math

import numpy as np

from .graph import PathBounds
from .profile import (INF, TOL, Grid, PlanResult, SpeedProfile, _end_value, _segment_times,
                      _start_value)


class _Layout:
    """Grid nodes of a path together with per-node caps and per-cell increments."""

    def __init__(self, bounds: PathBounds, engine: Grid):
        js = bounds.junctions
        parts = []
        for a, b in zip(js, js[1:]):
            if b <= a:
                continue
            n = engine.cells(b - a)
            x = np.linspace(a, b, n + 1)
            x[0], x[-1] = a, b
            parts.append(x if not parts else x[1:])
        self.x = np.concatenate(parts) if parts else np.array([0.0])
        pieces = bounds.pieces
        starts = np.array([p[0] for p in pieces])
        self.mm = np.array([p[2] for p in pieces])
        self.mp = np.array([p[3] for p in pieces])
        am = np.array([p[4] for p in pieces])
        ap = np.array([p[5] for p in pieces])
        x = self.x
        npc = len(pieces)
        left = np.clip(np.searchsorted(starts, x[:-1], side="right") - 1, 0, npc - 1)
        right = np.clip(np.searchsorted(starts, x[1:], side="right") - 1, 0, npc - 1)
        inner = np.clip(np.searchsorted(starts, x[1:], side="left") - 1, 0, npc - 1)

        cell_cap = np.minimum(self.mp[left], self.mp[right])
        cell_floor = np.maximum(self.mm[left], self.mm[right])
        for c in np.nonzero(right - left >= 2)[0]:
            cell_cap[c] = self.mp[left[c]:right[c] + 1].min()
            cell_floor[c] = self.mm[left[c]:right[c] + 1].max()
        self.cap = np.concatenate([[cell_cap[0]], np.minimum(cell_cap[:-1], cell_cap[1:]),
                                   [cell_cap[-1]]])
        self.floor = np.concatenate([[cell_floor[0]], np.maximum(cell_floor[:-1], cell_floor[1:]),
                                     [cell_floor[-1]]])

        self.up = self._increments(starts, ap, x, left, inner)
        self.down = self._increments(starts, -am, x, left, inner)

    @staticmethod
    def _increments(starts, rate, x, left, inner):
        isinf = np.isinf(rate)
        r = np.where(isinf, 0.0, rate)
        ends = np.append(starts[1:], x[-1])
        cum = np.concatenate([[0.0], np.cumsum(r * (ends - starts))])
        idx = np.clip(np.searchsorted(starts, x, side="right") - 1, 0, len(starts) - 1)
        acc = cum[idx] + r[idx] * (x - starts[idx])
        inc = np.diff(acc)
        ninf = np.concatenate([[0], np.cumsum(isinf)])
        has_inf = ninf[inner + 1] - ninf[left] > 0
        return np.where(has_inf, INF, np.maximum(inc, 0.0))


def _ramp(cap, inc, w0):
    """w[0] = min(w0, cap[0]); w[i+1] = min(cap[i+1], w[i] + inc[i]).

    Between infinite increments this is a running minimum of cap - C plus C,
    with C the cumulative increment; an infinite increment restarts at the cap.
    """
    n = len(cap)
    w = np.empty(n)
    bounds = [0, *(np.nonzero(np.isinf(inc))[0] + 1).tolist(), n]
    seed = min(w0, cap[0])
    for start, stop in zip(bounds, bounds[1:]):
        c = np.concatenate([[0.0], np.cumsum(inc[start:stop - 1])])
        terms = cap[start:stop] - c
        terms[0] = seed
        w[start:stop] = np.minimum(cap[start:stop], c + np.minimum.accumulate(terms))
        if stop < n:
            seed = cap[stop]
    return w


def _forward(lay, w0):
    return _ramp(lay.cap, lay.up, w0)


def _backward(lay, w_end):
    return _ramp(lay.cap[::-1], lay.down[::-1], w_end)[::-1]


def grid_forward(bounds, w0, engine):
    lay = _Layout(bounds, engine)
    return SpeedProfile(lay.x, _forward(lay, _start_value(bounds, w0)), engine)


def grid_backward(bounds, w_end, engine):
    lay = _Layout(bounds, engine)
    return SpeedProfile(lay.x, _backward(lay, _end_value(bounds, w_end)), engine)


def grid_plan(bounds: PathBounds, w0, w_end, engine: Grid) -> PlanResult:
    if not bounds.pieces:
        from .profile import plan_speed
        return plan_speed(bounds, w0, w_end)
    ws = _start_value(bounds, w0)
    we = _end_value(bounds, w_end)
    lay = _Layout(bounds, engine)
    f = _forward(lay, ws)
    b = _backward(lay, we)
    w = np.minimum(f, b)
    prof = SpeedProfile(lay.x, w, engine)
    f, b = SpeedProfile(lay.x, f, engine), SpeedProfile(lay.x, b, engine)
    # the conservative caps may cost up to one cell of ramp at either end
    if w0 is not None and w[0] < ws - TOL * max(1.0, ws) - lay.down[0]:
        return PlanResult(prof, INF, False, None, "initial squared speed cannot be met", f, b)
    if w_end is not None and w[-1] < we - TOL * max(1.0, we) - lay.up[-1]:
        return PlanResult(prof, INF, False, None, "final squared speed cannot be met", f, b)
    low = w < lay.floor - TOL * np.maximum(1.0, lay.floor)
    if low.any():
        i = int(np.argmax(low))
        j = i
        while j + 1 < len(w) and low[j + 1]:
            j += 1
        return PlanResult(prof, INF, False, (float(lay.x[i]), float(lay.x[j])),
                          "squared speed below mu_minus", f, b)
    t = float(np.sum(_segment_times(np.diff(lay.x), w[:-1], w[1:])))
    return PlanResult(prof, t, True, None, "", f, b)


def grid_ell_plus(bounds: PathBounds, engine: Grid) -> float:
    """First grid node where the zero-start ramp reaches the node cap."""
    if not bounds.pieces:
        return INF
    lay = _Layout(bounds, engine)
    with np.errstate(invalid="ignore"):
        ramp = np.concatenate([[0.0], np.cumsum(lay.up)])
        hit = np.isfinite(lay.cap) & (ramp >= lay.cap - TOL * np.maximum(1.0, lay.cap))
    if not hit.any():
        return INF
    return float(lay.x[int(np.argmax(hit))])


def grid_ell_minus(bounds: PathBounds, engine: Grid) -> float:
    v = grid_ell_plus(bounds.reversed(), engine)
    return -INF if math.isinf(v) else bounds.length - v
