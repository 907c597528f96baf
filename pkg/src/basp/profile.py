"""Optimal squared-speed profile along a fixed path.

The profile is the pointwise minimum of two clipped ramps: a forward one
that starts at the initial squared speed and climbs at the largest allowed
rate while staying under the speed cap, and its mirror image seeded with the
final squared speed.  Both ramps are computed exactly on the step-function
bounds, so every profile here is piecewise linear.

Profiles are stored as a non-decreasing array of coordinates with one value
per coordinate; a repeated coordinate encodes a jump (only possible where the
cap drops or the acceleration bound is infinite).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainMismatchError, EndAboveCapError, StartAboveCapError
from .graph import PathBounds

INF = math.inf
EXACT = "exact"
TOL = 1e-9


@dataclass(frozen=True)
class Grid:
    """Discretized engine: each arc is cut into cells of equal width.

    Use either a fixed number of cells per arc or a target step.
    """

    cells_per_arc: int = 1000
    step: float | None = None

    def cells(self, length):
        if self.step is not None:
            return max(1, math.ceil(length / self.step - 1e-12))
        return self.cells_per_arc


@dataclass(frozen=True)
class SpeedProfile:
    lam: np.ndarray
    w: np.ndarray
    engine: object = EXACT

    @classmethod
    def from_points(cls, pts, engine=EXACT):
        lam = np.array([p[0] for p in pts], dtype=float)
        w = np.array([p[1] for p in pts], dtype=float)
        return cls(lam, w, engine)

    @property
    def length(self):
        return float(self.lam[-1] - self.lam[0]) if len(self.lam) else 0.0

    def points(self):
        return list(zip(self.lam.tolist(), self.w.tolist()))

    def __call__(self, x):
        """Right-continuous evaluation (at a jump the later value is returned)."""
        x = np.asarray(x, dtype=float)
        lam, w = self.lam, self.w
        i = np.searchsorted(lam, x, side="right") - 1
        i = np.clip(i, 0, len(lam) - 1)
        j = np.minimum(i + 1, len(lam) - 1)
        a, b = lam[i], lam[j]
        wa, wb = w[i], w[j]
        with np.errstate(invalid="ignore", divide="ignore"):
            t = np.where(b > a, (x - a) / np.where(b > a, b - a, 1.0), 0.0)
            out = np.where(wa == wb, wa, wa + (wb - wa) * t)
            out = np.where(np.isnan(out), wa, out)
        return out if out.ndim else float(out)

    def speed(self, x):
        return np.sqrt(self(x))

    def cumulative_time(self):
        """Time elapsed at each stored coordinate."""
        d = np.diff(self.lam)
        seg = _segment_times(d, self.w[:-1], self.w[1:])
        return np.concatenate([[0.0], np.cumsum(seg)])


def _segment_times(d, wa, wb):
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.sqrt(wa) + np.sqrt(wb)
        t = np.where(d > 0, 2.0 * d / s, 0.0)
        t = np.where((d > 0) & np.isinf(s), 0.0, t)
    return t


def travel_time(profile: SpeedProfile) -> float:
    """Integral of 1/sqrt(w) along the profile (infinite if w vanishes on an interval)."""
    if len(profile.lam) < 2:
        return 0.0
    return float(np.sum(_segment_times(np.diff(profile.lam), profile.w[:-1], profile.w[1:])))


def points_time(pts) -> float:
    total = 0.0
    for (a, wa), (b, wb) in zip(pts, pts[1:]):
        d = b - a
        if d <= 0:
            continue
        s = math.sqrt(wa) + math.sqrt(wb)
        if s == 0.0:
            return INF
        if s != INF:
            total += 2.0 * d / s
    return total


# ---------------------------------------------------------------------------
# exact ramps on piece lists

def _push(pts, x, w):
    if pts and pts[-1][0] == x and pts[-1][1] == w:
        return
    pts.append((x, w))


def forward_points(pieces, w0, start=0.0):
    """Forward clipped ramp as a point list.  ``pieces`` are
    (a, b, mu_minus, mu_plus, alpha_minus, alpha_plus) tuples."""
    pts = [(start, w0)]
    w = w0
    for a, b, _, mp, _, ap in pieces:
        if w > mp:
            w = mp
            _push(pts, a, w)
        if w < mp and ap == INF:
            w = mp
            _push(pts, a, w)
        if w >= mp:
            _push(pts, b, w)
            continue
        if ap > 0:
            x = a + (mp - w) / ap
            if x < b:
                _push(pts, x, mp)
                _push(pts, b, mp)
                w = mp
                continue
            w = w + ap * (b - a)
        _push(pts, b, w)
    return pts


def mirror_pieces(pieces, length):
    return [(length - b, length - a, mm, mp, -ap, -am)
            for a, b, mm, mp, am, ap in reversed(pieces)]


def backward_points(pieces, length, w_end):
    rev = forward_points(mirror_pieces(pieces, length), w_end)
    return [(length - x, w) for x, w in reversed(rev)]


def _segments(pts):
    segs = []
    for (a, wa), (b, wb) in zip(pts, pts[1:]):
        if b > a:
            segs.append((a, b, wa, wb))
    return segs


def _interp(seg, x):
    a, b, wa, wb = seg
    if wa == wb:
        return wa
    if x <= a:
        return wa
    if x >= b:
        return wb
    return wa + (wb - wa) * (x - a) / (b - a)


def meet_points(p1, p2):
    """Pointwise minimum of two point lists over the same interval."""
    s1, s2 = _segments(p1), _segments(p2)
    if not s1 or not s2:
        # zero-length domain
        return [(p1[0][0], min(p1[0][1], p2[0][1]))]
    out = []
    i = j = 0
    while i < len(s1) and j < len(s2):
        f, g = s1[i], s2[j]
        x0 = max(f[0], g[0])
        x1 = min(f[1], g[1])
        if x1 > x0:
            f0, f1 = _interp(f, x0), _interp(f, x1)
            g0, g1 = _interp(g, x0), _interp(g, x1)
            _push(out, x0, min(f0, g0))
            d0, d1 = f0 - g0, f1 - g1
            if (d0 < 0 < d1 or d1 < 0 < d0) and math.isfinite(d0) and math.isfinite(d1):
                xc = x0 + (x1 - x0) * d0 / (d0 - d1)
                if x0 < xc < x1:
                    wc = f0 + (f1 - f0) * (xc - x0) / (x1 - x0)
                    _push(out, xc, wc)
            _push(out, x1, min(f1, g1))
        if f[1] <= g[1]:
            i += 1
        if g[1] <= f[1]:
            j += 1
    return out


def simplify_points(pts, rel=1e-12):
    """Drop interior points where the profile is continuous and straight."""
    if len(pts) <= 2:
        return list(pts)
    out = [pts[0]]
    for k in range(1, len(pts) - 1):
        xa, wa = out[-1]
        x, w = pts[k]
        xb, wb = pts[k + 1]
        if xa < x < xb and all(map(math.isfinite, (wa, w, wb))):
            pred = wa + (wb - wa) * (x - xa) / (xb - xa)
            if abs(pred - w) <= rel * max(1.0, abs(w)):
                continue
        out.append(pts[k])
    out.append(pts[-1])
    return out


def first_violation(pts, pieces, check_from=0.0, tol=TOL):
    """First interval where the profile dips below mu_minus, or None."""
    if all(p[2] == 0.0 for p in pieces):
        return None
    segs = _segments(pts)
    bad = None
    i = j = 0
    while i < len(segs) and j < len(pieces):
        s, p = segs[i], pieces[j]
        x0, x1 = max(s[0], p[0], check_from), min(s[1], p[1])
        if x1 > x0:
            m = p[2]
            lim = m - tol * max(1.0, m)
            w0, w1 = _interp(s, x0), _interp(s, x1)
            if w0 < lim or w1 < lim:
                # sub-interval of [x0, x1] where w < m
                if w0 < m and w1 < m:
                    a, b = x0, x1
                elif w0 < m:
                    a, b = x0, x0 + (x1 - x0) * (m - w0) / (w1 - w0)
                else:
                    a, b = x0 + (x1 - x0) * (m - w0) / (w1 - w0), x1
                if bad is None:
                    bad = [a, b]
                elif a <= bad[1] + tol:
                    bad[1] = max(bad[1], b)
                else:
                    return tuple(bad)
            elif bad is not None:
                return tuple(bad)
        if s[1] <= p[1]:
            i += 1
        if p[1] <= s[1]:
            j += 1
    return None if bad is None else tuple(bad)


@dataclass
class PlanResult:
    profile: SpeedProfile
    time: float
    feasible: bool
    violation: tuple | None = None
    reason: str = ""
    forward: SpeedProfile | None = field(default=None, repr=False)
    backward: SpeedProfile | None = field(default=None, repr=False)


def _start_value(bounds, w0):
    if not bounds.pieces:
        return 0.0 if w0 is None else w0
    cap = bounds.pieces[0][3]
    if w0 is None:
        return cap
    if w0 > cap + TOL * max(1.0, cap):
        raise StartAboveCapError(f"initial squared speed {w0} above cap {cap}")
    return min(w0, cap)


def _end_value(bounds, w_end):
    if not bounds.pieces:
        return w_end
    cap = bounds.pieces[-1][3]
    if w_end is None:
        return cap
    if w_end > cap + TOL * max(1.0, cap):
        raise EndAboveCapError(f"final squared speed {w_end} above cap {cap}")
    return min(w_end, cap)


def plan_points(bounds: PathBounds, w0, w_end, check_from=0.0):
    """Core exact planner.  Returns (points, time, violation or reason or None).

    ``w0``/``w_end`` of None mean the boundary is free (the cap is used).
    """
    pieces = bounds.pieces
    L = bounds.length
    if not pieces:
        a = 0.0 if w0 is None else w0
        if w_end is not None and abs(a - w_end) > TOL * max(1.0, a):
            return [(0.0, a)], INF, "boundary speeds differ on an empty path"
        return [(0.0, a)], 0.0, None
    ws = _start_value(bounds, w0)
    we = _end_value(bounds, w_end)
    fp = forward_points(pieces, ws)
    bp = backward_points(pieces, L, we)
    pts = simplify_points(meet_points(fp, bp))
    if w0 is not None and pts[0][1] < ws - TOL * max(1.0, ws):
        return pts, INF, "initial squared speed cannot be met"
    if w_end is not None and pts[-1][1] < we - TOL * max(1.0, we):
        return pts, INF, "final squared speed cannot be met"
    bad = first_violation(pts, pieces, check_from)
    if bad is not None:
        return pts, INF, bad
    return pts, points_time(pts), None


def plan_time(pieces, length, w0, w_end):
    """Travel time of the optimal profile (inf if infeasible).

    Same result as ``plan_points`` for bounds without a speed floor, without
    building the profile.  Boundary values must already be clipped to the cap;
    None still means a free end.
    """
    ws = pieces[0][3] if w0 is None else w0
    we = pieces[-1][3] if w_end is None else w_end
    s1 = _segments(forward_points(pieces, ws))
    s2 = _segments(backward_points(pieces, length, we))
    sqrt = math.sqrt
    total = 0.0
    first = last = None
    i = j = 0
    n1, n2 = len(s1), len(s2)
    while i < n1 and j < n2:
        f, g = s1[i], s2[j]
        x0 = f[0] if f[0] > g[0] else g[0]
        x1 = f[1] if f[1] < g[1] else g[1]
        if x1 > x0:
            f0, f1 = _interp(f, x0), _interp(f, x1)
            g0, g1 = _interp(g, x0), _interp(g, x1)
            m0 = f0 if f0 < g0 else g0
            m1 = f1 if f1 < g1 else g1
            if first is None:
                first = m0
            last = m1
            d0, d1 = f0 - g0, f1 - g1
            if (d0 < 0 < d1 or d1 < 0 < d0) and d0 - d1 != INF and d1 - d0 != INF:
                xc = x0 + (x1 - x0) * d0 / (d0 - d1)
                wc = f0 + (f1 - f0) * (xc - x0) / (x1 - x0)
                parts = ((xc - x0, m0, wc), (x1 - xc, wc, m1))
            else:
                parts = ((x1 - x0, m0, m1),)
            for d, a, b in parts:
                if d > 0:
                    sa = sqrt(a) + sqrt(b)
                    if sa == 0.0:
                        return INF
                    if sa != INF:
                        total += 2.0 * d / sa
        if f[1] <= g[1]:
            i += 1
        if g[1] <= f[1]:
            j += 1
    if w0 is not None and first < ws - TOL * max(1.0, ws):
        return INF
    if w_end is not None and last < we - TOL * max(1.0, we):
        return INF
    return total


def forward_operator(bounds: PathBounds, w0=0.0, engine=EXACT) -> SpeedProfile:
    if engine != EXACT:
        from .grid import grid_forward
        return grid_forward(bounds, w0, engine)
    ws = _start_value(bounds, w0)
    if not bounds.pieces:
        return SpeedProfile.from_points([(0.0, ws)])
    return SpeedProfile.from_points(simplify_points(forward_points(bounds.pieces, ws)))


def backward_operator(bounds: PathBounds, w_end=0.0, engine=EXACT) -> SpeedProfile:
    if engine != EXACT:
        from .grid import grid_backward
        return grid_backward(bounds, w_end, engine)
    we = _end_value(bounds, w_end)
    if not bounds.pieces:
        return SpeedProfile.from_points([(0.0, we)])
    return SpeedProfile.from_points(
        simplify_points(backward_points(bounds.pieces, bounds.length, we)))


def meet(a: SpeedProfile, b: SpeedProfile) -> SpeedProfile:
    if abs(a.lam[0] - b.lam[0]) > 1e-12 or abs(a.lam[-1] - b.lam[-1]) > 1e-9:
        raise DomainMismatchError("profiles live on different intervals")
    if a.engine != EXACT or b.engine != EXACT:
        if len(a.lam) == len(b.lam) and np.array_equal(a.lam, b.lam):
            return SpeedProfile(a.lam.copy(), np.minimum(a.w, b.w), a.engine)
    return SpeedProfile.from_points(simplify_points(meet_points(a.points(), b.points())))


def plan_speed(bounds: PathBounds, w0=0.0, w_end=0.0, engine=EXACT) -> PlanResult:
    """Time-optimal squared-speed profile on a fixed path.

    ``w0`` and ``w_end`` are imposed exactly; pass None for a free boundary.
    Infeasible instances come back with ``feasible=False`` and an infinite
    time, together with the first offending interval when there is one.
    """
    if engine != EXACT:
        from .grid import grid_plan
        return grid_plan(bounds, w0, w_end, engine)
    pts, t, why = plan_points(bounds, w0, w_end)
    prof = SpeedProfile.from_points(pts)
    if why is None:
        return PlanResult(prof, t, True)
    if isinstance(why, tuple):
        return PlanResult(prof, INF, False, why, "squared speed below mu_minus")
    return PlanResult(prof, INF, False, None, why)
