"""Saturation lengths of a path.

ell_plus is the first coordinate where a ramp started from standstill at the
beginning of the path (climbing at alpha_plus, ignoring the cap) reaches the
cap.  Past that point the forward ramp no longer depends on the initial
speed.  ell_minus is the mirror notion measured from the end.  A path is
saturating when ell_plus <= ell_minus: then its middle part is planned the
same way whatever happens before and after it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnboundedError
from .graph import PathBounds, RoadGraph
from .profile import EXACT, TOL, mirror_pieces

INF = math.inf


def _first_touch(pieces):
    ramp = 0.0
    prev_cap = None
    for a, b, _, mp, _, ap in pieces:
        cap_here = mp if prev_cap is None else min(prev_cap, mp)
        if math.isfinite(cap_here) and ramp >= cap_here - TOL * max(1.0, cap_here):
            return a
        if math.isfinite(mp):
            if ap == INF:
                return a
            if ap > 0:
                x = a + (mp - ramp) / ap
                if x <= b + 1e-12 * max(1.0, abs(b)):
                    return min(x, b)
        ramp = ramp + ap * (b - a) if ap != INF else INF
        prev_cap = mp
    return INF


def ell_plus(bounds: PathBounds, engine=EXACT) -> float:
    if engine != EXACT:
        from .grid import grid_ell_plus
        return grid_ell_plus(bounds, engine)
    return _first_touch(bounds.pieces)


def ell_minus(bounds: PathBounds, engine=EXACT) -> float:
    if engine != EXACT:
        from .grid import grid_ell_minus
        return grid_ell_minus(bounds, engine)
    x = _first_touch(mirror_pieces(bounds.pieces, bounds.length))
    return -INF if math.isinf(x) else bounds.length - x


@dataclass(frozen=True)
class ReachBounds:
    ell_plus: float
    ell_minus: float

    @property
    def saturating(self):
        return self.ell_plus <= self.ell_minus


def reach_bounds(bounds: PathBounds, engine=EXACT) -> ReachBounds:
    return ReachBounds(ell_plus(bounds, engine), ell_minus(bounds, engine))


def is_saturating(bounds: PathBounds, engine=EXACT) -> bool:
    return reach_bounds(bounds, engine).saturating


def _arc_ratio(arc):
    """max mu_plus / (min acceleration magnitude * length) over one arc."""
    top = max(p[3] for p in arc.pieces) if arc.pieces else 0.0
    mags = [min(p[5], -p[4]) for p in arc.pieces]
    acc = min(mags) if mags else 0.0
    if arc.length == 0 or acc == 0:
        raise UnboundedError(f"arc {arc.tail}->{arc.head} has zero length or acceleration bound")
    if math.isinf(top):
        raise UnboundedError(f"arc {arc.tail}->{arc.head} has no finite speed cap")
    return top / (acc * arc.length)


def k_upper_bound(g: RoadGraph) -> int:
    """Number of nodes beyond which every path of g is saturating."""
    if not g.arcs:
        return 1
    ratio = max(_arc_ratio(a) for a in g.arcs)
    return 1 + math.ceil(2 * ratio - 1e-12)
