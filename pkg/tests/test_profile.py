import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from basp.errors import DomainMismatchError, EndAboveCapError, StartAboveCapError
from basp.graph import ArcBounds, RoadGraph, concat_bounds, pieces_bounds
from basp.instances import chain_example, example_one
from basp.profile import (SpeedProfile, backward_operator, forward_operator, meet, plan_speed,
                          travel_time)
from basp.reach import ell_plus

from helpers import cap_at, exact_time, fine_forward, random_pieces, split_pieces

SQRT2, SQRT3 = math.sqrt(2.0), math.sqrt(3.0)


def one_arc(length, cap, ap, am=None, mm=0.0):
    return pieces_bounds([(0.0, length, mm, cap, -ap if am is None else am, ap)])


def lin(lam, w):
    return SpeedProfile(np.asarray(lam, float), np.asarray(w, float))


# forward / backward ------------------------------------------------------

def test_forward_unit_ramp():
    f = forward_operator(one_arc(1.0, 1.0, 1.0), 0.0)
    assert f.points() == [(0.0, 0.0), (1.0, 1.0)]
    assert f(0.25) == 0.25


def test_forward_starts_saturated():
    for ap in [0.0, 0.5, 7.0]:
        f = forward_operator(one_arc(2.0, 1.7, ap), 1.7)
        assert np.all(f.w == 1.7)


def test_forward_chain_against_fine_grid():
    pieces = concat_bounds(chain_example(), (0, 1, 2)).pieces
    f = forward_operator(pieces_bounds(pieces), 0.0)
    lam, w = fine_forward(pieces, 0.0, 1e-4)
    assert np.max(np.abs(f(lam) - w)) < 1e-3
    # closed form: min(lambda, 1) then the 2/3 cap
    assert f.points() == [(0.0, 0.0), (1.0, 1.0), (1.0, 2.0 / 3.0), (2.0, 2.0 / 3.0)]


def test_backward_unit_ramp():
    b = backward_operator(one_arc(1.0, 1.0, 1.0), 0.0)
    assert b(0.0) == 1.0 and b(0.5) == 0.5 and b(1.0) == 0.0


def test_backward_chain_meets_cap_at_four_thirds():
    pb = concat_bounds(chain_example(), (0, 1, 2))
    b = backward_operator(pb, 0.0)
    assert b(1.5) == pytest.approx(0.5, abs=1e-12)
    assert b(4.0 / 3.0) == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert b(1.2) == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_backward_saturated_end():
    b = backward_operator(one_arc(3.0, 2.0, 1.0), 2.0)
    assert np.all(b.w == 2.0)


def test_boundary_above_cap():
    with pytest.raises(StartAboveCapError):
        forward_operator(one_arc(1.0, 1.0, 1.0), 2.0)
    with pytest.raises(EndAboveCapError):
        backward_operator(one_arc(1.0, 1.0, 1.0), 2.0)


# meet --------------------------------------------------------------------

def test_meet_crossing():
    m = meet(lin([0, 1], [0, 1]), lin([0, 1], [1, 0]))
    assert m(0.5) == pytest.approx(0.5)
    assert max(m.w) == pytest.approx(0.5)


def test_meet_below_and_idempotent():
    f = lin([0, 1, 2], [0, 1, 1])
    b = lin([0, 2], [5, 5])
    assert meet(f, b).points() == f.points()
    assert meet(f, f).points() == f.points()


def test_meet_domain_mismatch():
    with pytest.raises(DomainMismatchError):
        meet(lin([0, 1], [0, 1]), lin([0, 2], [0, 1]))


# plan_speed --------------------------------------------------------------

def test_plan_triangle_example_one_direct_arc():
    res = plan_speed(one_arc(3.0, 3.0, 2.0), 0.0, 0.0)
    assert res.feasible
    assert res.profile(1.5) == pytest.approx(3.0)
    assert res.time == pytest.approx(2 * SQRT3, abs=1e-12)
    # under a dv/dt reading of the bounds the same arc would take sqrt(6)
    assert res.time != pytest.approx(math.sqrt(6.0))


def test_plan_unit_triangle():
    res = plan_speed(one_arc(4.0, 4.0, 1.0), 0.0, 0.0)
    assert res.profile(2.0) == pytest.approx(2.0)
    assert res.time == pytest.approx(4 * SQRT2, abs=1e-12)
    g = example_one()
    assert plan_speed(concat_bounds(g, (0, 1, 2))).time == pytest.approx(4 * SQRT2, abs=1e-12)


def test_travel_time_closed_forms():
    assert travel_time(lin([0, 4], [4, 4])) == pytest.approx(2.0)
    assert travel_time(lin([0, 1], [0, 1])) == pytest.approx(2.0)
    assert travel_time(lin([0, 1], [0, 0])) == math.inf


def test_zero_length_arc_costs_nothing():
    g = RoadGraph()
    for _ in range(3):
        g.add_node()
    g.add_arc(0, 1, 0.0, ArcBounds.constant(9.0, 1.0))
    g.add_arc(1, 2, 2.0, ArcBounds.constant(9.0, 1.0))
    assert plan_speed(concat_bounds(g, (0, 1, 2))).time == pytest.approx(
        plan_speed(concat_bounds(g, (1, 2))).time)


def test_floor_makes_path_infeasible_with_interval():
    # a floor of 0.5 on [1, 2) cannot be met when starting from rest with slope 0.25
    pieces = [(0.0, 1.0, 0.0, 4.0, -1.0, 0.25), (1.0, 3.0, 0.5, 4.0, -1.0, 0.25)]
    res = plan_speed(pieces_bounds(pieces), 0.0, 0.0)
    assert not res.feasible and res.time == math.inf
    a, b = res.violation
    assert a == pytest.approx(1.0) and b == pytest.approx(2.0)
    pieces[0] = (0.0, 1.0, 0.0, 4.0, -1.0, 1.0)
    assert not plan_speed(pieces_bounds(pieces), 0.0, 0.0).feasible   # still forced to stop at 3
    pieces[1] = (1.0, 3.0, 0.5, 4.0, -1.0, 1.0)
    assert plan_speed(pieces_bounds(pieces), 0.0, None).feasible


def grid_plan_oracle(pieces, w0, w_end, step):
    """min of first-order forward and backward ramps on a uniform grid."""
    lam, f = fine_forward(pieces, w0, step)
    length = pieces[-1][1]
    mirrored = [(length - b, length - a, mm, mp, -ap, -am)
                for a, b, mm, mp, am, ap in reversed(pieces)]
    _, bw = fine_forward(mirrored, w_end, step)
    return lam, np.minimum(f, bw[::-1])


def test_floor_feasibility_matches_grid_oracle():
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 20:
        pieces = random_pieces(rng, n=3, floor=True, max_len=2.0)
        pieces = [(round(a, 2), round(b, 2), *rest) for a, b, *rest in pieces]
        lam, w = grid_plan_oracle(pieces, 0.0, 0.0, 1e-3)
        floor = np.array([next(p[2] for p in pieces if p[0] <= x < p[1]) if x < lam[-1] else 0.0
                          for x in lam])
        margin = np.min(w - floor)
        if abs(margin) < 0.05:
            continue        # too close to the decision boundary for a grid oracle
        res = plan_speed(pieces_bounds(pieces), 0.0, 0.0)
        assert res.feasible == (margin > 0)
        checked += 1


# profile invariants and properties ----------------------------------------

def check_profile(res, pieces):
    p = res.profile
    assert np.all(p.w >= -1e-12)
    for (a, wa), (b, wb) in zip(p.points(), p.points()[1:]):
        if b - a > 1e-12:
            mid = 0.5 * (a + b)
            q = next(q for q in pieces if q[0] <= mid < q[1])
            slope = (wb - wa) / (b - a)
            assert q[4] - 1e-9 <= slope <= q[5] + 1e-9
            # both ends of a segment sit under the cap of the piece that owns it
            assert max(wa, wb) <= q[3] + 1e-9


def test_profile_invariants_random():
    rng = np.random.default_rng(5)
    for _ in range(200):
        pieces = random_pieces(rng)
        res = plan_speed(pieces_bounds(pieces), 0.0, 0.0)
        assert res.feasible
        check_profile(res, pieces)
        assert travel_time(res.profile) == pytest.approx(res.time, rel=1e-12)
        assert exact_time(res.profile.lam, res.profile.w) == pytest.approx(res.time, rel=1e-12)


def random_feasible_profile(rng, pieces, w0, w_end, n=400):
    """Random profile obeying caps and slopes on a grid through every breakpoint."""
    length = pieces[-1][1]
    lam = np.union1d(np.linspace(0, length, n), [p[0] for p in pieces])
    caps = np.array([min(cap_at(pieces, x), cap_at(pieces, max(x - 1e-12, 0.0))) for x in lam])
    u = caps * rng.uniform(0.0, 1.0, len(lam)) ** 0.3
    u[0] = min(u[0], w0)
    u[-1] = min(u[-1], w_end)
    d = np.diff(lam)
    mids = 0.5 * (lam[1:] + lam[:-1])
    ap = np.array([next(p[5] for p in pieces if p[0] <= m < p[1]) for m in mids])
    am = np.array([next(p[4] for p in pieces if p[0] <= m < p[1]) for m in mids])
    for i in range(1, len(lam)):
        u[i] = min(u[i], u[i - 1] + ap[i - 1] * d[i - 1])
    for i in range(len(lam) - 2, -1, -1):
        u[i] = min(u[i], u[i + 1] - am[i] * d[i])
    return lam, np.maximum(u, 0.0)


def test_maximality_against_random_feasible_profiles():
    rng = np.random.default_rng(2)
    for _ in range(100):
        pieces = random_pieces(rng)
        w0 = float(rng.uniform(0, pieces[0][3]))
        we = float(rng.uniform(0, pieces[-1][3]))
        res = plan_speed(pieces_bounds(pieces), w0, we)
        lam, u = random_feasible_profile(rng, pieces, w0, we)
        assert np.all(u <= res.profile(lam) + 1e-9)


piece_lists = st.lists(
    st.tuples(st.floats(0.1, 3.0), st.floats(0.2, 5.0), st.floats(0.1, 3.0),
              st.floats(0.1, 3.0)),
    min_size=1, max_size=6)


def to_pieces(layout):
    out, x = [], 0.0
    for d, mp, ap, am in layout:
        out.append((x, x + d, 0.0, mp, -am, ap))
        x += d
    return out


@settings(max_examples=200, deadline=None)
@given(piece_lists, st.floats(0.01, 0.99))
def test_superadditivity(layout, frac):
    pieces = to_pieces(layout)
    cut = frac * pieces[-1][1]
    left, right = split_pieces(pieces, cut)
    whole = plan_speed(pieces_bounds(pieces), 0.0, 0.0).time
    # zero speed at the outer ends, the cut itself is unconstrained on both sides
    t1 = plan_speed(pieces_bounds(left), 0.0, None).time
    t2 = plan_speed(pieces_bounds(right), None, 0.0).time
    assert whole >= t1 + t2 - 1e-9


@settings(max_examples=200, deadline=None)
@given(piece_lists, st.lists(st.floats(1.0, 3.0), min_size=4, max_size=4))
def test_relaxation_never_slower(layout, widen):
    pieces = to_pieces(layout)
    wider = [(a, b, mm, mp * widen[0], am * widen[1], ap * widen[2])
             for a, b, mm, mp, am, ap in pieces]
    t = plan_speed(pieces_bounds(pieces), 0.0, 0.0).time
    assert plan_speed(pieces_bounds(wider), 0.0, 0.0).time <= t + 1e-9


@settings(max_examples=200, deadline=None)
@given(piece_lists, st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_forward_passes_merge_after_saturation(layout, a, b):
    pieces = to_pieces(layout)
    pb = pieces_bounds(pieces)
    cap0 = pieces[0][3]
    f1 = forward_operator(pb, a * cap0)
    f2 = forward_operator(pb, b * cap0)
    start = ell_plus(pb)
    if start > pb.length:
        return
    lam = np.linspace(start, pb.length, 50)
    assert np.max(np.abs(f1(lam) - f2(lam))) <= 1e-9


def test_profile_tail_independent_of_prefix():
    rng = np.random.default_rng(8)
    tested = 0
    for _ in range(300):
        q = random_pieces(rng)
        lq = q[-1][1]
        start_q = ell_plus(pieces_bounds(q))
        if start_q >= lq:
            continue
        p1 = random_pieces(rng)
        p2 = random_pieces(rng)
        profiles = []
        for p in (p1, p2):
            off = p[-1][1]
            full = p + [(a + off, b + off, *rest) for a, b, *rest in q]
            res = plan_speed(pieces_bounds(full), 0.0, 0.0)
            lam = np.linspace(start_q, lq, 40)
            profiles.append(res.profile(lam + off))
        assert np.max(np.abs(profiles[0] - profiles[1])) <= 1e-9
        tested += 1
    assert tested > 50
