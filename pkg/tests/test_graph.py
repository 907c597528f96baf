import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from basp.errors import DuplicateArcError, InvalidBoundsError, NotAPathError
from basp.graph import INF, SAMPLED, ArcBounds, RoadGraph, concat_bounds, suffix
from basp.instances import chain_example, example_one


def line_graph(lengths, caps):
    g = RoadGraph()
    for i in range(len(lengths) + 1):
        g.add_node(str(i))
    for i, (ln, cap) in enumerate(zip(lengths, caps)):
        g.add_arc(i, i + 1, ln, ArcBounds.constant(cap, 1.0))
    return g


def test_add_arc():
    g = RoadGraph()
    g.add_node("a")
    g.add_node("b")
    g.add_arc(0, 1, 2.0, ArcBounds.constant(1.0, 1.0))
    assert len(g.arcs) == 1
    assert g.arc(0, 1).length == 2.0


def test_duplicate_arc_rejected():
    g = line_graph([1.0], [1.0])
    with pytest.raises(DuplicateArcError) as exc:
        g.add_arc(0, 1, 3.0, ArcBounds.constant(1.0, 1.0))
    assert exc.value.code == "DUPLICATE_ARC"


def test_bad_signs_rejected():
    with pytest.raises(InvalidBoundsError) as exc:
        ArcBounds.constant(1.0, -1.0, -1.0)
    assert exc.value.code == "INVALID_BOUNDS"
    with pytest.raises(InvalidBoundsError):
        ArcBounds.constant(1.0, 1.0, 0.5)
    with pytest.raises(InvalidBoundsError):
        ArcBounds.constant(1.0, 1.0, mu_minus=2.0)


def test_breakpoints_validated():
    with pytest.raises(InvalidBoundsError):
        ArcBounds(mu_plus=(1, 2), alpha_plus=1, alpha_minus=-1, breakpoints=(0.0, 0.0))
    b = ArcBounds(mu_plus=(1, 2), alpha_plus=1, alpha_minus=-1, breakpoints=(0.0, 1.0))
    g = RoadGraph()
    g.add_node()
    g.add_node()
    with pytest.raises(InvalidBoundsError):
        g.add_arc(0, 1, 1.0, b)     # breakpoint at the arc end
    with pytest.raises(InvalidBoundsError):
        g.add_arc(0, 1, 0.0, b)     # zero length needs constant bounds
    g.add_arc(0, 1, 1.5, b)


def test_sampled_bounds_are_steps():
    b = ArcBounds.sampled(0.5, mu_plus=(1, 2, 3), alpha_plus=1, alpha_minus=-1)
    assert b.kind == SAMPLED
    assert b.breakpoints == (0.0, 0.5, 1.0)
    g = RoadGraph()
    g.add_node()
    g.add_node()
    with pytest.raises(InvalidBoundsError):
        g.add_arc(0, 1, 2.0, b)
    g.add_arc(0, 1, 1.5, b)
    pb = concat_bounds(g, (0, 1))
    assert pb.mu_plus(0.49) == 1 and pb.mu_plus(0.5) == 2 and pb.mu_plus(1.4) == 3


def test_chain_concat_steps_down():
    g = chain_example()
    pb = concat_bounds(g, (0, 1, 2))
    assert pb.length == 2.0
    assert pb.mu_plus(0.999) == 1.0
    assert pb.mu_plus(1.0) == 2.0 / 3.0     # right-continuous at the junction
    assert pb.junctions == (0.0, 1.0, 2.0)


def test_single_arc_identity():
    g = example_one()
    arc = g.arc(0, 2)
    pb = concat_bounds(g, (0, 2))
    assert pb.length == arc.length
    assert pb.pieces == arc.pieces


def test_zero_length_arc_junction():
    g = RoadGraph()
    for _ in range(4):
        g.add_node()
    g.add_arc(0, 1, 1.0, ArcBounds.constant(1.0, 1.0))
    g.add_arc(1, 2, 0.0, ArcBounds.constant(5.0, 2.0))
    g.add_arc(2, 3, 2.0, ArcBounds.constant(3.0, 3.0))
    pb = concat_bounds(g, (0, 1, 2, 3))
    assert pb.junctions == (0.0, 1.0, 1.0, 3.0)
    for lam in [0.0, 0.3, 0.99]:
        assert pb.mu_plus(lam) == 1.0 and pb.alpha_plus(lam) == 1.0
    for lam in [1.0, 1.5, 2.99]:
        assert pb.mu_plus(lam) == 3.0 and pb.alpha_plus(lam) == 3.0


def test_not_a_path():
    g = chain_example()
    with pytest.raises(NotAPathError):
        concat_bounds(g, (0, 2))


def test_suffix():
    assert suffix("s12f", 2) == ("2", "f")
    assert suffix("s1", 4) == ("s", "1")
    with pytest.raises(ValueError):
        suffix("s1", 0)


@given(st.lists(st.integers(0, 9), min_size=1, max_size=12), st.integers(1, 15))
def test_suffix_idempotent_and_length(word, k):
    s = suffix(word, k)
    assert suffix(s, k) == s
    assert len(s) == min(len(word), k)
    assert tuple(word[len(word) - len(s):]) == s


def test_infinite_bounds_allowed():
    b = ArcBounds.constant(INF, INF)
    assert b.alpha_minus == (-INF,)
    r = ArcBounds.constant(2.0, 1.0).relaxed()
    assert r.alpha_plus == (INF,) and r.alpha_minus == (-INF,) and r.mu_plus == (2.0,)


def test_query_validation():
    g = chain_example()
    with pytest.raises(ValueError):
        g.set_query(0, set())
    with pytest.raises(ValueError):
        g.set_query(0, {9})
    with pytest.raises(ValueError):
        g.set_query(0, {3}, -1.0)
    g.set_query(0, {3}, 0.5, None)
    assert g.w_target is None


def random_multi_arc_graph(rng, n_arcs):
    g = RoadGraph()
    for _ in range(n_arcs + 1):
        g.add_node()
    for i in range(n_arcs):
        length = float(rng.uniform(0.5, 3.0))
        n = int(rng.integers(1, 4))
        bps = [0.0] + sorted(float(x) for x in rng.uniform(0.05, length - 0.05, n - 1))
        if len(set(bps)) != len(bps):
            bps, n = [0.0], 1
        b = ArcBounds(mu_plus=tuple(rng.uniform(0.5, 5.0, n)),
                      alpha_plus=tuple(rng.uniform(0.1, 3.0, n)),
                      alpha_minus=tuple(-rng.uniform(0.1, 3.0, n)),
                      mu_minus=tuple(rng.uniform(0.0, 0.3, n)), breakpoints=tuple(bps))
        g.add_arc(i, i + 1, length, b)
    return g


def arc_value(b, x, name):
    i = max(j for j, bp in enumerate(b.breakpoints) if bp <= x)
    return getattr(b, name)[i]


def test_concat_matches_owning_arc():
    import numpy as np
    rng = np.random.default_rng(3)
    for trial in range(1000):
        if trial % 50 == 0:
            g = random_multi_arc_graph(rng, 4)
            word = tuple(range(5))
            pb = concat_bounds(g, word)
            starts = [0.0]
            for a, b in zip(word, word[1:]):
                starts.append(starts[-1] + g.arc(a, b).length)
        lam = float(rng.uniform(0, pb.length))
        i = max(j for j in range(4) if starts[j] <= lam)
        arc = g.arc(i, i + 1)
        for name in ("mu_minus", "mu_plus", "alpha_minus", "alpha_plus"):
            assert getattr(pb, name)(lam) == arc_value(arc.bounds, lam - starts[i], name)


@settings(max_examples=100)
@given(st.lists(st.floats(0.0, 10.0), min_size=2, max_size=8), st.data())
def test_word_length_additive(lengths, data):
    g = line_graph(lengths, [1.0] * len(lengths))
    cut = data.draw(st.integers(1, len(lengths)))
    p = tuple(range(len(lengths) + 1))
    total = g.path_length(p)
    parts = g.path_length(p[:cut + 1]) + g.path_length(p[cut:])
    assert math.isclose(total, parts, rel_tol=1e-12, abs_tol=1e-12)
    assert math.isclose(concat_bounds(g, p).length, total, rel_tol=1e-12, abs_tol=1e-12)
