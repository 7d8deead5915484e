import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import pieces
from toomlab.cuts import Cut, close_cut, evaluate_cut
from toomlab.instances import bridged_blobs, random_closed_connected_cut, random_q_cut_instance, segment
from toomlab.lattice import PLANE, SiteSet, neighbors, random_connected_set
from toomlab.rules import apply_Q, apply_R, tile, tile_corners
from toomlab.suites import check_q_trace
from toomlab.transfer import (
    PullbackError,
    corner,
    covering_centers,
    decreasing_functional,
    pairs_P,
    pullback_cut_Q,
    pullback_cut_R,
)


def oracle_separates(S, cut) -> bool:
    return not any(p & cut.A1.members and p & cut.A2.members for p in pieces(S.members - cut.C.members))


def test_pairs_examples():
    P = pairs_P((0, 0))
    assert P[1] == {(-1, 0), (0, -1)}
    assert P[2] == {(1, 0), (1, -1)}
    assert P[3] == {(0, 1), (-1, 1)}
    assert P[1] | P[2] | P[3] == neighbors((0, 0))


@given(st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
def test_pairs_literal_definition(a):
    P = pairs_P(a)
    for i in (1, 2, 3):
        e = corner(a, i)
        literal = {(e[0] + dx, e[1] + dy) for dx in range(-2, 3) for dy in range(-2, 3)}
        literal = {b for b in literal if b != a and e in tile(b)}
        assert P[i] == literal and len(P[i]) == 2
    assert P[1] | P[2] | P[3] == neighbors(a)


def test_covering_centers_numbering():
    a = (3, 4)
    for i, b in enumerate(covering_centers(a), start=1):
        assert corner(b, i) == a


def test_decreasing_functional_drops_into_corner():
    for r in (1, 2, 3):
        p = (0, 0)
        others = [q for q in tile_corners(p) if q != corner(p, r)]
        assert all(decreasing_functional(r, corner(p, r)) < decreasing_functional(r, q) for q in others)


def test_pullback_R_seg3():
    S = segment(3)
    U = apply_R(S)
    assert U == SiteSet([(0, 0), (1, 0)])
    cut = Cut.of(U, [(1, 0)], [(0, 0)], [])
    res, mapping = pullback_cut_R(S, cut)
    assert len(res.C) == 1 and evaluate_cut(S, res).is_cut
    assert mapping[(1, 0)] in tile((1, 0))


def test_pullback_R_trivial_cut():
    S = random_connected_set(PLANE, 8, 1)
    U = apply_R(S)
    cut = Cut.of(U, [], U.members, [])
    res, mapping = pullback_cut_R(S, cut)
    assert res.C == SiteSet() and mapping == {}
    assert res.A1 == S & apply_Q(U)
    assert evaluate_cut(S, res).is_cut


def test_pullback_R_dumbbell_bridge():
    S = bridged_blobs(4, 3)
    assert len(S) == 33
    U = apply_R(S)
    cut = close_cut(U, Cut.of(U, [(6, 0)], [(5, 0)], [(7, 0)]))
    ev = evaluate_cut(U, cut)
    assert ev.is_cut and ev.closed and ev.connected
    res, _ = pullback_cut_R(S, cut)
    assert len(res.C) == 1 and evaluate_cut(S, res).is_cut


def test_pullback_R_rejects_open_cut():
    S = segment(5)
    U = apply_R(S)
    with pytest.raises(ValueError):
        pullback_cut_R(S, Cut.of(U, [(2, 0)], [(0, 0)], [(3, 0)]))


@settings(max_examples=120, deadline=None)
@given(st.integers(3, 14), st.integers(0, 100_000), st.integers(1, 3))
def test_pullback_R_properties(size, seed, k):
    rng = random.Random(seed)
    S = random_connected_set(PLANE, size, seed)
    U = apply_R(S)
    if len(U) < 2:
        return
    cut = random_closed_connected_cut(U, k, rng)
    if cut is None:
        return
    res, mapping = pullback_cut_R(S, cut)
    assert len(res.C) <= len(cut.C)
    assert all(mapping[a] in tile(a) and mapping[a] in S for a in cut.C)
    assert oracle_separates(S, res)


def test_pullback_Q_seg5():
    S = segment(5)
    QS = apply_Q(S)
    assert QS == SiteSet([(i, 0) for i in range(6)] + [(i, 1) for i in range(5)])
    C = [(2, 0), (2, 1)]
    A1 = [(0, 0), (1, 0), (0, 1), (1, 1)]
    A2 = [(3, 0), (4, 0), (5, 0), (3, 1), (4, 1)]
    cut = Cut.of(QS, C, A1, A2)
    res, trace = pullback_cut_Q(S, cut)
    assert len(res.C) == 1 and evaluate_cut(S, res).is_cut
    assert check_q_trace(S, cut, res, trace) == []


def test_pullback_Q_single_point():
    S = SiteSet([(0, 0)])
    QS = apply_Q(S)
    cut = Cut.of(QS, [(0, 0)], [(1, 0), (0, 1)], [])
    res, trace = pullback_cut_Q(S, cut)
    assert res.C == SiteSet() and trace.start == "a.1:superfluous"
    assert evaluate_cut(S, res).is_cut


def test_pullback_Q_errors():
    S = segment(5)
    QS = apply_Q(S)
    with pytest.raises(ValueError):
        pullback_cut_Q(S, Cut.of(QS, [], QS.members, []))
    with pytest.raises(ValueError):
        pullback_cut_Q(S, Cut.of(QS, [(2, 0)], [(0, 0)], [(3, 0)]))
    err = PullbackError("x", trace="partial")
    assert err.trace == "partial"


def preimage_matching_number(S, C) -> int:
    graph = nx.Graph()
    top = [("c", a) for a in C]
    graph.add_nodes_from(top)
    for a in C:
        for b in covering_centers(a):
            if b in S:
                graph.add_edge(("c", a), ("s", b))
    return len(nx.bipartite.hopcroft_karp_matching(graph, top_nodes=top)) // 2


def test_pullback_Q_site_with_tile_inside_C():
    # (0, 1) is in S but its whole tile lies in C; it must not bridge the sides
    S, cut = random_q_cut_instance(6283, max_size=10, max_k=4)
    assert any(all(p in cut.C for p in tile_corners(u)) for u in S)
    res, trace = pullback_cut_Q(S, cut)
    assert oracle_separates(S, res) and len(res.C) == len(cut.C) - 1


def test_pullback_Q_injectivity_can_be_impossible():
    # four cutting points whose tiles come from only two sites of S
    S, cut = random_q_cut_instance(18153, max_size=10, max_k=4)
    assert len(cut.C) == 4 and not cut.A2
    assert preimage_matching_number(S, cut.C) == 2
    res, _ = pullback_cut_Q(S, cut)
    assert len(res.C) == 2 and oracle_separates(S, res)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 1_000_000))
def test_pullback_Q_properties(seed):
    S, cut = random_q_cut_instance(seed, max_size=10, max_k=4)
    res, trace = pullback_cut_Q(S, cut)
    assert oracle_separates(S, res)
    assert len(res.C) <= len(cut.C) - 1
    if preimage_matching_number(S, cut.C) >= len(cut.C) - 1:
        assert len(res.C) == len(cut.C) - 1
        assert check_q_trace(S, cut, res, trace) == []
    for st_ in trace.steps:
        if st_.a_prime is not None and st_.a != trace.x:
            assert st_.a in tile(st_.a_prime)
