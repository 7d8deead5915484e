import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_Q, brute_R, brute_Rplus_max
from toomlab.lattice import PLANE, SiteSet, connected_components, torus
from toomlab.rules import (
    H0,
    H1,
    NEITHER,
    FailureEvent,
    Rule,
    Rplus_array,
    apply_Q,
    apply_R,
    apply_Rplus,
    apply_Rplus_max_form,
    evolve,
    from_array,
    is_homogeneous,
    iterate_until_erased,
    iterate_until_homogeneous,
    tile,
    to_array,
)

site_sets = st.frozensets(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), max_size=30)
seg5 = SiteSet([(i, 0) for i in range(5)])


def torus_sets(n):
    return st.frozensets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)))


def test_tile_examples():
    assert tile((0, 0)) == SiteSet([(0, 0), (1, 0), (0, 1)])
    assert tile((4, 4), torus(5)) == SiteSet([(4, 4), (0, 4), (4, 0)], torus(5))
    assert tile((2, 3)) == SiteSet([(2, 3), (3, 3), (2, 4)])


def test_R_examples():
    assert apply_R(SiteSet([(0, 0)])) == SiteSet()
    assert apply_R(SiteSet([(0, 0), (1, 0), (0, 1)])) == SiteSet([(0, 0)])
    assert apply_R(seg5) == SiteSet([(i, 0) for i in range(4)])
    ring = SiteSet([(i, 0) for i in range(5)], torus(5))
    assert apply_R(ring) == ring


def test_Q_examples():
    assert apply_Q(SiteSet()) == SiteSet()
    assert apply_Q(SiteSet([(0, 0)])) == SiteSet([(0, 0), (1, 0), (0, 1)])
    assert apply_Q(SiteSet([(0, 0), (1, 0), (2, 0)])) == SiteSet(
        [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1)]
    )


def test_Rplus_examples():
    assert apply_Rplus(seg5) == SiteSet([(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1)])
    assert apply_Rplus(SiteSet()) == SiteSet()
    full = SiteSet.full(torus(4))
    assert apply_Rplus(full) == full


@given(site_sets)
def test_operators_match_oracles(pts):
    S = SiteSet(pts)
    assert apply_R(S).members == brute_R(pts)
    assert apply_Q(S).members == brute_Q(pts)
    assert apply_Rplus(S).members == brute_Rplus_max(pts)
    assert apply_Rplus(S) == apply_Rplus_max_form(S)


@given(site_sets, site_sets)
def test_monotone(a, b):
    A, B = SiteSet(a), SiteSet(a | b)
    assert apply_R(A) <= apply_R(B)
    assert apply_Q(A) <= apply_Q(B)
    assert apply_Rplus(A) <= apply_Rplus(B)


@given(site_sets)
def test_commutation_and_Q_grows(pts):
    S = SiteSet(pts)
    assert apply_Q(apply_R(S)) <= apply_R(apply_Q(S))
    assert S <= apply_Q(S)


@given(site_sets)
def test_components_of_R(pts):
    S = SiteSet(pts)
    images = {apply_R(c) for c in connected_components(S)} - {SiteSet()}
    assert set(connected_components(apply_R(S))) == images
    for im in images:
        assert len(connected_components(im)) == 1


@given(st.sampled_from([3, 4, 5, 7]).flatmap(lambda n: st.tuples(st.just(n), torus_sets(n))))
def test_array_kernels_match_set_operators(case):
    n, pts = case
    S = SiteSet(pts, torus(n))
    grid = to_array(S)
    assert from_array(Rplus_array(grid), S.space) == apply_Rplus(S)


def test_fixed_points():
    T = torus(4)
    full = SiteSet.full(T)
    for fn in (apply_R, apply_Q, apply_Rplus):
        assert fn(SiteSet((), T)) == SiteSet((), T)
        assert fn(full) == full


def test_evolve_examples():
    two = SiteSet([(0, 0), (1, 0)])
    assert evolve(Rule.R, two, 1).states[1] == SiteSet([(0, 0)])
    tr = evolve("r", two, 1, [FailureEvent(1, (5, 5), 1)])
    assert tr.states[1] == SiteSet([(0, 0), (5, 5)])
    six = evolve(Rule.Q, SiteSet([(0, 0)]), 2).final
    assert six == apply_Q(apply_Q(SiteSet([(0, 0)]))) and len(six) == 6


def test_evolve_overlay_can_clear():
    tr = evolve("q", SiteSet([(0, 0)]), 1, [FailureEvent(1, (1, 0), 0)])
    assert tr.final == SiteSet([(0, 0), (0, 1)])


def test_evolve_errors():
    with pytest.raises(ValueError):
        evolve("r", seg5, 1, [FailureEvent(2, (0, 0), 1)])
    with pytest.raises(ValueError):
        evolve("r", SiteSet([(0, 0)], torus(4)), 1, [FailureEvent(1, (5, 0), 1)])
    with pytest.raises(ValueError):
        FailureEvent(0, (0, 0), 1)
    with pytest.raises(ValueError):
        Rule.parse("bogus")


def test_is_homogeneous():
    T = torus(4)
    assert is_homogeneous(SiteSet((), T)) == H0
    assert is_homogeneous(SiteSet.full(T)) == H1
    assert is_homogeneous(SiteSet([(0, 0)], T)) == NEITHER
    with pytest.raises(ValueError):
        is_homogeneous(seg5)


def test_erasure_examples():
    T = torus(5)
    ring = SiteSet([(i, 0) for i in range(5)], T)
    res = iterate_until_erased(ring)
    assert not res.erased and res.cycle_length == 1
    assert iterate_until_erased(ring - SiteSet([(0, 0)], T)).erased
    assert iterate_until_erased(seg5).erased


def test_homogeneous_iteration():
    assert iterate_until_homogeneous(np.zeros((8, 8), dtype=bool), 80) == (H0, 0)
    ring = np.zeros((8, 8), dtype=bool)
    ring[0, :] = True
    outcome, steps = iterate_until_homogeneous(ring, 80)
    assert outcome == H1 and steps <= 80


@settings(max_examples=30)
@given(st.integers(0, 10_000))
def test_fat_bound_samples(seed):
    from toomlab.lattice import random_connected_set

    S = random_connected_set(PLANE, 1 + seed % 30, seed)
    seq = [S]
    while seq[-1]:
        seq.append(apply_Rplus(seq[-1]))
    for i in range(1, len(seq) // 2 + 1):
        if 2 * i < len(seq) and seq[2 * i]:
            assert 2 * len(seq[i]) >= i * i
