"""Seeded instance generators shared by the suites, demos and tests."""

from __future__ import annotations

import random
from itertools import product

from .cuts import Cut, evaluate_cut
from .lattice import PLANE, SiteSet, Space, connected_components, is_connected, random_connected_set
from .rules import apply_Q


def segment(length: int, origin=(0, 0)) -> SiteSet:
    ox, oy = origin
    return SiteSet([(ox + i, oy) for i in range(length)])


def full_triangle(span: int, origin=(0, 0)) -> set:
    """Lattice points of L(-ox, -oy, ox + oy + span)."""
    ox, oy = origin
    return {(ox + x, oy + y) for x in range(span + 1) for y in range(span + 1 - x)}


def bridged_blobs(span: int, bridge: int, direction: str = "h", width: int = 1) -> SiteSet:
    """Two full triangles joined by a straight bridge of ``bridge`` extra sites.

    ``direction`` is 'h' (east), 'v' (north) or 'd' (south-east diagonal).
    ``width`` stacks parallel bridge strands.
    """
    pts = full_triangle(span)
    if direction == "h":
        pts |= full_triangle(span, (span + bridge + 1, 0))
        for w in range(width):
            pts |= {(x, w) for x in range(span, span + bridge + 2)}
    elif direction == "v":
        pts |= full_triangle(span, (0, span + bridge + 1))
        for w in range(width):
            pts |= {(w, y) for y in range(span, span + bridge + 2)}
    elif direction == "d":
        # north-west bridge from the top corner to the second blob's east corner
        end = (-(bridge + 1), span + bridge + 1)
        pts |= full_triangle(span, (end[0] - span, end[1]))
        pts |= {(-i, span + i) for i in range(bridge + 2)}
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return SiteSet(pts)


def random_set(space: Space, box: int, density: float, rng: random.Random) -> SiteSet:
    """Independent sites in a box (the whole torus when ``space`` is one)."""
    side = space.n if space.is_torus else box
    return SiteSet(
        [(x, y) for x, y in product(range(side), range(side)) if rng.random() < density],
        space,
    )


def random_blobs(space: Space, count: int, max_size: int, rng: random.Random) -> SiteSet:
    sites = set()
    for _ in range(count):
        blob = random_connected_set(space, rng.randint(1, max_size), rng.randrange(1 << 30))
        dx, dy = rng.randrange(space.n), rng.randrange(space.n)
        sites |= {(x + dx, y + dy) for x, y in blob.members}
    return SiteSet(sites, space)


def connected_subsets_of_box(width: int, height: int, max_size: int | None = None):
    """Every connected subset of a width x height plane box, by bitmask order."""
    cells = [(x, y) for y in range(height) for x in range(width)]
    for mask in range(1, 1 << len(cells)):
        if max_size is not None and bin(mask).count("1") > max_size:
            continue
        S = SiteSet([cells[i] for i in range(len(cells)) if mask >> i & 1])
        if is_connected(S):
            yield S


def random_closed_connected_cut(U: SiteSet, k: int, rng: random.Random, attempts: int = 200) -> Cut | None:
    """A random closed connected cut of U with |C| = k, or None."""
    sites = U.sorted()
    if k > len(sites):
        return None
    for _ in range(attempts):
        C = U.with_members(rng.sample(sites, k))
        comps = connected_components(U - C)
        A = [set(), set()]
        for comp in comps:
            A[rng.randrange(2)] |= comp.members
        cut = Cut(C, U.with_members(A[0]), U.with_members(A[1]))
        ev = evaluate_cut(U, cut)
        if ev.is_cut and ev.closed and ev.connected:
            return cut
    return None


def random_q_cut_instance(seed: int, max_size: int = 10, max_k: int = 3):
    """(S, cut of Q(S)) with S a random connected plane set."""
    rng = random.Random(seed)
    while True:
        S = random_connected_set(PLANE, rng.randint(2, max_size), rng.randrange(1 << 30))
        cut = random_closed_connected_cut(apply_Q(S), rng.randint(1, max_k), rng)
        if cut is not None:
            return S, cut
