"""Independent reference implementations used only by the tests.

Nothing here imports the package's geometry or cut code: spans are computed
by enumerating set partitions of sites (not components), and thickness by
enumerating every disjoint triple (C, A1, A2) of a tiny set.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import product

import numba
import numpy as np

OFFSETS = ((0, 1), (0, -1), (1, 0), (-1, 0), (-1, 1), (1, -1))


def adjacent(p, q) -> bool:
    return (q[0] - p[0], q[1] - p[1]) in OFFSETS


def pieces(points) -> list[frozenset]:
    """Connected pieces under the six-neighbour graph, by plain flood fill."""
    left = set(points)
    out = []
    while left:
        stack = [left.pop()]
        piece = set(stack)
        while stack:
            p = stack.pop()
            for q in list(left):
                if adjacent(p, q):
                    left.discard(q)
                    piece.add(q)
                    stack.append(q)
        out.append(frozenset(piece))
    return out


def triangle_span(points) -> int:
    return max(x + y for x, y in points) - min(x for x, _ in points) - min(y for _, y in points)


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


@lru_cache(maxsize=None)
def brute_span_thirds(points: frozenset, d_thirds: int) -> int:
    """min over all partitions of the sites of sum(3 * span + 3 * d), in thirds."""
    if not points:
        return 0
    best = None
    for part in set_partitions(sorted(points)):
        cost = sum(3 * triangle_span(block) + 3 * d_thirds for block in part)
        best = cost if best is None else min(best, cost)
    return best


def brute_Span_thirds(points) -> int:
    return brute_span_thirds(frozenset(points), 6)


# ---- cover table over every subset of a small box --------------------------

@numba.njit(cache=True)
def _cover_dp(xs, ys, dv):
    n = xs.shape[0]
    full = 1 << n
    cost = np.empty(full, dtype=np.int64)
    cost[0] = 0
    for mask in range(1, full):
        lo_x = 1 << 20
        lo_y = 1 << 20
        hi = -(1 << 20)
        for i in range(n):
            if mask >> i & 1:
                if xs[i] < lo_x:
                    lo_x = xs[i]
                if ys[i] < lo_y:
                    lo_y = ys[i]
                if xs[i] + ys[i] > hi:
                    hi = xs[i] + ys[i]
        cost[mask] = 3 * (hi - lo_x - lo_y) + 3 * dv
    best = np.empty(full, dtype=np.int64)
    best[0] = 0
    for mask in range(1, full):
        low = mask & -mask
        rest = mask ^ low
        b = cost[low] + best[rest]
        sub = rest
        while sub > 0:
            # clusters always contain the lowest site; sub is the rest of that cluster
            c = cost[sub | low] + best[rest ^ sub]
            if c < b:
                b = c
            sub = (sub - 1) & rest
        best[mask] = b
    return best


def box_cover_table(width: int, height: int, d_thirds: int):
    """(cells, table) with table[mask] the minimal cover cost of that subset, in thirds."""
    cells = [(x, y) for y in range(height) for x in range(width)]
    xs = np.array([c[0] for c in cells], dtype=np.int64)
    ys = np.array([c[1] for c in cells], dtype=np.int64)
    return cells, _cover_dp(xs, ys, d_thirds)


# ---- brute-force thickness --------------------------------------------------

def _separates(S, C, A1, A2) -> bool:
    for piece in pieces(S - C):
        if piece & A1 and piece & A2:
            return False
    return True


def _connected(points) -> bool:
    return bool(points) and len(pieces(points)) == 1


def brute_thickness(S, alpha_thirds: int, beta_thirds: int, connected: bool) -> float:
    """Smallest |C| over all disjoint triples with m > alpha |C| + beta; inf if none.

    Every site is labelled C, A1, A2 or unused, so non-closed cuts are
    included.  Empty A_j | C counts as not connected; with beta >= 0 this
    never matters because such a side has m = 0.
    """
    S = frozenset(S)
    sites = sorted(S)
    best = math.inf
    for labels in product(range(4), repeat=len(sites)):
        k = labels.count(0)
        if k >= best:
            continue
        C = frozenset(p for p, l in zip(sites, labels) if l == 0)
        A1 = frozenset(p for p, l in zip(sites, labels) if l == 1)
        A2 = frozenset(p for p, l in zip(sites, labels) if l == 2)
        if not _separates(S, C, A1, A2):
            continue
        if connected and not (_connected(A1 | C) and _connected(A2 | C)):
            continue
        m = min(brute_Span_thirds(A1 | C), brute_Span_thirds(A2 | C))
        if m > alpha_thirds * k + beta_thirds:
            best = k
    return best


# ---- small helpers ----------------------------------------------------------

def brute_R(S) -> set:
    S = set(S)
    cand = {(x - dx, y - dy) for x, y in S for dx, dy in ((0, 0), (1, 0), (0, 1))}
    return {(x, y) for x, y in cand if sum(q in S for q in ((x, y), (x + 1, y), (x, y + 1))) >= 2}


def brute_Q(S) -> set:
    return {(x + dx, y + dy) for x, y in S for dx, dy in ((0, 0), (1, 0), (0, 1))}


def brute_Rplus_max(S) -> set:
    """The max-of-{p, p-(1,0), p-(0,1)} form of R+ applied after two R steps."""
    T = brute_R(brute_R(S))
    cand = brute_Q(T)
    return {p for p in cand if p in T or (p[0] - 1, p[1]) in T or (p[0], p[1] - 1) in T}


def torus_simple(points, n) -> bool:
    """A torus component is simple iff its pre-image component in Z^2 is finite.

    The plane component through one lift of a simple component has exactly
    |S| sites; otherwise it is infinite, so growing past |S| decides it.
    """
    pts = set(points)
    root = min(pts)
    seen = {root}
    stack = [root]
    while stack:
        p = stack.pop()
        for dx, dy in OFFSETS:
            q = (p[0] + dx, p[1] + dy)
            if q not in seen and (q[0] % n, q[1] % n) in pts:
                seen.add(q)
                if len(seen) > len(pts):
                    return False
                stack.append(q)
    return True
