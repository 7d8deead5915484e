"""Triangles L(a, b, c), deflation, spans and minimal deflated-triangle covers.

All lengths are exact multiples of 1/3 and are carried as :class:`Thirds`;
no floating point enters this module.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .lattice import PLANE, Site, SiteSet, connected_components, is_connected, lift_to_plane

EXACT_COMPONENT_LIMIT = 12


@functools.total_ordering
class Thirds:
    """The rational ``v / 3`` with integer ``v``."""

    __slots__ = ("v",)

    def __init__(self, v: int = 0):
        if not isinstance(v, int):
            raise TypeError("Thirds stores an integer count of thirds; use Thirds.of()")
        self.v = v

    @classmethod
    def of(cls, value) -> "Thirds":
        if isinstance(value, Thirds):
            return value
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, int):
            return cls(3 * value)
        if isinstance(value, Fraction):
            v = value * 3
            if v.denominator != 1:
                raise ValueError(f"{value} is not a multiple of 1/3")
            return cls(int(v))
        raise TypeError(f"cannot read {value!r} as thirds")

    def as_fraction(self) -> Fraction:
        return Fraction(self.v, 3)

    def __add__(self, other):
        return Thirds(self.v + Thirds.of(other).v)

    __radd__ = __add__

    def __sub__(self, other):
        return Thirds(self.v - Thirds.of(other).v)

    def __rsub__(self, other):
        return Thirds(Thirds.of(other).v - self.v)

    def __neg__(self):
        return Thirds(-self.v)

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return Thirds(self.v * k)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            return self.v == Thirds.of(other).v
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return self.v < Thirds.of(other).v

    def __hash__(self):
        return hash(Fraction(self.v, 3))

    def __repr__(self):
        return f"Thirds({self})"

    def __str__(self):
        f = self.as_fraction()
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class Triangle:
    """L(a, b, c) = {(x, y) : -x <= a, -y <= b, x + y <= c}."""

    a: Thirds
    b: Thirds
    c: Thirds

    @classmethod
    def of(cls, a, b, c) -> "Triangle":
        return cls(Thirds.of(a), Thirds.of(b), Thirds.of(c))

    @property
    def span(self) -> Thirds:
        return self.a + self.b + self.c

    @property
    def is_empty(self) -> bool:
        return self.span.v < 0

    def __str__(self):
        return f"L({self.a},{self.b},{self.c})"


def bounding_triangle(E: SiteSet) -> Triangle:
    if not E:
        raise ValueError("empty set has no bounding triangle")
    if E.space.is_torus:
        if not is_connected(E):
            raise ValueError("torus sets are measured one simple component at a time")
        E = lift_to_plane(E)
    a, b, c = _bounds(E.members)
    return Triangle(Thirds(3 * a), Thirds(3 * b), Thirds(3 * c))


def _bounds(points: Iterable[Site]) -> tuple[int, int, int]:
    a = b = c = None
    for x, y in points:
        if a is None:
            a, b, c = -x, -y, x + y
        else:
            a = max(a, -x)
            b = max(b, -y)
            c = max(c, x + y)
    return a, b, c


def deflate(I: Triangle, d) -> Triangle:
    """D(I, d); negative ``d`` is a blowup.  Check ``.is_empty`` on the result."""
    d = Thirds.of(d)
    return Triangle(I.a - d, I.b - d, I.c - d)


def triangle_contains(I: Triangle, p: Site) -> bool:
    x, y = p
    return -3 * x <= I.a.v and -3 * y <= I.b.v and 3 * (x + y) <= I.c.v


def triangles_intersect(I1: Triangle, I2: Triangle) -> bool:
    return min(I1.a.v, I2.a.v) + min(I1.b.v, I2.b.v) + min(I1.c.v, I2.c.v) >= 0


def triangle_contains_triangle(outer: Triangle, inner: Triangle) -> bool:
    if inner.is_empty:
        return True
    return inner.a.v <= outer.a.v and inner.b.v <= outer.b.v and inner.c.v <= outer.c.v


def merge_intersecting(I1: Triangle, I2: Triangle) -> Triangle:
    if I1.is_empty or I2.is_empty or not triangles_intersect(I1, I2):
        raise ValueError(f"{I1} and {I2} do not intersect")
    out = Triangle(max(I1.a, I2.a), max(I1.b, I2.b), max(I1.c, I2.c))
    assert out.span <= I1.span + I2.span
    assert triangle_contains_triangle(out, I1) and triangle_contains_triangle(out, I2)
    return out


@dataclass(frozen=True)
class CoverResult:
    value: Thirds
    exact: bool
    blocks: tuple[SiteSet, ...]


def _component_bounds(E: SiteSet) -> list[tuple[SiteSet, tuple[int, int, int]]]:
    out = []
    for comp in connected_components(E):
        plane = lift_to_plane(comp) if E.space.is_torus else comp
        out.append((comp, _bounds(plane.members)))
    return out


def _partition_dp(bounds: list[tuple[int, int, int]], dv: int) -> tuple[int, list[int]]:
    """Exact min over groupings of components; returns (cost, block masks) in thirds."""
    k = len(bounds)
    full = (1 << k) - 1
    cost = [0] * (1 << k)
    box = [None] * (1 << k)
    for mask in range(1, 1 << k):
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        if rest:
            ra, rb, rc = box[rest]
            a, b, c = bounds[i]
            box[mask] = (max(ra, a), max(rb, b), max(rc, c))
        else:
            box[mask] = bounds[i]
        a, b, c = box[mask]
        cost[mask] = 3 * (a + b + c) + 3 * dv
    best = [0] * (1 << k)
    choice = [0] * (1 << k)
    for mask in range(1, 1 << k):
        low = mask & -mask
        rest = mask ^ low
        top = cost[mask]
        pick = mask
        sub = rest
        while True:
            block = sub | low
            if block != mask:
                val = cost[block] + best[mask ^ block]
                if val < top:
                    top = val
                    pick = block
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[mask] = top
        choice[mask] = pick
    blocks = []
    mask = full
    while mask:
        blocks.append(choice[mask])
        mask ^= choice[mask]
    return best[full], blocks


def _greedy(bounds: list[tuple[int, int, int]], dv: int) -> tuple[int, list[int]]:
    def cost(box):
        return 3 * (box[0] + box[1] + box[2]) + 3 * dv

    clusters = [(1 << i, b) for i, b in enumerate(bounds)]
    while True:
        best_gain, pair = 0, None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                bi, bj = clusters[i][1], clusters[j][1]
                merged = (max(bi[0], bj[0]), max(bi[1], bj[1]), max(bi[2], bj[2]))
                gain = cost(bi) + cost(bj) - cost(merged)
                if gain > best_gain:
                    best_gain, pair = gain, (i, j, merged)
        if pair is None:
            break
        i, j, merged = pair
        clusters[i] = (clusters[i][0] | clusters[j][0], merged)
        del clusters[j]
    return sum(cost(b) for _, b in clusters), [m for m, _ in clusters]


def span_d(E: SiteSet, d, exact_limit: int = EXACT_COMPONENT_LIMIT) -> CoverResult:
    """Minimal total span of triangles whose d-deflations cover E.

    A cover never needs to split a connected component (for d >= 1/3 merging
    neighbouring blocks costs nothing extra), so the search runs over
    groupings of components, each group paying its bounding span plus 3d.
    ``d = 0`` is accepted only for connected sets and returns the single
    bounding-triangle span.
    """
    d = Thirds.of(d)
    if not E:
        return CoverResult(Thirds(0), True, ())
    if d.v < 1:
        if d.v == 0 and is_connected(E):
            return CoverResult(bounding_triangle(E).span, True, (E,))
        raise ValueError("span_d needs d >= 1/3 (d = 0 only for connected sets)")
    comps = _component_bounds(E)
    bounds = [b for _, b in comps]
    if E.space.is_torus and len(comps) > 1:
        # lifted components have no common frame; price them separately
        total = sum(3 * (a + b + c) + 3 * d.v for a, b, c in bounds)
        return CoverResult(Thirds(total), False, tuple(c for c, _ in comps))
    if len(comps) <= exact_limit:
        value, masks = _partition_dp(bounds, d.v)
        exact = True
    else:
        value, masks = _greedy(bounds, d.v)
        exact = False
    blocks = []
    for mask in masks:
        members = frozenset().union(*(comps[i][0].members for i in range(len(comps)) if mask >> i & 1))
        blocks.append(SiteSet._raw(members, E.space))
    blocks.sort(key=lambda s: (s.min()[1], s.min()[0]))
    return CoverResult(Thirds(value), exact, tuple(blocks))


@functools.lru_cache(maxsize=1 << 18)
def _plane_span_thirds(points: frozenset, dv: int) -> int:
    res = span_d(SiteSet._raw(points, PLANE), Thirds(dv))
    if not res.exact:
        raise ValueError("span could not be computed exactly")
    return res.value.v


def Span(E: SiteSet) -> Thirds:
    """span(E, 2), the measure used by cuts and thickness."""
    if E.space.is_torus:
        return span_d(E, 2).value
    return Thirds(_plane_span_thirds(E.members, 6))


def discrete_span(E: SiteSet) -> Thirds:
    return span_d(E, Fraction(1, 3)).value
