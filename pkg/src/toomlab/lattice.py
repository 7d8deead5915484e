"""Sites, spaces and the six-neighbour graph G.

Sites are plain ``(x, y)`` integer tuples, ``x`` growing eastward and ``y``
northward.  A :class:`SiteSet` is an immutable set of canonical sites of one
:class:`Space`; iteration is always ``(y, x)``-lexicographic so every
"arbitrary" choice made downstream is reproducible.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

Site = tuple[int, int]

# N, S, E, W, NW, SE
NEIGHBOR_OFFSETS: tuple[Site, ...] = ((0, 1), (0, -1), (1, 0), (-1, 0), (-1, 1), (1, -1))


def site_key(p: Site) -> tuple[int, int]:
    return (p[1], p[0])


@dataclass(frozen=True)
class Space:
    kind: str = "plane"
    n: int | None = None

    def __post_init__(self):
        if self.kind == "plane":
            if self.n is not None:
                raise ValueError("a plane space has no side length")
        elif self.kind == "torus":
            if self.n is None or self.n < 3:
                raise ValueError(f"torus side length must be >= 3, got {self.n}")
        else:
            raise ValueError(f"unknown space kind {self.kind!r}")

    @property
    def is_torus(self) -> bool:
        return self.kind == "torus"

    @property
    def capacity(self) -> int | None:
        return self.n * self.n if self.is_torus else None

    def __str__(self):
        return f"torus {self.n}" if self.is_torus else "plane"


PLANE = Space()


def torus(n: int) -> Space:
    return Space("torus", n)


def normalize(p: Site, space: Space = PLANE) -> Site:
    if space.is_torus:
        return (p[0] % space.n, p[1] % space.n)
    return (p[0], p[1])


def neighbors(p: Site, space: Space = PLANE) -> set[Site]:
    x, y = p
    return {normalize((x + dx, y + dy), space) for dx, dy in NEIGHBOR_OFFSETS}


class SiteSet:
    """Finite set of canonical sites in a space (a 0/1 configuration)."""

    __slots__ = ("space", "members", "_hash")

    def __init__(self, sites: Iterable[Site] = (), space: Space = PLANE):
        self.space = space
        self.members = frozenset(normalize(tuple(p), space) for p in sites)
        self._hash = None

    @classmethod
    def _raw(cls, members: frozenset, space: Space) -> "SiteSet":
        obj = cls.__new__(cls)
        obj.space = space
        obj.members = members
        obj._hash = None
        return obj

    @classmethod
    def full(cls, space: Space) -> "SiteSet":
        if not space.is_torus:
            raise ValueError("only a torus has a full configuration")
        n = space.n
        return cls._raw(frozenset((x, y) for x in range(n) for y in range(n)), space)

    def __iter__(self) -> Iterator[Site]:
        return iter(sorted(self.members, key=site_key))

    def __len__(self):
        return len(self.members)

    def __bool__(self):
        return bool(self.members)

    def __contains__(self, p):
        return p in self.members

    def __eq__(self, other):
        if isinstance(other, SiteSet):
            return self.space == other.space and self.members == other.members
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, self.members))
        return self._hash

    def __repr__(self):
        body = ", ".join(map(str, self))
        return f"SiteSet({{{body}}}, {self.space})"

    def _coerce(self, other) -> frozenset:
        if isinstance(other, SiteSet):
            if other.space != self.space:
                raise ValueError("site sets live in different spaces")
            return other.members
        return frozenset(normalize(tuple(p), self.space) for p in other)

    def __or__(self, other):
        return SiteSet._raw(self.members | self._coerce(other), self.space)

    def __and__(self, other):
        return SiteSet._raw(self.members & self._coerce(other), self.space)

    def __sub__(self, other):
        return SiteSet._raw(self.members - self._coerce(other), self.space)

    def __le__(self, other):
        return self.members <= self._coerce(other)

    def __lt__(self, other):
        return self.members < self._coerce(other)

    def __ge__(self, other):
        return self.members >= self._coerce(other)

    def isdisjoint(self, other) -> bool:
        return self.members.isdisjoint(self._coerce(other))

    def with_members(self, sites: Iterable[Site]) -> "SiteSet":
        return SiteSet(sites, self.space)

    def min(self) -> Site:
        return min(self.members, key=site_key)

    def sorted(self) -> list[Site]:
        return sorted(self.members, key=site_key)


def _flood(start: Site, members: frozenset, space: Space) -> set[Site]:
    seen = {start}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for q in neighbors(p, space):
            if q in members and q not in seen:
                seen.add(q)
                queue.append(q)
    return seen


def connected_components(S: SiteSet) -> list[SiteSet]:
    remaining = set(S.members)
    blocks = []
    for p in S:
        if p not in remaining:
            continue
        block = _flood(p, S.members, S.space)
        remaining -= block
        blocks.append(SiteSet._raw(frozenset(block), S.space))
    return blocks


def is_connected(S: SiteSet) -> bool:
    """True for a nonempty G-connected set; the empty set is not connected."""
    if not S:
        return False
    return len(_flood(next(iter(S.members)), S.members, S.space)) == len(S)


def boundary(S: SiteSet, A: SiteSet) -> SiteSet:
    if not A <= S:
        raise ValueError("A must be a subset of S")
    out = set()
    for p in S.members - A.members:
        if any(q in A.members for q in neighbors(p, S.space)):
            out.add(p)
    return SiteSet._raw(frozenset(out), S.space)


def lift_component(S: SiteSet) -> dict[Site, Site] | None:
    """Consistent unreduced coordinates for a connected set, or None.

    Breadth-first search propagates lifted coordinates along G-edges; a
    conflict means some cycle has nonzero total increment.  On the plane the
    lift is the identity.
    """
    if not is_connected(S):
        raise ValueError("lift requires a connected nonempty set")
    if not S.space.is_torus:
        return {p: p for p in S.members}
    n = S.space.n
    start = S.min()
    lift = {start: start}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        lx, ly = lift[p]
        for dx, dy in NEIGHBOR_OFFSETS:
            q = ((p[0] + dx) % n, (p[1] + dy) % n)
            if q not in S.members:
                continue
            target = (lx + dx, ly + dy)
            if q in lift:
                if lift[q] != target:
                    return None
            else:
                lift[q] = target
                queue.append(q)
    return lift


def is_simple_component(S: SiteSet) -> bool:
    return lift_component(S) is not None


def lift_to_plane(S: SiteSet) -> SiteSet:
    """The plane image of a simple connected set (identity on the plane)."""
    if not S.space.is_torus:
        return S
    lift = lift_component(S)
    if lift is None:
        raise ValueError("component is not simple; it has no plane lift")
    return SiteSet._raw(frozenset(lift.values()), PLANE)


def random_connected_set(space: Space, size: int, seed: int) -> SiteSet:
    """Grow a connected set by seeded random additions from its frontier."""
    if size < 1:
        raise ValueError("size must be >= 1")
    cap = space.capacity
    if cap is not None and size > cap:
        raise ValueError(f"size {size} exceeds torus capacity {cap}")
    rng = random.Random(seed)
    start = (0, 0)
    members = {start}
    frontier = set(neighbors(start, space)) - members
    while len(members) < size:
        p = rng.choice(sorted(frontier, key=site_key))
        members.add(p)
        frontier.discard(p)
        frontier |= neighbors(p, space) - members
    return SiteSet._raw(frozenset(members), space)
