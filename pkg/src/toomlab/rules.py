"""Toom's north-east-center rule R, tile inflation Q and the biased rule R+ = Q.R.R.

Set-level operators work on :class:`~toomlab.lattice.SiteSet` in either space.
The ``*_array`` kernels are the same rules on a torus stored as a boolean
``grid[y, x]`` array; experiments use them for speed and the tests pin them to
the set versions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .lattice import PLANE, Site, SiteSet, Space, normalize


class Rule(enum.Enum):
    R = "r"
    Q = "q"
    RPLUS = "rplus"

    @classmethod
    def parse(cls, name) -> "Rule":
        if isinstance(name, Rule):
            return name
        key = str(name).lower().replace("+", "plus").replace("_", "")
        for rule in cls:
            if rule.value == key:
                return rule
        raise ValueError(f"unknown rule {name!r}")


H0, H1, NEITHER = "h0", "h1", "neither"


def tile(p: Site, space: Space = PLANE) -> SiteSet:
    """Q(p) = {e1, e2, e3} = {p, p+(1,0), p+(0,1)}."""
    x, y = p
    return SiteSet(((x, y), (x + 1, y), (x, y + 1)), space)


def tile_corners(p: Site, space: Space = PLANE) -> tuple[Site, Site, Site]:
    x, y = p
    return (
        normalize((x, y), space),
        normalize((x + 1, y), space),
        normalize((x, y + 1), space),
    )


def apply_R(S: SiteSet) -> SiteSet:
    members = S.members
    space = S.space
    candidates = set()
    for x, y in members:
        candidates.add((x, y))
        candidates.add(normalize((x - 1, y), space))
        candidates.add(normalize((x, y - 1), space))
    out = []
    for p in candidates:
        hits = sum(c in members for c in tile_corners(p, space))
        if hits >= 2:
            out.append(p)
    return SiteSet._raw(frozenset(out), space)


def apply_Q(S: SiteSet) -> SiteSet:
    out = set()
    for p in S.members:
        out.update(tile_corners(p, S.space))
    return SiteSet._raw(frozenset(out), S.space)


def apply_Rplus(S: SiteSet) -> SiteSet:
    return apply_Q(apply_R(apply_R(S)))


def apply_Rplus_max_form(S: SiteSet) -> SiteSet:
    """R+ as 'apply R twice, then max over p, p-(0,1), p-(1,0)'."""
    y2 = apply_R(apply_R(S))
    space = S.space
    out = set()
    for p in y2.members:
        # p is the max-neighbour of itself, of p+(0,1) and of p+(1,0)
        out.update(tile_corners(p, space))
    return SiteSet._raw(frozenset(out), space)


_APPLY = {Rule.R: apply_R, Rule.Q: apply_Q, Rule.RPLUS: apply_Rplus}


def apply_rule(rule, S: SiteSet) -> SiteSet:
    return _APPLY[Rule.parse(rule)](S)


def iterate(rule, S: SiteSet, times: int) -> SiteSet:
    fn = _APPLY[Rule.parse(rule)]
    for _ in range(times):
        S = fn(S)
    return S


# torus array kernels, grid[y, x]

def to_array(S: SiteSet) -> np.ndarray:
    if not S.space.is_torus:
        raise ValueError("array form needs a torus")
    n = S.space.n
    grid = np.zeros((n, n), dtype=bool)
    for x, y in S.members:
        grid[y, x] = True
    return grid


def from_array(grid: np.ndarray, space: Space) -> SiteSet:
    ys, xs = np.nonzero(grid)
    return SiteSet._raw(frozenset(zip(xs.tolist(), ys.tolist())), space)


def R_array(grid: np.ndarray) -> np.ndarray:
    count = grid.astype(np.uint8) + np.roll(grid, -1, axis=1) + np.roll(grid, -1, axis=0)
    return count >= 2


def Q_array(grid: np.ndarray) -> np.ndarray:
    return grid | np.roll(grid, 1, axis=1) | np.roll(grid, 1, axis=0)


def Rplus_array(grid: np.ndarray) -> np.ndarray:
    return Q_array(R_array(R_array(grid)))


ARRAY_KERNELS = {Rule.R: R_array, Rule.Q: Q_array, Rule.RPLUS: Rplus_array}


@dataclass(frozen=True)
class FailureEvent:
    step: int
    site: Site
    value: int

    def __post_init__(self):
        if self.step < 1:
            raise ValueError("failure steps are 1-based")
        if self.value not in (0, 1):
            raise ValueError("failure value must be 0 or 1")


@dataclass
class EvolutionTrace:
    rule: Rule
    space: Space
    states: list[SiteSet] = field(default_factory=list)

    @property
    def final(self) -> SiteSet:
        return self.states[-1]


def evolve(rule, S: SiteSet, steps: int, failures: Sequence[FailureEvent] = ()) -> EvolutionTrace:
    """Run ``steps`` synchronous updates; step-t failures overwrite after the rule."""
    rule = Rule.parse(rule)
    by_step: dict[int, list[FailureEvent]] = {}
    for ev in failures:
        if ev.step > steps:
            raise ValueError(f"failure at step {ev.step} beyond {steps} steps")
        if normalize(ev.site, S.space) != tuple(ev.site):
            raise ValueError(f"failure site {ev.site} is not canonical for {S.space}")
        by_step.setdefault(ev.step, []).append(ev)
    fn = _APPLY[rule]
    trace = EvolutionTrace(rule, S.space, [S])
    for t in range(1, steps + 1):
        nxt = fn(trace.states[-1])
        events = by_step.get(t)
        if events:
            members = set(nxt.members)
            for ev in events:
                if ev.value:
                    members.add(tuple(ev.site))
                else:
                    members.discard(tuple(ev.site))
            nxt = SiteSet._raw(frozenset(members), S.space)
        trace.states.append(nxt)
    return trace


def is_homogeneous(S: SiteSet) -> str:
    if not S.space.is_torus:
        raise ValueError("homogeneity is only decidable on a torus")
    if not S:
        return H0
    if len(S) == S.space.capacity:
        return H1
    return NEITHER


@dataclass(frozen=True)
class ErasureResult:
    erased: bool
    steps: int
    cycle_length: int = 0


def iterate_until_erased(S: SiteSet, cap: int | None = None) -> ErasureResult:
    """Iterate R until the set vanishes or a configuration repeats.

    On the torus the state space is finite, so a repeated nonempty state
    certifies that R never erases S.  ``cap`` defaults to 4 n^2 on the torus
    and to a span-based bound on the plane (R shortens every component).
    """
    if not S.space.is_torus:
        if not S:
            return ErasureResult(True, 0)
        xs = [p[0] for p in S.members]
        ys = [p[1] for p in S.members]
        limit = cap if cap is not None else (max(x + y for x, y in S.members) - min(xs) - min(ys)) + 2
        cur = S
        for t in range(1, limit + 1):
            cur = apply_R(cur)
            if not cur:
                return ErasureResult(True, t)
        raise RuntimeError(f"plane set not erased within {limit} steps")
    n = S.space.n
    limit = cap if cap is not None else 4 * n * n
    grid = to_array(S)
    seen = {grid.tobytes(): 0}
    for t in range(1, limit + 1):
        grid = R_array(grid)
        if not grid.any():
            return ErasureResult(True, t)
        key = grid.tobytes()
        if key in seen:
            return ErasureResult(False, t, t - seen[key])
        seen[key] = t
    raise RuntimeError(f"no erasure or repetition within {limit} steps")


def iterate_until_homogeneous(grid: np.ndarray, cap: int) -> tuple[str, int]:
    """Iterate R+ on a torus array; returns (outcome, steps) or ('neither', cap)."""
    size = grid.size
    for t in range(cap + 1):
        c = int(grid.sum())
        if c == 0:
            return H0, t
        if c == size:
            return H1, t
        if t < cap:
            grid = Rplus_array(grid)
    return NEITHER, cap
