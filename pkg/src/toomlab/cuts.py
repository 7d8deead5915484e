"""Cuts (C, A1, A2) of a connected set and the thickness functionals.

``thickness_general`` is the alpha-thickness over arbitrary cuts and
``thickness_connected`` the (alpha, beta)-thickness over connected cuts.  Both
are exact brute force over cutting sets C of increasing size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .geometry import Span, Thirds
from .lattice import SiteSet, boundary, connected_components, is_connected

INF = math.inf
DEFAULT_MAX_SITES = 30
DEFAULT_MAX_K = 4


class GuardExceeded(RuntimeError):
    """The exhaustive search would exceed the configured size guard."""


@dataclass(frozen=True)
class Cut:
    C: SiteSet
    A1: SiteSet
    A2: SiteSet

    @classmethod
    def of(cls, S: SiteSet, C=(), A1=(), A2=()) -> "Cut":
        return cls(S.with_members(C), S.with_members(A1), S.with_members(A2))


@dataclass(frozen=True)
class CutEvaluation:
    k: int
    m: Thirds
    is_cut: bool
    closed: bool
    connected: bool


@dataclass(frozen=True)
class ThicknessResult:
    value: float  # int, or INF
    witness: tuple[Cut, Thirds] | None
    search_bound: int
    lower_bound: bool = False  # True when the search stopped at a caller's max_k

    @property
    def is_infinite(self) -> bool:
        return self.value == INF


def _check_parts(S: SiteSet, cut: Cut):
    for name in ("C", "A1", "A2"):
        part = getattr(cut, name)
        if not part <= S:
            raise ValueError(f"{name} is not a subset of S")
    if not (cut.C.isdisjoint(cut.A1) and cut.C.isdisjoint(cut.A2) and cut.A1.isdisjoint(cut.A2)):
        raise ValueError("C, A1, A2 must be pairwise disjoint")


def separates(S: SiteSet, cut: Cut) -> bool:
    for comp in connected_components(S - cut.C):
        if not comp.isdisjoint(cut.A1) and not comp.isdisjoint(cut.A2):
            return False
    return True


def cut_m(cut: Cut) -> Thirds:
    return min(Span(cut.A1 | cut.C), Span(cut.A2 | cut.C))


def evaluate_cut(S: SiteSet, cut: Cut) -> CutEvaluation:
    _check_parts(S, cut)
    closed = (boundary(S, cut.A1) | boundary(S, cut.A2)) <= cut.C
    connected = is_connected(cut.A1 | cut.C) and is_connected(cut.A2 | cut.C)
    return CutEvaluation(len(cut.C), cut_m(cut), separates(S, cut), closed, connected)


def close_cut(S: SiteSet, cut: Cut) -> Cut:
    _check_parts(S, cut)
    if not separates(S, cut):
        raise ValueError("not a cut: some path joins A1 and A2 avoiding C")
    sides = [set(), set()]
    for comp in connected_components(S - cut.C):
        for j, A in enumerate((cut.A1, cut.A2)):
            if not comp.isdisjoint(A):
                sides[j] |= comp.members
    return Cut(cut.C, S.with_members(sides[0]), S.with_members(sides[1]))


def _validate_host(S: SiteSet):
    if S.space.is_torus:
        raise ValueError("thickness is computed for plane sets")
    if not is_connected(S):
        raise ValueError("thickness needs a connected nonempty set")


def _best_side_split(C: SiteSet, comps: list[SiteSet], need_connected: bool):
    """Best (m, A1, A2) with each side a union of components of S minus C.

    Sides that are unions of whole components lose nothing: any cut closes to
    one without shrinking m, and because every component touches C, adding
    components to a side never disconnects A_j | C.  So only full two-way
    assignments are tried; the first component is pinned to side 1.
    """
    best = None
    c = len(comps)
    if c == 0:
        if need_connected and not is_connected(C):
            return None
        return (Span(C), C.with_members(()), C.with_members(()))
    rest = comps[1:]
    for mask in range(1 << (c - 1)):
        side1 = comps[0].members.union(*(rest[i].members for i in range(c - 1) if not mask >> i & 1))
        side2 = frozenset().union(*(rest[i].members for i in range(c - 1) if mask >> i & 1))
        U1 = C | side1
        U2 = C | side2
        if need_connected and not (is_connected(U1) and is_connected(U2)):
            continue
        m = min(Span(U1), Span(U2))
        if best is None or m > best[0]:
            best = (m, C.with_members(side1), C.with_members(side2))
    return best


def _search(S: SiteSet, alpha, beta, connected: bool, max_k, max_sites, guard_k) -> ThicknessResult:
    _validate_host(S)
    alpha = Thirds.of(alpha)
    beta = Thirds.of(beta)
    if alpha.v <= 0:
        raise ValueError("alpha must be positive")
    span_s = Span(S).v
    # m <= Span(S) for every cut, so only k with alpha*k + beta < Span(S) can work
    bound = 0
    while bound + 1 <= len(S) and alpha.v * (bound + 1) + beta.v < span_s:
        bound += 1
    limit = bound if max_k is None else min(bound, max_k)
    if limit >= 1 and len(S) > max_sites:
        raise GuardExceeded(f"|S| = {len(S)} exceeds the site guard {max_sites}")
    sites = S.sorted()
    for k in range(1, limit + 1):
        if k > guard_k:
            raise GuardExceeded(f"search needs cutting sets of size {k} > guard {guard_k}")
        threshold = alpha.v * k + beta.v
        for chosen in combinations(sites, k):
            C = S.with_members(chosen)
            comps = connected_components(S - C)
            best = _best_side_split(C, comps, connected)
            if best is not None and best[0].v > threshold:
                m, A1, A2 = best
                return ThicknessResult(k, (Cut(C, A1, A2), m), bound)
    if limit < bound:
        return ThicknessResult(limit + 1, None, bound, lower_bound=True)
    return ThicknessResult(INF, None, bound)


def thickness_general(
    S: SiteSet,
    alpha,
    max_k: int | None = None,
    max_sites: int = DEFAULT_MAX_SITES,
    guard_k: int = DEFAULT_MAX_K,
) -> ThicknessResult:
    """Smallest k admitting a cut with m > alpha*k (INF if none).

    With ``max_k`` the search stops after k = max_k and a miss is reported as
    ``lower_bound=True`` with ``value = max_k + 1``.
    """
    return _search(S, alpha, 0, False, max_k, max_sites, guard_k)


def thickness_connected(
    S: SiteSet,
    alpha,
    beta,
    max_k: int | None = None,
    max_sites: int = DEFAULT_MAX_SITES,
    guard_k: int = DEFAULT_MAX_K,
) -> ThicknessResult:
    """Smallest k admitting a connected cut with m > alpha*k + beta."""
    return _search(S, alpha, beta, True, max_k, max_sites, guard_k)


def split_into_components(cut: Cut) -> tuple[list[SiteSet], list[SiteSet]]:
    """Components U_i of A1 | C and V_j of A2 | C."""
    return connected_components(cut.A1 | cut.C), connected_components(cut.A2 | cut.C)


def each_comp_holds(cut: Cut, alpha, beta) -> bool:
    """Either every U_i or every V_j has Span <= alpha*|. & C| + beta."""
    alpha = Thirds.of(alpha)
    beta = Thirds.of(beta)
    Us, Vs = split_into_components(cut)

    def ok(blocks):
        return all(Span(B).v <= alpha.v * len(B & cut.C) + beta.v for B in blocks)

    return ok(Us) or ok(Vs)
