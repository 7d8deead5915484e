"""Pulling a cut of R(S) or of Q(S) back to a cut of S.

``pullback_cut_R`` maps every cutting point a of R(S) to a point a' of
S inside the tile Q(a).  ``pullback_cut_Q`` walks through the cutting set of
Q(S) along forward choices until it meets a superfluous point, which is
dropped, so the cut of S it returns has one cutting point fewer.

Every free choice resolves to the (y, x)-lexicographic minimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .cuts import Cut, evaluate_cut, separates
from .lattice import PLANE, Site, SiteSet, Space, normalize, site_key
from .rules import apply_Q, apply_R, tile_corners

# e_i(p) = p + CORNER_OFFSETS[i - 1]
CORNER_OFFSETS: tuple[Site, Site, Site] = ((0, 0), (1, 0), (0, 1))


def corner(p: Site, i: int, space: Space = PLANE) -> Site:
    dx, dy = CORNER_OFFSETS[i - 1]
    return normalize((p[0] + dx, p[1] + dy), space)


def covering_centers(a: Site, space: Space = PLANE) -> tuple[Site, Site, Site]:
    """(b_1, b_2, b_3) with a = e_i(b_i): the centers of the three tiles holding a."""
    return tuple(normalize((a[0] - dx, a[1] - dy), space) for dx, dy in CORNER_OFFSETS)


def decreasing_functional(r: int, p: Site) -> int:
    """The linear functional that strictly drops along forward choices in corner r.

    Corner 1 of a tile minimises x + y, corner 2 minimises -x and corner 3
    minimises -y, so stepping into corner r lowers that functional.
    """
    x, y = p
    return (x + y, -x, -y)[r - 1]


@dataclass(frozen=True)
class PairsP:
    P1: frozenset
    P2: frozenset
    P3: frozenset

    def __getitem__(self, i: int) -> frozenset:
        return (self.P1, self.P2, self.P3)[i - 1]


def pairs_P(a: Site, space: Space = PLANE) -> PairsP:
    """P_i(a) = {b != a : e_i(a) in Q(b)}."""
    a = normalize(a, space)
    pairs = []
    for i in (1, 2, 3):
        e = corner(a, i, space)
        pairs.append(frozenset(b for b in covering_centers(e, space) if b != a))
    return PairsP(*pairs)


class PullbackError(RuntimeError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


def pullback_cut_R(S: SiteSet, cut: Cut) -> tuple[Cut, dict[Site, Site]]:
    """Turn a closed cut (C, A1, A2) of R(S) into a cut (C', B1, B2) of S."""
    U = apply_R(S)
    ev = evaluate_cut(U, cut)
    if not ev.is_cut:
        raise ValueError("input is not a cut of R(S)")
    if not ev.closed:
        raise ValueError("input cut must be closed")
    space = S.space
    A1 = cut.A1.members
    mapping = {}
    for a in cut.C:
        P = pairs_P(a, space)
        hit = [i for i in (1, 2, 3) if not P[i].isdisjoint(A1)]
        pick = None
        if len(hit) == 1:
            i = hit[0]
        elif len(hit) == 2:
            i = ({1, 2, 3} - set(hit)).pop()
        else:
            i = None
        if i is not None and corner(a, i, space) in S.members:
            pick = corner(a, i, space)
        if pick is None:
            inside = [p for p in tile_corners(a, space) if p in S.members]
            if not inside:
                raise ValueError(f"tile of {a} misses S; {a} is not in R(S)")
            pick = min(inside, key=site_key)
        mapping[a] = pick
    C_new = S.with_members(mapping.values())
    B = []
    for A in (cut.A1, cut.A2):
        B.append((S & apply_Q(A)) - C_new)
    return Cut(C_new, B[0], B[1]), mapping


@dataclass(frozen=True)
class TraceStep:
    a: Site
    B: tuple[Site, Site, Site]
    E: frozenset
    a_prime: Site | None
    superfluous: bool
    forward: bool = False
    strong: bool = False


@dataclass
class PullbackTraceQ:
    r: int | None
    steps: list[TraceStep] = field(default_factory=list)
    s: int | None = None  # 1-based index of the superfluous element x
    C_prime: SiteSet | None = None
    start: str = ""

    @property
    def x(self) -> Site | None:
        return None if self.s is None else self.steps[self.s - 1].a


class _QPullback:
    def __init__(self, S: SiteSet, cut: Cut):
        self.S = S
        self.space = S.space
        self.C = cut.C.sorted()
        self.C_set = cut.C.members
        # Side 2 takes everything not touching side 1: sites whose whole tile
        # lies in C would otherwise sit on neither side and could bridge them,
        # and components of Q(S) - C left out of the cut join R_2.
        R1 = cut.A1
        R2 = apply_Q(S) - cut.C - R1
        S1 = frozenset(a for a in S.members if any(p in R1.members for p in tile_corners(a, self.space)))
        self.sides = [S1, S.members - S1]
        for R, Sj in zip((R1, R2), self.sides):
            QSj = apply_Q(S.with_members(Sj))
            if not (R <= QSj and QSj <= (R | cut.C)):
                raise PullbackError("R_j <= Q(S_j) <= R_j | C fails; cut is not closed in Q(S)")

    def B(self, a):
        return covering_centers(a, self.space)

    def live(self, j, Cp):
        return self.sides[j] - Cp

    def superfluous(self, a, Cp) -> bool:
        B = self.B(a)
        return any(not any(b in self.live(j, Cp) for b in B) for j in (0, 1))

    def eligible(self, a, Cp) -> frozenset:
        B = self.B(a)
        out = set()
        for j in (0, 1):
            hits = [b for b in B if b in self.live(j, Cp)]
            if len(hits) == 1:
                out.add(hits[0])
        return frozenset(out)

    def forward_centers(self, a, r, Cp) -> set:
        B = self.B(a)
        both = self.live(0, Cp) | self.live(1, Cp)
        return {b for b in B if b in both and b != B[r - 1]}

    def is_forward(self, prev, a, r) -> bool:
        b_r = self.B(a)[r - 1]
        return prev in tile_corners(b_r, self.space)

    def chain(self, r, steps, Cp, used):
        """Extend with strong forward choices until a superfluous point.

        ``steps`` ends with the current a_t (its a'_t not yet chosen).
        Returns the superfluous index or None when no strong forward choice
        exists.
        """
        cap = len(self.C) + 1
        while True:
            t = len(steps)
            if t > cap:
                raise PullbackError("iteration cap exceeded")
            cur = steps[-1]
            a = cur.a
            if self.superfluous(a, Cp):
                steps[-1] = TraceStep(a, cur.B, frozenset(), None, True, cur.forward, cur.strong)
                return t
            E = self.eligible(a, Cp)
            F = self.forward_centers(a, r, Cp)
            options = sorted(
                (b for b in E & F if corner(b, r, self.space) in self.C_set and corner(b, r, self.space) not in used),
                key=site_key,
            )
            if not options:
                steps[-1] = TraceStep(a, cur.B, E, None, False, cur.forward, cur.strong)
                return None
            b = options[0]
            steps[-1] = TraceStep(a, cur.B, E, b, False, cur.forward, cur.strong)
            Cp = Cp | {b}
            nxt = corner(b, r, self.space)
            used = used | {nxt}
            steps.append(TraceStep(nxt, self.B(nxt), frozenset(), None, False, True, True))

    def starts(self):
        empty = frozenset()
        for a in self.C:
            if self.superfluous(a, empty):
                yield "a.1:superfluous", None, [TraceStep(a, self.B(a), frozenset(), None, True)]
        for a in self.C:
            E = self.eligible(a, empty)
            if len(E) == 2:
                B = self.B(a)
                r = next(i for i in (1, 2, 3) if B[i - 1] not in E)
                yield "a.1:double", r, [TraceStep(a, B, E, None, False)]
        for r in (1, 2, 3):
            for a1 in self.C:
                E1 = self.eligible(a1, empty)
                for a1p in sorted(E1, key=site_key):
                    Cp = frozenset({a1p})
                    for a2 in self.C:
                        if a2 == a1 or not self.is_forward(a1, a2, r):
                            continue
                        first = TraceStep(a1, self.B(a1), E1, a1p, False)
                        second = TraceStep(a2, self.B(a2), frozenset(), None, False, True, False)
                        if self.superfluous(a2, Cp):
                            yield "a.2:superfluous", r, [first, second]
                            continue
                        F2 = self.forward_centers(a2, r, Cp)
                        if all(F2 & self.live(j, Cp) for j in (0, 1)):
                            yield "a.2:forward", r, [first, second]

    def run(self) -> PullbackTraceQ:
        """First start (in condition order) whose walk reaches a superfluous point.

        Within the first condition tier that succeeds, a start giving an
        injective mapping (|C'| = |C| - 1) is preferred over the canonical
        first one.
        """
        last = None
        fallback = None
        tier = None
        for start, r, steps in self.starts():
            this_tier = start.split(":")[0] if start.startswith("a.2") else start
            if fallback is not None and this_tier != tier:
                break
            steps = list(steps)
            Cp = frozenset(st.a_prime for st in steps if st.a_prime is not None)
            used = frozenset(st.a for st in steps)
            if steps[-1].superfluous:
                s = len(steps)
            else:
                s = self.chain(r, steps, Cp, used)
            trace = PullbackTraceQ(r, steps, s, None, start)
            if s is None:
                last = trace
                continue
            self.finish(trace)
            if len(trace.C_prime) == len(self.C) - 1:
                return trace
            if fallback is None:
                fallback, tier = trace, this_tier
        if fallback is not None:
            return fallback
        raise PullbackError("no admissible start reaches a superfluous point", last)

    def injective_completion(self, Cp: frozenset, remaining: frozenset, budget: int = 20_000):
        """Order and images for the unvisited points with all images new, or None.

        After x only eligibility constrains a point, and the order is free, so
        this is a memoised depth-first search over (next point, image).
        Eligible images are new by definition; superfluous points may take any
        unused pre-image.
        """
        in_S = self.S.members
        dead = set()
        nodes = 0

        def search(Cp, remaining):
            nonlocal nodes
            if not remaining:
                return []
            key = (Cp, remaining)
            if key in dead or nodes > budget:
                return None
            nodes += 1
            for a in sorted(remaining, key=site_key):
                if self.superfluous(a, Cp):
                    E, options, sup = frozenset(), [b for b in self.B(a) if b in in_S and b not in Cp], True
                else:
                    E = self.eligible(a, Cp)
                    options, sup = E, False
                for b in sorted(options, key=site_key):
                    rest = search(Cp | {b}, remaining - {a})
                    if rest is not None:
                        return [TraceStep(a, self.B(a), E, b, sup)] + rest
            dead.add(key)
            return None

        return search(Cp, remaining)

    def finish(self, trace: PullbackTraceQ):
        """Map the cutting points the walk did not visit.

        An injective completion is searched first.  Failing that, points that
        are not superfluous when reached take an eligible image and
        superfluous ones (superfluousness persists as C' grows) go last,
        matched to distinct unused images where possible.
        """
        Cp = {st.a_prime for st in trace.steps if st.a_prime is not None}
        used = {st.a for st in trace.steps}
        in_S = self.S.members
        remaining = frozenset(a for a in self.C if a not in used)
        found = self.injective_completion(frozenset(Cp), remaining)
        if found is not None:
            trace.steps.extend(found)
            Cp.update(st.a_prime for st in found)
            trace.C_prime = self.S.with_members(Cp)
            return
        deferred = []
        for a in self.C:
            if a in used:
                continue
            B = self.B(a)
            if self.superfluous(a, frozenset(Cp)):
                deferred.append(a)
                continue
            E = self.eligible(a, frozenset(Cp))
            pick = min(E, key=site_key)
            trace.steps.append(TraceStep(a, B, E, pick, False))
            Cp.add(pick)
        graph = nx.Graph()
        for a in deferred:
            graph.add_node(("c", a))
            for b in sorted(self.B(a), key=site_key):
                if b in in_S and b not in Cp:
                    graph.add_edge(("c", a), ("s", b))
        left = [("c", a) for a in deferred]
        matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=left) if graph.number_of_edges() else {}
        for a in deferred:
            B = self.B(a)
            mate = matching.get(("c", a))
            if mate is not None:
                pick = mate[1]
            else:
                pick = min((b for b in B if b in in_S), key=site_key)
            trace.steps.append(TraceStep(a, B, frozenset(), pick, True))
        Cp.update(st.a_prime for st in trace.steps if st.a_prime is not None)
        trace.C_prime = self.S.with_members(Cp)


def pullback_cut_Q(S: SiteSet, cut: Cut) -> tuple[Cut, PullbackTraceQ]:
    """Cut of S with one cutting point fewer than a closed connected cut of Q(S)."""
    QS = apply_Q(S)
    if not cut.C:
        raise ValueError("cutting set is empty")
    ev = evaluate_cut(QS, cut)
    if not (ev.is_cut and ev.closed and ev.connected):
        raise ValueError("input must be a closed connected cut of Q(S)")
    walk = _QPullback(S, cut)
    trace = walk.run()
    C_new = trace.C_prime
    result = Cut(C_new, S.with_members(walk.sides[0]) - C_new, S.with_members(walk.sides[1]) - C_new)
    if not separates(S, result):
        raise PullbackError("pulled-back triple does not separate S", trace)
    return result, trace


def preimage_matching_number(S: SiteSet, C: SiteSet) -> int:
    """Most points of C that can get distinct covering sites in S.

    Any pullback with |C'| = |C| - 1 needs this to be at least |C| - 1.
    """
    graph = nx.Graph()
    left = [("c", a) for a in C.members]
    graph.add_nodes_from(left)
    for a in C.members:
        for b in covering_centers(a, S.space):
            if b in S:
                graph.add_edge(("c", a), ("s", b))
    return len(nx.bipartite.hopcroft_karp_matching(graph, top_nodes=left)) // 2
