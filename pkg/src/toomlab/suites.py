"""Verification suites: one batch check per claimed property.

Each suite returns a list of :class:`VerificationRecord`; a record passes when
the suite's defining inequality or equality holds for its measured sides.
Per-trial seeds are ``config.seed + trial``.
"""

from __future__ import annotations

import csv
import io
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from fractions import Fraction
from itertools import combinations
from typing import Callable

from . import instances
from .cuts import INF, Cut, each_comp_holds, separates, thickness_connected, thickness_general
from .geometry import Thirds, Triangle, bounding_triangle, merge_intersecting, span_d, triangle_contains_triangle
from .lattice import (
    NEIGHBOR_OFFSETS,
    PLANE,
    SiteSet,
    connected_components,
    is_simple_component,
    random_connected_set,
    torus,
)
from .rules import Rplus_array, apply_Q, apply_R, apply_Rplus, from_array, iterate_until_erased, to_array
from .transfer import decreasing_functional, preimage_matching_number, pullback_cut_Q, pullback_cut_R


@dataclass
class RunConfig:
    seed: int = 0
    trials: int | None = None  # suite default when None
    max_size: int | None = None  # largest random instance, suite default when None
    alpha: int = 6
    betas: tuple = (0, 2, 4)
    sizes: tuple = (8, 12, 16, 20)
    densities: tuple = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    consensus_cap: int = 10  # steps per unit of n
    failure_cap: int = 10  # steps per unit of n^2
    failure_budget: int | None = None  # default floor(sqrt(n))
    window_factor: float = 2.0  # failure-free window, in units of n
    max_sites: int = 30
    guard_k: int = 4
    out: str | None = None


@dataclass
class VerificationRecord:
    suite: str
    case_id: str
    seed: int
    inputs: str
    lhs: str
    rhs: str
    passed: bool


def _fmt(v) -> str:
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return str(v)


def _rec(suite, case_id, seed, inputs, lhs, rhs, ok) -> VerificationRecord:
    return VerificationRecord(suite, str(case_id), seed, inputs, _fmt(lhs), _fmt(rhs), bool(ok))


def threads() -> int:
    """Worker count from TOOMLAB_THREADS (unset: 1, 0: all cores)."""
    raw = os.environ.get("TOOMLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"TOOMLAB_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1 if n == 0 else max(1, n)


def parallel_map(fn: Callable, items: list) -> list:
    workers = threads()
    if workers == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _trials(cfg: RunConfig, default: int) -> range:
    return range(cfg.trials if cfg.trials is not None else default)


# ---- geometry claims -------------------------------------------------------

def suite_span_decr(cfg: RunConfig) -> list[VerificationRecord]:
    out = []
    top = cfg.max_size or 20
    for t in _trials(cfg, 200):
        seed = cfg.seed + t
        rng = random.Random(seed)
        E = random_connected_set(PLANE, rng.randint(2, top), seed)
        for d in (Fraction(1, 3), Fraction(2)):
            base = span_d(E, d).value
            if base <= 3 * Thirds.of(d):
                continue
            got_r = span_d(apply_R(E), d).value
            got_q = span_d(apply_Q(E), d).value
            inp = f"|E|={len(E)} d={d}"
            out.append(_rec("span_decr", f"{t}:R:d={d}", seed, inp, got_r, base - 1, got_r == base - 1))
            out.append(_rec("span_decr", f"{t}:Q:d={d}", seed, inp, got_q, base + 1, got_q == base + 1))
    return out


def suite_addit(cfg: RunConfig) -> list[VerificationRecord]:
    out = []
    for t in _trials(cfg, 200):
        seed = cfg.seed + t
        rng = random.Random(seed)
        # first bullet: two intersecting triangles
        while True:
            I1 = Triangle(*(Thirds(rng.randint(-9, 9)) for _ in range(3)))
            I2 = Triangle(*(Thirds(rng.randint(-9, 9)) for _ in range(3)))
            if not I1.is_empty and not I2.is_empty:
                try:
                    I = merge_intersecting(I1, I2)
                    break
                except ValueError:
                    continue
        ok = I.span <= I1.span + I2.span and triangle_contains_triangle(I, I1) and triangle_contains_triangle(I, I2)
        out.append(_rec("addit", f"{t}:triangles", seed, f"{I1} {I2}", I.span, I1.span + I2.span, ok))
        # second bullet: neighbouring sets in 1/3-deflated triangles
        A1 = random_connected_set(PLANE, rng.randint(1, 8), rng.randrange(1 << 30))
        A2 = random_connected_set(PLANE, rng.randint(1, 8), rng.randrange(1 << 30))
        p = A1.sorted()[rng.randrange(len(A1))]
        q = A2.sorted()[rng.randrange(len(A2))]
        dx, dy = NEIGHBOR_OFFSETS[rng.randrange(6)]
        shift = (p[0] + dx - q[0], p[1] + dy - q[1])
        A2 = SiteSet([(x + shift[0], y + shift[1]) for x, y in A2.members]) - A1
        if not A2:
            continue
        need = bounding_triangle(A1 | A2).span + Thirds.of(1)
        have = bounding_triangle(A1).span + bounding_triangle(A2).span + Thirds.of(2)
        out.append(_rec("addit", f"{t}:sets", seed, f"|A1|={len(A1)} |A2|={len(A2)}", need, have, need <= have))
    return out


# ---- rule claims -----------------------------------------------------------

def _mixed_sets(cfg: RunConfig, default: int):
    for t in _trials(cfg, default):
        seed = cfg.seed + t
        rng = random.Random(seed)
        box = rng.randint(3, cfg.max_size or 9)
        yield t, seed, instances.random_set(PLANE, box, rng.uniform(0.2, 0.8), rng)


def suite_commute(cfg: RunConfig) -> list[VerificationRecord]:
    out = []
    for t, seed, S in _mixed_sets(cfg, 500):
        lhs = apply_Q(apply_R(S))
        rhs = apply_R(apply_Q(S))
        out.append(_rec("commute", t, seed, f"|S|={len(S)}", len(lhs), len(rhs), lhs <= rhs))
    return out


def suite_components(cfg: RunConfig) -> list[VerificationRecord]:
    out = []
    for t, seed, S in _mixed_sets(cfg, 500):
        comps = connected_components(S)
        images = {apply_R(c) for c in comps}
        images.discard(apply_R(SiteSet()))
        got = set(connected_components(apply_R(S)))
        connected_ok = all(len(connected_components(im)) == 1 for im in images)
        out.append(_rec("components", t, seed, f"|S|={len(S)} comps={len(comps)}", len(got), len(images), got == images and connected_ok))
    return out


def suite_fat(cfg: RunConfig) -> list[VerificationRecord]:
    out = []
    top = cfg.max_size or 40
    for t in _trials(cfg, 100):
        seed = cfg.seed + t
        rng = random.Random(seed)
        S = random_connected_set(PLANE, rng.randint(1, top), seed)
        seq = [S]
        while seq[-1]:
            seq.append(apply_Rplus(seq[-1]))
        i = 1
        while 2 * i < len(seq) and seq[2 * i]:
            need = math.ceil(i * i / 2)
            out.append(_rec("fat", f"{t}:i={i}", seed, f"|S|={len(S)}", len(seq[i]), need, len(seq[i]) >= need))
            i += 1
    return out


def suite_toom_limit(cfg: RunConfig) -> list[VerificationRecord]:
    out = []
    for t in _trials(cfg, 200):
        seed = cfg.seed + t
        rng = random.Random(seed)
        n = (5, 7)[t % 2]
        S = instances.random_set(torus(n), n, rng.uniform(0.1, 0.6), rng)
        simple = all(is_simple_component(c) for c in connected_components(S))
        res = iterate_until_erased(S)
        out.append(_rec("toom_limit", t, seed, f"n={n} |S|={len(S)}", f"erased={res.erased}", f"simple={simple}", res.erased == simple))
    return out


def suite_fewer_comp(cfg: RunConfig) -> list[VerificationRecord]:
    """Only instances whose D components are all simple are recorded."""
    out = []
    n = 12
    wanted = cfg.trials if cfg.trials is not None else 50
    t = 0
    while len(out) < wanted and t < 50 * wanted:
        seed = cfg.seed + t
        rng = random.Random(seed)
        space = torus(n)
        C = instances.random_blobs(space, rng.randint(2, 10), rng.randint(1, 12), rng)
        p = len(connected_components(C))
        t += 1
        if p < 2:
            continue
        i = math.ceil(n * math.sqrt(8 / p))
        grid = to_array(C)
        for _ in range(2 * i):
            grid = Rplus_array(grid)
        D = from_array(grid, space)
        comps = connected_components(D)
        if not all(is_simple_component(c) for c in comps):
            continue
        q = len(comps)
        out.append(_rec("fewer_comp", t - 1, seed, f"n={n} p={p} i={i}", q, 0.75 * p, q <= 0.75 * p))
    return out


# ---- thickness claims ------------------------------------------------------

def _kw(cfg: RunConfig) -> dict:
    return {"max_sites": cfg.max_sites, "guard_k": cfg.guard_k}


def _theta_at_least(S: SiteSet, alpha, beta, need, cfg: RunConfig, connected=True):
    """(holds, shown) for 'thickness of S >= need' with the search cut at need-1."""
    if not S:
        return True, INF
    if need == INF:
        res = thickness_connected(S, alpha, beta, **_kw(cfg)) if connected else thickness_general(S, alpha, **_kw(cfg))
        return res.value == INF, res.value
    if need <= 0:
        return True, "skip"
    if connected:
        res = thickness_connected(S, alpha, beta, max_k=int(need) - 1, **_kw(cfg))
    else:
        res = thickness_general(S, alpha, max_k=int(need) - 1, **_kw(cfg))
    shown = f">={res.value}" if res.lower_bound else res.value
    return res.value >= need, shown


def suite_thg(cfg: RunConfig) -> list[VerificationRecord]:
    out = []
    alpha = cfg.alpha
    for idx, S in enumerate(instances.connected_subsets_of_box(3, 3)):
        g = thickness_general(S, alpha, **_kw(cfg)).value
        c = thickness_connected(S, alpha, 0, **_kw(cfg)).value
        out.append(_rec("thg", f"box:{idx}", cfg.seed, f"|S|={len(S)}", g, c, g == c))
    top = cfg.max_size or 12
    for t in _trials(cfg, 50):
        seed = cfg.seed + t
        rng = random.Random(seed)
        S = random_connected_set(PLANE, rng.randint(1, top), seed)
        g = thickness_general(S, alpha, **_kw(cfg)).value
        c = thickness_connected(S, alpha, 0, **_kw(cfg)).value
        out.append(_rec("thg", f"rand:{t}", seed, f"|S|={len(S)}", g, c, g == c))
    return out


def suite_each_comp(cfg: RunConfig) -> list[VerificationRecord]:
    out = []
    top = cfg.max_size or 10
    for t in _trials(cfg, 40):
        seed = cfg.seed + t
        rng = random.Random(seed)
        S = random_connected_set(PLANE, rng.randint(3, top), seed)
        for beta in cfg.betas:
            th = thickness_connected(S, cfg.alpha, beta, **_kw(cfg)).value
            kmax = min(2, len(S) - 1) if th == INF else min(int(th) - 1, 2)
            checked = 0
            for k in range(1, kmax + 1):
                for Cs in combinations(S.sorted(), k):
                    C = S.with_members(Cs)
                    comps = connected_components(S - C)
                    for mask in range(1 << len(comps)):
                        A1 = S.with_members(frozenset().union(*(c.members for i, c in enumerate(comps) if not mask >> i & 1)))
                        A2 = S.with_members(frozenset().union(*(c.members for i, c in enumerate(comps) if mask >> i & 1)))
                        cut = Cut(C, A1, A2)
                        ok = each_comp_holds(cut, cfg.alpha, beta)
                        checked += 1
                        if not ok:
                            out.append(_rec("each_comp", f"{t}:b={beta}:{Cs}:{mask}", seed, f"|S|={len(S)}", "violated", f"theta={_fmt(th)}", False))
            out.append(_rec("each_comp", f"{t}:b={beta}", seed, f"|S|={len(S)} theta={_fmt(th)}", checked, "closed cuts checked", True))
    return out


def _thickness_instances(cfg: RunConfig, default: int):
    """Curated bridged blobs (finite thickness) followed by seeded random sets."""
    for span in (1, 2, 3):
        for bridge in (1, 2, 3):
            for direction in "hvd":
                yield f"blobs:s={span}:b={bridge}:{direction}", cfg.seed, instances.bridged_blobs(span, bridge, direction)
    for length in range(4, 14):
        seg = instances.segment(length)
        yield f"seg{length}:h", cfg.seed, seg
        yield f"seg{length}:v", cfg.seed, SiteSet((y, x) for x, y in seg)
        yield f"seg{length}:d", cfg.seed, SiteSet((x, -x) for x, _ in seg)
    top = cfg.max_size or 14
    for t in _trials(cfg, default):
        seed = cfg.seed + t
        rng = random.Random(seed)
        yield f"rand:{t}", seed, random_connected_set(PLANE, rng.randint(2, top), seed)


def suite_toomthick(cfg: RunConfig) -> list[VerificationRecord]:
    out = []
    for t, seed, S in _thickness_instances(cfg, 40):
        RS = apply_R(S)
        for beta in cfg.betas:
            if beta > 3:
                continue
            base = thickness_connected(S, cfg.alpha, beta, **_kw(cfg)).value
            ok, shown = _theta_at_least(RS, cfg.alpha, beta + 2, base, cfg)
            out.append(_rec("toomthick", f"{t}:b={beta}", seed, f"|S|={len(S)}", shown, base, ok))
    return out


def suite_inflthick(cfg: RunConfig) -> list[VerificationRecord]:
    out = []
    for t, seed, S in _thickness_instances(cfg, 40):
        QS = apply_Q(S)
        if len(QS) > cfg.max_sites:
            continue  # outside the exhaustive-search guard
        for beta in cfg.betas:
            # below alpha - 2 the shifted threshold is negative and single-site cuts win trivially
            if beta + 2 - cfg.alpha < 0:
                continue
            base = thickness_connected(S, cfg.alpha, beta, **_kw(cfg)).value
            ok, shown = _theta_at_least(QS, cfg.alpha, beta + 2 - cfg.alpha, base + 1, cfg)
            out.append(_rec("inflthick", f"{t}:b={beta}", seed, f"|S|={len(S)}", shown, base + 1, ok))
    return out


def main_instances(cfg: RunConfig) -> list[tuple[str, SiteSet]]:
    cases = [("seg5", instances.segment(5))]
    for span in (1, 2, 3):
        for bridge in (1, 2, 3, 4):
            for direction in "hvd":
                cases.append((f"blobs:s={span}:b={bridge}:{direction}", instances.bridged_blobs(span, bridge, direction)))
    cases.append(("blobs:s=3:b=3:h:w=2", instances.bridged_blobs(3, 3, "h", 2)))
    top = cfg.max_size or 15
    for t in _trials(cfg, 20):
        seed = cfg.seed + t
        rng = random.Random(seed)
        cases.append((f"rand:{t}", random_connected_set(PLANE, rng.randint(6, top), seed)))
    return cases


def _main_case(args):
    name, S, cfg = args
    recs = []
    alpha = cfg.alpha
    if len(S) > cfg.max_sites:
        return recs
    base = thickness_general(S, alpha, **_kw(cfg))
    if base.value == INF:
        return recs
    k = base.value
    ok, shown = _theta_at_least(apply_Rplus(S), alpha, 0, k + 1, cfg, connected=False)
    recs.append(_rec("main", f"{name}", cfg.seed, f"|S|={len(S)}", shown, k + 1, ok))
    # the three stages: R, R, Q with beta = 0, 2, 4
    chain = [S, apply_R(S), apply_R(apply_R(S))]
    for stage, beta in ((0, 0), (1, 2)):
        before = thickness_connected(chain[stage], alpha, beta, **_kw(cfg)).value if chain[stage] else INF
        ok, shown = _theta_at_least(chain[stage + 1], alpha, beta + 2, before, cfg)
        recs.append(_rec("main", f"{name}:stage{stage + 1}:toomthick:b={beta}", cfg.seed, f"|S|={len(chain[stage])}", shown, before, ok))
    if chain[2]:
        before = thickness_connected(chain[2], alpha, 4, **_kw(cfg)).value
        ok, shown = _theta_at_least(apply_Q(chain[2]), alpha, 4 + 2 - alpha, before + 1, cfg)
        recs.append(_rec("main", f"{name}:stage3:inflthick:b=4", cfg.seed, f"|S|={len(chain[2])}", shown, before + 1, ok))
    return recs


def suite_main(cfg: RunConfig) -> list[VerificationRecord]:
    cases = main_instances(cfg)
    results = parallel_map(_main_case, [(name, S, cfg) for name, S in cases])
    return [r for batch in results for r in batch]


# ---- transfer claims -------------------------------------------------------

def check_q_trace(S: SiteSet, cut: Cut, result: Cut, trace) -> list[str]:
    """Problems found in a Q-pullback result; empty when well formed."""
    problems = []
    if len(result.C) != len(cut.C) - 1:
        problems.append(f"|C'|={len(result.C)} != |C|-1={len(cut.C) - 1}")
    if not separates(S, result):
        problems.append("not a cut of S")
    for st in trace.steps:
        if any(st.a != (b[0] + dx, b[1] + dy) for b, (dx, dy) in zip(st.B, ((0, 0), (1, 0), (0, 1)))):
            problems.append(f"B(t) misnumbered at {st.a}")
        if st.a_prime is not None and st.a not in apply_Q(S.with_members([st.a_prime])):
            problems.append(f"{st.a} not in Q({st.a_prime})")
        if not st.superfluous and st.a_prime not in st.E:
            problems.append(f"a'={st.a_prime} not eligible at {st.a}")
    if trace.s is None or not trace.steps[trace.s - 1].superfluous:
        problems.append("no superfluous element recorded")
    walk = trace.steps[: trace.s] if trace.s else []
    for prev, cur in zip(walk, walk[1:]):
        if cur.strong and cur.a != (prev.a_prime[0] + (0, 1, 0)[trace.r - 1], prev.a_prime[1] + (0, 0, 1)[trace.r - 1]):
            problems.append("strong forward step off e_r(a')")
        if cur.forward and not decreasing_functional(trace.r, cur.a) < decreasing_functional(trace.r, prev.a):
            problems.append("forward functional did not drop")
    return problems


def suite_pullback_q(cfg: RunConfig) -> list[VerificationRecord]:
    out = []
    top = cfg.max_size or 10
    for t in _trials(cfg, 100):
        seed = cfg.seed + t
        S, cut = instances.random_q_cut_instance(seed, max_size=top, max_k=cfg.guard_k)
        result, trace = pullback_cut_Q(S, cut)
        problems = check_q_trace(S, cut, result, trace)
        match = preimage_matching_number(S, cut.C)
        inp = f"|S|={len(S)} |C|={len(cut.C)} match={match} start={trace.start}"
        out.append(_rec("pullback_q", t, seed, inp, len(result.C), len(cut.C) - 1, not problems))
    return out


def suite_pullback_r(cfg: RunConfig) -> list[VerificationRecord]:
    out = []
    top = cfg.max_size or 14
    t = 0
    for t in _trials(cfg, 100):
        seed = cfg.seed + t
        rng = random.Random(seed)
        S = random_connected_set(PLANE, rng.randint(3, top), seed)
        U = apply_R(S)
        cut = instances.random_closed_connected_cut(U, rng.randint(1, 3), rng) if len(U) > 1 else None
        if cut is None:
            continue
        result, mapping = pullback_cut_R(S, cut)
        ok = separates(S, result) and len(result.C) <= len(cut.C)
        ok = ok and all(mapping[a] in apply_Q(U.with_members([a])) and mapping[a] in S for a in cut.C)
        out.append(_rec("pullback_r", t, seed, f"|S|={len(S)} |C|={len(cut.C)}", len(result.C), len(cut.C), ok))
    return out


SUITES: dict[str, Callable[[RunConfig], list[VerificationRecord]]] = {
    "span_decr": suite_span_decr,
    "addit": suite_addit,
    "commute": suite_commute,
    "components": suite_components,
    "fat": suite_fat,
    "toom_limit": suite_toom_limit,
    "fewer_comp": suite_fewer_comp,
    "thg": suite_thg,
    "each_comp": suite_each_comp,
    "toomthick": suite_toomthick,
    "inflthick": suite_inflthick,
    "main": suite_main,
    "pullback_q": suite_pullback_q,
    "pullback_r": suite_pullback_r,
}


def records_to_csv(records: list[VerificationRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = [f.name for f in fields(VerificationRecord)]
    writer.writerow(names)
    for r in records:
        writer.writerow([getattr(r, n) for n in names])
    return buf.getvalue()


def run_suite(name: str, config: RunConfig | None = None) -> tuple[list[VerificationRecord], int]:
    """Run one suite; returns (records sorted by case id, exit status)."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    config = config or RunConfig()
    records = sorted(SUITES[name](config), key=lambda r: (r.suite, r.case_id))
    if config.out:
        with open(config.out, "w", newline="", encoding="utf-8") as fh:
            fh.write(records_to_csv(records))
    status = 0 if records and all(r.passed for r in records) else 1
    return records, status
