"""Seeded torus experiments: consensus time under R+ and runs with injected failures.

Step caps are empirical engineering bounds (10n for consensus, 10n^2 for the
failure runs), configurable through :class:`RunConfig`.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .rules import NEITHER, Rplus_array, iterate_until_homogeneous
from .suites import RunConfig, parallel_map

CONSENSUS_FIELDS = ("n", "trial", "seed", "density", "steps", "outcome")
FAILURE_FIELDS = (
    "n", "trial", "seed", "budget", "steps", "first_consensus",
    "longest_quiet_window", "final_distance", "near_consensus",
)


def random_grid(n: int, density: float, rng: np.random.Generator) -> np.ndarray:
    return rng.random((n, n)) < density


def _consensus_trial(args):
    n, trial, seed, density, cap = args
    rng = np.random.default_rng(seed)
    outcome, steps = iterate_until_homogeneous(random_grid(n, density, rng), cap)
    return {"n": n, "trial": trial, "seed": seed, "density": density, "steps": steps,
            "outcome": outcome if outcome != NEITHER else "cap"}


@dataclass
class ConsensusSummary:
    per_n: dict[int, float]  # max steps/n over all trials of that size
    failures: int  # trials that hit the cap

    @property
    def constant(self) -> float:
        return max(self.per_n.values()) if self.per_n else 0.0

    def spread(self) -> float:
        """Largest relative deviation of a per-n maximum from their mean."""
        vals = list(self.per_n.values())
        mean = sum(vals) / len(vals)
        return max(abs(v - mean) / mean for v in vals) if mean else 0.0


def consensus_experiment(config: RunConfig) -> tuple[list[dict], ConsensusSummary]:
    """R+ from random torus states until h0 or h1, for every size and density.

    Trial indices run over (density, repetition) pairs so each (n, trial)
    has its own seed ``config.seed + trial``.
    """
    trials = config.trials if config.trials is not None else 50
    if trials < 1:
        raise ValueError("trials must be >= 1")
    jobs = []
    for n in config.sizes:
        cap = config.consensus_cap * n
        for di, density in enumerate(config.densities):
            for rep in range(trials):
                trial = di * trials + rep
                jobs.append((n, trial, config.seed + trial, density, cap))
    rows = parallel_map(_consensus_trial, jobs)
    rows.sort(key=lambda r: (r["n"], r["trial"]))
    per_n = {}
    for r in rows:
        per_n[r["n"]] = max(per_n.get(r["n"], 0.0), r["steps"] / r["n"])
    return rows, ConsensusSummary(per_n, sum(r["outcome"] == "cap" for r in rows))


def _failure_trial(args):
    n, trial, seed, budget, steps, window = args
    rng = np.random.default_rng(seed)
    grid = random_grid(n, 0.5, rng)
    times = np.sort(rng.choice(np.arange(1, steps + 1), size=min(budget, steps), replace=False))
    sites = rng.integers(0, n, size=(len(times), 2))
    values = rng.integers(0, 2, size=len(times)).astype(bool)
    flips = {int(t): [] for t in times}
    for t, (x, y), v in zip(times, sites, values):
        flips[int(t)].append((int(x), int(y), bool(v)))
    first = None
    quiet = 0  # length of the current failure-free homogeneous stretch
    longest = 0
    last_flip = int(times[-1]) if len(times) else 0
    t = 0
    for t in range(1, steps + 1):
        grid = Rplus_array(grid)
        for x, y, v in flips.get(t, ()):
            grid[y, x] = v
        c = int(grid.sum())
        homogeneous = c in (0, grid.size)
        if homogeneous and first is None:
            first = t
        quiet = quiet + 1 if homogeneous and t not in flips else 0
        longest = max(longest, quiet)
        if homogeneous and t >= last_flip:
            # homogeneous states are fixed points, so the skipped tail is quiet too
            longest = max(longest, quiet + steps - t)
            break
    c = int(grid.sum())
    distance = min(c, grid.size - c)
    return {
        "n": n, "trial": trial, "seed": seed, "budget": budget, "steps": t,
        "first_consensus": -1 if first is None else first,
        "longest_quiet_window": longest, "final_distance": distance,
        "near_consensus": distance <= budget and longest >= window,
    }


def failure_experiment(config: RunConfig) -> list[dict]:
    """R+ for up to 10 n^2 steps with floor(sqrt(n)) random single-site failures.

    A trial reaches near-consensus when some failure-free homogeneous stretch
    of ``window_factor * n`` steps occurred and the final state is within
    ``budget`` sites of homogeneous.
    """
    trials = config.trials if config.trials is not None else 20
    jobs = []
    for n in config.sizes:
        budget = config.failure_budget if config.failure_budget is not None else math.isqrt(n)
        steps = config.failure_cap * n * n
        window = max(1, int(config.window_factor * n))
        for trial in range(trials):
            jobs.append((n, trial, config.seed + trial, budget, steps, window))
    rows = parallel_map(_failure_trial, jobs)
    rows.sort(key=lambda r: (r["n"], r["trial"]))
    return rows


def rows_to_csv(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def summary_row(summary: ConsensusSummary) -> dict:
    return {"n": "all", "trial": "summary", "seed": "", "density": "",
            "steps": f"{summary.constant:.4f}", "outcome": f"max_steps_per_n spread={summary.spread():.4f}"}
