"""
Consensus on the torus
======================

Random configurations on an n x n torus reach all-0 or all-1 under R+
within a small multiple of n steps.  A few injected single-site failures
do not stop the run from settling.
"""

from toomlab.experiments import consensus_experiment, failure_experiment
from toomlab.suites import RunConfig

cfg = RunConfig(sizes=(8, 12, 16, 20), trials=20, seed=1)
rows, summary = consensus_experiment(cfg)
for n, ratio in sorted(summary.per_n.items()):
    print(f"n={n:2d}  max steps/n = {ratio:.3f}")
print(f"spread across n: {summary.spread():.1%}, runs over the 10n cap: {summary.failures}")

# floor(sqrt(n)) random flips spread over 10 n^2 steps
for r in failure_experiment(RunConfig(sizes=(16,), trials=5, seed=3)):
    print(f"trial {r['trial']}: first consensus at {r['first_consensus']}, "
          f"quiet window {r['longest_quiet_window']}, near consensus {r['near_consensus']}")
