"""
Thickness and cut pullback
==========================

Thickness counts the fewest cutting sites whose removal leaves two sides
that are both large in span.  R+ should raise it; the pullback algorithms
show why, by turning a cut of R(S) or Q(S) into a cut of S.
"""

from toomlab import apply_Q, apply_Rplus
from toomlab.cuts import Cut, evaluate_cut, thickness_connected, thickness_general
from toomlab.instances import bridged_blobs, segment
from toomlab.patterns import format_cutspec, render_ascii
from toomlab.transfer import pullback_cut_Q

seg5 = segment(5)
res = thickness_general(seg5, 6)
print("thickness(seg5, 6) =", res.value)
print(format_cutspec(res.witness[0]))

# with a bias of 2 no cut of seg5 is thick enough
print("connected thickness, beta=2:", thickness_connected(seg5, 6, 2).value)

# two triangles joined by a thin bridge; one step of R+ widens the bridge
S = bridged_blobs(2, 2)
print(render_ascii(S))
before = thickness_general(S, 6).value
# searching up to k = before is enough to show the increase
after = thickness_general(apply_Rplus(S), 6, max_k=int(before))
print(f"thickness {before} -> {'at least ' if after.lower_bound else ''}{after.value}")

# a cut of Q(seg5) through column 2 pulls back to a cut of seg5 with one site fewer
QS = apply_Q(seg5)
cut = Cut.of(QS, [(2, 0), (2, 1)], [(0, 0), (1, 0), (0, 1), (1, 1)], [(3, 0), (4, 0), (5, 0), (3, 1), (4, 1)])
pulled, trace = pullback_cut_Q(seg5, cut)
print("start:", trace.start, "dropped:", trace.x)
print(format_cutspec(pulled))
print("still a cut:", evaluate_cut(seg5, pulled).is_cut)
