"""
Rules, tiles and triangle spans
===============================

A five-site horizontal segment under the north-east-center rule R, the
inflation Q, and the biased rule R+ = Q R R.  Each R step shrinks the
bounding-triangle span by one and each Q step grows it by one.
"""

from fractions import Fraction

from toomlab import SiteSet, apply_Q, apply_R, apply_Rplus, span_d
from toomlab.patterns import render_ascii

seg5 = SiteSet([(i, 0) for i in range(5)])
print(render_ascii(seg5, pad=0))

# R keeps p when at least two of p, p+(1,0), p+(0,1) are occupied
S = seg5
while S:
    print(f"|S|={len(S):2d}  span(d=1/3)={span_d(S, Fraction(1, 3)).value}  Span={span_d(S, 2).value}")
    S = apply_R(S)

# Q undoes one R step on the span, so R+ shrinks the segment by one per step
print(render_ascii(apply_Q(seg5), pad=0))
print(render_ascii(apply_Rplus(seg5), pad=0))

# two far apart singletons are cheaper to cover with two triangles
pair = SiteSet([(0, 0), (7, 0)])
res = span_d(pair, 2)
print("pair:", res.value, "blocks:", len(res.blocks))
