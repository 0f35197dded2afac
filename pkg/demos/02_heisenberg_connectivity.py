"""
Horizontal flows on the Heisenberg chart
========================================

X1 = d/dz1 and X2 = d/dz2 + z1 d/dz3 bracket to d/dz3.  Commutators of their
complex flows move along the bracket, which is how any two points get joined.
"""

import numpy as np

from subkoba.distances import cc_distance_upper
from subkoba.flows import chow_connect, compose_flows, heisenberg_chart

cd = heisenberg_chart()

# the four-stage commutator word (rightmost first) lands at (0, 0, t^2)
for t in (0.1, 0.5):
    print(f"t = {t}: endpoint", np.round(compose_flows(cd, [(0, t), (1, t), (0, -t), (1, -t)], [0, 0, 0]), 14))

# a flow word to a complex target; replays are bit-for-bit identical
word = chow_connect(cd, [0, 0, 0], [0.3, -0.2j, 0.1 + 0.05j])
print(len(word.stages), "stages, endpoint error", word.error)
print("replay identical:", word.replay(cd) == word.endpoint)

# CC length scales like lambda under (z1, z2, z3) -> (l z1, l z2, l^2 z3)
glob = heisenberg_chart(float("inf"))
base = cc_distance_upper(glob, None, [0, 0, 0], [0, 0, 1], {"segments": 32}).value
print(f"d_cc(0, (0,0,1)) = {base:.5f}  (2 sqrt(pi) = {2 * np.sqrt(np.pi):.5f})")
for lam in (0.5, 2.0):
    d = cc_distance_upper(glob, None, [0, 0, 0], [0, 0, lam ** 2], {"segments": 32}).value
    print(f"lambda = {lam}: ratio {d / base:.6f}")
