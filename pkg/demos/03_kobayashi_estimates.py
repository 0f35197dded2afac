"""
Kobayashi estimates from horizontal discs
=========================================

On the disc with its full tangent bundle the estimate recovers the Poincare
distance.  On the whole Heisenberg space large horizontal discs drive the
estimate to zero, while the su(1,1) curvature constant gives a matching
lower bound through the Schwarz lemma.
"""

import math

from subkoba.curvature import certify_negative_bound
from subkoba.distances import infinitesimal_metric_upper, kobayashi_upper, schwarz_lower_bound
from subkoba.flows import disc_chart, heisenberg_chart
from subkoba.grading import flag_domain

d = kobayashi_upper(disc_chart(), [0], [0.5])
print(f"disc: d(0, 0.5) <= {d.value:.12f}   ln 3 = {math.log(3):.12f}")
print(f"disc: k(0; 1) <= {infinitesimal_metric_upper(disc_chart(), [0], [1]).value:.6f}")

h = kobayashi_upper(heisenberg_chart(float("inf")), [0, 0, 0], [1, 0, 0], {"max_radius": 1e3})
print(f"Heisenberg on C^3: d(0, (1,0,0)) <= {h.value:.4f} with discs of radius 1e3")

# c = 1/2 and the invariant distance rho = sqrt(2) ln 3 on the su(1,1) disc
gd = flag_domain("A1")
cert = certify_negative_bound(gd.rf, gd)
lb = schwarz_lower_bound(cert, math.sqrt(2) * math.log(3), "derived")
print(f"Schwarz lower bound sqrt(c) rho = {lb.value:.12f} ({lb.kind})")
