"""
Exact algebra of the su(2,1) flag domain
========================================

Build the root system of A2, its normalized basis, the grading by the
torus-fixing element and the real form with the canonical labels, then
certify the negative curvature bound on the superhorizontal directions.
"""

from subkoba.curvature import certify_negative_bound, sectional_curvature
from subkoba.grading import check_bracket_generating, flag_domain
from subkoba.lie_core import normalization_report

# grading and real form together
gd = flag_domain("A2")
bd, rf = gd.bd, gd.rf
print("roots:", bd.rd.positive_roots)
print("level dims (g_-2 .. g_2):", gd.dims_tuple())

# every normalization identity holds with zero tolerance
rep = normalization_report(bd)
print("normalization failures:", sum(len(v) for k, v in rep.items() if k != "cyclic"))

# the level -1 piece generates the negative part in two steps
gen = check_bracket_generating(gd.spaces[-1], gd)
print("bracket generating:", gen.generating, "depth", gen.depth)

# labels: a root is noncompact iff its level is odd
print("eps:", {a: rf.eps[a] for a in bd.rd.positive_roots})

# exact sectional curvature of one frame direction
z = bd.e((-1, 0))
print("H(e_-a1) =", sectional_curvature(rf, gd, z))

# numeric certificate over the whole unit sphere of g_-1
cert = certify_negative_bound(rf, gd)
print(f"c = {cert.c:.12f}  spread over {cert.restarts} restarts = {cert.spread:.1e}")
