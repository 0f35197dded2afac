"""
Classifying homogeneous pairs
=============================

Run the exact checks on the shipped fixtures: two canonical flag domains and
three data that fail for different reasons, then the chart conditions on the
Heisenberg frame.
"""

from pathlib import Path

from subkoba.fixtures import load_alg
from subkoba.flows import heisenberg_chart
from subkoba.hyperbolicity import check_forstneric_assumption, check_no_complex_line, classify_homogeneous, compute_CN

FIX = Path(__file__).resolve().parents[1] / "fixtures"

for name in ("su21.alg", "su22.alg", "su2_compact.alg", "sl2c_real.alg", "su21_k1.alg"):
    hd = load_alg(FIX / name).hd
    v = classify_homogeneous(hd)
    line = f"{name:16s} {v.status}"
    if v.reason:
        line += f": {v.reason}; witness {v.witness_text}"
    print(line)

# the h3 + R toy has a direction x with [x, jx] = 0
toy = load_alg(FIX / "h3_line.alg").hd
rep = check_no_complex_line(toy, {"restarts": 4})
print("h3+R no-complex-line:", rep["pass"], "min", rep["min"])

cd = heisenberg_chart()
print("invertible minor:", check_forstneric_assumption(cd)["verdict"])
for N in (0, 1, 2):
    r = compute_CN(cd, N)
    print(f"N = {N}: formula {r['formula']:.3f}, C_N = {r['C_N']:.3f}")
