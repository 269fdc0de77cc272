"""Converse bounds, the cases where the envelope meets them, and the
multiplicative gap of the baseline scheme.

Run:  python3 demos/converse_and_gap.py
"""

from hotplug.bounds import (best_envelope, cutset_bound, gap_certificate, memory_grid,
                            optimal_2x2, verify_optimality_cases, yma_converse)

N, Kp = 2, 2
best = best_envelope(3, Kp, N)
print(" M     achievable  2x2-optimal  cut-set  s/alpha bound")
for M in memory_grid(0, N, 9):
    print(f"{float(M):4.2f}  {str(best(M)):>10}  {str(optimal_2x2(M)):>11}  {str(cutset_bound(M, N, Kp)):>7}"
          f"  {str(yma_converse(M, N, Kp)):>8}")

for params in [(3, 2, 2), (5, 2, 4), (5, 3, 6), (5, 4, 3)]:
    rep = verify_optimality_cases(*params)
    held = [i for i in rep.applicable() if rep.items[i].holds]
    print(f"{params}: optimality items that apply {rep.applicable()}, hold {held}")

for params in [(3, 2, 2), (7, 4, 5), (15, 12, 20)]:
    cert = gap_certificate(*params, grid_points=101)
    print(f"gap {params}: {cert.line()} (worst at M={cert.argmax})")
