"""Memory-load curves: corner points, lower convex envelopes and the
decentralized reference, for the ten-user, five-active, twenty-file system.

Run:  python3 demos/tradeoff_curves.py
"""

from fractions import Fraction

from hotplug.bounds import (achievable_points, best_envelope, decentralized_load, envelope,
                            memory_grid)

K, Kp, N = 10, 5, 20
for name in ("base", "new1"):  # the cross-file point needs K' >= N
    pts = achievable_points(name, K, Kp, N)
    print(f"{name:5s} corner points:", " ".join(f"({p.M},{p.R})" for p in pts))

base, new1, best = envelope("base", K, Kp, N), envelope("new1", K, Kp, N), best_envelope(K, Kp, N)
print("\n   M    base    new1    best   decentralized")
for M in memory_grid(0, N, 11):
    print(f"{float(M):5.1f} {float(base(M)):7.3f} {float(new1(M)):7.3f} {float(best(M)):7.3f} "
          f"{float(decentralized_load(M, N, Kp)):9.3f}")

# The MDS scheme wins in the small-memory regime.
print("\nnew1 <= base on [0, N/K']:", all(new1(m) <= base(m) for m in memory_grid(0, Fraction(N, Kp), 51)))
