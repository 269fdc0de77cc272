"""Exhaustive verification: every active set, every demand, every active user.

Each report compares the worst measured load with the closed-form corner
point and checks that the scheme's own decoder and the generic linear
decoder agree.

Run:  python3 demos/verify_schemes.py
"""

from hotplug.bounds import t_range
from hotplug.schemes import make_scheme
from hotplug.verifier import exhaustive_report

K, Kp, N = 4, 3, 3
for name in ("base", "new1", "new2", "remark2"):
    for t in t_range(name, K, Kp):
        rep = exhaustive_report(make_scheme(name, K, Kp, N, t=t))
        print(rep.summary())
        print("   worst load by demand rank:", {r: str(v) for r, v in rep.max_rank_load.items()})
