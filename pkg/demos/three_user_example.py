"""The smallest interesting hotplug system: 3 users, 2 of them active, 2 files.

Shows the cache contents and the broadcast of both new schemes for a few
demands, then decodes symbol-for-symbol.

Run:  python3 demos/three_user_example.py
"""

import numpy as np

from hotplug import DemandScenario, generate_library, make_scheme, simulate

NAMES = ["A1", "A2", "B1", "B2"]


def show(rows):
    return " + ".join(NAMES[i] for i in np.flatnonzero(rows)) or "0"


for name in ("new1", "new2"):
    s = make_scheme(name, 3, 2, 2, t=1 if name == "new1" else None)
    plan = s.place()
    print(f"== {name}: M = {plan.memory}, R = {s.corner_point.R}, B = {s.params.B}, q = {s.params.q}")
    for k, packets in plan.caches.items():
        print(f"  Z{k}:", ", ".join(show(r) for p in packets for r in p.coeffs))
    lib = generate_library(s.params, seed=1)
    for active, demands in [((1, 2), (1, 2)), ((1, 3), (1, 1)), ((2, 3), (2, 1))]:
        sc = DemandScenario(active, demands)
        res = simulate(s, sc, lib)
        sent = ", ".join(show(r) for p in res.transmission.packets for r in p.coeffs)
        print(f"  I={active} d={demands}: X = ({sent})  load {res.load}  all decode: {res.ok}")
    print()
