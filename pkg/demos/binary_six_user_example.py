"""The hand-built binary scheme for six users with three active.

Each user stores two fixed binary combinations of the three thirds of
every file (M/N = 2/3) and the server sends one third of a file (R = 1/3).
Exhaustive checking shows which active triples can actually decode with
these matrices: caches 4, 5 and 6 span the same plane of GF(2)^3,
so any triple holding two of them is stuck.

Run:  python3 demos/binary_six_user_example.py
"""

from collections import Counter

from hotplug.schemes import BINARY_EX_CACHE, make_scheme
from hotplug.verifier import exhaustive_report

for k, rows in BINARY_EX_CACHE.items():
    print(f"G{k} rows:", rows)

rep = exhaustive_report(make_scheme("remark2ex", 6, 3, 3))
print("\n" + rep.summary())
print("memory per file:", rep.memory / rep.params.N)
bad = Counter(sc.active for sc, _ in rep.decode_failures)
print("active triples with undecodable users:", sorted(bad))
