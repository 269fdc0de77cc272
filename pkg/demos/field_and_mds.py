"""Prime-field linear algebra and the MDS codes the schemes are built on.

Run:  python3 demos/field_and_mds.py
"""

import itertools

import numpy as np

from hotplug.field import (PrimeField, any_k_rows_full_rank, block_mds_family, inverse,
                           parity_generator, rank, solve, vandermonde_mds)

f = PrimeField(7)
print(f, "3 + 5 =", f.add(3, 5), " 3 * 5 =", f.mul(3, 5), " 1/3 =", f.inv(3))

a = np.array([[1, 2], [3, 4]])
print("inverse of [[1,2],[3,4]] over GF(7):", inverse(a, f).tolist())
print("solve a x = (1, 0):", solve(a, [1, 0], f).tolist())

# A Vandermonde matrix at 0..n-1: any k rows are independent.
g = vandermonde_mds(6, 3, f)
print("\n6 x 3 Vandermonde over GF(7):\n", g)
print("every 3 rows full rank:", any_k_rows_full_rank(g, 3, f))

# Over GF(2) the three-user code is the single-parity code.
gf2 = PrimeField(2)
par = parity_generator(2, gf2)
print("\nparity code rows:", par.tolist())
for pair in itertools.combinations(range(3), 2):
    print("  rows", pair, "rank", rank(par[list(pair)], gf2))

# Blocks for the cross-file placement: any K' of the K blocks stack to full rank.
blocks = block_mds_family(5, 2, 6, PrimeField(11))
print("\n5 blocks of 2 x 6 over GF(11); first three stacked have rank",
      rank(np.vstack(blocks[:3]), PrimeField(11)))
