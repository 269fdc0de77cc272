"""Subset enumeration, binomials and demand bookkeeping.

Users and files are 1-indexed throughout, matching the usual notation
``[K] = {1, ..., K}``.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Sequence


def binom(a: int, b: int) -> int:
    """Binomial coefficient, taken to be 0 unless ``a >= b >= 0``."""
    if not a >= b >= 0:
        return 0
    return math.comb(a, b)


class SubsetFamily(Sequence):
    """All t-subsets of a ground set, in lexicographic order.

    Members are sorted tuples.  ``family[i]`` and ``family.index(T)`` give
    0-based lookup in both directions.
    """

    def __init__(self, ground: Iterable[int], t: int):
        self.ground = tuple(sorted(set(ground)))
        if not 0 <= t <= len(self.ground):
            raise ValueError(f"t={t} out of range for a ground set of size {len(self.ground)}")
        self.t = t
        self.members = tuple(itertools.combinations(self.ground, t))
        self._pos = {m: i for i, m in enumerate(self.members)}

    def __getitem__(self, i):
        return self.members[i]

    def __len__(self):
        return len(self.members)

    def __contains__(self, subset) -> bool:
        return tuple(sorted(subset)) in self._pos

    def index(self, subset, *args) -> int:
        try:
            return self._pos[tuple(sorted(subset))]
        except KeyError:
            raise ValueError(f"{subset!r} is not a {self.t}-subset of {self.ground}") from None

    def __repr__(self):
        return f"SubsetFamily(ground={self.ground}, t={self.t})"


def subsets_lex(ground: Iterable[int], t: int) -> SubsetFamily:
    return SubsetFamily(ground, t)


def demand_rank(d: Sequence[int]) -> int:
    """Number of distinct files in a demand vector."""
    return len(set(d))


def fill_demands(active: Sequence[int], demands: Sequence[int], K: int) -> tuple[int, ...]:
    """Full length-K demand vector; offline users copy the smallest active user's demand."""
    if len(active) != len(demands):
        raise ValueError("active set and demand vector differ in length")
    given = dict(zip(active, demands))
    default = given[min(active)]
    return tuple(given.get(k, default) for k in range(1, K + 1))


def leaders(active: Sequence[int], demands: Sequence[int]) -> tuple[int, ...]:
    """Smallest-index active user for each distinct demanded file, sorted."""
    first: dict[int, int] = {}
    for user, file in sorted(zip(active, demands)):
        first.setdefault(file, user)
    return tuple(sorted(first.values()))
