"""System parameters, file libraries, demand scenarios and linear packets.

Every piece of content (a cached subfile, a coded symbol, a multicast
message) is a :class:`LinearPacket`: a block of rows over the concatenated
file space ``GF(q)^(N*B)``.  File ``n`` (1-indexed) occupies columns
``(n-1)*B : n*B``.  The symbols a packet carries for a given library are
``coeffs @ library.vector``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable

import numpy as np

from .field import PrimeField


@dataclass(frozen=True)
class SystemParams:
    K: int
    Kp: int
    N: int
    B: int = 1
    q: int = 2

    def __post_init__(self):
        if not 1 <= self.Kp <= self.K:
            raise ValueError(f"need 1 <= K' <= K, got K={self.K}, K'={self.Kp}")
        if self.N < 1 or self.B < 1:
            raise ValueError("N and B must be positive")

    @property
    def r_prime(self) -> int:
        return min(self.N, self.Kp)

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.q)

    @property
    def width(self) -> int:
        """Length of a coefficient row, N*B."""
        return self.N * self.B

    def with_(self, **kw) -> "SystemParams":
        d = dict(K=self.K, Kp=self.Kp, N=self.N, B=self.B, q=self.q)
        d.update(kw)
        return SystemParams(**d)


@dataclass(frozen=True)
class FileLibrary:
    params: SystemParams
    files: np.ndarray  # N x B

    @property
    def vector(self) -> np.ndarray:
        return self.files.reshape(-1)

    def file(self, n: int) -> np.ndarray:
        return self.files[n - 1]


def generate_library(params: SystemParams, seed: int) -> FileLibrary:
    rng = np.random.default_rng(seed)
    files = params.field.random((params.N, params.B), rng)
    files.setflags(write=False)
    return FileLibrary(params, files)


@dataclass(frozen=True)
class DemandScenario:
    active: tuple[int, ...]
    demands: tuple[int, ...]

    def __post_init__(self):
        if len(self.active) != len(self.demands):
            raise ValueError("active set and demands differ in length")
        if list(self.active) != sorted(set(self.active)):
            raise ValueError("active users must be distinct and sorted")

    def demand_of(self, user: int) -> int:
        return self.demands[self.active.index(user)]

    def validate(self, params: SystemParams) -> None:
        if len(self.active) != params.Kp:
            raise ValueError(f"expected {params.Kp} active users, got {len(self.active)}")
        if self.active and not 1 <= self.active[0] <= self.active[-1] <= params.K:
            raise ValueError("active user outside [K]")
        if any(not 1 <= d <= params.N for d in self.demands):
            raise ValueError("demand outside [N]")


def enumerate_scenarios(params: SystemParams) -> list[DemandScenario]:
    """All C(K, K') * N^K' (active set, demand) pairs."""
    users = range(1, params.K + 1)
    files = range(1, params.N + 1)
    return [
        DemandScenario(active, demands)
        for active in itertools.combinations(users, params.Kp)
        for demands in itertools.product(files, repeat=params.Kp)
    ]


@dataclass(frozen=True, eq=False)
class LinearPacket:
    label: Hashable
    coeffs: np.ndarray  # rows x (N*B)

    @property
    def rows(self) -> int:
        return self.coeffs.shape[0]

    def evaluate(self, library: FileLibrary) -> np.ndarray:
        return library.params.field.matmul(self.coeffs, library.vector)


def stack(packets, width: int) -> np.ndarray:
    if not packets:
        return np.zeros((0, width), dtype=np.int64)
    return np.vstack([p.coeffs for p in packets])


@dataclass(frozen=True)
class CachePlan:
    params: SystemParams
    caches: dict[int, tuple[LinearPacket, ...]]  # user -> packets

    def rows(self, user: int) -> int:
        return sum(p.rows for p in self.caches[user])

    @property
    def memory(self) -> Fraction:
        """Largest per-user cache size, in files."""
        return Fraction(max(self.rows(k) for k in self.caches), self.params.B)

    def matrix(self, user: int) -> np.ndarray:
        return stack(self.caches[user], self.params.width)


@dataclass(frozen=True)
class Transmission:
    params: SystemParams
    packets: tuple[LinearPacket, ...] = field(default_factory=tuple)

    @property
    def rows(self) -> int:
        return sum(p.rows for p in self.packets)

    @property
    def load(self) -> Fraction:
        return Fraction(self.rows, self.params.B)

    def matrix(self) -> np.ndarray:
        return stack(self.packets, self.params.width)
