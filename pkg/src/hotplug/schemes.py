"""Placement and delivery constructions for hotplug coded caching.

Each scheme is a small class holding its :class:`SystemParams` and
parameter ``t``.  ``place()`` never sees a scenario; ``deliver(scenario)``
returns the broadcast packets.  Schemes whose decoding procedure is
explicit (the MDS schemes and the binary K=6 example) also provide
``decode``; the others are decoded only by the generic linear decoder in
:mod:`hotplug.verifier`.

Use :func:`make_scheme` to get a scheme with a valid ``B`` and ``q``.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import bounds
from .bounds import TradeoffPoint, UnsupportedRegimeError
from .combinat import binom, fill_demands, leaders, subsets_lex
from .field import (DTYPE, FieldTooSmallError, PrimeField, blocks_full_rank, block_mds_family,
                    parity_generator, smallest_prime_at_least, solve, span_values, vandermonde_mds)
from .model import CachePlan, DemandScenario, LinearPacket, SystemParams, Transmission


class DecodeError(RuntimeError):
    pass


# --- coefficient helpers ---------------------------------------------------

def embed(params: SystemParams, n: int, block) -> np.ndarray:
    """Place a (rows x B) block acting on file ``n`` into the full N*B width."""
    block = np.asarray(block, dtype=DTYPE)
    out = np.zeros((block.shape[0], params.width), dtype=DTYPE)
    out[:, (n - 1) * params.B:n * params.B] = block
    return out


def subfile_block(B: int, parts: int, w: int) -> np.ndarray:
    """Rows selecting subfile ``w`` (0-based) of a file split into ``parts``."""
    sub = B // parts
    out = np.zeros((sub, B), dtype=DTYPE)
    out[np.arange(sub), w * sub + np.arange(sub)] = 1
    return out


def coded_block(g_row, B: int) -> np.ndarray:
    """Rows of the combination sum_w g_row[w] * subfile_w, applied symbol-wise."""
    g_row = np.atleast_2d(np.asarray(g_row, dtype=DTYPE))
    return np.kron(g_row, np.eye(B // g_row.shape[1], dtype=DTYPE))


def pick_mds(n: int, k: int, q: int | None) -> tuple[np.ndarray, int]:
    """An n x k generator with every k rows independent, and the field it lives in.

    Uses the identity or the single-parity code (valid over GF(2)) when
    n - k <= 1, otherwise a Vandermonde matrix over the smallest prime >= n.
    """
    if q is None:
        q = 2 if n - k <= 1 else smallest_prime_at_least(n)
    f = PrimeField(q)
    if n == k:
        return f.eye(k), q
    if n == k + 1:
        return parity_generator(k, f), q
    return vandermonde_mds(n, k, f), q


def yma_packets(params: SystemParams, users, demand_of, t: int, piece, lead) -> list[LinearPacket]:
    """X_S = sum_{k in S} piece(d_k, S minus k) for (t+1)-subsets S of ``users`` meeting ``lead``."""
    f = params.field
    lead = set(lead)
    out = []
    if t + 1 > len(users):
        return out
    for S in subsets_lex(users, t + 1):
        if not lead.intersection(S):
            continue
        coeffs = sum(piece(demand_of(k), tuple(u for u in S if u != k)) for k in S)
        out.append(LinearPacket(("X", S), f.array(coeffs)))
    return out


# --- schemes ---------------------------------------------------------------

class Scheme:
    name = ""
    has_decoder = False

    def __init__(self, params: SystemParams, t: int | None = None):
        self.params = params
        self.t = t
        self.field = params.field
        self._check()
        if params.B % self.subfile_divisor:
            raise ValueError(f"B={params.B} is not a multiple of {self.subfile_divisor}")

    # subclasses
    def _check(self):
        pass

    @classmethod
    def divisor(cls, K: int, Kp: int, N: int, t) -> int:
        return 1

    @classmethod
    def default_q(cls, K: int, Kp: int, N: int, t) -> int:
        return 2

    @property
    def subfile_divisor(self) -> int:
        p = self.params
        return self.divisor(p.K, p.Kp, p.N, self.t)

    @property
    def corner_point(self) -> TradeoffPoint:
        p = self.params
        return bounds.corner_point(self.name, p.K, p.Kp, p.N, self.t)

    def place(self) -> CachePlan:
        raise NotImplementedError

    def deliver(self, scenario: DemandScenario) -> Transmission:
        raise NotImplementedError

    def decode(self, user: int, scenario: DemandScenario, cache, received) -> np.ndarray:
        """Recover the user's file from (packet, values) pairs; scheme-specific."""
        raise NotImplementedError(f"{self.name} has no scheme-specific decoder")

    def __repr__(self):
        p = self.params
        return f"{type(self).__name__}(K={p.K}, Kp={p.Kp}, N={p.N}, B={p.B}, q={p.q}, t={self.t})"


def man_placement(params: SystemParams, t: int) -> CachePlan:
    """Uncoded combinatorial placement: user k keeps F_{i,W} for every W containing k."""
    K, B = params.K, params.B
    if not 0 <= t <= K:
        raise ValueError(f"t={t} outside [0, {K}]")
    fam = subsets_lex(range(1, K + 1), t)
    if B % len(fam):
        raise ValueError(f"B={B} is not a multiple of C({K},{t})={len(fam)}")
    caches = {}
    for k in range(1, K + 1):
        caches[k] = tuple(
            LinearPacket(("F", i, W), embed(params, i, subfile_block(B, len(fam), w)))
            for i in range(1, params.N + 1)
            for w, W in enumerate(fam) if k in W
        )
    return CachePlan(params, caches)


def yma_delivery(params: SystemParams, full_demand, t: int) -> Transmission:
    """MAN multicast messages for all K users, skipping those that miss every leader."""
    K, B = params.K, params.B
    users = tuple(range(1, K + 1))
    fam = subsets_lex(users, t)

    def piece(n, T):
        return embed(params, n, subfile_block(B, len(fam), fam.index(T)))

    lead = leaders(users, full_demand)
    return Transmission(params, tuple(yma_packets(params, users, lambda k: full_demand[k - 1], t, piece, lead)))


class ManScheme(Scheme):
    """Classical MAN placement and YMA delivery; every user is active."""

    name = "man"

    def _check(self):
        p = self.params
        if p.Kp != p.K:
            raise UnsupportedRegimeError("the classical scheme assumes every user is active (K' = K)")
        if self.t is None or not 0 <= self.t <= p.K:
            raise ValueError(f"t must lie in [0, {p.K}]")

    @classmethod
    def divisor(cls, K, Kp, N, t):
        return binom(K, t)

    def place(self):
        return man_placement(self.params, self.t)

    def deliver(self, scenario):
        return yma_delivery(self.params, scenario.demands, self.t)


class BaselineScheme(ManScheme):
    """MAN placement over all K users; offline users are given min(I)'s demand."""

    name = "base"

    def _check(self):
        if self.t is None or not 0 <= self.t <= self.params.K:
            raise ValueError(f"t must lie in [0, {self.params.K}]")

    def deliver(self, scenario):
        full = fill_demands(scenario.active, scenario.demands, self.params.K)
        return yma_delivery(self.params, full, self.t)


class New1Scheme(Scheme):
    """Per-file MDS pre-coding of C(K', t) subfiles into C(K, t) coded subfiles."""

    name = "new1"
    has_decoder = True

    def __init__(self, params, t, generator=None):
        self._generator = generator
        super().__init__(params, t)
        K, Kp = params.K, params.Kp
        n, k = binom(K, t), binom(Kp, t)
        if generator is None:
            try:
                generator, _ = pick_mds(n, k, params.q)
            except FieldTooSmallError:
                raise FieldTooSmallError(f"GF({params.q}) too small for a [{n},{k}] MDS code") from None
        self.G = self.field.array(generator)
        if self.G.shape != (n, k):
            raise ValueError(f"generator must be {n} x {k}")
        self.coded = subsets_lex(range(1, K + 1), t)  # indexes rows of G

    def _check(self):
        if self.t is None or not 0 <= self.t <= self.params.Kp:
            raise ValueError(f"t must lie in [0, {self.params.Kp}]")

    @classmethod
    def divisor(cls, K, Kp, N, t):
        return binom(Kp, t)

    @classmethod
    def default_q(cls, K, Kp, N, t):
        return pick_mds(binom(K, t), binom(Kp, t), None)[1]

    def is_mds(self) -> bool:
        return blocks_full_rank(list(self.G[:, None, :]), self.G.shape[1], self.field)

    def coded_rows(self, n: int, T) -> np.ndarray:
        return embed(self.params, n, coded_block(self.G[self.coded.index(T)], self.params.B))

    def place(self):
        p = self.params
        caches = {
            k: tuple(LinearPacket(("C", i, T), self.coded_rows(i, T))
                     for i in range(1, p.N + 1) for T in self.coded if k in T)
            for k in range(1, p.K + 1)
        }
        return CachePlan(p, caches)

    def deliver(self, scenario):
        lead = leaders(scenario.active, scenario.demands)
        pk = yma_packets(self.params, scenario.active, scenario.demand_of, self.t, self.coded_rows, lead)
        return Transmission(self.params, tuple(pk))

    def decode(self, user, scenario, cache, received):
        f, t, B = self.field, self.t, self.params.B
        d = scenario.demand_of(user)
        cached = {pk.label: v for pk, v in cache}
        sent = {pk.label: v for pk, v in received}
        order = subsets_lex(scenario.active, t)
        values = []
        for Q in order:
            if user in Q:
                values.append(cached[("C", d, Q)])
                continue
            S = tuple(sorted(Q + (user,)))
            if ("X", S) in sent:
                v = sent[("X", S)].copy()
                for j in Q:
                    other = tuple(sorted(set(S) - {j}))
                    v = (v - cached[("C", scenario.demand_of(j), other)]) % f.q
                values.append(v)
                continue
            # message skipped by the leader rule: evaluate it from everything held
            rows = np.vstack([pk.coeffs for pk, _ in cache + received])
            vals = np.concatenate([v for _, v in cache + received])
            ok, v = span_values(rows, vals, self.coded_rows(d, Q), f)
            if not ok.all():
                raise DecodeError(f"coded subfile {Q} of file {d} not recoverable by user {user}")
            values.append(v)
        g_sub = self.G[[self.coded.index(Q) for Q in order]]
        sub = B // g_sub.shape[1]
        rhs = np.vstack([np.asarray(v).reshape(1, sub) for v in values])
        return solve(g_sub, rhs, f).reshape(-1)


class New2Scheme(Scheme):
    """Cross-file coded placement Z_k = G_k (F_1 + ... + F_N) with two-step delivery."""

    name = "new2"
    has_decoder = True

    def __init__(self, params, t=None, blocks=None):
        super().__init__(params, None)
        p = params
        rows = p.B // p.Kp
        if blocks is None:
            if rows == 1 and p.K <= p.Kp + 1:
                g, _ = pick_mds(p.K, p.Kp, p.q)
                blocks = [g[i:i + 1] for i in range(p.K)]
            else:
                try:
                    blocks = block_mds_family(p.K, rows, p.B, self.field)
                except FieldTooSmallError:
                    raise FieldTooSmallError(f"GF({p.q}) too small for {p.K} blocks") from None
        self.blocks = [self.field.array(b) for b in blocks]
        if len(self.blocks) != p.K or any(b.shape != (rows, p.B) for b in self.blocks):
            raise ValueError(f"need {p.K} blocks of shape {(rows, p.B)}")

    def _check(self):
        p = self.params
        if p.Kp < p.N:
            raise UnsupportedRegimeError(f"cross-file scheme needs K' >= N (K'={p.Kp}, N={p.N})")

    @classmethod
    def divisor(cls, K, Kp, N, t):
        return Kp

    @classmethod
    def default_q(cls, K, Kp, N, t):
        return 2 if K <= Kp + 1 else smallest_prime_at_least(K)

    def is_mds(self) -> bool:
        return blocks_full_rank(self.blocks, self.params.Kp, self.field)

    def _on(self, n, block):
        return embed(self.params, n, block)

    def place(self):
        p = self.params
        caches = {
            k: (LinearPacket(("Z", k), sum(self._on(n, self.blocks[k - 1]) for n in range(1, p.N + 1))),)
            for k in range(1, p.K + 1)
        }
        return CachePlan(p, caches)

    def groups(self, scenario) -> dict[int, list[int]]:
        g: dict[int, list[int]] = {}
        for u, n in zip(scenario.active, scenario.demands):
            g.setdefault(n, []).append(u)
        return g

    def deliver(self, scenario):
        p = self.params
        groups = self.groups(scenario)
        eye = np.eye(p.B, dtype=DTYPE)
        if len(groups) < p.N:
            return Transmission(p, tuple(LinearPacket(("F", n), self._on(n, eye)) for n in sorted(groups)))
        step1 = [LinearPacket(("G", u, n), self._on(n, self.blocks[u - 1]))
                 for j in range(1, p.N + 1) for u in groups[j]
                 for n in range(1, p.N + 1) if n != j]
        step2 = []
        for n in range(1, p.N + 1):
            lead, *rest = groups[n]
            for j in rest:
                coeffs = self._on(n, (self.blocks[lead - 1] + self.blocks[j - 1]) % p.q)
                step2.append(LinearPacket(("P", lead, j, n), coeffs))
        return Transmission(p, tuple(step1 + step2))

    def decode(self, user, scenario, cache, received):
        p, q = self.params, self.params.q
        d = scenario.demand_of(user)
        sent = {pk.label: v for pk, v in received}
        if ("F", d) in sent:
            return sent[("F", d)]
        groups = self.groups(scenario)
        own = next(v for pk, v in cache if pk.label == ("Z", user)).copy()
        for n in range(1, p.N + 1):
            if n != d:
                own = (own - sent[("G", user, n)]) % q
        known = {user: own}
        for u in scenario.active:
            if u not in groups[d]:
                known[u] = sent[("G", u, d)]
        lead, *rest = groups[d]
        if user != lead:
            known[lead] = (sent[("P", lead, user, d)] - own) % q
        for j in rest:
            if j not in known:
                known[j] = (sent[("P", lead, j, d)] - known[lead]) % q
        stacked = np.vstack([self.blocks[u - 1] for u in scenario.active])
        rhs = np.concatenate([known[u] for u in scenario.active])
        return solve(stacked, rhs, self.field)


class BlockCodedScheme(Scheme):
    """MAN-style placement of C(K, t) MDS-coded blocks G_T F_n, eta*B rows each."""

    name = "remark2"

    def __init__(self, params, t, blocks=None):
        super().__init__(params, t)
        p = params
        fam = subsets_lex(range(1, p.K + 1), t)
        rows = p.B // self.subfile_divisor
        if blocks is None:
            n = len(fam) * rows
            if rows == 1 and n <= p.B + 1:
                g, _ = pick_mds(n, p.B, p.q)
                blocks = [g[i:i + 1] for i in range(len(fam))]
            else:
                blocks = block_mds_family(len(fam), rows, p.B, self.field)
        self.fam = fam
        self.blocks = [self.field.array(b) for b in blocks]

    def _check(self):
        if self.t is None or not 1 <= self.t <= self.params.Kp - 1:
            raise UnsupportedRegimeError(f"t must lie in [1, K'-1], got {self.t}")

    @classmethod
    def divisor(cls, K, Kp, N, t):
        return binom(Kp - 1, t) + binom(K - 1, t - 1)

    @classmethod
    def default_q(cls, K, Kp, N, t):
        n, k = binom(K, t), cls.divisor(K, Kp, N, t)
        return pick_mds(n, k, None)[1]

    def is_mds(self) -> bool:
        return blocks_full_rank(self.blocks, self.subfile_divisor, self.field)

    def piece(self, n, T):
        return embed(self.params, n, self.blocks[self.fam.index(T)])

    def place(self):
        p = self.params
        caches = {
            k: tuple(LinearPacket(("C", n, T), self.piece(n, T))
                     for n in range(1, p.N + 1) for T in self.fam if k in T)
            for k in range(1, p.K + 1)
        }
        return CachePlan(p, caches)

    def deliver(self, scenario):
        lead = leaders(scenario.active, scenario.demands)
        pk = yma_packets(self.params, scenario.active, scenario.demand_of, self.t, self.piece, lead)
        return Transmission(self.params, tuple(pk))


# binary cache-encoding rows for the K=6, K'=3 example
_G12, _G13, _G23 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def _xor(a, b):
    return tuple(x ^ y for x, y in zip(a, b))


BINARY_EX_CACHE = {
    1: (_G12, _G13),
    2: (_G12, _G23),
    3: (_G13, _G23),
    4: (_xor(_G13, _G23), _xor(_G12, _G23)),
    5: (_xor(_G13, _G23), _xor(_G12, _G13)),
    6: (_xor(_G12, _G23), _xor(_G12, _G13)),
}

BINARY_EX_PAIRS = {(1, 2): _G12, (1, 3): _G13, (2, 3): _G23}
for _pair in [(1, 4), (1, 5), (1, 6), (5, 6)]:
    BINARY_EX_PAIRS[_pair] = _xor(_G12, _G13)
for _pair in [(2, 5), (2, 4), (2, 6), (4, 6)]:
    BINARY_EX_PAIRS[_pair] = _xor(_G12, _G23)
for _pair in [(3, 6), (3, 4), (3, 5), (4, 5)]:
    BINARY_EX_PAIRS[_pair] = _xor(_G13, _G23)


class BinaryExampleScheme(Scheme):
    """Hand-built binary scheme for K=6, K'=3: M/N = 2/3, R = 1/3."""

    name = "remark2ex"
    has_decoder = True

    def _check(self):
        p = self.params
        if (p.K, p.Kp) != (6, 3) or p.N < 3 or p.q != 2:
            raise UnsupportedRegimeError("the binary example needs K=6, K'=3, N>=3, q=2")

    @classmethod
    def divisor(cls, K, Kp, N, t):
        return 3

    def g(self, a: int, b: int) -> np.ndarray:
        return np.asarray(BINARY_EX_PAIRS[tuple(sorted((a, b)))], dtype=DTYPE)

    def cache_matrix(self, k: int) -> np.ndarray:
        return np.asarray(BINARY_EX_CACHE[k], dtype=DTYPE)

    def place(self):
        p = self.params
        caches = {
            k: tuple(LinearPacket(("Z", k, n), embed(p, n, coded_block(self.cache_matrix(k), p.B)))
                     for n in range(1, p.N + 1))
            for k in range(1, p.K + 1)
        }
        return CachePlan(p, caches)

    def deliver(self, scenario):
        p = self.params
        u1, u2, u3 = scenario.active
        d1, d2, d3 = scenario.demands
        coeffs = (embed(p, d1, coded_block(self.g(u2, u3), p.B))
                  + embed(p, d2, coded_block(self.g(u1, u3), p.B))
                  + embed(p, d3, coded_block(self.g(u1, u2), p.B))) % 2
        return Transmission(p, (LinearPacket(("X", scenario.active), coeffs),))

    def decode(self, user, scenario, cache, received):
        f, B = self.field, self.params.B
        sub = B // 3
        cached = {pk.label: v for pk, v in cache}
        gk = self.cache_matrix(user)
        (_, x), = received
        x = x.copy()
        others = [u for u in scenario.active if u != user]
        for u, n in zip(scenario.active, scenario.demands):
            if u == user:
                continue
            # the term sent for user u is keyed by the pair of the other two users
            pair = [w for w in scenario.active if w != u]
            combo = solve(gk.T, self.g(*pair), f)  # g = combo @ G_user
            x = (x - f.matmul(combo, cached[("Z", user, n)].reshape(2, sub))) % 2
        d = scenario.demand_of(user)
        system = np.vstack([gk, self.g(*others)])
        rhs = np.vstack([cached[("Z", user, d)].reshape(2, sub), x.reshape(1, sub)])
        # rows of the solution are the three parts of the file, in order
        return solve(system, rhs, f).reshape(-1)


REGISTRY = {
    "man": ManScheme,
    "base": BaselineScheme,
    "new1": New1Scheme,
    "new2": New2Scheme,
    "remark2": BlockCodedScheme,
    "remark2ex": BinaryExampleScheme,
}


def make_scheme(name: str, K: int, Kp: int, N: int, t: int | None = None,
                q: int | None = None, B: int | None = None, **kw) -> Scheme:
    """Build a scheme with the smallest admissible B and (unless forced) q."""
    try:
        cls = REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown scheme {name!r}; choose from {sorted(REGISTRY)}") from None
    if name in ("new2", "remark2ex"):
        t = None
    elif t is None:
        raise ValueError(f"scheme {name!r} needs t")
    if B is None:
        B = cls.divisor(K, Kp, N, t)
    if q is None:
        q = cls.default_q(K, Kp, N, t)
    return cls(SystemParams(K, Kp, N, B, q), t, **kw)
