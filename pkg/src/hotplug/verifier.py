"""Symbol-level simulation and exhaustive verification of caching schemes.

The generic decoder ignores scheme structure entirely: it row-reduces the
user's cache rows together with every received row and reads off the
demanded file wherever the system pins it down.  It is the oracle the
scheme-specific decoders are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .combinat import demand_rank
from .field import rank, span_values
from .model import (CachePlan, DemandScenario, FileLibrary, SystemParams, Transmission,
                    enumerate_scenarios, generate_library, stack)
from .schemes import DecodeError, Scheme


class ScenarioCapExceeded(RuntimeError):
    pass


def generic_linear_decode(cache_rows, cache_values, received_rows, received_values,
                          demanded_file: int, params: SystemParams) -> np.ndarray | None:
    """Demanded file's B symbols if the stacked rows determine them, else None."""
    f, B, W = params.field, params.B, params.width
    cache_rows = np.asarray(cache_rows).reshape(-1, W)
    received_rows = np.asarray(received_rows).reshape(-1, W)
    if len(cache_values) != cache_rows.shape[0] or len(received_values) != received_rows.shape[0]:
        raise ValueError("row and value counts differ")
    rows = np.vstack([cache_rows, received_rows])
    vals = np.concatenate([np.asarray(cache_values, dtype=np.int64).reshape(-1),
                           np.asarray(received_values, dtype=np.int64).reshape(-1)])
    targets = np.zeros((B, W), dtype=np.int64)
    start = (demanded_file - 1) * B
    targets[np.arange(B), start + np.arange(B)] = 1
    ok, out = span_values(rows, vals, targets, f)
    return out if ok.all() else None


def decodable(cache_rows, received_rows, demanded_file: int, params: SystemParams) -> bool:
    """Library-free check: appending the file's unit rows leaves the rank unchanged."""
    f, B, W = params.field, params.B, params.width
    held = np.vstack([np.asarray(cache_rows).reshape(-1, W), np.asarray(received_rows).reshape(-1, W)])
    unit = np.zeros((B, W), dtype=np.int64)
    unit[np.arange(B), (demanded_file - 1) * B + np.arange(B)] = 1
    return rank(held, f) == rank(np.vstack([held, unit]), f)


@dataclass
class UserResult:
    user: int
    demanded: int
    generic: np.ndarray | None
    specific: np.ndarray | None
    rank_ok: bool
    correct: bool
    agree: bool


@dataclass
class SimulationResult:
    scenario: DemandScenario
    transmission: Transmission
    users: list[UserResult]

    @property
    def load(self) -> Fraction:
        return self.transmission.load

    @property
    def ok(self) -> bool:
        return all(u.correct and u.agree and u.rank_ok for u in self.users)


class PlacedScheme:
    """A scheme with its placement and realised cache contents computed once."""

    def __init__(self, scheme: Scheme, library: FileLibrary):
        if library.params != scheme.params:
            raise ValueError("library parameters differ from the scheme's")
        self.scheme = scheme
        self.library = library
        self.plan: CachePlan = scheme.place()
        self.cache = {
            k: [(pk, pk.evaluate(library)) for pk in pks] for k, pks in self.plan.caches.items()
        }
        self.cache_rows = {k: self.plan.matrix(k) for k in self.plan.caches}


def simulate(scheme: Scheme, scenario: DemandScenario, library: FileLibrary,
             placed: PlacedScheme | None = None) -> SimulationResult:
    """Deliver for one scenario and decode every active user both ways."""
    placed = placed or PlacedScheme(scheme, library)
    params = scheme.params
    scenario.validate(params)
    tx = scheme.deliver(scenario)
    received = [(pk, pk.evaluate(library)) for pk in tx.packets]
    rx_rows = tx.matrix()
    rx_vals = np.concatenate([v for _, v in received]) if received else np.zeros(0, dtype=np.int64)
    results = []
    for user, d in zip(scenario.active, scenario.demands):
        cache = placed.cache[user]
        c_vals = np.concatenate([v for _, v in cache]) if cache else np.zeros(0, dtype=np.int64)
        generic = generic_linear_decode(placed.cache_rows[user], c_vals, rx_rows, rx_vals, d, params)
        rank_ok = decodable(placed.cache_rows[user], rx_rows, d, params)
        truth = library.file(d)
        specific = None
        if scheme.has_decoder:
            try:
                specific = scheme.decode(user, scenario, cache, received)
            except (DecodeError, ArithmeticError, KeyError):
                specific = None
        correct = generic is not None and np.array_equal(generic, truth)
        if not scheme.has_decoder:
            agree = True
        elif specific is None or generic is None:
            agree = specific is None and generic is None
        else:
            agree = np.array_equal(specific, generic)
        results.append(UserResult(user, d, generic, specific, rank_ok, correct, agree))
    return SimulationResult(scenario, tx, results)


@dataclass
class VerificationReport:
    scheme: str
    params: SystemParams
    t: int | None
    scenarios_checked: int
    decode_failures: list[tuple[DemandScenario, int]]
    worst_load: Fraction
    formula_load: Fraction
    memory: Fraction
    formula_memory: Fraction
    sampled: bool = False
    max_rank_load: dict[int, Fraction] = field(default_factory=dict)
    disagreements: list[tuple[DemandScenario, int]] = field(default_factory=list)

    @property
    def match(self) -> bool | None:
        if self.sampled:
            return None
        return not self.decode_failures and self.worst_load == self.formula_load

    @property
    def memory_match(self) -> bool:
        return self.memory == self.formula_memory

    def summary(self) -> str:
        p = self.params
        return (f"scheme={self.scheme} K={p.K} Kp={p.Kp} N={p.N} t={self.t} B={p.B} q={p.q} "
                f"scenarios={self.scenarios_checked}{' (sampled)' if self.sampled else ''} "
                f"failures={len(self.decode_failures)} M={self.memory} worst_load={self.worst_load} "
                f"formula_load={self.formula_load} match={self.match}")


def exhaustive_report(scheme: Scheme, seed: int = 0, cap: int = 10**6,
                      sample: int | None = None) -> VerificationReport:
    """Simulate every (active set, demand) scenario and compare against the formula.

    With ``sample`` set, that many scenarios are drawn at random instead and
    the report is flagged as sampled (its ``match`` is then None).
    """
    params = scheme.params
    library = generate_library(params, seed)
    placed = PlacedScheme(scheme, library)
    count = _scenario_count(params)
    if sample is None:
        if count > cap:
            raise ScenarioCapExceeded(f"{count} scenarios exceed the cap of {cap}; use sampling")
        scenarios = enumerate_scenarios(params)
    else:
        scenarios = _sample_scenarios(params, sample, seed)
    failures, disagreements = [], []
    worst = Fraction(0)
    by_rank: dict[int, Fraction] = {}
    for sc in scenarios:
        res = simulate(scheme, sc, library, placed)
        worst = max(worst, res.load)
        r = demand_rank(sc.demands)
        by_rank[r] = max(by_rank.get(r, Fraction(0)), res.load)
        failures.extend((sc, u.user) for u in res.users if not (u.correct and u.agree and u.rank_ok))
        disagreements.extend((sc, u.user) for u in res.users if not u.agree)
    cp = scheme.corner_point
    return VerificationReport(scheme.name, params, scheme.t, len(scenarios), failures, worst, cp.R,
                              placed.plan.memory, cp.M, sampled=sample is not None,
                              max_rank_load=dict(sorted(by_rank.items())), disagreements=disagreements)


def _scenario_count(params: SystemParams) -> int:
    from math import comb
    return comb(params.K, params.Kp) * params.N ** params.Kp


def _sample_scenarios(params: SystemParams, n: int, seed: int) -> list[DemandScenario]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        active = tuple(sorted(int(u) for u in rng.choice(params.K, size=params.Kp, replace=False) + 1))
        demands = tuple(int(d) for d in rng.integers(1, params.N + 1, size=params.Kp))
        out.append(DemandScenario(active, demands))
    return out
