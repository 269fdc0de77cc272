"""Exact memory-load points, converse bounds and lower convex envelopes.

All quantities are :class:`fractions.Fraction`.  ``K`` is the number of
users, ``Kp`` the number of active users and ``N`` the number of files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .combinat import binom

GAP_BOUND = Fraction("2.00884")
SCHEMES = ("man", "base", "new1", "new2", "remark2", "remark2ex")


class UnsupportedRegimeError(ValueError):
    """The requested scheme is not defined for these parameters."""


class TradeoffPoint(NamedTuple):
    M: Fraction
    R: Fraction

    @classmethod
    def of(cls, M, R) -> "TradeoffPoint":
        return cls(Fraction(M), Fraction(R))


# --- corner points ---------------------------------------------------------

def man_point(K: int, N: int, t: int) -> TradeoffPoint:
    """MAN placement with YMA delivery, all K users active (r = min(N, K))."""
    r = min(N, K)
    return TradeoffPoint(Fraction(N * binom(K - 1, t - 1), binom(K, t)),
                         Fraction(binom(K, t + 1) - binom(K - r, t + 1), binom(K, t)))


def base_point(K: int, Kp: int, N: int, t: int) -> TradeoffPoint:
    r = min(N, Kp)
    return TradeoffPoint(Fraction(N * binom(K - 1, t - 1), binom(K, t)),
                         Fraction(binom(K, t + 1) - binom(K - r, t + 1), binom(K, t)))


def new1_point(K: int, Kp: int, N: int, t: int) -> TradeoffPoint:
    r = min(N, Kp)
    return TradeoffPoint(Fraction(N * binom(K - 1, t - 1), binom(Kp, t)),
                         Fraction(binom(Kp, t + 1) - binom(Kp - r, t + 1), binom(Kp, t)))


def new1_t1_closed_form(Kp: int, N: int) -> TradeoffPoint:
    """The t=1 point of the first MDS scheme written without binomials."""
    r = min(N, Kp)
    if Kp - r >= 2:
        return TradeoffPoint(Fraction(N, Kp), r - Fraction(r * (r + 1), 2 * Kp))
    return TradeoffPoint(Fraction(N, Kp), Fraction(Kp - 1, 2))


def new2_point(Kp: int, N: int) -> TradeoffPoint:
    if Kp < N:
        raise UnsupportedRegimeError(f"cross-file scheme needs K' >= N (K'={Kp}, N={N})")
    return TradeoffPoint(Fraction(1, Kp), N * (1 - Fraction(1, Kp)))


def remark2_eta(K: int, Kp: int, t: int) -> Fraction:
    return Fraction(1, binom(Kp - 1, t) + binom(K - 1, t - 1))


def remark2_point(K: int, Kp: int, N: int, t: int) -> TradeoffPoint:
    if not 1 <= t <= Kp - 1:
        raise UnsupportedRegimeError(f"t must lie in [1, K'-1], got t={t}")
    eta = remark2_eta(K, Kp, t)
    r = min(N, Kp)
    return TradeoffPoint(N * binom(K - 1, t - 1) * eta,
                         (binom(Kp, t + 1) - binom(Kp - r, t + 1)) * eta)


def remark2ex_point() -> TradeoffPoint:
    """Memory per file 2/3 (given as M/N) and load 1/3 for K=6, K'=3."""
    return TradeoffPoint(Fraction(2, 3), Fraction(1, 3))


def t_range(scheme: str, K: int, Kp: int) -> list:
    if scheme in ("man", "base"):
        return list(range(K + 1))
    if scheme == "new1":
        return list(range(Kp + 1))
    if scheme == "remark2":
        return list(range(1, Kp))
    return [None]


def corner_point(scheme: str, K: int, Kp: int, N: int, t=None) -> TradeoffPoint:
    if scheme == "man":
        return man_point(K, N, t)
    if scheme == "base":
        return base_point(K, Kp, N, t)
    if scheme == "new1":
        return new1_point(K, Kp, N, t)
    if scheme == "new2":
        return new2_point(Kp, N)
    if scheme == "remark2":
        return remark2_point(K, Kp, N, t)
    if scheme == "remark2ex":
        if (K, Kp) != (6, 3) or N < 3:
            raise UnsupportedRegimeError("the binary example is for K=6, K'=3, N>=3")
        p = remark2ex_point()
        return TradeoffPoint(p.M * N, p.R)
    raise ValueError(f"unknown scheme {scheme!r}")


def achievable_points(scheme: str, K: int, Kp: int, N: int) -> list[TradeoffPoint]:
    """Corner points of ``scheme`` over its t range plus (0, r') and (N, 0).

    Points with M > N (possible for the MDS scheme at large t) are dropped.
    """
    r = min(N, Kp) if scheme != "man" else min(N, K)
    pts = {TradeoffPoint.of(0, r), TradeoffPoint.of(N, 0)}
    for t in t_range(scheme, K, Kp):
        p = corner_point(scheme, K, Kp, N, t)
        if p.M <= N:
            pts.add(p)
    return sorted(pts)


def decentralized_load(M, N: int, Kp: int) -> Fraction:
    """Load of random i.i.d. placement with YMA-style delivery, r = min(N, K')."""
    M = Fraction(M)
    if not 0 <= M <= N:
        raise ValueError(f"M={M} outside [0, {N}]")
    r = min(N, Kp)
    if M == 0:
        return Fraction(r)
    mu = M / N
    return (1 - mu) / mu * (1 - (1 - mu) ** r)


# --- envelopes -------------------------------------------------------------

@dataclass(frozen=True)
class TradeoffCurve:
    breakpoints: tuple[TradeoffPoint, ...]

    def __call__(self, M) -> Fraction:
        M = Fraction(M)
        bp = self.breakpoints
        if not bp[0].M <= M <= bp[-1].M:
            raise ValueError(f"M={M} outside [{bp[0].M}, {bp[-1].M}]")
        for a, b in zip(bp, bp[1:]):
            if a.M <= M <= b.M:
                return a.R + (b.R - a.R) * (M - a.M) / (b.M - a.M)
        return bp[0].R

    def is_convex(self) -> bool:
        slopes = [(b.R - a.R) / (b.M - a.M) for a, b in zip(self.breakpoints, self.breakpoints[1:])]
        return all(s1 <= s2 for s1, s2 in zip(slopes, slopes[1:]))

    def is_non_increasing(self) -> bool:
        return all(b.R <= a.R for a, b in zip(self.breakpoints, self.breakpoints[1:]))


def _cross(o, a, b) -> Fraction:
    return (a.M - o.M) * (b.R - o.R) - (a.R - o.R) * (b.M - o.M)


def lower_convex_envelope(points) -> TradeoffCurve:
    """Lower convex hull of (M, R) points, with points right of the minimum load dropped."""
    pts = sorted({TradeoffPoint.of(*p) for p in points})
    if not pts:
        raise ValueError("envelope of an empty point set")
    best: dict[Fraction, TradeoffPoint] = {}
    for p in pts:
        if p.M not in best or p.R < best[p.M].R:
            best[p.M] = p
    hull: list[TradeoffPoint] = []
    for p in sorted(best.values()):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    lowest = min(range(len(hull)), key=lambda i: (hull[i].R, hull[i].M))
    return TradeoffCurve(tuple(hull[:lowest + 1]))


def envelope(scheme: str, K: int, Kp: int, N: int) -> TradeoffCurve:
    return lower_convex_envelope(achievable_points(scheme, K, Kp, N))


def best_envelope(K: int, Kp: int, N: int) -> TradeoffCurve:
    """Envelope of every scheme implemented here that applies to (K, K', N)."""
    pts = achievable_points("base", K, Kp, N) + achievable_points("new1", K, Kp, N)
    if Kp >= N:
        pts += achievable_points("new2", K, Kp, N)
    return lower_convex_envelope(pts)


# --- converse bounds -------------------------------------------------------

def _check_memory(M, N) -> Fraction:
    M = Fraction(M)
    if not 0 <= M <= N:
        raise ValueError(f"M={M} outside [0, {N}]")
    return M


def cutset_bound(M, N: int, Kp: int) -> Fraction:
    M = _check_memory(M, N)
    best = max(s - Fraction(s, N // s) * M for s in range(1, min(N, Kp) + 1))
    return max(best, Fraction(0))


def optimal_2x2(M) -> Fraction:
    M = _check_memory(M, 2)
    return max(2 - 2 * M, Fraction(3, 2) - M, 1 - M / 2, Fraction(0))


def optimal_2user(M, N: int) -> Fraction:
    if N < 3:
        raise ValueError("two-user characterization stated for N >= 3")
    M = _check_memory(M, N)
    return max(2 - 3 * M / N, 1 - M / N, Fraction(0))


def lemma4_ell(N: int, s: int, alpha) -> int:
    """Smallest l in [s] with (s(s-1) - l(l-1))/2 + alpha*s <= (N-l+1) l."""
    alpha = Fraction(alpha)
    for ell in range(1, s + 1):
        if Fraction(s * (s - 1) - ell * (ell - 1), 2) + alpha * s <= (N - ell + 1) * ell:
            return ell
    raise ValueError(f"no admissible l for N={N}, s={s}, alpha={alpha}")


def lemma4_value(M, N: int, s: int, alpha, ell: int | None = None) -> Fraction:
    """One line of the s/alpha family (not clamped at zero)."""
    M, alpha = Fraction(M), Fraction(alpha)
    if ell is None:
        ell = lemma4_ell(N, s, alpha)
    return s - 1 + alpha - M * (s * (s - 1) - ell * (ell - 1) + 2 * alpha * s) / (2 * (N - ell + 1))


def yma_converse(M, N: int, Kp: int, alpha_steps: int = 1000) -> Fraction:
    """Max of the s/alpha lower bounds over s in [min(N,K')] and alpha = i/alpha_steps.

    For fixed s the minimising l is non-decreasing in alpha and the bound is
    affine in alpha while l is constant, so only the first and last grid
    point of each constant-l run needs evaluating; the result equals the
    plain scan over all grid points.
    """
    M = _check_memory(M, N)
    if alpha_steps < 1:
        raise ValueError("alpha_steps must be >= 1")
    A = alpha_steps
    best = Fraction(0)
    for s in range(1, min(N, Kp) + 1):
        prev = None  # largest threshold among smaller l
        for ell in range(1, s + 1):
            # alpha admissible for this l iff alpha <= thr
            thr = (Fraction((N - ell + 1) * ell) - Fraction(s * (s - 1) - ell * (ell - 1), 2)) / s
            lo = 0 if prev is None or prev < 0 else math.floor(prev * A) + 1
            hi = min(A, math.floor(thr * A)) if thr >= 0 else -1
            for i in {lo, hi}:
                if lo <= hi and 0 <= i <= A:
                    best = max(best, lemma4_value(M, N, s, Fraction(i, A), ell))
            prev = thr if prev is None else max(prev, thr)
            if prev >= 1:
                break
    return best


# --- optimality and gap checks ---------------------------------------------

@dataclass
class ItemCheck:
    item: int
    applicable: bool
    holds: bool | None = None
    detail: str = ""


@dataclass
class OptimalityReport:
    K: int
    Kp: int
    N: int
    items: dict[int, ItemCheck] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.items.values() if c.applicable)

    def applicable(self) -> list[int]:
        return [i for i, c in self.items.items() if c.applicable]


def memory_grid(lo, hi, points: int) -> list[Fraction]:
    lo, hi = Fraction(lo), Fraction(hi)
    if points < 2:
        raise ValueError("a grid needs at least 2 points")
    return [lo + (hi - lo) * Fraction(i, points - 1) for i in range(points)]


def _compare(curve, refs, lo, hi, grid_points, extra=()):
    """Return a mismatch description or '' if curve equals every ref on [lo, hi]."""
    ms = set(memory_grid(lo, hi, grid_points)) | {p.M for p in curve.breakpoints if lo <= p.M <= hi}
    ms |= {Fraction(m) for m in extra if lo <= m <= hi}
    for m in sorted(ms):
        got = curve(m)
        for name, ref in refs:
            want = ref(m)
            if got != want:
                return f"M={m}: envelope {got} != {name} {want}"
    return ""


def verify_optimality_cases(K: int, Kp: int, N: int, grid_points: int = 101,
                            alpha_steps: int = 1000) -> OptimalityReport:
    """Check each optimality item that applies to (K, K', N) by exact comparison."""
    rep = OptimalityReport(K, Kp, N)
    r = min(N, Kp)
    base = envelope("base", K, Kp, N)
    best = best_envelope(K, Kp, N)
    cut = ("cut-set", lambda m: cutset_bound(m, N, Kp))

    def record(item, applicable, mismatch="", must_contain=()):
        if not applicable:
            rep.items[item] = ItemCheck(item, False, None, "skipped")
            return
        missing = [p for p in must_contain if p not in best.breakpoints]
        if missing:
            mismatch = mismatch or f"missing breakpoints {missing}"
        rep.items[item] = ItemCheck(item, True, not mismatch, mismatch or "equal")

    # 1: single distinct demand
    record(1, r == 1, r == 1 and _compare(
        base, [("1-M/N", lambda m: 1 - m / N), cut], 0, N, grid_points))

    # 2: two active users, two files
    if Kp == 2 and N == 2:
        record(2, True, _compare(best, [("max{2-2M,3/2-M,1-M/2}", optimal_2x2)], 0, 2,
                                 grid_points, extra=(Fraction(1, 2), 1)),
               must_contain=(TradeoffPoint.of(1, Fraction(1, 2)), TradeoffPoint.of(Fraction(1, 2), 1)))
    else:
        record(2, False)

    # 3: two active users, N >= 3
    if Kp == 2 and N >= 3:
        record(3, True, _compare(best, [("max{2-3M/N,1-M/N}", lambda m: optimal_2user(m, N))], 0, N,
                                 grid_points),
               must_contain=(TradeoffPoint.of(Fraction(N, 2), Fraction(1, 2)),))
    else:
        record(3, False)

    # 4: N <= K', first segment on the s=N cut-set line
    if N <= Kp:
        p = new2_point(Kp, N)
        mism = _compare(best, [("N(1-M)", lambda m: N * (1 - m)), cut], 0, p.M, grid_points)
        if not mism and best(p.M) != p.R:
            mism = f"envelope misses the cross-file point {p}"
        record(4, True, mism)
    else:
        record(4, False)

    # 5: many files, first segment on the s=K', alpha=1, l=1 line
    if 2 * N >= Kp * (Kp + 1):
        hi = Fraction(N, Kp)
        mism = ""
        if lemma4_ell(N, Kp, 1) != 1:
            mism = "l != 1 at s=K', alpha=1"
        mism = mism or _compare(best, [
            ("K'-K'(K'+1)/2 M/N", lambda m: Kp - Fraction(Kp * (Kp + 1), 2) * m / N),
            ("lemma4(s=K',alpha=1)", lambda m: lemma4_value(m, N, Kp, 1)),
            ("yma_converse", lambda m: yma_converse(m, N, Kp, alpha_steps)),
        ], 0, hi, grid_points)
        record(5, True, mism, must_contain=(TradeoffPoint.of(hi, Fraction(Kp - 1, 2)),))
    else:
        record(5, False)

    # 6: last segment of the baseline on R = 1 - M/N
    lo = N * (1 - Fraction(1, K))
    record(6, True, _compare(base, [("1-M/N", lambda m: 1 - m / N), cut], lo, N, grid_points))
    return rep


@dataclass
class GapCertificate:
    K: int
    Kp: int
    N: int
    max_ratio: Fraction
    argmax: Fraction
    decentralized_ok: bool
    bound: Fraction = GAP_BOUND

    @property
    def ok(self) -> bool:
        return self.decentralized_ok and self.max_ratio <= self.bound

    def line(self) -> str:
        return f"max_ratio={float(self.max_ratio):.6f} bound={float(self.bound)} ok={str(self.ok).lower()}"


def gap_certificate(K: int, Kp: int, N: int, grid_points: int = 201,
                    alpha_steps: int = 1000) -> GapCertificate:
    """Largest ratio of the baseline envelope to the s/alpha converse over an M grid."""
    base = envelope("base", K, Kp, N)
    worst, where, dec_ok = Fraction(0), Fraction(0), True
    for m in memory_grid(0, N, grid_points):
        rb = base(m)
        if rb > decentralized_load(m, N, Kp):
            dec_ok = False
        lb = yma_converse(m, N, Kp, alpha_steps)
        if lb == 0:
            if rb != 0:
                return GapCertificate(K, Kp, N, Fraction(10**9), m, dec_ok)
            continue
        if rb / lb > worst:
            worst, where = rb / lb, m
    return GapCertificate(K, Kp, N, worst, where, dec_ok)
