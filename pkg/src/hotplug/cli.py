"""Command-line front end.

    hotplug verify   --K 3 --Kp 2 --N 2 --scheme new1 --t 1
    hotplug tradeoff --K 3 --Kp 2 --N 2 --out curves.csv
    hotplug bounds   --K 3 --Kp 2 --N 2 --grid 101
    hotplug gap      --K 15 --Kp 12 --N 20 --grid 201

Exit status: 0 on success, 1 when a verification or gap check fails, 2 on
inadmissible parameters.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import bounds
from .bounds import TradeoffPoint, UnsupportedRegimeError
from .field import FieldError, is_prime
from .model import SystemParams
from .schemes import REGISTRY, make_scheme
from .verifier import ScenarioCapExceeded, exhaustive_report

CSV_HEADER = ["scheme", "M_num", "M_den", "R_num", "R_den", "M_decimal", "R_decimal"]


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    K: int
    Kp: int
    N: int
    t: int | None = None
    schemes: tuple[str, ...] = ()
    grid: int = 101
    alpha_steps: int = 1000
    seed: int = 0
    out: str | None = None
    q: int | None = None
    sample: int | None = None

    def validate(self):
        try:
            SystemParams(self.K, self.Kp, self.N)
        except ValueError as e:
            raise UsageError(str(e)) from None
        if self.grid < 2:
            raise UsageError("--grid needs at least 2 points")
        if self.alpha_steps < 1:
            raise UsageError("--alpha-steps must be positive")
        if self.q is not None and not is_prime(self.q):
            raise UsageError(f"--q {self.q} is not prime")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hotplug", description="Hotplug coded caching: verify schemes, "
                                     "emit memory-load curves and converse bounds.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [("verify", "exhaustively simulate schemes"),
                        ("tradeoff", "envelope breakpoints and converse curves as CSV"),
                        ("bounds", "converse bounds on an M grid as CSV"),
                        ("gap", "baseline-to-converse ratio certificate")]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--K", type=int, required=True)
        p.add_argument("--Kp", type=int, required=True)
        p.add_argument("--N", type=int, required=True)
        p.add_argument("--t", type=int)
        p.add_argument("--scheme", action="append", choices=sorted(REGISTRY), dest="schemes")
        p.add_argument("--grid", type=int, default=201 if name == "gap" else 101)
        p.add_argument("--alpha-steps", type=int, default=1000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--q", type=int)
        p.add_argument("--out")
        p.add_argument("--sample", type=int, metavar="COUNT",
                       help="simulate COUNT random scenarios instead of all of them")
    return parser


def _config(ns) -> RunConfig:
    return RunConfig(ns.command, ns.K, ns.Kp, ns.N, ns.t, tuple(ns.schemes or ()), ns.grid,
                     ns.alpha_steps, ns.seed, ns.out, ns.q, ns.sample)


# --- CSV -------------------------------------------------------------------

def _row(name: str, p: TradeoffPoint) -> list:
    M, R = Fraction(p.M), Fraction(p.R)
    return [name, M.numerator, M.denominator, R.numerator, R.denominator, f"{float(M):.6f}", f"{float(R):.6f}"]


def write_csv(rows, out: str | None, stdout) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        stdout.write(buf.getvalue())


def read_csv(text: str) -> dict[str, list[TradeoffPoint]]:
    """Parse emitted CSV back into exact points, keyed by curve name."""
    curves: dict[str, list[TradeoffPoint]] = {}
    for rec in csv.DictReader(io.StringIO(text)):
        p = TradeoffPoint(Fraction(int(rec["M_num"]), int(rec["M_den"])),
                          Fraction(int(rec["R_num"]), int(rec["R_den"])))
        curves.setdefault(rec["scheme"], []).append(p)
    return curves


def converse_rows(cfg: RunConfig) -> list:
    N, Kp = cfg.N, cfg.Kp
    grid = bounds.memory_grid(0, N, cfg.grid)
    curves = [("cutset", lambda m: bounds.cutset_bound(m, N, Kp)),
              ("yma_converse", lambda m: bounds.yma_converse(m, N, Kp, cfg.alpha_steps))]
    if Kp == 2 and N == 2:
        curves.append(("optimal_2x2", bounds.optimal_2x2))
    if Kp == 2 and N >= 3:
        curves.append(("optimal_2user", lambda m: bounds.optimal_2user(m, N)))
    return [_row(name, TradeoffPoint(m, fn(m))) for name, fn in curves for m in grid]


def tradeoff_rows(cfg: RunConfig) -> list:
    K, Kp, N = cfg.K, cfg.Kp, cfg.N
    names = cfg.schemes or ("base", "new1") + (("new2",) if Kp >= N else ())
    rows = []
    for name in names:
        if name == "remark2ex":
            pts = [TradeoffPoint.of(0, min(N, Kp)), bounds.corner_point(name, K, Kp, N), TradeoffPoint.of(N, 0)]
        elif name == "new2":
            # the cross-file point is used together with the per-file MDS points
            pts = bounds.achievable_points("new1", K, Kp, N) + bounds.achievable_points("new2", K, Kp, N)
        elif name == "man":
            pts = bounds.achievable_points("man", K, K, N)
        else:
            pts = bounds.achievable_points(name, K, Kp, N)
        curve = bounds.lower_convex_envelope(pts)
        rows += [_row(name, p) for p in curve.breakpoints]
    grid = bounds.memory_grid(0, N, cfg.grid)
    rows += [_row("decentralized", TradeoffPoint(m, bounds.decentralized_load(m, N, Kp))) for m in grid]
    return rows + converse_rows(cfg)


# --- commands --------------------------------------------------------------

def cmd_verify(cfg: RunConfig, stdout=sys.stdout) -> int:
    if not cfg.schemes:
        raise UsageError("verify needs at least one --scheme")
    jobs = []
    for name in cfg.schemes:
        K, Kp = cfg.K, cfg.Kp
        ts = [cfg.t] if cfg.t is not None else bounds.t_range(name, K, Kp)
        for t in ts:
            try:
                jobs.append(make_scheme(name, K, Kp, cfg.N, t, q=cfg.q))
            except (UnsupportedRegimeError, FieldError, ValueError) as e:
                raise UsageError(f"{name} (t={t}): {e}") from None
    status, records = 0, []
    for scheme in jobs:
        try:
            rep = exhaustive_report(scheme, seed=cfg.seed, sample=cfg.sample)
        except ScenarioCapExceeded as e:
            raise UsageError(str(e)) from None
        print(rep.summary(), file=stdout)
        ok = rep.match if not rep.sampled else (not rep.decode_failures and rep.worst_load <= rep.formula_load)
        if rep.decode_failures:
            sc, user = rep.decode_failures[0]
            print(f"  first failure: active={list(sc.active)} demands={list(sc.demands)} user={user}", file=stdout)
        if not ok:
            status = 1
        p = rep.params
        records.append(dict(scheme=rep.scheme, K=p.K, Kp=p.Kp, N=p.N, B=p.B, q=p.q, t=rep.t,
                            scenarios=rep.scenarios_checked, sampled=rep.sampled,
                            failures=len(rep.decode_failures), memory=str(rep.memory),
                            worst_load=str(rep.worst_load), formula_load=str(rep.formula_load),
                            match=rep.match))
    payload = json.dumps(records, indent=2)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    else:
        print(payload, file=stdout)
    return status


def cmd_tradeoff(cfg: RunConfig, stdout=sys.stdout) -> int:
    try:
        rows = tradeoff_rows(cfg)
    except UnsupportedRegimeError as e:
        raise UsageError(str(e)) from None
    write_csv(rows, cfg.out, stdout)
    return 0


def cmd_bounds(cfg: RunConfig, stdout=sys.stdout) -> int:
    write_csv(converse_rows(cfg), cfg.out, stdout)
    return 0


def cmd_gap(cfg: RunConfig, stdout=sys.stdout) -> int:
    cert = bounds.gap_certificate(cfg.K, cfg.Kp, cfg.N, cfg.grid, cfg.alpha_steps)
    line = cert.line()
    print(line, file=stdout)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(line + "\n")
    return 0 if cert.ok else 1


COMMANDS = {"verify": cmd_verify, "tradeoff": cmd_tradeoff, "bounds": cmd_bounds, "gap": cmd_gap}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    cfg = _config(ns)
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg, stdout=stdout)
    except UsageError as e:
        print(f"hotplug {cfg.command}: {e}", file=stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
