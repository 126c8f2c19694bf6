"""Command-line entry point: ``cubicpoints <subcommand> [flags]``.

Records are written one per line as JSON (default) or CSV.  Floats carry 12
significant digits; exact rationals are written as "p/q" strings.  Exit
status: 0 on success, 1 when a cost or overflow guard refuses the request
(or a verify criterion fails), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

THREADS_ENV = "CUBICPOINTS_THREADS"


@dataclass(frozen=True)
class RunConfig:
    command: str
    threads: int | None
    seed: int
    fmt: str
    out: str | None


def fmt_value(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return float(format(v, ".12g")) if math.isfinite(v) else str(v)
    return v


def _json_line(rec: dict) -> str:
    parts = []
    for k, v in rec.items():
        v = fmt_value(v)
        if isinstance(v, float):
            parts.append(f"{json.dumps(k)}: {format(v, '.12g')}")
        else:
            parts.append(f"{json.dumps(k)}: {json.dumps(v)}")
    return "{" + ", ".join(parts) + "}"


def write_records(records: Sequence[dict], cfg: RunConfig, header: Sequence[str] | None = None) -> None:
    buf = io.StringIO()
    if cfg.fmt == "csv":
        cols = list(header or (records[0].keys() if records else []))
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in records:
            row = []
            for c in cols:
                v = fmt_value(r.get(c))
                row.append(format(v, ".12g") if isinstance(v, float) else ("" if v is None else v))
            w.writerow(row)
    else:
        for r in records:
            buf.write(_json_line(r) + "\n")
    text = buf.getvalue()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from exc


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {s!r}") from exc


def _frac_list(s: str) -> list[Fraction]:
    return [_fraction(x) for x in s.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help=f"worker threads (env {THREADS_ENV})")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write records here instead of stdout")

    p = argparse.ArgumentParser(prog="cubicpoints", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("nq", parents=[common], help="square roots of a unit modulo q")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--method", choices=("brute", "formula", "both"), default="both")
    s.add_argument("--list", action="store_true", help="also list the roots")

    s = sub.add_parser("sigma", parents=[common], help="averaged congruence sums")
    s.add_argument("--r", type=int, default=4)
    s.add_argument("--K", type=_frac_list, default=None)
    s.add_argument("--Q", type=_fraction, default=None)
    s.add_argument("--b", type=int, default=1)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--t", type=_int_list, default=None)
    s.add_argument("--u", type=int, default=1)
    s.add_argument("--weight", choices=("const", "invq"), default="const")
    s.add_argument("--interval", choices=("left-open", "right-open", "open", "closed"), default="left-open")
    s.add_argument("--Qlo", type=_fraction, default=None, help="lower q endpoint (default Q/2)")
    s.add_argument("--eps", type=float, default=0.1)
    s.add_argument("--primed", action="store_true", help="add the extra coprimality conditions")
    s.add_argument("--grid", action="store_true", help="sweep the verification grid, CSV output")

    s = sub.add_parser("count", parents=[common], help="points of height <= B on U")
    s.add_argument("--B", type=int, required=True)
    s.add_argument("--method", choices=("torsor", "direct", "both"), default="torsor")
    s.add_argument("--timing", action="store_true", help="add wall-clock seconds (not reproducible)")

    s = sub.add_parser("points", parents=[common], help="list points of height <= B as CSV")
    s.add_argument("--B", type=int, required=True)

    s = sub.add_parser("constant", parents=[common], help="alpha, Euler product, omega_inf, c_SH")
    s.add_argument("--prime-limit", type=int, default=10**6)
    s.add_argument("--samples", type=int, default=4_000_000)

    s = sub.add_parser("fit", parents=[common], help="N(B) against c_SH B (log B)^6")
    s.add_argument("--Bmin", type=int, default=10**3)
    s.add_argument("--Bmax", type=int, default=10**6)
    s.add_argument("--steps", type=int, default=4)
    s.add_argument("--prime-limit", type=int, default=10**6)
    s.add_argument("--samples", type=int, default=4_000_000)
    s.add_argument("--main-term", action="store_true", help="add the theta1' V1 sum where B <= 1e5")

    s = sub.add_parser("verify", parents=[common], help="run acceptance criteria")
    s.add_argument("names", nargs="*", help="criterion numbers or names (default: all)")
    return p


def _cmd_nq(args, cfg):
    from .quadcong import CongruenceInstance, count_brute, count_formula, sqrt_mod

    if args.q < 1:
        raise ValueError("q must be positive")
    inst = CongruenceInstance(args.a, args.q)
    rec = {"a": args.a, "q": args.q}
    if args.method in ("brute", "both"):
        rec["brute"] = count_brute(inst)
    if args.method in ("formula", "both"):
        rec["formula"] = count_formula(inst)
    if args.list:
        rec["roots"] = sqrt_mod(args.a, inst.q_factored)
    write_records([rec], cfg)


def _sigma_record(spec, rep) -> dict:
    return {
        "r": spec.r,
        "K": ",".join(str(x) for x in spec.K),
        "Q": spec.Q,
        "b": spec.b,
        "k": spec.k,
        "t": ",".join(str(x) for x in spec.t),
        "u": spec.u,
        "weight": spec.weight.kind,
        "sigma": float(rep.sigma),
        "main": float(rep.main),
        "err": float(rep.err),
        "bound": rep.bound,
        "ratio": rep.ratio,
    }


def _cmd_sigma(args, cfg):
    from . import avgsum

    if args.grid:
        specs = avgsum.corollary_grid() if args.primed else avgsum.theorem_grid()
        reps = avgsum.run_grid(specs, args.eps, args.primed)
        recs = [_sigma_record(s, r) for s, r in zip(specs, reps)]
        write_records(recs, RunConfig(cfg.command, cfg.threads, cfg.seed, "csv", cfg.out))
        return
    if args.K is None or args.Q is None:
        raise ValueError("--K and --Q are required without --grid")
    weight = avgsum.WeightFn.invq() if args.weight == "invq" else avgsum.WeightFn.const()
    lo = args.Qlo if args.Qlo is not None else args.Q / 2
    spec = avgsum.SumSpec(
        args.r, tuple(args.K), args.Q, args.b, args.k, tuple(args.t) if args.t else None, args.u,
        weight, avgsum.RangeFn(lo, args.Q), args.interval,
    )
    rep = avgsum.report(spec, args.eps, args.primed)
    write_records([_sigma_record(spec, rep)], cfg)


def _cmd_count(args, cfg):
    from . import torsor

    if args.B < 0:
        raise ValueError("B must be nonnegative")
    rec = {"B": args.B, "method": args.method}
    t0 = time.perf_counter()
    if args.method in ("direct", "both"):
        rec["count_direct"] = torsor.count_direct(args.B)
    if args.method in ("torsor", "both"):
        rec["count_torsor"] = torsor.count_torsor(args.B, cfg.threads)
    if args.method != "both":
        rec["count"] = rec[f"count_{args.method}"]
    if args.timing:
        rec["seconds"] = time.perf_counter() - t0
    write_records([rec], cfg)


def _cmd_points(args, cfg):
    from .torsor import list_points

    recs = [dict(zip(("x0", "x1", "x2", "x3"), p.as_tuple())) for p in list_points(args.B)]
    write_records(recs, RunConfig(cfg.command, cfg.threads, cfg.seed, "csv", cfg.out), ("x0", "x1", "x2", "x3"))


def _cmd_constant(args, cfg):
    from .density import peyre_constant

    pb = peyre_constant(args.prime_limit, args.samples, cfg.seed)
    rec = {
        "alpha_num": pb.alpha.numerator,
        "alpha_den": pb.alpha.denominator,
        "euler_product": pb.euler_product,
        "prime_limit": pb.prime_limit,
        "euler_tail_bound": pb.euler_tail_bound,
        "omega_inf": pb.omega_inf,
        "omega_inf_stderr": pb.omega_inf_stderr,
        "samples": pb.samples,
        "seed": pb.seed,
        "c_SH": pb.c_SH,
    }
    write_records([rec], cfg)


def fit_points(Bmin: int, Bmax: int, steps: int) -> list[int]:
    if steps < 1 or Bmin < 2 or Bmax < Bmin:
        raise ValueError("need 2 <= Bmin <= Bmax and steps >= 1")
    if steps == 1:
        return [Bmin]
    r = math.log(Bmax / Bmin) / (steps - 1)
    return sorted({int(round(Bmin * math.exp(i * r))) for i in range(steps)})


def fit_table(Bs: Sequence[int], c_sh: float, threads=None, main_term: bool = False) -> list[dict]:
    from .density import MAIN_TERM_MAX_B, main_term_sum
    from .torsor import count_torsor

    rows = []
    for B in Bs:
        n = count_torsor(B, threads)
        pred = c_sh * B * math.log(B) ** 6
        row = {
            "B": B,
            "N_UHB": n,
            "N_over_BlogB6": n / (B * math.log(B) ** 6),
            "cSH_BlogB6": pred,
            "ratio": n / pred,
        }
        if main_term:
            row["main_term_sum"] = main_term_sum(B) if B <= MAIN_TERM_MAX_B else None
        rows.append(row)
    return rows


def _cmd_fit(args, cfg):
    from .density import peyre_constant

    pb = peyre_constant(args.prime_limit, args.samples, cfg.seed)
    rows = fit_table(fit_points(args.Bmin, args.Bmax, args.steps), pb.c_SH, cfg.threads, args.main_term)
    cols = ["B", "N_UHB", "N_over_BlogB6", "cSH_BlogB6", "ratio"] + (["main_term_sum"] if args.main_term else [])
    write_records(rows, RunConfig(cfg.command, cfg.threads, cfg.seed, "csv", cfg.out), cols)


def _cmd_verify(args, cfg):
    from .acceptance import CRITERIA, resolve, run

    try:
        names = [resolve(n) for n in args.names] or list(CRITERIA)
    except KeyError as exc:
        raise ValueError(f"unknown criterion {exc}; known: {list(CRITERIA)}") from None
    results = [run(n) for n in names]
    recs = [{"criterion": r.name, "passed": r.passed, "detail": r.detail} for r in results]
    write_records(recs, cfg)
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {
    "nq": _cmd_nq,
    "sigma": _cmd_sigma,
    "count": _cmd_count,
    "points": _cmd_points,
    "constant": _cmd_constant,
    "fit": _cmd_fit,
    "verify": _cmd_verify,
}


def dispatch(argv: Sequence[str] | None = None) -> int:
    from .torsor import GuardError

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    threads = args.threads
    if threads is None and os.environ.get(THREADS_ENV):
        threads = int(os.environ[THREADS_ENV])
    if threads is not None and threads < 1:
        print("cubicpoints: --threads must be positive", file=sys.stderr)
        return 2
    cfg = RunConfig(args.command, threads, args.seed, args.fmt, args.out)
    try:
        code = COMMANDS[args.command](args, cfg)
    except GuardError as exc:
        print(f"cubicpoints: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"cubicpoints: {exc}", file=sys.stderr)
        return 2
    return int(code or 0)


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
