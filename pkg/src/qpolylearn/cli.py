"""Command-line front end: learners, sweeps, verifiers, bound tables.

Output is line-oriented JSON (one object per row) or CSV with a fixed
header, buffered and emitted in deterministic order.  Exit codes:
0 success, 1 exactness/verification failure, 2 usage error, 3 resource
limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from .errors import BudgetExceeded, MemoryLimitExceeded
from .field import FieldCtx, parse_field_spec
from .learn import (
    classical_learn,
    classical_query_count,
    lower_bound,
    quantum_learn,
    quantum_query_count,
)
from .oracle import HiddenOracle
from .poly import MultilinearPoly, derive_seed, poly_equal, random_poly
from .statevector import DEFAULT_AMPLITUDE_CAP
from .verify import verify_counting, verify_derivative_form, verify_kickback

LEARN_MODES = ("classical", "quantum", "both")
MODES = LEARN_MODES + ("verify-fs", "verify-kickback", "verify-count",
                       "bound-table", "sweep")

_CSV_FIELDS = {
    "learn": ["row", "mode", "field", "n", "d", "trial", "seed", "queries",
              "expected", "exact", "per_degree", "trials", "all_exact",
              "counts_match"],
    "sweep": ["row", "field", "n", "d", "status", "reason", "trials",
              "classical_queries", "quantum_queries", "ratio", "all_exact",
              "counts_match"],
    "bound": ["row", "field", "n", "d", "r", "pe_lower_bound",
              "min_queries_for_error_le_1_3", "note"],
}


@dataclass
class RunConfig:
    field_spec: str | None
    n: int | None
    d: int | None
    mode: str
    trials: int
    seed: int
    fmt: str
    poly_file: str | None
    mem_cap: int | None
    out: str | None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qpolylearn",
        description="Learn hidden multilinear polynomials over finite fields, "
                    "count oracle queries exactly, and run brute-force verifiers.",
    )
    p.add_argument("--q", help="field spec: bare q, p^r, or p^r:c0,c1,...,cr "
                              "(modulus constant term first); sweep mode accepts "
                              "a comma-separated list")
    p.add_argument("--n", help="number of variables (sweep: list/range, e.g. 3..8)")
    p.add_argument("--d", help="degree bound (sweep: list/range)")
    p.add_argument("--mode", choices=MODES, default="both")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    p.add_argument("--poly-file", help="JSON polynomial file to use as the hidden "
                                       "polynomial instead of seeded random ones")
    p.add_argument("--mem-cap", type=int, default=None,
                   help=f"state-vector amplitude cap (default {DEFAULT_AMPLITUDE_CAP})")
    p.add_argument("--out", help="write output here instead of stdout")
    return p


def _parse_int_list(text: str, flag: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo_s, hi_s = part.split("..", 1)
            try:
                lo, hi = int(lo_s), int(hi_s)
            except ValueError:
                raise ValueError(f"{flag}: bad range {part!r}") from None
            if hi < lo:
                raise ValueError(f"{flag}: empty range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            try:
                out.append(int(part))
            except ValueError:
                raise ValueError(f"{flag}: bad integer {part!r}") from None
    return out


def _emit(rows: list[dict], fmt: str, schema: str, out_path: str | None) -> None:
    buf = io.StringIO()
    if fmt == "json":
        for row in rows:
            buf.write(json.dumps(row) + "\n")
    else:
        fields = _CSV_FIELDS[schema]
        w = csv.DictWriter(buf, fieldnames=fields, restval="", extrasaction="ignore")
        w.writeheader()
        for row in rows:
            flat = dict(row)
            if isinstance(flat.get("per_degree"), list):
                flat["per_degree"] = ";".join(map(str, flat["per_degree"]))
            w.writerow(flat)
    text = buf.getvalue()
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_report(report: dict, out_path: str | None) -> None:
    text = json.dumps(report) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _learn_trial_rows(ctx: FieldCtx, n: int, d: int, secret: MultilinearPoly,
                      trial: int, seed: int, mode: str,
                      mem_cap: int | None) -> tuple[list[dict], bool, bool]:
    rows = []
    all_exact = True
    counts_match = True
    runs = ("classical", "quantum") if mode == "both" else (mode,)
    for kind in runs:
        oracle = HiddenOracle(secret)
        if kind == "classical":
            report = classical_learn(oracle, n, d)
            expected = classical_query_count(n, d)
        else:
            report = quantum_learn(oracle, n, d, mem_cap)
            expected = quantum_query_count(n, d)
        exact = poly_equal(report.learned, secret)
        all_exact &= exact
        counts_match &= report.queries_used == expected
        rows.append({
            "row": "trial",
            "mode": kind,
            "field": ctx.spec_string(),
            "n": n,
            "d": d,
            "trial": trial,
            "seed": seed,
            "queries": report.queries_used,
            "expected": expected,
            "exact": exact,
            "per_degree": report.per_degree_queries,
        })
    return rows, all_exact, counts_match


def run(config: RunConfig) -> int:
    """Execute one run; prints rows/report, returns the exit status.

    Sweep mode carries range-valued parameters and goes through
    :func:`_sweep_from_args` instead.
    """
    fixed_secret = None
    if config.poly_file:
        with open(config.poly_file) as fh:
            fixed_secret = MultilinearPoly.from_json(fh.read())
        ctx, n, d = fixed_secret.ctx, fixed_secret.n, fixed_secret.d
        if config.field_spec and parse_field_spec(config.field_spec) != ctx:
            raise ValueError("--q conflicts with the field in --poly-file")
        if config.n is not None and config.n != n:
            raise ValueError("--n conflicts with --poly-file")
        if config.d is not None and config.d != d:
            raise ValueError("--d conflicts with --poly-file")
    else:
        if config.field_spec is None:
            raise ValueError("--q is required")
        ctx = parse_field_spec(config.field_spec)
        if config.n is None:
            raise ValueError("--n is required")
        n = config.n
        d = config.d if config.d is not None else n
        if d > n:
            print(f"note: clamping d={d} to n={n}", file=sys.stderr)
            d = n

    if config.mode in LEARN_MODES:
        if config.mode != "classical":
            cap = config.mem_cap if config.mem_cap is not None else DEFAULT_AMPLITUDE_CAP
            if ctx.q ** n > cap:
                raise MemoryLimitExceeded(
                    f"q^n = {ctx.q ** n} amplitudes exceed the cap {cap}"
                )
        rows = []
        all_exact = True
        counts_match = True
        for trial in range(config.trials):
            trial_seed = derive_seed(config.seed, trial)
            secret = fixed_secret or random_poly(ctx, n, d, trial_seed)
            trial_rows, ok, cm = _learn_trial_rows(
                ctx, n, d, secret, trial, trial_seed, config.mode, config.mem_cap)
            rows.extend(trial_rows)
            all_exact &= ok
            counts_match &= cm
        summary = {
            "row": "summary",
            "mode": config.mode,
            "field": ctx.spec_string(),
            "n": n,
            "d": d,
            "trials": config.trials,
            "all_exact": all_exact,
            "counts_match": counts_match,
        }
        if config.mode in ("classical", "both"):
            summary["classical_expected"] = classical_query_count(n, d)
        if config.mode in ("quantum", "both"):
            summary["quantum_expected"] = quantum_query_count(n, d)
        rows.append(summary)
        _emit(rows, config.fmt, "learn", config.out)
        return 0 if (all_exact and counts_match) else 1

    if config.mode == "verify-fs":
        report = verify_derivative_form(ctx, n, d, trials=config.trials,
                                        seed=config.seed)
        _emit_report(report, config.out)
        return 0 if not report["counterexamples"] else 1

    if config.mode == "verify-kickback":
        report = verify_kickback(ctx, n, trials=config.trials, seed=config.seed,
                                 mem_cap=config.mem_cap)
        _emit_report(report, config.out)
        return 0 if not report["counterexamples"] else 1

    if config.mode == "verify-count":
        report = verify_counting(ctx, n, d)
        _emit_report(report, config.out)
        return 0 if not report["counterexamples"] else 1

    if config.mode == "bound-table":
        _, min_r = lower_bound(ctx.q, n, d, 0)
        rows = []
        for r in range(min_r + 3):
            bound, _ = lower_bound(ctx.q, n, d, r)
            rows.append({
                "row": "bound",
                "field": ctx.spec_string(),
                "n": n,
                "d": d,
                "r": r,
                "pe_lower_bound": bound,
            })
        rows.append({
            "row": "summary",
            "field": ctx.spec_string(),
            "n": n,
            "d": d,
            "min_queries_for_error_le_1_3": min_r,
            "note": "formula reproduction only; asymptotic optimality is not "
                    "checked numerically",
        })
        _emit(rows, config.fmt, "bound", config.out)
        return 0

    raise ValueError(f"unknown mode {config.mode!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code or 0
    try:
        if args.mode == "sweep":
            return _sweep_from_args(args)
        config = RunConfig(
            field_spec=args.q,
            n=int(args.n) if args.n is not None else None,
            d=int(args.d) if args.d is not None else None,
            mode=args.mode,
            trials=args.trials,
            seed=args.seed,
            fmt=args.fmt,
            poly_file=args.poly_file,
            mem_cap=args.mem_cap,
            out=args.out,
        )
        return run(config)
    except (MemoryLimitExceeded, BudgetExceeded) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _sweep_from_args(args) -> int:
    if args.q is None or args.n is None or args.d is None:
        raise ValueError("sweep mode requires --q, --n and --d")
    field_specs = [s.strip() for s in args.q.split(",") if s.strip()]
    # a field spec with an explicit modulus contains commas itself; in that
    # case treat the whole string as a single spec
    try:
        ctxs = [parse_field_spec(s) for s in field_specs]
    except ValueError:
        ctxs = [parse_field_spec(args.q)]
    ns = _parse_int_list(args.n, "--n")
    ds = _parse_int_list(args.d, "--d")
    cap = args.mem_cap if args.mem_cap is not None else DEFAULT_AMPLITUDE_CAP
    rows = []
    failed = False
    for ctx in ctxs:
        for n in ns:
            for d in ds:
                base = {"row": "combo", "field": ctx.spec_string(), "n": n, "d": d}
                if d > n:
                    rows.append({**base, "status": "skipped", "reason": "d exceeds n"})
                    continue
                if ctx.q ** n > cap:
                    rows.append({**base, "status": "skipped", "reason": "memory-cap"})
                    continue
                all_exact = True
                counts_match = True
                c_queries = q_queries = None
                for trial in range(args.trials):
                    trial_seed = derive_seed(args.seed, trial)
                    secret = random_poly(ctx, n, d, trial_seed)
                    c_rep = classical_learn(HiddenOracle(secret), n, d)
                    q_rep = quantum_learn(HiddenOracle(secret), n, d, args.mem_cap)
                    c_queries, q_queries = c_rep.queries_used, q_rep.queries_used
                    all_exact &= poly_equal(c_rep.learned, secret)
                    all_exact &= poly_equal(q_rep.learned, secret)
                    counts_match &= c_queries == classical_query_count(n, d)
                    counts_match &= q_queries == quantum_query_count(n, d)
                failed |= not (all_exact and counts_match)
                rows.append({
                    **base,
                    "status": "ok",
                    "trials": args.trials,
                    "classical_queries": c_queries,
                    "quantum_queries": q_queries,
                    "ratio": (q_queries / c_queries) if c_queries else None,
                    "all_exact": all_exact,
                    "counts_match": counts_match,
                })
    _emit(rows, args.fmt, "sweep", args.out)
    return 1 if failed else 0


def main_entry() -> None:
    raise SystemExit(main())
