"""Command-line entry point: ``etlab {dn,en,ainc,profile,verify,search,mc}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import List, Optional, Sequence

from . import __version__
from .golden import verify_corpus
from .hemitree import (
    DEFAULT_DEPTH_CEILING,
    DEFAULT_SYMBOLIC_DEPTH,
    DEFAULT_WITNESSES,
    BoundedSearch,
    EEvaluator,
    search_bounded,
)
from .profiles import check_sp, is_basis_prefix, parity_violations, parse_set, pres_counts, rep_counts
from .stochastic import McConfig, histogram_rows, simulate
from .tower import TowerCache, scaled

SCHEMA = 1


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"argument {flag}: {message}")
        self.flag = flag


def _positive(flag: str, value: int, minimum: int = 1) -> int:
    if value < minimum:
        raise UsageError(flag, f"must be >= {minimum}, got {value}")
    return value


def _threads(args) -> int:
    if args.threads is not None:
        return _positive("--threads", args.threads)
    env = os.environ.get("ETLAB_THREADS")
    if not env:
        return 1
    try:
        return _positive("ETLAB_THREADS", int(env))
    except ValueError:
        raise UsageError("ETLAB_THREADS", f"expected a positive integer, got {env!r}") from None


def _emit_json(out, payload: dict):
    out.write(json.dumps({"schema": SCHEMA, **payload}, indent=2, sort_keys=False))
    out.write("\n")


def _emit_csv(out, header: Sequence[str], rows: List[Sequence]):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    out.write(buf.getvalue())


def _emit_table(out, header: Sequence[str], rows: List[Sequence]):
    cells = [list(map(str, header))] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for r in cells:
        out.write("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n")


def _fmt_float(x: float) -> str:
    return f"{x:.12g}"


# -- symbolic tables -----------------------------------------------------------------


def cmd_dn(args, out) -> int:
    top = _positive("--max", args.max)
    cache = TowerCache()
    entries = []
    for n in range(1, top + 1):
        d = cache.compute_d(n)
        scale, sd = scaled(d)
        label = f"d{n}" if scale == 1 else f"{scale}*d{n}"
        entries.append((n, scale, label, d, sd))
    if args.format == "json":
        _emit_json(
            out,
            {
                "kind": "d",
                "entries": [
                    {"n": n, "scale": s, "scaled": str(sd), "poly": d.to_json()}
                    for n, s, _, d, sd in entries
                ],
            },
        )
    elif args.format == "csv":
        _emit_csv(out, ["n", "scale", "scaled"], [(n, s, str(sd)) for n, s, _, _, sd in entries])
    else:
        for _, _, label, _, sd in entries:
            out.write(f"{label} = {sd}\n")
    return 0


def _poly_table(args, out, kind: str, start: int, build) -> int:
    top = _positive("--max", args.max, start)
    cache = TowerCache()
    entries = [(n, build(cache, n)) for n in range(start, top + 1)]
    if args.format == "json":
        _emit_json(
            out,
            {
                "kind": kind,
                "entries": [{"n": n, "text": str(p), "poly": p.to_json()} for n, p in entries],
            },
        )
    elif args.format == "csv":
        _emit_csv(out, ["n", kind], [(n, str(p)) for n, p in entries])
    else:
        for n, p in entries:
            out.write(f"{kind}{n} = {p}\n")
    return 0


def cmd_en(args, out) -> int:
    return _poly_table(args, out, "e", 1, lambda cache, n: cache.compute_e(n))


def cmd_ainc(args, out) -> int:
    return _poly_table(args, out, "a", 2, lambda cache, n: cache.a_in_c(n))


# -- profiles ------------------------------------------------------------------------


def cmd_profile(args, out) -> int:
    top = _positive("--max", args.max, 0)
    try:
        A = parse_set(args.set, top)
    except ValueError as exc:
        raise UsageError("--set", str(exc)) from None
    if args.sp and not A.contains_zero_one():
        raise UsageError("--set", "the set must contain 0 and 1 for --sp")
    r = rep_counts(A, top)
    p = pres_counts(A, top)
    header = ["n", "a", "r", "p"]
    rows = [[n, A.bits[n], r[n], p[n]] for n in range(top + 1)]
    sp_ok = None
    if args.sp:
        report = check_sp(A, top, TowerCache())
        bad = {m.n + 1 for m in report.mismatches}
        header.append("sp")
        for row in rows:
            row.append("" if row[0] < 2 else ("fail" if row[0] in bad else "ok"))
        sp_ok = report.passed
    basis = is_basis_prefix(A, top)
    parity = parity_violations(A, top)
    if args.format == "json":
        payload = {
            "kind": "profile",
            "set": str(A),
            "max": top,
            "rows": [dict(zip(header, row)) for row in rows],
            "basis_prefix": basis,
            "parity_violations": parity,
        }
        if sp_ok is not None:
            payload["sp_passed"] = sp_ok
        _emit_json(out, payload)
    elif args.format == "csv":
        _emit_csv(out, header, rows)
    else:
        _emit_table(out, header, rows)
        out.write(f"basis prefix: {'yes' if basis else 'no'}\n")
        out.write(f"parity violations: {len(parity)}\n")
        if sp_ok is not None:
            out.write(f"main system: {'ok' if sp_ok else 'FAILED'}\n")
    return 0 if sp_ok in (None, True) and not parity else 1


# -- verification --------------------------------------------------------------------


def cmd_verify(args, out) -> int:
    results = verify_corpus(TowerCache())
    failed = [r for r in results if not r.ok]
    if args.format == "json":
        _emit_json(
            out,
            {
                "kind": "verify",
                "passed": not failed,
                "checks": [{"name": r.name, "status": r.status, "detail": r.detail} for r in results],
            },
        )
    elif args.format == "csv":
        _emit_csv(out, ["name", "status", "detail"], [(r.name, r.status, r.detail) for r in results])
    else:
        width = max(len(r.name) for r in results)
        for r in results:
            out.write(f"{r.status.upper():<8}{r.name:<{width + 2}}{r.detail}\n")
        errata = sum(r.status == "erratum" for r in results)
        out.write(f"{len(results) - len(failed)}/{len(results)} ok ({errata} erratum, {len(failed)} failed)\n")
    return 1 if failed else 0


# -- search --------------------------------------------------------------------------


def cmd_search(args, out) -> int:
    bound = _positive("--bound", args.bound, 0)
    depth = _positive("--depth", args.depth)
    if depth > args.depth_ceiling:
        raise UsageError("--depth", f"{depth} exceeds --depth-ceiling {args.depth_ceiling}")
    witnesses = _positive("--witnesses", args.witnesses, 0)
    symbolic = min(_positive("--symbolic-depth", args.symbolic_depth, 0), depth)
    threads = _threads(args)
    complete = True
    if args.checkpoint or args.max_nodes is not None:
        if args.max_nodes is not None:
            _positive("--max-nodes", args.max_nodes)
        evaluator = EEvaluator(TowerCache() if symbolic else None, symbolic)
        if args.checkpoint and os.path.exists(args.checkpoint):
            search = BoundedSearch.load(args.checkpoint, evaluator, witnesses)
            if (search.bound, search.depth) != (bound, depth):
                raise UsageError(
                    "--checkpoint",
                    f"file was written for --bound {search.bound} --depth {search.depth}",
                )
        else:
            search = BoundedSearch(bound, depth, evaluator, witnesses)
        report = search.run(args.max_nodes)
        complete = search.done()
        if args.checkpoint:
            search.save(args.checkpoint)
    else:
        report = search_bounded(
            bound, depth, witnesses=witnesses, symbolic_depth=symbolic,
            depth_ceiling=args.depth_ceiling, threads=threads,
        )
    if args.format == "json":
        _emit_json(out, {"kind": "search", "complete": complete, "report": report.to_json()})
    else:
        out.write(f"bound: {report.bound}\n")
        out.write(f"depth: {report.depth}\n")
        out.write(f"complete: {'yes' if complete else 'no'}\n")
        out.write(f"max_persistent_length: {report.max_persistent_length}\n")
        out.write(f"nodes_visited: {report.nodes_visited}\n")
        out.write(f"frontier_exhausted: {'yes' if report.frontier_exhausted else 'no'}\n")
        for w in report.witnesses:
            out.write("witness: " + ",".join(map(str, w)) + "\n")
    return 0


# -- Monte Carlo ---------------------------------------------------------------------


def cmd_mc(args, out) -> int:
    n_max = _positive("--n", args.n, 2)
    trials = _positive("--trials", args.trials)
    if not 0 < args.p <= 1:
        raise UsageError("--p", f"must lie in (0, 1], got {args.p}")
    if args.seed < 0:
        raise UsageError("--seed", "must be >= 0")
    threads = _threads(args)
    cfg = McConfig(args.p, n_max, trials, args.seed)
    result = simulate(cfg, threads)
    rows = histogram_rows(result)
    hit = float((result.max_stat >= 1.0).mean())
    table = [(r["n"], r["k"], r["count"], _fmt_float(r["freq"]), _fmt_float(r["pmf"])) for r in rows]
    if args.format == "json":
        _emit_json(
            out,
            {
                "kind": "mc",
                "p": cfg.p,
                "n": cfg.n_max,
                "trials": cfg.trials,
                "seed": cfg.seed,
                "rows": rows,
                "max_stat_at_least_1": hit,
            },
        )
    elif args.format == "csv":
        _emit_csv(out, ["n", "k", "count", "freq", "pmf"], table)
    else:
        _emit_table(out, ["n", "k", "count", "freq", "pmf"], table)
        out.write(f"fraction of trials with max 8c_n/n >= 1: {_fmt_float(hit)}\n")
    return 0


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="etlab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, formats=("text", "json", "csv")):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--format", choices=formats, default="text")
        return p

    p = add("dn", "polynomials d_n with b_{n+1} = 2a_{n+1} + d_n(b_2..b_n), scaled to integers")
    p.add_argument("--max", type=int, default=6)
    p.set_defaults(func=cmd_dn)

    p = add("en", "main-system polynomials e_n with c_{n+1} = a_{n+1} + e_n(c_2..c_n)")
    p.add_argument("--max", type=int, default=7)
    p.set_defaults(func=cmd_en)

    p = add("ainc", "a_n as compliform polynomials in c_2..c_n")
    p.add_argument("--max", type=int, default=6)
    p.set_defaults(func=cmd_ainc)

    p = add("profile", "representation and presentation counts of a set")
    p.add_argument("--set", required=True, help="full, odd, sidon-doubling, or naturals such as 0,1,3")
    p.add_argument("--max", type=int, default=50)
    p.add_argument("--sp", action="store_true", help="also check the main system (set must contain 0 and 1)")
    p.set_defaults(func=cmd_profile)

    p = add("verify", "replay the reference identities")
    p.set_defaults(func=cmd_verify)

    p = add("search", "exhaustive bounded search of the hemitropic tree", formats=("text", "json"))
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--witnesses", type=int, default=DEFAULT_WITNESSES)
    p.add_argument("--symbolic-depth", type=int, default=DEFAULT_SYMBOLIC_DEPTH)
    p.add_argument("--depth-ceiling", type=int, default=DEFAULT_DEPTH_CEILING)
    p.add_argument("--checkpoint", help="resume from and save the search state in this file")
    p.add_argument("--max-nodes", type=int, help="stop after this many nodes (resumable with --checkpoint)")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_search)

    p = add("mc", "Monte Carlo law of c_n for random subsets")
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_mc)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"etlab {args.command}: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
