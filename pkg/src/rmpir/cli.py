"""Command-line interface: ``rmpir params|gen|retrieve|rates|verify``."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import dbfile
from .dss import SimulatedDSS, placement_count, placements
from .errors import (
    AdversaryBudgetExceeded,
    DecodingFailure,
    InconsistentLedger,
    Infeasible,
    MalformedDatabase,
    PlanNotFound,
)
from .params import SchemeParams, derive_params
from .planning import plan_queries, storage_monomials
from .poly import monomial_name
from .protocol import FileSystem, encode_storage, retrieve
from .rates import panel, parse_custom, rate_rm, to_csv

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_DECODING = 3
EXIT_NO_PLAN = 4
EXIT_MALFORMED = 5


def seed_type(text: str) -> int:
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed {text} is not a 64-bit unsigned integer")
    return value


def server_list(text: str) -> list[int]:
    """Comma-separated 1-based server indices."""
    if not text.strip():
        return []
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad server list {text!r}") from None


def add_scheme_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--r", type=int, default=1, help="storage order (default 1)")
    p.add_argument("--t", type=int, default=1, help="colluding servers (default 1)")
    p.add_argument("--a", type=int, default=1, help="unresponsive servers (default 1)")
    p.add_argument("--b", type=int, default=1, help="Byzantine servers (default 1)")


def scheme(args) -> SchemeParams:
    return derive_params(args.r, args.t, args.a, args.b)


def recovery_table_text(table: np.ndarray, params: SchemeParams) -> str:
    names = [monomial_name(b) for b in storage_monomials(params)]
    width = max(6, *(len(n) for n in names))
    lines = ["stripe " + " ".join(n.rjust(width) for n in names)]
    for ell, row in enumerate(table, 1):
        lines.append(f"{ell:>6} " + " ".join(str(v).rjust(width) for v in row))
    return "\n".join(lines)


def cmd_params(args) -> int:
    params = scheme(args)
    print(params.summary())
    print(f"rate {rate_rm(params)}")
    return EXIT_OK


def cmd_gen(args) -> int:
    params = scheme(args)
    rng = np.random.default_rng(args.seed)
    X = FileSystem.random(args.files, params, rng)
    dbfile.write(args.out, X.data)
    print(f"wrote {args.files} files of {params.L} x {params.k} bits to {args.out}")
    return EXIT_OK


def _run_once(i, storage, params, plan, byz, unresp, mode, seed):
    rng = np.random.default_rng(seed)
    dss = SimulatedDSS(storage, frozenset(byz), frozenset(unresp), mode)
    return retrieve(i, dss, params, plan, rng)


def cmd_retrieve(args) -> int:
    params = scheme(args)
    data = dbfile.read(args.db)
    X = FileSystem(data)
    if (X.L, X.k) != (params.L, params.k):
        raise MalformedDatabase(f"database rows are {X.L} x {X.k}, scheme needs {params.L} x {params.k}")
    if not 1 <= args.file <= X.M:
        print(f"error: file {args.file} outside [1, {X.M}]", file=sys.stderr)
        return EXIT_INFEASIBLE
    byz = [j - 1 for j in args.byz]
    unresp = [j - 1 for j in args.unresp]
    for j in byz + unresp:
        if not 0 <= j < params.n:
            print(f"error: server {j + 1} outside [1, {params.n}]", file=sys.stderr)
            return EXIT_INFEASIBLE
    storage = encode_storage(X, params)
    SimulatedDSS(storage, frozenset(byz), frozenset(unresp)).check_budget(params.a, params.b)

    plan = plan_queries(params, seed=args.seed, budget=args.plan_budget)
    i = args.file - 1
    print(params.summary())
    print(f"plan {plan.name}, {len(plan)} rounds")

    if args.adversary == "exhaustive":
        total = placement_count(params.n, params.a, params.b)
        failures = 0
        for unresp_set, byz_set, mode in placements(params.n, params.a, params.b):
            try:
                got, _ = _run_once(i, storage, params, plan, byz_set, unresp_set, mode, args.seed)
                ok = np.array_equal(got, X.data[i])
            except (DecodingFailure, InconsistentLedger):
                ok = False
            if not ok:
                failures += 1
                print(
                    f"FAIL byz={[j + 1 for j in sorted(byz_set)]} "
                    f"unresp={[j + 1 for j in sorted(unresp_set)]} {mode}"
                )
        print(f"exhaustive: {total - failures}/{total} placements recovered file {args.file} exactly")
        return EXIT_OK if failures == 0 else EXIT_DECODING

    got, transcript = _run_once(i, storage, params, plan, byz, unresp, args.adversary, args.seed)
    for outcome, received in zip(transcript.rounds, transcript.received):
        labels = []
        for u in outcome.new_symbols:
            stripe, j = divmod(u, params.k)
            labels.append(f"a{stripe + 1}[{monomial_name(storage_monomials(params)[j])}]")
        erased = ",".join(str(j + 1) for j in sorted(received.erased)) or "-"
        print(f"round {outcome.index}: erased {erased}; recovered {len(labels)}: {' '.join(labels)}")
    table = np.zeros((params.L, params.k), dtype=np.int64)
    for outcome in transcript.rounds:
        for u in outcome.new_symbols:
            table[divmod(u, params.k)] = outcome.index
    print("recovery round per coefficient:")
    print(recovery_table_text(table, params))
    print(f"rate {transcript.recovered_bits}/{transcript.downloaded_bits} = {transcript.rate}")
    for row in got:
        print("".join(str(int(v)) for v in row))
    if args.out:
        dbfile.write(args.out, got[None])
    if not np.array_equal(got, X.data[i]):
        print("MISMATCH against the database", file=sys.stderr)
        return EXIT_DECODING
    print("exact match")
    return EXIT_OK


def cmd_rates(args) -> int:
    points = parse_custom(args.custom) if args.custom is not None else panel(args.panel)
    sys.stdout.write(to_csv(points))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run

    results = run(args.level, seed=args.seed)
    for res in results:
        status = "ok  " if res.ok else "FAIL"
        print(f"{status} {res.name} ({res.seconds:.2f}s){': ' + res.detail if res.detail else ''}")
    failed = [r.name for r in results if not r.ok]
    if failed:
        print("failed invariants: " + ", ".join(failed))
        return 1
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmpir", description="Robust private information retrieval over Reed-Muller codes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="derive scheme parameters")
    add_scheme_args(p)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("gen", help="generate a random database file")
    add_scheme_args(p)
    p.add_argument("--files", type=int, default=3, help="number of files M (default 3)")
    p.add_argument("--seed", type=seed_type, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("retrieve", help="simulate a private retrieval")
    add_scheme_args(p)
    p.add_argument("--db", required=True)
    p.add_argument("--file", type=int, required=True, help="1-based file index")
    p.add_argument("--byz", type=server_list, default=[], help="1-based Byzantine servers, e.g. 7 or 1,2")
    p.add_argument("--unresp", type=server_list, default=[], help="1-based unresponsive servers")
    p.add_argument("--seed", type=seed_type, default=0)
    p.add_argument("--adversary", choices=["random", "always", "exhaustive"], default="random")
    p.add_argument("--out", help="write the recovered file as a one-file database")
    p.add_argument("--plan-budget", type=int, default=300, help="round constructions the planner may try")
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("rates", help="rate sweeps as CSV")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--panel", choices=["left", "middle", "right"])
    group.add_argument("--custom", help="e.g. n=16,t=1,a=1,b=1 or m=3..8,t=1,a=1,b=0..3")
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("verify", help="run the self-check invariants")
    p.add_argument("--level", choices=["quick", "full"], default="quick")
    p.add_argument("--seed", type=seed_type, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Infeasible as exc:
        print("infeasible: " + "; ".join(exc.violations), file=sys.stderr)
        return EXIT_INFEASIBLE
    except AdversaryBudgetExceeded as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DecodingFailure, InconsistentLedger) as exc:
        print(f"decoding failed: {exc}", file=sys.stderr)
        return EXIT_DECODING
    except PlanNotFound as exc:
        print(f"no query plan: {exc}", file=sys.stderr)
        return EXIT_NO_PLAN
    except MalformedDatabase as exc:
        print(f"malformed database: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
