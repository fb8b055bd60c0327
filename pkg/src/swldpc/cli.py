"""Command-line surface: planning, capacities, sweeps, alist import/export."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .channels import (
    BinaryAsymmetricChannel,
    CorrelationModel,
    bac_capacity,
    backward_capacity,
    joint_entropy,
)
from .errors import SwldpcError
from .ldpc import construct_regular, read_alist, write_alist
from .planner import RateTargets, eq1_residuals, repuncture, solve_plan
from .simulate import SweepConfig, export_csv, run_markov_sweep, run_memoryless_sweep


def _cmd_plan(args) -> int:
    targets = RateTargets(rx1=args.rx1, rx2=args.rx2, rc1=args.rc1, rc2=args.rc2,
                          cf=args.cf, cb=args.cb)
    pre = solve_plan(targets)
    post = repuncture(pre)
    res = eq1_residuals(targets, pre)
    print(f"pre  a={pre.a:.6f} b={pre.b:.6f} c={pre.c:.6f} R={pre.r:.6f}")
    print(f"post a={post.a:.6f} b={post.b:.6f} c={post.c:.6f} R={post.r:.6f}")
    print("residuals " + " ".join(f"{v:+.3e}" for v in res))
    return 0


def _cmd_capacity(args) -> int:
    model = CorrelationModel(args.alpha, BinaryAsymmetricChannel(args.p1, args.p2))
    print(f"cf {bac_capacity(model.forward):.6f}")
    print(f"cb {backward_capacity(model):.6f}")
    print(f"joint_entropy {joint_entropy(model):.6f}")
    return 0


def _cmd_simulate(args, scheme: str) -> int:
    config = SweepConfig.from_file(args.config)
    if config.scheme != scheme:
        raise SwldpcError(f"config declares scheme '{config.scheme}', command expects '{scheme}'")
    rows = run_memoryless_sweep(config) if scheme == "memoryless" else run_markov_sweep(config)
    if args.output:
        export_csv(rows, args.output)
    else:
        export_csv(rows, sys.stdout)
    return 0


def _cmd_export_alist(args) -> int:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(args.seed)))
    h = construct_regular(args.n, args.rate, rng)
    write_alist(h, args.out)
    print(f"wrote {args.out}: n={h.n} m={h.m} edges={h.num_edges}")
    return 0


def _cmd_import_alist(args) -> int:
    h = read_alist(args.infile)
    cd, rd = h.col_degrees(), h.row_degrees()
    print(f"n={h.n} m={h.m} edges={h.num_edges} "
          f"col_deg={cd.min()}..{cd.max()} row_deg={rd.min()}..{rd.max()}")
    if args.out:
        write_alist(h, args.out)
        print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swldpc",
                                     description="Distributed source-channel coding simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="solve split fractions and code rate for rate targets")
    for name in ("rx1", "rx2", "rc1", "rc2", "cf", "cb"):
        p.add_argument(f"--{name}", type=float, required=True)
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("capacity", help="capacities and joint entropy of a correlation model")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--p2", type=float, required=True)
    p.set_defaults(func=_cmd_capacity)

    p = sub.add_parser("simulate-memoryless", help="run the memoryless-scheme sweep")
    p.add_argument("config")
    p.add_argument("--output", help="CSV destination (default stdout)")
    p.set_defaults(func=lambda a: _cmd_simulate(a, "memoryless"))

    p = sub.add_parser("simulate-markov", help="run the Markov-scheme sweep")
    p.add_argument("config")
    p.add_argument("--output", help="CSV destination (default stdout)")
    p.set_defaults(func=lambda a: _cmd_simulate(a, "markov"))

    p = sub.add_parser("export-alist", help="construct a regular matrix and write alist")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_export_alist)

    p = sub.add_parser("import-alist", help="read an alist file and report its shape")
    p.add_argument("infile")
    p.add_argument("--out", help="re-export destination (round-trip check)")
    p.set_defaults(func=_cmd_import_alist)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SwldpcError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
