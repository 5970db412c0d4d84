#!/usr/bin/env python3
"""Reproduce the benchmark series at desk scale.

Runs the matvec-count comparisons for the four experiment families and
writes one CSV per family. Sizes beyond ~40 get expensive because each
point computes a 400-step reference first.

    python3 scripts/run_benchmarks.py                 # default sizes
    python3 scripts/run_benchmarks.py --experiments s32 --sizes 20,30,40
    LKV_THREADS=4 python3 scripts/run_benchmarks.py   # parallel points
"""

import argparse
import sys

from laplace_krylov import cli

DEFAULT_SIZES = {
    "s32": "20,30",
    "gamma": "20,30",
    "sqrt": "20,30",
    "fracdiff": "1000",
}


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--experiments", default="s32,gamma,sqrt,fracdiff")
    p.add_argument("--sizes", help="override the per-experiment defaults")
    p.add_argument("--m", type=int, default=50)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--seed", type=int, default=0,
                   help="seeded random start vectors (generic, matches published counts)")
    p.add_argument("--outdir", default=".")
    args = p.parse_args()

    for exp in args.experiments.split(","):
        sizes = args.sizes or DEFAULT_SIZES[exp]
        out = f"{args.outdir}/bench_{exp}.csv"
        argv = ["bench", "--experiment", exp, "--sizes", sizes,
                "--m", str(args.m), "--tol", str(args.tol), "-o", out]
        if args.seed is not None:
            argv += ["--seed", str(args.seed)]
        print(f"== {exp}: sizes {sizes}")
        code = cli.main(argv)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
