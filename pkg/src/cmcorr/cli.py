"""Command-line front end.

    cmcorr score FILE [--rho R] [--transpose] [--weights w1,w2,...] [--format json|csv]
    cmcorr generate --family F --k K --n N --seed S --reps R
    cmcorr simulate --families all|f1,f2 --k 5 --n 1000 --reps 1000 --seed S --rho 0.9
                    --format csv|json --out PATH [--workers W] [--bins B]
    cmcorr oracle --trials T --seed S --tol 1e-10

Exit codes: 0 success, 1 validation error, 2 oracle mismatch.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .core import ParseError, render
from .crosscheck import run_cross_check
from .enhanced import DEFAULT_RHO
from .generator import Family, FamilySpec, generate
from .harness import METRICS, ExperimentConfig, emit, run_experiment, score_file

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MISMATCH = 2


def _families(value: str) -> tuple[Family, ...]:
    if value.strip().lower() == "all":
        return tuple(Family)
    return tuple(Family.parse(v) for v in value.split(",") if v.strip())


def _floats(value: str) -> list[float]:
    return [float(v) for v in value.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cmcorr", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("score", help="score one confusion matrix file")
    s.add_argument("file")
    s.add_argument("--rho", type=float, default=DEFAULT_RHO)
    s.add_argument("--transpose", action="store_true",
                   help="input has predicted classes as rows")
    s.add_argument("--weights", type=_floats, default=None,
                   help="comma-separated per-class weights for MPC1/EMPC1 (sum to 1)")
    s.add_argument("--format", choices=("json", "csv"), default="json")

    g = sub.add_parser("generate", help="emit random matrices from one family")
    g.add_argument("--family", required=True, type=Family.parse)
    g.add_argument("--k", type=int, default=5)
    g.add_argument("--n", type=int, default=1000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--reps", type=int, default=1)

    m = sub.add_parser("simulate", help="Monte-Carlo histograms over families")
    m.add_argument("--families", type=_families, default=tuple(Family))
    m.add_argument("--metrics", default="all",
                   help=f"comma-separated subset of {','.join(METRICS)} or 'all'")
    m.add_argument("--k", type=int, default=5)
    m.add_argument("--n", type=int, default=1000)
    m.add_argument("--reps", type=int, default=1000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--rho", type=float, default=DEFAULT_RHO)
    m.add_argument("--bins", type=int, default=40)
    m.add_argument("--format", choices=("json", "csv"), default="json")
    m.add_argument("--out", default=None, help="output path (default: stdout)")
    m.add_argument("--workers", type=int, default=1)

    o = sub.add_parser("oracle", help="cross-check closed forms against indicator sequences")
    o.add_argument("--trials", type=int, default=1000)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--tol", type=float, default=1e-10)
    return p


def _write(data: bytes) -> None:
    sys.stdout.buffer.write(data)
    sys.stdout.flush()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID

    try:
        if args.command == "score":
            panel = score_file(args.file, rho=args.rho, weights=args.weights,
                               transpose=args.transpose)
            _write(emit(panel, args.format))
        elif args.command == "generate":
            spec = FamilySpec(args.family, args.k, args.n)
            if args.reps < 1:
                raise ValueError("--reps must be >= 1")
            blocks = [f"# family={spec.family.value} k={spec.k} n={spec.n} "
                      f"seed={args.seed} replicate={i}\n" + render(generate(spec, i, args.seed))
                      for i in range(args.reps)]
            _write("\n".join(blocks).encode("utf-8"))
        elif args.command == "simulate":
            metrics = tuple(METRICS) if args.metrics == "all" else tuple(
                x.strip() for x in args.metrics.split(",") if x.strip())
            config = ExperimentConfig(families=args.families, replicates=args.reps,
                                      metrics=metrics, rho=args.rho, master_seed=args.seed,
                                      histogram_bins=args.bins, k=args.k, n=args.n)
            hists = run_experiment(config, workers=max(1, args.workers))
            data = emit(hists, args.format, args.out, config=config)
            if args.out is None:
                _write(data)
        elif args.command == "oracle":
            report = run_cross_check(args.trials, seed=args.seed, tol=args.tol)
            print(f"trials={report.trials} comparisons={report.comparisons} "
                  f"max_abs_error={report.max_abs_error:.3e} mismatches={len(report.mismatches)}")
            for mm in report.mismatches[:20]:
                print(f"  trial {mm.trial} {mm.check}: closed={mm.closed_form!r} "
                      f"oracle={mm.reference!r} matrix={mm.matrix}", file=sys.stderr)
            return EXIT_OK if report.ok else EXIT_MISMATCH
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
