"""Command line entry point.

Exit codes: 0 success, 2 configuration error, 3 stability fault,
4 verification failure.
"""

from __future__ import annotations

import argparse
import sys

from .config import load_config
from .errors import ConfigError, StabilityFault
from .identities import run_all
from .run import (
    resolve_out_dir,
    run_covariance,
    run_dispersion,
    run_simulation,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STABILITY = 3
EXIT_VERIFICATION = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nldirac",
        description="Numerical and exact-algebra checks for a nonlinear "
                    "Dirac equation with values in a Clifford algebra.",
    )
    parser.add_argument(
        "--threads", type=int, default=1, metavar="N",
        help="worker thread count recorded in config.echo (BLAS/FFT "
             "backends honor their own environment variables)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser(
        "verify",
        help="run the exact identity suite and print one line per identity",
    )

    p = sub.add_parser("simulate", help="integrate a configured problem")
    p.add_argument("config", help="path to a run configuration file")

    p = sub.add_parser(
        "dispersion",
        help="measure omega(p) for plane waves against sqrt(p^2 + m^2)",
    )
    p.add_argument("config", help="path to a run configuration file")
    p.add_argument(
        "--p-indices", type=int, nargs="*", default=[], metavar="K",
        help="integer mode indices along the last axis (p = 2*pi*K/L)",
    )

    p = sub.add_parser(
        "covariance",
        help="transform an exact solution and check it still solves the "
             "equation",
    )
    p.add_argument("config", help="path to a run configuration file")
    p.add_argument(
        "--transform", required=True, metavar="SPEC",
        help='one of: "rot a b theta", "boost k chi", "parity", '
             '"gauge constant v", "gauge linear k0 k1 k2 k3", '
             '"gauge sine axis amplitude k-index"',
    )
    return parser


def _load(args):
    cfg = load_config(args.config)
    if args.threads != 1:
        from dataclasses import replace

        cfg = replace(cfg, threads=args.threads)
    return resolve_out_dir(cfg)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            report = run_all()
            sys.stdout.write(report.text())
            return EXIT_OK if report.all_passed else EXIT_VERIFICATION

        if args.command == "simulate":
            bundle = run_simulation(_load(args))
            for line in bundle.lines:
                print(line)
            return EXIT_OK

        if args.command == "dispersion":
            bundle = run_dispersion(_load(args), args.p_indices)
            for line in bundle.lines:
                print(line)
            return EXIT_OK

        if args.command == "covariance":
            bundle = run_covariance(_load(args), args.transform)
            for line in bundle.lines:
                print(line)
            return EXIT_OK if bundle.summary.get("passed") \
                else EXIT_VERIFICATION
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StabilityFault as exc:
        print(f"stability fault: {exc}", file=sys.stderr)
        return EXIT_STABILITY
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
