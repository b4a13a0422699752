"""Command-line interface.

Subcommands: enumerate, simulate, analytic, verify, cardy, convergence.
Flags override config-file values.  Exit codes: 0 success, 1 a verification
check failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys

from . import reports, runners
from .config import ExperimentConfig, apply_overrides, load_config
from .hexgrid import EmptyApproximation, NotOnBoundary
from .loops import TooLarge
from .percolation import OutOfDomain

_MODE_RUNNERS = {
    "simulate": runners.run_simulate,
    "enumerate": runners.run_enumerate,
    "verify": runners.run_verify_mode,
    "convergence": runners.run_convergence,
    "cardy": runners.run_cardy,
}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hexperc",
        description="Critical site percolation on the triangular lattice: "
        "Monte Carlo, exact enumeration, and closed-form limits.",
    )
    sub = p.add_subparsers(dest="mode", required=True)
    for mode, help_text in (
        ("enumerate", "exact observable by exhaustive enumeration (cap 24 hexagons)"),
        ("simulate", "Monte Carlo same-component probabilities (default budget 1e5 samples)"),
        ("analytic", "tabulate a closed form as CSV"),
        ("verify", "exact identity suites on an enumerable domain"),
        ("cardy", "Monte Carlo crossing probability against the closed form"),
        ("convergence", "mesh sweep of the left-right difference against its limit"),
    ):
        sp = sub.add_parser(mode, help=help_text)
        sp.add_argument("--config", help="key=value experiment file")
        sp.add_argument("--delta", help="mesh size, or comma list for sweeps")
        sp.add_argument("--samples", type=int, help="Monte Carlo sample budget (default 100000)")
        sp.add_argument("--seed", type=int, help="base RNG seed")
        sp.add_argument("--workers", type=int, help="worker threads; counts do not depend on it")
        sp.add_argument("--cap", type=int, help="enumeration cap in hexagons (default 24)")
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), help="artifact format")
        sp.add_argument("--svg", help="write one coloring + interface snapshot here")
        if mode == "analytic":
            sp.add_argument("--function", choices=("g", "cardy", "schramm"), default="g")
            sp.add_argument("--grid", type=int, default=50)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else ExperimentConfig(mode=args.mode)
        cfg = apply_overrides(
            cfg,
            mode=args.mode,
            delta=args.delta,
            samples=args.samples,
            seed=args.seed,
            workers=args.workers,
            cap=args.cap,
            out=args.out,
            format=args.format,
            svg=args.svg,
        )
        if args.mode == "analytic":
            text, code = runners.run_analytic(cfg, function=args.function, grid=args.grid)
            if not cfg.out:
                sys.stdout.write(text)
            return code
        payload, code = _MODE_RUNNERS[args.mode](cfg)
    except (ValueError, FileNotFoundError, NotOnBoundary, OutOfDomain,
            EmptyApproximation, TooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if isinstance(payload, dict):
        text = reports.write_json(cfg.out, payload)
        if not cfg.out:
            sys.stdout.write(text + "\n")
    else:
        if not cfg.out:
            sys.stdout.write(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
