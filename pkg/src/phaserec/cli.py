"""Command-line entry point: ``phaserec <mode> --config FILE --out DIR [--quiet]``.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .errors import PhaserecError, ValidationError
from .experiments import MODES, run_experiment, validate_config

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phaserec",
        description="Fixed-energy scattering simulations and phase recovery from phaseless data.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode, help=f"run a {mode.replace('_', ' ')} experiment")
        p.add_argument("--config", required=True, help="JSON experiment config")
        p.add_argument("--out", help="output directory (overrides output_dir in the config)")
        p.add_argument("--quiet", action="store_true", help="only report errors")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        try:
            with open(args.config) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}", "experiments") from None
        if not isinstance(raw, dict):
            raise ValidationError("config must be a JSON object", "experiments")
        if raw.setdefault("mode", args.mode) != args.mode:
            raise ValidationError(
                f"config key 'mode': {raw['mode']!r} conflicts with subcommand {args.mode!r}", "experiments"
            )
        if args.out is not None:
            raw["output_dir"] = args.out
        config = validate_config(raw)
        report = run_experiment(config)
    except ValidationError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except PhaserecError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if not args.quiet:
        f = report.f_direct
        print(f"f_direct = {f['re']:.10g} {f['im']:+.10g}i   (|f| = {f['abs']:.6g})")
        if report.slope is not None:
            print(f"log-log slope of recovery error: {report.slope:.4f}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
