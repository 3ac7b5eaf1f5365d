"""Command-line front end: ``hybridalg {sweep,verify,weyl,spectrum}``."""

from __future__ import annotations

import argparse
import logging
import sys

from .ncpoly import ExpressionError, classical_limit, format_classical, format_nc, format_weyl, parse_expression, to_weyl_basis
from .sweep import ConfigError, SweepConfig, emit, load_config, lowest_spectrum, run_sweep
from .sweep.run import SweepSetup
from .sweep.verify import run_verify

log = logging.getLogger("hybridalg")


def _config(path: str | None) -> SweepConfig:
    return load_config(path) if path else SweepConfig()


def cmd_sweep(args) -> int:
    cfg = _config(args.config)
    fmt = args.format or cfg.format
    output = args.output if args.output is not None else cfg.output
    records = run_sweep(cfg)
    text = emit(records, fmt, None if output in (None, "-") else output)
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        log.info("wrote %d records to %s", len(records), output)
    # only the endpoint rows carry physical meaning
    log.info("rows with 0 < h < h0 are diagnostics of the interpolating family")
    return 0


def cmd_verify(args) -> int:
    cfg = _config(args.config)
    report = run_verify(cfg, break_nyquist=args.break_nyquist, echo=print)
    print(f"{len(report.checks) - len(report.failures())}/{len(report.checks)} checks passed")
    return report.exit_code


def cmd_weyl(args) -> int:
    f = parse_expression(args.expr)
    print(f"normal-ordered: {format_nc(f)}")
    print(f"weyl:           {format_weyl(to_weyl_basis(f))}")
    print(f"classical:      {format_classical(classical_limit(f))}")
    return 0


def cmd_spectrum(args) -> int:
    cfg = _config(args.config)
    if not 0 <= args.h <= cfg.h0:
        raise ValueError(f"--h must lie in [0, {cfg.h0!r}], got {args.h!r}")
    setup = SweepSetup(cfg)
    _, _, _, H = setup.observable(args.h)
    for value in lowest_spectrum(H, args.count):
        print(f"{value:.17g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hybridalg", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run the h-sweep and emit CSV or JSON")
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--output", help="output path ('-' for stdout); overrides the config")
    p.add_argument("--format", choices=("csv", "json"), help="overrides the config")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--config")
    p.add_argument("--break-nyquist", action="store_true", help="debug: keep the unpaired DFT row (must fail)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("weyl", help="normal-ordered and Weyl-basis forms of an expression")
    p.add_argument("--expr", required=True)
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("spectrum", help="lowest eigenvalues of H(q~(h), p~(h))")
    p.add_argument("--config")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--count", type=int, default=4)
    p.set_defaults(func=cmd_spectrum)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ExpressionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
