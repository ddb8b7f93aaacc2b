"""Command-line interface.

Subcommands:
  theory        print a closed-form error prediction
  simulate      run a preset or config-file sweep, write records/summary CSVs
                and (optionally) rendered figures
  list-presets  show the built-in experiment catalog
  plot          render figures from an existing records CSV

Exit codes: 0 success, 1 invalid arguments or configuration, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

from . import theory
from .config import load_config
from .errors import InvalidInput, PairPCAError
from .harness import (
    ExperimentConfig,
    TrialRecord,
    emit_csv,
    emit_summary,
    run_sweep,
    summarize,
)
from .presets import preset, preset_names


class _Parser(argparse.ArgumentParser):
    """argparse parser that exits with status 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pairpca", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_theory = sub.add_parser("theory", help="print a closed-form error prediction")
    p_theory.add_argument("--regime", choices=("fixed", "growing"), required=True)
    p_theory.add_argument("--lambda", dest="lam", type=float,
                          help="weakest signal spike strength (fixed regime)")
    p_theory.add_argument("--c", dest="c", type=float, required=True,
                          help="aspect ratio d/n (fixed) or effective inverse SNR (growing)")

    p_sim = sub.add_parser("simulate", help="run a Monte-Carlo sweep")
    p_sim.add_argument("--preset", help="name of a built-in experiment")
    p_sim.add_argument("--config", help="path to a key = value config file")
    p_sim.add_argument("--trials", type=int, help="override the trial count")
    p_sim.add_argument("--seed", type=int, help="override the base seed")
    p_sim.add_argument("--norm", choices=("operator", "frobenius"),
                       help="override the subspace-distance norm")
    p_sim.add_argument("--out", required=True, help="records CSV path")
    p_sim.add_argument("--summary", help="summary CSV path")
    p_sim.add_argument("--figures", help="directory for rendered figures")
    p_sim.add_argument("--workers", type=int, default=None,
                       help="thread-pool size for parallel trials")

    sub.add_parser("list-presets", help="show the experiment catalog")

    p_plot = sub.add_parser("plot", help="render figures from a records CSV")
    p_plot.add_argument("--records", required=True, help="records CSV path")
    p_plot.add_argument("--out-dir", required=True, help="figure output directory")
    return parser


def _cmd_theory(args) -> int:
    if args.regime == "fixed":
        if args.lam is None:
            raise InvalidInput("--lambda is required for the fixed regime")
        value = theory.fixed_aspect_error(args.lam, args.c)
    else:
        value = theory.growing_spike_error(args.c)
    print(f"{value:.5f}")
    return 0


def _resolve_config(args) -> ExperimentConfig:
    from dataclasses import replace

    if not args.preset and not args.config:
        raise InvalidInput("simulate needs --preset or --config")
    if args.config:
        config = load_config(args.config)
        if args.preset:
            raise InvalidInput("pass either --preset or --config, not both")
    else:
        config = preset(args.preset)
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["base_seed"] = args.seed
    if args.norm is not None:
        overrides["norm"] = args.norm
    return replace(config, **overrides) if overrides else config


def _cmd_simulate(args) -> int:
    config = _resolve_config(args)
    records, summaries = run_sweep(config, max_workers=args.workers)
    emit_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    if args.summary:
        emit_summary(summaries, args.summary)
        print(f"wrote {len(summaries)} summary rows to {args.summary}")
    if args.figures:
        from .plotting import render_figures

        for path in render_figures(summaries, args.figures):
            print(f"wrote figure {path}")
    return 0


def _cmd_list_presets(_args) -> int:
    for name in preset_names():
        config = preset(name)
        methods = ", ".join(m.label for m in config.methods)
        print(f"{name}")
        print(f"  {config.source}")
        print(f"  methods: {methods}; trials: {config.trials}; norm: {config.norm}")
    return 0


def read_records_csv(path) -> list[TrialRecord]:
    """Read a records CSV back into TrialRecord rows."""
    records = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        for row in csv.DictReader(handle):
            try:
                records.append(
                    TrialRecord(
                        preset=row["preset"],
                        method=row["method"],
                        n=int(row["n"]),
                        d=int(row["d"]),
                        aspect_ratio=float(row["aspect_ratio"]),
                        s=int(row["s"]) if row["s"] else None,
                        trial=int(row["trial"]),
                        dist=float(row["dist"]) if row["dist"] else math.nan,
                        elapsed_seconds=float(row["elapsed_seconds"]),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise InvalidInput(f"malformed records CSV {path}: {exc}") from None
    return records


def _cmd_plot(args) -> int:
    from .plotting import render_figures

    records = read_records_csv(args.records)
    for path in render_figures(summarize(records), args.out_dir):
        print(f"wrote figure {path}")
    return 0


_COMMANDS = {
    "theory": _cmd_theory,
    "simulate": _cmd_simulate,
    "list-presets": _cmd_list_presets,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except PairPCAError as exc:
        print(f"pairpca: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"pairpca: runtime failure: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
