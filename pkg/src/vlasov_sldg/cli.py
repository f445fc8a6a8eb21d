"""Command-line entry point: ``vlasov run | scenarios | check | plot``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import load_config
from .errors import BlowUpError, ConfigError, VlasovError
from .output import read_diagnostics, write_outputs
from .runner import run_config
from .scenarios import DEFAULTS, DESCRIPTIONS

EXIT_OK, EXIT_CONFIG, EXIT_BLOWUP = 0, 1, 2

log = logging.getLogger("vlasov")


def _cmd_run(args):
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.output:
        cfg = cfg.replace(output_dir=args.output)
    log.info("running %s: backend=%s order=%d cells=%d tau=%g t_end=%g",
             cfg.scenario, cfg.backend, cfg.order, cfg.n_cells, cfg.tau, cfg.t_end)
    try:
        scenario, result = run_config(cfg)
    except BlowUpError as exc:
        print(f"blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except VlasovError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    extra = {
        "n_cells": cfg.n_cells,
        "degree": cfg.degree,
        "actual_dof_per_dim": cfg.actual_dof,
        "domain_length": repr(scenario.domain_length),
        "v_max_resolved": repr(scenario.v_max),
        "field_enabled": str(scenario.field_enabled).lower(),
        "steps": result.steps,
        "limiter_clamp_events": result.clamp_events,
    }
    paths = write_outputs(result.records, result.snapshots, cfg, cfg.output_dir, extra)
    if not args.no_figures:
        from .plotting import render_run_figures

        paths += render_run_figures(result.records, result.snapshots, cfg.output_dir,
                                    label=f"{cfg.backend} order {cfg.order if cfg.backend == 'sldg' else 'spline'}")
    for p in paths:
        print(p)
    return EXIT_OK


def _cmd_scenarios(args):
    for name, params in DEFAULTS.items():
        defaults = ", ".join(f"{k}={v:g}" for k, v in params.items())
        print(f"{name:15s} {DESCRIPTIONS[name]} [{defaults}]")
    return EXIT_OK


def _cmd_check(args):
    from .selfcheck import run_checks

    failed = 0
    for name, ok, detail in run_checks():
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return EXIT_OK if failed == 0 else EXIT_CONFIG


def _cmd_plot(args):
    from .plotting import plot_electric_energy, plot_invariant_errors

    runs = {}
    for d in args.runs:
        runs[Path(d).name] = read_diagnostics(Path(d) / "diagnostics.csv")
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    print(plot_invariant_errors(runs, out / "invariants_comparison.png"))
    print(plot_electric_energy(runs, out / "electric_energy_comparison.png"))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="vlasov", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a simulation from a config file")
    p.add_argument("--config", required=True, help="key = value config file")
    p.add_argument("--output", help="output directory (overrides output_dir)")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("scenarios", help="list available scenarios")
    p.set_defaults(func=_cmd_scenarios)

    p = sub.add_parser("check", help="run the fast invariant self-tests")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("plot", help="overlay invariant errors of finished runs")
    p.add_argument("runs", nargs="+", help="run output directories")
    p.add_argument("--output", default=".", help="directory for the comparison figures")
    p.set_defaults(func=_cmd_plot)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
