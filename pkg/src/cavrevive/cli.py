"""Command line entry point: ``cavrevive {evolve,qfunc,times,basin-scan,verify}``.

Exit codes: 0 success, 2 configuration error, 3 Fock cutoff inadequate
(leakage), 4 verify failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .errors import ConfigError, CutoffTooSmall
from .scenario import (
    load_config,
    run_basin_scan,
    run_evolve,
    run_qfunc,
    run_times,
    table_to_csv,
    table_to_json,
    thread_count,
    write_table,
)
from .verify import report, run_verify

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_LEAKAGE = 3
EXIT_VERIFY = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="cavrevive", description="Tavis-Cummings collapse/revival simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="key=value config or JSON sidecar")
        p.add_argument("--output", help="output file (default: output.path, else stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format")

    common(sub.add_parser("evolve", help="time series of observables"))
    q = sub.add_parser("qfunc", help="field or spin Q function at one time")
    common(q)
    q.add_argument("--time", type=float, help="evolution time in units of 1/lambda")
    q.add_argument("--kind", choices=("field", "spin"))
    q.add_argument("--grid", type=int, help="grid points per axis")
    common(sub.add_parser("times", help="collapse, revival and attractor times"))
    b = sub.add_parser("basin-scan", help="tangle and attractor probability across the basin")
    common(b)
    b.add_argument("--samples", type=int, help="number of basin samples")
    common(sub.add_parser("verify", help="run the self-check suite"), config_required=False)
    return parser


def _emit(table, args, cfg_path, cfg_format):
    fmt = args.format or cfg_format or "csv"
    path = args.output or cfg_path
    if path:
        write_table(table, path, fmt)
    else:
        sys.stdout.write(table_to_csv(table) if fmt == "csv" else table_to_json(table))


def _emit_json(doc, args):
    _emit_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", args)


def _emit_text(text, args):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            ok, checks = run_verify()
            rep = report(checks)
            if args.format == "csv":
                lines = ["name,residual,tolerance,passed"]
                lines += [f"{c.name},{c.residual!r},{c.tolerance!r},{str(c.passed).lower()}" for c in checks]
                _emit_text("\n".join(lines) + "\n", args)
            else:
                _emit_json(rep, args)
            return EXIT_OK if ok else EXIT_VERIFY

        cfg = load_config(args.config)
        if args.command == "evolve":
            _emit(run_evolve(cfg), args, cfg.output_path, cfg.output_format)
        elif args.command == "qfunc":
            table = run_qfunc(cfg, t=args.time, kind=args.kind, grid=args.grid)
            _emit(table, args, cfg.output_path, cfg.output_format)
        elif args.command == "times":
            _emit_json(run_times(cfg.model), args)
        elif args.command == "basin-scan":
            m = cfg.model
            samples = args.samples if args.samples is not None else cfg.scan_samples
            table = run_basin_scan(m.n_qubits, m.nbar, m.theta, samples, m.coupling, threads=thread_count())
            _emit(table, args, cfg.output_path, cfg.output_format)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CutoffTooSmall as exc:
        print(f"cutoff too small (leakage {exc.leakage:.3e}): {exc}", file=sys.stderr)
        return EXIT_LEAKAGE
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
