"""Command-line entry point."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..deepstack import deep_call
from ..emitter import emit_theory
from ..errors import InputError
from .pipeline import Options, load_program, solve
from .report import dump_depgraph, dump_equations, dump_termination, dump_vcs, dumps_report, json_report, verdict_table

EXIT_OK, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="psverify", description="Verify contracts of a small functional program.")
    p.add_argument("command", nargs="?", choices=["verify"], help="the only command: verify FILE")
    p.add_argument("file", nargs="?", help="source file")
    p.add_argument("--emit-theory", metavar="PATH", help="write the theory document (.thy.txt)")
    p.add_argument("--assume-mappings", action="store_true", help="assert @library equivalences as axioms")
    p.add_argument("--timeout-ms", type=int, default=5000, metavar="N", help="per-VC wall clock budget")
    p.add_argument("--max-steps", type=int, default=20000, metavar="N", help="per-VC step budget")
    p.add_argument("--fuel", type=int, default=10000, metavar="N", help="evaluator fuel for oracle checks")
    p.add_argument("--seed", type=int, default=0, metavar="N", help="seed for randomized oracle checks")
    p.add_argument("--dump-depgraph", action="store_true")
    p.add_argument("--dump-equations", action="store_true")
    p.add_argument("--dump-termination", action="store_true")
    p.add_argument("--dump-vcs", action="store_true")
    p.add_argument("--json-report", metavar="PATH", help="write the JSON run report")
    p.add_argument("--report-timings", action="store_true", help="include wall-clock millis in the JSON report")
    p.add_argument("--no-base", action="store_true", help="do not load the bundled base library")
    p.add_argument("--daemon", action="store_true", help="serve the line-delimited protocol on stdio")
    return p


def options_from(args) -> Options:
    return Options(timeout_ms=args.timeout_ms, max_steps=args.max_steps, fuel=args.fuel, seed=args.seed,
                   assume_mappings=args.assume_mappings, timings=args.report_timings)


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if args.daemon:
        from .daemon import serve
        serve(sys.stdin, out, options_from(args))
        return EXIT_OK
    if args.command != "verify" or not args.file:
        parser.print_usage(err)
        print("psverify: error: expected `verify FILE` or --daemon", file=err)
        return EXIT_INPUT
    try:
        source = Path(args.file).read_text()
    except OSError as e:
        print(f"error: cannot read {args.file}: {e.strerror}", file=err)
        return EXIT_INPUT
    try:
        program = deep_call(load_program, source, args.file, not args.no_base)
        an = deep_call(solve, program, options_from(args))
    except InputError as e:
        print(f"error: {e}", file=err)
        return EXIT_INPUT
    for flag, dump in ((args.dump_depgraph, dump_depgraph), (args.dump_equations, dump_equations),
                       (args.dump_termination, dump_termination), (args.dump_vcs, dump_vcs)):
        if flag:
            print(dump(an), file=out)
            print(file=out)
    print(verdict_table(an), file=out)
    if args.emit_theory:
        Path(args.emit_theory).write_text(emit_theory(an, Path(args.file).stem))
    if args.json_report:
        Path(args.json_report).write_text(dumps_report(json_report(an, source, args.report_timings)))
    return EXIT_OK if an.verdict.overall == "unsat" else EXIT_UNKNOWN


def main() -> None:
    sys.exit(run_cli())
