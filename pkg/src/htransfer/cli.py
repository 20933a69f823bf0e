"""Command line driver.

    htransfer run PROBLEM [--max-degree D] [--arity K] [--pin slot:arg=value] [--report-dir DIR]
    htransfer validate PROBLEM
    htransfer diff REPORT_A REPORT_B

PROBLEM is a JSON file or the name of a bundled problem (torsion_dga, bar_bialgebra,
complex_m, empty).  Exit codes: 0 ok, 1 verification failed, 2 parse error,
3 validation error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .pipeline import ProblemError, ProblemParseError, bundled_problems, load_problem, run_problem, validate
from .report import report_diff, to_json, to_text

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_VALIDATE = 0, 1, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="htransfer", description="Homology, bar constructions and structure transfer.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run the pipeline named in a problem file")
    r.add_argument("problem")
    r.add_argument("--max-degree", type=int, help="override the window D")
    r.add_argument("--arity", type=int, help="override the maximal arity")
    r.add_argument("--pin", action="append", default=[], metavar="SLOT:ARG=VALUE",
                   help="override a pinned choice, e.g. g2:beta|beta=[a3|a2]")
    r.add_argument("--report-dir", default=".", help="where to write NAME.json and NAME.txt")
    r.add_argument("--quiet", action="store_true", help="do not print the text report")
    v = sub.add_parser("validate", help="check a problem file without running it")
    v.add_argument("problem")
    d = sub.add_parser("diff", help="field-level diff of two JSON reports")
    d.add_argument("a")
    d.add_argument("b")
    sub.add_parser("list", help="list bundled problems")
    return p


def cmd_run(args) -> int:
    doc = load_problem(args.problem)
    report, ok = run_problem(doc, args.max_degree, args.arity, args.pin)
    out = Path(args.report_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{report['problem']}.json").write_text(to_json(report))
    text = to_text(report)
    (out / f"{report['problem']}.txt").write_text(text)
    if not args.quiet:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_validate(args) -> int:
    doc = load_problem(args.problem)
    problems = validate(doc)
    for line in problems:
        print(line)
    if not problems:
        print("valid")
    return EXIT_VALIDATE if problems else EXIT_OK


def cmd_diff(args) -> int:
    docs = []
    for path in (args.a, args.b):
        try:
            docs.append(json.loads(Path(path).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ProblemParseError(str(exc), path) from exc
    diff = report_diff(*docs)
    print(json.dumps(diff, sort_keys=True, indent=2, ensure_ascii=False))
    return EXIT_OK if not diff else EXIT_VERIFY


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "validate":
            return cmd_validate(args)
        if args.command == "diff":
            return cmd_diff(args)
        print("\n".join(bundled_problems()))
        return EXIT_OK
    except ProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
