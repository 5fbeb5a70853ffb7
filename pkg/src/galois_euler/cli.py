"""Command line: ``galois-euler run|verify-examples|selftest``.

Exit codes: 0 ok, 2 scenario does not parse, 3 engine error, 4 a computed
value differs from a published one (DISCREPANCY).
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from .errors import EngineError, SchemaError
from .report import DISCREPANCY, dumps, evaluate, render_text
from .scenario import build_scenario, bundled_dir, load_raw
from .selftest import run_all

EXIT_OK, EXIT_SCHEMA, EXIT_ENGINE, EXIT_DISCREPANCY = 0, 2, 3, 4

log = logging.getLogger("galois_euler")


def evaluate_file(path: str | Path) -> list[dict]:
    """Parse every scenario first, so a schema error never leaves partial output."""
    scenarios = [build_scenario(raw) for raw in load_raw(path)]
    return [evaluate(sc) for sc in scenarios]


def _emit(reports: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        out.write(dumps(reports))
    else:
        out.write("\n".join(render_text(r) for r in reports))


def _status(reports: list[dict]) -> int:
    if any(w["code"] == DISCREPANCY for r in reports for w in r["warnings"]):
        return EXIT_DISCREPANCY
    return EXIT_OK


def cmd_run(args, out) -> int:
    reports = []
    for path in args.files:
        reports.extend(evaluate_file(path))
    _emit(reports, args.format, out)
    return _status(reports)


EXAMPLES = ("example1_sqrt-5.json", "example2_sqrt-120.json")


def cmd_verify_examples(args, out) -> int:
    reports = []
    for name in EXAMPLES:
        t0 = time.perf_counter()
        reports.extend(evaluate_file(bundled_dir() / name))
        log.info("%s evaluated in %.3f s", name, time.perf_counter() - t0)
    _emit(reports, args.format, out)
    return _status(reports)


def cmd_selftest(args, out) -> int:
    try:
        results = run_all(args.filter, args.seed)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return EXIT_SCHEMA
    for res in results:
        state = "ok" if res.ok else "FAIL"
        out.write(f"{res.name:<16} {state:<5} passed {res.passed} failed {len(res.failed)}\n")
        for msg in res.failed:
            out.write(f"  {msg}\n")
    return EXIT_OK if all(r.ok for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    def common(parser, suppress):
        # accepted before or after the subcommand; the subcommand copy must not reset defaults
        dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        parser.add_argument("--format", choices=("json", "text"), default=dflt("json"))
        parser.add_argument("--seed", type=int, default=dflt(0), help="seed for randomised self-test corpora")
        parser.add_argument("-v", "--verbose", action="store_true", default=dflt(False))

    ap = argparse.ArgumentParser(prog="galois-euler", description=__doc__.splitlines()[0])
    common(ap, False)
    shared = argparse.ArgumentParser(add_help=False)
    common(shared, True)
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="evaluate scenario files", parents=[shared])
    run.add_argument("files", nargs="+")
    sub.add_parser("verify-examples", help="evaluate the two bundled worked examples", parents=[shared])
    st = sub.add_parser("selftest", help="run the invariant suites", parents=[shared])
    st.add_argument("--filter", default=None, help="only suites whose name contains this")
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if not 0 <= args.seed < 2**64:
        print("--seed must fit in 64 bits", file=sys.stderr)
        return EXIT_SCHEMA
    handlers = {"run": cmd_run, "verify-examples": cmd_verify_examples, "selftest": cmd_selftest}
    try:
        return handlers[args.command](args, out)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except EngineError as exc:
        print(f"engine error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
