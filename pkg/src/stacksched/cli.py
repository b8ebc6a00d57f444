"""Command line front end.

Subcommands: reduce (DIMACS to instance JSON), solve, verify, decode,
roundtrip, gantt.  Exit codes: 0 feasible/consistent, 1 infeasible or UNSAT
(still consistent), 2 input error, 3 budget exhausted, 4 stage disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys

from .auxiliary import aux_from_json, aux_to_json, verify_aux_schedule
from .core import (
    FormatError,
    instance_from_json,
    instance_to_json,
    schedule_from_json,
    verify_schedule,
)
from .gantt import render_gantt
from .harness import PipelineDisagreement, parse_dimacs, run_roundtrip
from .satgadget import (
    build_block_sequence,
    decode_schedule,
    flatten_filled,
    layout_from_json,
    layout_to_json,
)
from .solve import BUDGET_EXHAUSTED, FEASIBLE, OracleGuardError, solve_decision
from .stacked import reduce_aux_to_instance

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_DISAGREE = 4


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _add_pq(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--p", type=int, default=3, help="long task length (default 3)")
    cmd.add_argument("--q", type=int, default=2, help="short task length (default 2)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stacksched",
        description="feasibility scheduling with release times and deadlines, "
        "plus SAT-to-scheduling instance constructions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_reduce = sub.add_parser("reduce", help="DIMACS CNF to instance JSON")
    p_reduce.add_argument("dimacs", help="input DIMACS file, or - for stdin")
    _add_pq(p_reduce)
    p_reduce.add_argument(
        "--stage", choices=("aux", "stacked"), default="stacked",
        help="emit the pending-pair instance or the fully rewritten instance",
    )
    p_reduce.add_argument("--layout", help="also write the block layout report here")
    p_reduce.add_argument("-o", "--output", help="output path (default stdout)")

    p_solve = sub.add_parser("solve", help="decide feasibility of an instance JSON")
    p_solve.add_argument("instance")
    p_solve.add_argument("--nodes", type=int, help="node budget")
    p_solve.add_argument("--timeout-ms", type=int, help="wall clock budget")
    p_solve.add_argument("-o", "--output", help="output path (default stdout)")

    p_verify = sub.add_parser("verify", help="check a schedule against an instance")
    p_verify.add_argument("instance", help="instance JSON (or aux JSON with --aux)")
    p_verify.add_argument("schedule")
    p_verify.add_argument(
        "--aux", action="store_true",
        help="treat the instance as a pending-pair instance and check the pair rule",
    )

    p_decode = sub.add_parser("decode", help="layout report + schedule to assignment")
    p_decode.add_argument("layout")
    p_decode.add_argument("schedule")
    p_decode.add_argument("-o", "--output", help="output path (default stdout)")

    p_round = sub.add_parser("roundtrip", help="run all stages on a DIMACS file and compare")
    p_round.add_argument("dimacs")
    _add_pq(p_round)
    p_round.add_argument("--nodes", type=int, help="solver node budget")
    p_round.add_argument("--timeout-ms", type=int, help="solver wall clock budget")
    p_round.add_argument("--skip-aux-oracle", action="store_true")
    p_round.add_argument("-o", "--output", help="report path (default stdout)")

    p_gantt = sub.add_parser("gantt", help="render a schedule")
    p_gantt.add_argument("instance")
    p_gantt.add_argument("schedule")
    p_gantt.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    p_gantt.add_argument("-o", "--output", help="output path (default stdout)")

    return parser


def _cmd_reduce(args) -> int:
    cnf = parse_dimacs(_read(args.dimacs))
    fi = build_block_sequence(cnf, args.p, args.q)
    if args.layout:
        _write(args.layout, layout_to_json(fi))
    aux = flatten_filled(fi)
    if args.stage == "aux":
        _write(args.output, aux_to_json(aux))
    else:
        _write(args.output, instance_to_json(reduce_aux_to_instance(aux).instance))
    return EXIT_OK


def _cmd_solve(args) -> int:
    inst = instance_from_json(_read(args.instance))
    res = solve_decision(inst, max_nodes=args.nodes, timeout_ms=args.timeout_ms)
    doc = {"verdict": res.verdict, "stats": res.stats.to_obj()}
    if res.witness is not None:
        doc["starts"] = dict(res.witness.starts)
    _write(args.output, json.dumps(doc, indent=2) + "\n")
    if res.verdict == FEASIBLE:
        return EXIT_OK
    if res.verdict == BUDGET_EXHAUSTED:
        return EXIT_BUDGET
    return EXIT_NEGATIVE


def _cmd_verify(args) -> int:
    sch = schedule_from_json(_read(args.schedule))
    if args.aux:
        aux = aux_from_json(_read(args.instance))
        bad = verify_aux_schedule(aux, sch)
    else:
        inst = instance_from_json(_read(args.instance))
        bad = verify_schedule(inst, sch)
    if bad:
        for v in bad:
            print(v, file=sys.stderr)
        return EXIT_NEGATIVE
    print("ok")
    return EXIT_OK


def _cmd_decode(args) -> int:
    fi = layout_from_json(_read(args.layout))
    sch = schedule_from_json(_read(args.schedule))
    assignment = decode_schedule(fi, sch)
    doc = {"assignment": {str(k): v for k, v in sorted(assignment.items())}}
    _write(args.output, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def _cmd_roundtrip(args) -> int:
    cnf = parse_dimacs(_read(args.dimacs))
    try:
        report = run_roundtrip(
            cnf,
            args.p,
            args.q,
            max_nodes=args.nodes,
            timeout_ms=args.timeout_ms,
            skip_aux_oracle=args.skip_aux_oracle,
        )
    except PipelineDisagreement as e:
        sys.stderr.write(f"stage disagreement: {e}\n")
        sys.stderr.write(e.report.to_json())
        for name, text in e.artifacts.items():
            sys.stderr.write(f"--- artifact {name} ---\n{text}")
        return EXIT_DISAGREE
    _write(args.output, report.to_json())
    if report.outcome == "sat":
        return EXIT_OK
    if report.outcome == BUDGET_EXHAUSTED:
        return EXIT_BUDGET
    return EXIT_NEGATIVE


def _cmd_gantt(args) -> int:
    inst = instance_from_json(_read(args.instance))
    sch = schedule_from_json(_read(args.schedule))
    _write(args.output, render_gantt(inst, sch, format=args.format))
    return EXIT_OK


_COMMANDS = {
    "reduce": _cmd_reduce,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "decode": _cmd_decode,
    "roundtrip": _cmd_roundtrip,
    "gantt": _cmd_gantt,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (FormatError, OracleGuardError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
