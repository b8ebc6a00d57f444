"""DIMACS ingestion, a brute-force SAT oracle, and the end-to-end pipeline.

``run_roundtrip`` chains every stage: brute-force SAT verdict, gadget
construction, the independent pending-pair oracle, the rewritten-instance
solver, and (when feasible) normalization, extraction and decoding back to a
satisfying assignment.  All stage verdicts must agree; a disagreement is the
falsification signal for the whole toolchain and raises with a full artifact
dump attached.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Optional

from .auxiliary import aux_oracle, aux_to_json
from .core import FormatError, Schedule, instance_to_json, schedule_to_json
from .satgadget import (
    CnfFormula,
    build_block_sequence,
    decode_schedule,
    flatten_filled,
    layout_to_json,
    satisfies,
    validate_cnf,
)
from .solve import BUDGET_EXHAUSTED, FEASIBLE, OracleGuardError, solve_decision
from .stacked import extract_aux_schedule, normalize_bins, reduce_aux_to_instance


def parse_dimacs(text: str) -> CnfFormula:
    """Parse a standard DIMACS CNF document.

    Comment lines start with 'c'; the header is "p cnf <vars> <clauses>";
    clauses are whitespace-separated literals terminated by 0 and may span
    lines.  A '%' line ends the input (a common trailer convention).
    """
    num_vars: Optional[int] = None
    num_clauses = 0
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped == "%":
            break
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("p"):
            if num_vars is not None:
                raise FormatError(f"line {lineno}: duplicate header")
            parts = stripped.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise FormatError(f"line {lineno}: malformed header {stripped!r}")
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormatError(f"line {lineno}: malformed header {stripped!r}") from None
            if num_vars < 0 or num_clauses < 0:
                raise FormatError(f"line {lineno}: negative counts in header")
            continue
        if num_vars is None:
            raise FormatError(f"line {lineno}: clause before header")
        for token in stripped.split():
            try:
                lit = int(token)
            except ValueError:
                raise FormatError(f"line {lineno}: bad literal {token!r}") from None
            if lit == 0:
                if not current:
                    raise FormatError(f"line {lineno}: empty clause")
                clauses.append(current)
                current = []
            else:
                if abs(lit) > num_vars:
                    raise FormatError(f"line {lineno}: literal {lit} out of range")
                current.append(lit)
    if num_vars is None:
        raise FormatError("missing 'p cnf' header")
    if current:
        raise FormatError("last clause is missing its 0 terminator")
    if len(clauses) != num_clauses:
        raise FormatError(f"header announces {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, clauses)


def to_dimacs(cnf: CnfFormula) -> str:
    lines = [f"p cnf {cnf.num_vars} {cnf.num_clauses}"]
    lines += [" ".join(str(l) for l in clause) + " 0" for clause in cnf.clauses]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    model: Optional[dict[int, bool]]


def sat_bruteforce(cnf: CnfFormula, *, max_vars: int = 20) -> SatResult:
    """Exact satisfiability by enumerating all assignments.

    Returns the lexicographically first model (false < true, variable 1 most
    significant).  Refuses formulas beyond the variable guard.
    """
    bad = validate_cnf(cnf)
    if bad:
        raise ValueError("invalid formula: " + "; ".join(bad))
    n = cnf.num_vars
    if n > max_vars:
        raise OracleGuardError(f"{n} variables exceed the {max_vars}-variable guard")
    for code in range(1 << n):
        model = {i: bool((code >> (n - i)) & 1) for i in range(1, n + 1)}
        if satisfies(cnf, model):
            return SatResult(True, model)
    return SatResult(False, None)


@dataclass
class StageResult:
    name: str
    verdict: str  # sat/unsat, feasible/infeasible, budget_exhausted, skipped
    millis: int
    skipped: bool = False

    def to_obj(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "millis": self.millis,
            "skipped": self.skipped,
        }


@dataclass
class PipelineReport:
    num_vars: int
    num_clauses: int
    p: int
    q: int
    stages: list[StageResult] = field(default_factory=list)
    sizes: dict = field(default_factory=dict)
    assignment: Optional[dict[int, bool]] = None
    outcome: str = "unknown"  # sat | unsat | budget_exhausted
    consistent: Optional[bool] = None
    solver_nodes: int = 0

    def to_obj(self) -> dict:
        return {
            "formula": {"num_vars": self.num_vars, "num_clauses": self.num_clauses},
            "p": self.p,
            "q": self.q,
            "stages": [s.to_obj() for s in self.stages],
            "sizes": self.sizes,
            "assignment": None
            if self.assignment is None
            else {str(k): v for k, v in sorted(self.assignment.items())},
            "outcome": self.outcome,
            "consistent": self.consistent,
            "solver_nodes": self.solver_nodes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), indent=2) + "\n"


class PipelineDisagreement(RuntimeError):
    """Two stages produced contradicting verdicts; artifacts attached."""

    def __init__(self, message: str, report: PipelineReport, artifacts: dict[str, str]):
        super().__init__(message)
        self.report = report
        self.artifacts = artifacts


def _ms(begin: float) -> int:
    return int((time.perf_counter() - begin) * 1000)


def run_roundtrip(
    cnf: CnfFormula,
    p: int = 3,
    q: int = 2,
    *,
    max_nodes: Optional[int] = None,
    timeout_ms: Optional[int] = None,
    skip_aux_oracle: bool = False,
    aux_pair_guard: int = 8,
) -> PipelineReport:
    """Run every stage on one formula and check that all verdicts agree."""
    report = PipelineReport(cnf.num_vars, cnf.num_clauses, p, q)
    artifacts: dict[str, str] = {"dimacs": to_dimacs(cnf)}

    begin = time.perf_counter()
    sat = sat_bruteforce(cnf)
    report.stages.append(StageResult("sat_bruteforce", "sat" if sat.satisfiable else "unsat", _ms(begin)))

    fi = build_block_sequence(cnf, p, q)
    aux = flatten_filled(fi)
    st = reduce_aux_to_instance(aux)
    artifacts["layout"] = layout_to_json(fi)
    artifacts["aux"] = aux_to_json(aux)
    artifacts["stacked"] = instance_to_json(st.instance)
    report.sizes = {
        "blocks": len(fi.blocks),
        "pending_pairs": aux.pairs,
        "aux_tasks": len(aux.ordinary) + 2 * aux.pairs,
        "stacked_tasks": len(st.instance.tasks),
    }

    if skip_aux_oracle or aux.pairs > aux_pair_guard:
        report.stages.append(StageResult("aux_oracle", "skipped", 0, skipped=True))
        aux_verdict = None
    else:
        begin = time.perf_counter()
        aux_res = aux_oracle(aux, max_pairs=aux_pair_guard)
        report.stages.append(StageResult("aux_oracle", aux_res.verdict, _ms(begin)))
        aux_verdict = aux_res.feasible

    begin = time.perf_counter()
    solved = solve_decision(st.instance, max_nodes=max_nodes, timeout_ms=timeout_ms)
    report.stages.append(StageResult("stacked_solver", solved.verdict, _ms(begin)))
    report.solver_nodes = solved.stats.nodes

    if solved.verdict == BUDGET_EXHAUSTED:
        report.outcome = BUDGET_EXHAUSTED
        report.consistent = None
        return report

    def fail(message: str) -> PipelineDisagreement:
        report.consistent = False
        return PipelineDisagreement(message, report, artifacts)

    if sat.satisfiable != (solved.verdict == FEASIBLE):
        raise fail(
            f"SAT oracle says {'sat' if sat.satisfiable else 'unsat'} but the solver says {solved.verdict}"
        )
    if aux_verdict is not None and aux_verdict != sat.satisfiable:
        raise fail("pending-pair oracle disagrees with the SAT oracle")

    if solved.verdict == FEASIBLE:
        artifacts["witness"] = schedule_to_json(solved.witness)
        begin = time.perf_counter()
        try:
            normalized = normalize_bins(st, solved.witness)
            extracted = extract_aux_schedule(aux, st, normalized)
            artifacts["extracted"] = schedule_to_json(extracted)
            assignment = decode_schedule(fi, extracted)
        except (AssertionError, ValueError) as e:
            raise fail(f"witness does not map back to a model: {e}") from e
        report.stages.append(StageResult("decode", "sat", _ms(begin)))
        if not satisfies(cnf, assignment):
            raise fail("decoded assignment does not satisfy the formula")
        report.assignment = assignment
        report.outcome = "sat"
    else:
        report.outcome = "unsat"
    report.consistent = True
    return report
