"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.  Every
tolerance is exact (zero disagreements); the time limits are asserted too.
"""

import random
import time

import pytest

from stacksched.auxiliary import aux_oracle, expand_aux, verify_aux_schedule
from stacksched.core import Instance, Task, verify_schedule
from stacksched.harness import sat_bruteforce
from stacksched.satgadget import (
    build_block_sequence,
    check_offset_property,
    decode_schedule,
    flatten_filled,
    make_block,
    satisfies,
)
from stacksched.solve import (
    edd_unit_schedule,
    exhaustive_oracle,
    preemptive_edf_feasible,
    solve_decision,
)
from stacksched.stacked import (
    embed_aux_schedule,
    extract_aux_schedule,
    normalize_bins,
    reduce_aux_to_instance,
)
from conftest import (
    all_cnfs,
    min_makespan,
    random_aux,
    random_cnf,
    random_instance,
    random_unit_instance,
)

pytestmark = pytest.mark.usefixtures("warm_solver")


def report(criterion: str, detail: str) -> None:
    print(f"PASS {criterion}: {detail}")


def gadget_tasks(kind: str, p: int, q: int, force_early: bool):
    """A literal gadget's tasks in isolation, windows anchored at offset 0."""
    block = make_block(kind, p, q)
    pending = block.long_pending or block.short_pending
    length = p if block.long_pending else q
    deadline = pending.early if force_early else pending.late
    tasks = [Task(f"aux{k}", t.release, t.deadline, t.length) for k, t in enumerate(block.aux_jobs)]
    tasks.append(Task("pending", 0, deadline, length))
    return tasks


def test_criterion_1_gadget_timing():
    begin = time.perf_counter()
    for p, q in ((3, 2), (4, 3), (5, 2), (5, 3)):
        for kind in ("vplus", "vminus"):
            relaxed = min_makespan(gadget_tasks(kind, p, q, force_early=False))
            assert relaxed == p + 2 * q, (kind, p, q, relaxed)
            forced = min_makespan(gadget_tasks(kind, p, q, force_early=True))
            assert forced == p + 2 * q + 1, (kind, p, q, forced)
    elapsed = time.perf_counter() - begin
    assert elapsed < 1.0
    report(
        "criterion 1 (gadget timing)",
        f"8 gadget/parameter combinations, exact completions, {elapsed:.2f}s < 1s",
    )


def _criterion2_cases():
    rng = random.Random(2024)
    cases = []
    for p, q in ((3, 2), (5, 2), (4, 3)):
        for _ in range(70):
            cases.append(random_aux(rng, p=p, q=q, max_pairs=3, max_ordinary=3, horizon=30))
    return cases


def test_criterion_2_and_3_reduction_equivalence_and_mappings():
    begin = time.perf_counter()
    cases = _criterion2_cases()
    assert len(cases) >= 200
    feasible = 0
    for aux in cases:
        st = reduce_aux_to_instance(aux)
        oracle = aux_oracle(aux)
        solved = solve_decision(st.instance)
        assert oracle.verdict == solved.verdict, (aux, oracle.verdict, solved.verdict)
        if solved.feasible:
            feasible += 1
            assert verify_schedule(st.instance, embed_aux_schedule(aux, oracle.witness)) == []
            extracted = extract_aux_schedule(aux, st, normalize_bins(st, solved.witness))
            assert verify_aux_schedule(aux, extracted) == []
    elapsed = time.perf_counter() - begin
    assert elapsed < 300
    report(
        "criterion 2 (reduction equivalence)",
        f"{len(cases)} instances across three length pairs, zero disagreements, {elapsed:.1f}s < 300s",
    )
    report(
        "criterion 3 (schedule mappings)",
        f"{feasible} feasible cases embedded and extracted without a failure",
    )


def _criterion4_formulas():
    formulas = all_cnfs(max_vars=2, max_clauses=2)
    rng = random.Random(0)
    formulas += [random_cnf(rng, max_vars=3, max_clauses=3) for _ in range(30)]
    return formulas


def test_criterion_4_and_5_sat_chain_and_offsets():
    begin = time.perf_counter()
    formulas = _criterion4_formulas()
    checked_offsets = 0
    for cnf in formulas:
        sat = sat_bruteforce(cnf)
        fi = build_block_sequence(cnf, 3, 2)
        aux = flatten_filled(fi)
        st = reduce_aux_to_instance(aux)
        solved = solve_decision(st.instance, max_nodes=10_000_000)
        assert solved.verdict != "budget_exhausted", (cnf, solved.stats)
        assert solved.feasible == sat.satisfiable, (cnf, solved.verdict)
        if solved.feasible:
            extracted = extract_aux_schedule(aux, st, normalize_bins(st, solved.witness))
            assignment = decode_schedule(fi, extracted)
            assert satisfies(cnf, assignment), (cnf, assignment)
            assert check_offset_property(fi, extracted) == []
            checked_offsets += 1
    elapsed = time.perf_counter() - begin
    assert elapsed < 900
    report(
        "criterion 4 (SAT end-to-end)",
        f"{len(formulas)} formulas (exhaustive n<=2,m<=2 plus 30 sampled), "
        f"verdicts agree and witnesses decode, {elapsed:.1f}s < 900s",
    )
    report(
        "criterion 5 (offset propagation)",
        f"{checked_offsets} feasible schedules, zero offset violations",
    )


def test_criterion_6_solver_soundness_completeness():
    begin = time.perf_counter()
    rng = random.Random(6)
    for _ in range(500):
        inst = random_instance(rng, max_tasks=6, lengths=(3, 2), horizon=20)
        solved = solve_decision(inst)
        oracle = exhaustive_oracle(inst)
        assert solved.verdict == oracle, (inst, solved.verdict, oracle)
        if solved.feasible:
            assert verify_schedule(inst, solved.witness) == []
        if not preemptive_edf_feasible(inst):
            assert oracle == "infeasible"
    elapsed = time.perf_counter() - begin
    assert elapsed < 120
    report(
        "criterion 6 (solver soundness/completeness)",
        f"500 instances vs exhaustive enumeration, zero disagreements, {elapsed:.1f}s < 120s",
    )


def test_criterion_7_construction_validity():
    from stacksched.auxiliary import validate_aux

    begin = time.perf_counter()
    formulas = _criterion4_formulas()
    grid = [(p, q) for q in range(2, 6) for p in range(q + 1, 7)]
    count = 0
    for cnf in formulas:
        n, m = cnf.num_vars, cnf.num_clauses
        pairs = n + m * (2 * n + 1)
        for p, q in grid:
            aux = flatten_filled(build_block_sequence(cnf, p, q))
            assert validate_aux(aux) == []
            assert aux.pairs == pairs
            assert len(aux.ordinary) + 2 * aux.pairs == 2 * pairs + 4 * n + 2 * n
            count += 1
    elapsed = time.perf_counter() - begin
    assert elapsed < 10
    report(
        "criterion 7 (construction validity)",
        f"{count} formula/length-pair constructions valid with exact job counts, {elapsed:.1f}s < 10s",
    )


def test_criterion_8_edd_special_case():
    begin = time.perf_counter()
    rng = random.Random(8)
    for _ in range(200):
        inst = random_unit_instance(rng, max_tasks=10)
        edd = edd_unit_schedule(inst)
        oracle = exhaustive_oracle(inst)
        assert edd.verdict == oracle, (inst, edd.verdict, oracle)
        if edd.feasible:
            assert verify_schedule(inst, edd.witness) == []
    elapsed = time.perf_counter() - begin
    assert elapsed < 30
    report(
        "criterion 8 (earliest-due-date special case)",
        f"200 unit-length instances vs exhaustive enumeration, zero disagreements, {elapsed:.1f}s < 30s",
    )
