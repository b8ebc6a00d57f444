"""Shared generators and tiny independent oracles for the test suite.

The enumerators here deliberately reimplement feasibility from scratch
(plain interval arithmetic over start tuples) so package code is always
checked against an independent computation.
"""

from __future__ import annotations

import itertools
import random

import pytest

from stacksched.auxiliary import AuxInstance, PendingDeadlines
from stacksched.core import Instance, Task
from stacksched.satgadget import CnfFormula


def feasible_start_tuples(tasks):
    """Yield every integer start tuple that is feasible for the tasks."""
    windows = [range(t.release, t.deadline - t.length + 1) for t in tasks]
    for starts in itertools.product(*windows):
        spans = sorted((s, s + t.length) for s, t in zip(starts, tasks))
        if all(a[1] <= b[0] for a, b in zip(spans, spans[1:])):
            yield starts


def min_makespan(tasks):
    """Smallest possible latest completion over all feasible schedules."""
    best = None
    for starts in feasible_start_tuples(tasks):
        mk = max(s + t.length for s, t in zip(starts, tasks))
        if best is None or mk < best:
            best = mk
    return best


def random_instance(rng: random.Random, max_tasks=6, lengths=(3, 2), horizon=20):
    tasks = []
    for k in range(rng.randint(1, max_tasks)):
        ln = rng.choice(lengths)
        release = rng.randint(0, horizon - ln)
        deadline = rng.randint(release + ln, min(horizon, release + ln + rng.randint(0, 10)))
        tasks.append(Task(f"t{k}", release, deadline, ln))
    return Instance(tasks)


def random_unit_instance(rng: random.Random, max_tasks=10):
    tasks = []
    for k in range(rng.randint(1, max_tasks)):
        release = rng.randint(0, 8)
        deadline = release + rng.randint(1, 4)
        tasks.append(Task(f"u{k}", release, deadline, 1))
    return Instance(tasks)


def random_aux(rng: random.Random, p=3, q=2, max_pairs=3, max_ordinary=3, horizon=30):
    """A structurally valid pending-pair instance, drawn by rejection."""
    from stacksched.auxiliary import validate_aux

    while True:
        pairs = rng.randint(0, max_pairs)
        long_pending = []
        short_pending = []
        lo_l = 1
        lo_s = 1
        ok = True
        for _ in range(pairs):
            if lo_l > horizon or lo_s > horizon:
                ok = False
                break
            early_l = rng.randint(lo_l, horizon)
            late_l = rng.randint(max(early_l, p), horizon) if max(early_l, p) <= horizon else None
            if late_l is None:
                ok = False
                break
            lo = max(lo_s, late_l)
            if lo > horizon:
                ok = False
                break
            early_s = rng.randint(lo, horizon)
            late_s = rng.randint(max(early_s, q), horizon)
            long_pending.append(PendingDeadlines(early_l, late_l))
            short_pending.append(PendingDeadlines(early_s, late_s))
            lo_l, lo_s = late_l, late_s
        if not ok:
            continue
        ordinary = []
        for k in range(rng.randint(0, max_ordinary)):
            ln = rng.choice([p, q])
            release = rng.randint(0, horizon - ln)
            deadline = rng.randint(release + ln, horizon)
            ordinary.append(Task(f"j{k}", release, deadline, ln))
        aux = AuxInstance(p, q, ordinary, long_pending, short_pending)
        if not validate_aux(aux):
            return aux


def all_cnfs(max_vars=2, max_clauses=2):
    """Canonical enumeration: clauses are nonempty literal subsets, formulas
    are multisets of up to max_clauses clauses, for 1..max_vars variables."""
    out = []
    for n in range(1, max_vars + 1):
        lits = [v for i in range(1, n + 1) for v in (i, -i)]
        clauses = []
        for size in range(1, len(lits) + 1):
            clauses.extend(itertools.combinations(lits, size))
        for m in range(0, max_clauses + 1):
            for combo in itertools.combinations_with_replacement(clauses, m):
                out.append(CnfFormula(n, combo))
    return out


def random_cnf(rng: random.Random, max_vars=3, max_clauses=3):
    n = rng.randint(1, max_vars)
    m = rng.randint(0, max_clauses)
    clauses = []
    for _ in range(m):
        size = rng.randint(1, min(3, n))
        chosen = rng.sample(range(1, n + 1), size)
        clauses.append(sorted(rng.choice([v, -v]) for v in chosen))
    return CnfFormula(n, clauses)


def brute_sat(cnf: CnfFormula):
    """Independent satisfiability check by direct enumeration."""
    n = cnf.num_vars
    for code in range(1 << n):
        v = {i: bool((code >> (n - i)) & 1) for i in range(1, n + 1)}
        if all(any(v[abs(l)] == (l > 0) for l in c) for c in cnf.clauses):
            return v
    return None


@pytest.fixture(scope="session")
def warm_solver():
    """Compile or load the jitted kernels once per session."""
    from stacksched.solve import solve_decision

    solve_decision(Instance([Task("w", 0, 2, 2)]))
    return True
