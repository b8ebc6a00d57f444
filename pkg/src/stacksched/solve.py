"""Exact feasibility decision for an instance, plus special cases and oracles.

``solve_decision`` is a complete chronological branch-and-bound over integer
start times (integer data means integer starts lose no feasibility).  The
inner search loop lives in :mod:`stacksched._kernels`.  The module also
provides the preemptive EDF relaxation test, the greedy earliest-due-date
procedure for unit-length tasks, and a brute-force enumeration oracle used to
cross-check the solver on small instances.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .core import Instance, Schedule, validate_instance

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
BUDGET_EXHAUSTED = "budget_exhausted"

# nodes per kernel slice between wall-clock checks
_SLICE = 1 << 15


class OracleGuardError(RuntimeError):
    """The request exceeds an enumeration guard; no verdict is implied."""


@dataclass(frozen=True)
class SolveStats:
    """Search effort: nodes counts decision points and dead ends explored."""

    nodes: int
    millis: int

    def to_obj(self) -> dict:
        return {"nodes": self.nodes, "millis": self.millis}


@dataclass(frozen=True)
class SolveResult:
    verdict: str  # feasible | infeasible | budget_exhausted
    witness: Optional[Schedule]
    stats: SolveStats

    @property
    def feasible(self) -> bool:
        return self.verdict == FEASIBLE


def _require_valid(inst: Instance) -> None:
    bad = validate_instance(inst)
    if bad:
        raise ValueError("invalid instance: " + "; ".join(str(v) for v in bad))


def _arrays(inst: Instance):
    n = len(inst.tasks)
    release = np.array([t.release for t in inst.tasks], dtype=np.int64)
    deadline = np.array([t.deadline for t in inst.tasks], dtype=np.int64)
    length = np.array([t.length for t in inst.tasks], dtype=np.int64)
    # id rank decides ties so the witness is independent of input order
    rank = np.empty(n, dtype=np.int64)
    for r, j in enumerate(sorted(range(n), key=lambda j: inst.tasks[j].id)):
        rank[j] = r
    return release, deadline, length, rank


def _orders(release, deadline, length, rank):
    n = len(release)
    # candidate order: earliest deadline, then longer task, then id rank
    sidx = np.array(
        sorted(range(n), key=lambda j: (deadline[j], -length[j], rank[j])),
        dtype=np.int64,
    )
    ridx = np.array(sorted(range(n), key=lambda j: (release[j], rank[j])), dtype=np.int64)
    return sidx, ridx


def _shave_windows(release, deadline, length, rank, max_rounds: int = 12) -> bool:
    """Tighten windows in place by probing the preemptive relaxation.

    If the relaxation is infeasible once task j is confined to start by time
    s, no feasible schedule starts j by s, so the release can be raised past
    s; symmetrically for confining the start to at least s and lowering the
    deadline.  Both probes are monotone, so binary search finds the tight
    bound.  Conclusions drawn from already tightened windows remain valid,
    hence the pass iterates to a fixpoint.  Returns False when some task has
    no admissible start at all, proving the instance infeasible outright.
    """
    n = len(release)
    heap_d = np.zeros(n + 1, dtype=np.int64)
    heap_r = np.zeros(n + 1, dtype=np.int64)

    def release_order():
        return np.array(sorted(range(n), key=lambda j: (release[j], rank[j])), dtype=np.int64)

    ridx = release_order()
    for _ in range(max_rounds):
        changed = False
        for j in range(n):
            lo = int(release[j])
            hi = int(deadline[j]) - int(length[j])

            def start_le(s):
                # keep j's window but cap its completion at s + length
                return bool(
                    _kernels.edf_probe(
                        release, deadline, length, ridx, heap_d, heap_r,
                        np.int64(j), release[j], np.int64(s + int(length[j])),
                    )
                )

            def start_ge(s):
                return bool(
                    _kernels.edf_probe(
                        release, deadline, length, ridx, heap_d, heap_r,
                        np.int64(j), np.int64(s), deadline[j],
                    )
                )

            if not start_le(hi):
                return False
            if not start_le(lo):
                a, b = lo, hi  # start_le(a) fails, start_le(b) holds
                while b - a > 1:
                    mid = (a + b) // 2
                    if start_le(mid):
                        b = mid
                    else:
                        a = mid
                release[j] = b
                ridx = release_order()
                changed = True
                lo = b
            if not start_ge(hi):
                a, b = lo, hi  # start_ge(a) holds, start_ge(b) fails
                while b - a > 1:
                    mid = (a + b) // 2
                    if start_ge(mid):
                        a = mid
                    else:
                        b = mid
                deadline[j] = a + int(length[j])
                changed = True
        if not changed:
            break
    return True


def solve_decision(
    inst: Instance,
    *,
    max_nodes: Optional[int] = None,
    timeout_ms: Optional[int] = None,
) -> SolveResult:
    """Decide feasibility; a witness schedule is returned iff feasible.

    The search is deterministic, so repeated runs return an identical
    witness.  Budget exhaustion (node or wall-clock limit) is reported as its
    own verdict, never as infeasible.
    """
    _require_valid(inst)
    begin = time.perf_counter()
    n = len(inst.tasks)
    if n == 0:
        return SolveResult(FEASIBLE, Schedule({}), SolveStats(0, 0))

    release, deadline, length, rank = _arrays(inst)
    if not _shave_windows(release, deadline, length, rank):
        stats = SolveStats(0, int((time.perf_counter() - begin) * 1000))
        return SolveResult(INFEASIBLE, None, stats)
    sidx, ridx = _orders(release, deadline, length, rank)
    scheduled = np.zeros(n, dtype=np.uint8)
    starts = np.zeros(n, dtype=np.int64)
    lv_move = np.zeros(2 * n + 4, dtype=np.int64)
    lv_t = np.zeros(2 * n + 4, dtype=np.int64)
    heap_d = np.zeros(n + 1, dtype=np.int64)
    heap_r = np.zeros(n + 1, dtype=np.int64)
    seen = np.zeros(n + 1, dtype=np.int64)
    state = np.zeros(_kernels.STATE_LEN, dtype=np.int64)
    state[_kernels.S_TIME] = int(release.min())

    cap = max_nodes if max_nodes is not None else _kernels.BIG
    deadline_at = begin + timeout_ms / 1000.0 if timeout_ms is not None else None
    status = _kernels.PAUSED
    while True:
        node_cap = min(cap, int(state[_kernels.S_NODES]) + _SLICE)
        status = _kernels.search_step(
            release, deadline, length, sidx, ridx,
            scheduled, starts, lv_move, lv_t, state, heap_d, heap_r, seen,
            np.int64(node_cap),
        )
        if status != _kernels.PAUSED:
            break
        if int(state[_kernels.S_NODES]) >= cap:
            break
        if deadline_at is not None and time.perf_counter() > deadline_at:
            break

    stats = SolveStats(
        nodes=int(state[_kernels.S_NODES]),
        millis=int((time.perf_counter() - begin) * 1000),
    )
    if status == _kernels.FEASIBLE:
        witness = Schedule({inst.tasks[j].id: int(starts[j]) for j in range(n)})
        return SolveResult(FEASIBLE, witness, stats)
    if status == _kernels.INFEASIBLE:
        return SolveResult(INFEASIBLE, None, stats)
    return SolveResult(BUDGET_EXHAUSTED, None, stats)


def preemptive_edf_feasible(inst: Instance) -> bool:
    """Feasibility of the preemptive relaxation.

    False implies the non-preemptive instance is infeasible; True is
    inconclusive (the relaxation has a gap).
    """
    _require_valid(inst)
    n = len(inst.tasks)
    if n == 0:
        return True
    release, deadline, length, rank = _arrays(inst)
    _sidx, ridx = _orders(release, deadline, length, rank)
    heap_d = np.zeros(n + 1, dtype=np.int64)
    heap_r = np.zeros(n + 1, dtype=np.int64)
    return bool(_kernels.edf_full(release, deadline, length, ridx, heap_d, heap_r))


def edd_unit_schedule(inst: Instance) -> SolveResult:
    """Greedy earliest-due-date for instances where every length is 1.

    At each integer time the released task with the smallest deadline runs
    (ties by id); this greedy rule is exact for unit lengths.
    """
    _require_valid(inst)
    if any(t.length != 1 for t in inst.tasks):
        raise ValueError("edd_unit_schedule requires every task length to be 1")
    begin = time.perf_counter()
    pending = sorted(inst.tasks, key=lambda t: (t.release, t.id))
    starts: dict[str, int] = {}
    ready = []
    t = pending[0].release if pending else 0
    i = 0
    steps = 0
    feasible = True
    while i < len(pending) or ready:
        while i < len(pending) and pending[i].release <= t:
            ready.append(pending[i])
            i += 1
        if not ready:
            t = pending[i].release
            continue
        ready.sort(key=lambda x: (x.deadline, x.id))
        job = ready.pop(0)
        steps += 1
        if t + 1 > job.deadline:
            feasible = False
            break
        starts[job.id] = t
        t += 1
    stats = SolveStats(steps, int((time.perf_counter() - begin) * 1000))
    if feasible:
        return SolveResult(FEASIBLE, Schedule(starts), stats)
    return SolveResult(INFEASIBLE, None, stats)


def exhaustive_oracle(
    inst: Instance,
    horizon_cap: int = 256,
    *,
    max_tasks: int = 10,
    max_choices: int = 10_000_000,
) -> str:
    """Enumerate every integer start assignment inside the windows.

    Exact by construction and independent of the search in solve_decision:
    tasks are tried in input order and occupancy is tracked with a bitmask.
    Partial assignments that already conflict are not extended, which skips
    only provably infeasible completions.  Guards refuse oversized requests
    rather than answer wrongly.
    """
    _require_valid(inst)
    tasks = inst.tasks
    if len(tasks) == 0:
        return FEASIBLE
    if len(tasks) > max_tasks:
        raise OracleGuardError(f"{len(tasks)} tasks exceed the {max_tasks}-task guard")
    lo = min(t.release for t in tasks)
    hi = max(t.deadline for t in tasks)
    if hi - lo > horizon_cap:
        raise OracleGuardError(f"horizon {hi - lo} exceeds cap {horizon_cap}")
    work = 1
    for t in tasks:
        work *= t.deadline - t.length - t.release + 1
        if work > max_choices:
            raise OracleGuardError(f"assignment count exceeds {max_choices}")

    masks = [(1 << t.length) - 1 for t in tasks]

    def place(k: int, occupied: int) -> bool:
        if k == len(tasks):
            return True
        t = tasks[k]
        for s in range(t.release, t.deadline - t.length + 1):
            piece = masks[k] << (s - lo)
            if occupied & piece == 0 and place(k + 1, occupied | piece):
                return True
        return False

    return FEASIBLE if place(0, 0) else INFEASIBLE
