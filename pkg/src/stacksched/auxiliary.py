"""Scheduling with paired two-deadline pending tasks.

On top of ordinary tasks, an instance carries two aligned sequences of
"pending" tasks, all released at time 0: one sequence of long tasks (length
p) and one of short tasks (length q < p), each pending task owning an early
and a late deadline.  A schedule is accepted when, per index pair, at least
one of the two pending tasks finishes by its early deadline; every task must
meet its late deadline regardless.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional

from .core import (
    FormatError,
    Instance,
    Schedule,
    Task,
    Violation,
    _as_int,
    _load,
    task_from_obj,
    task_to_obj,
    validate_instance,
    verify_schedule,
)
from .solve import OracleGuardError, SolveStats, solve_decision


def long_id(i: int) -> str:
    """Id of the i-th (1-based) long pending task in the expanded instance."""
    return f"pending_p_{i}"


def short_id(i: int) -> str:
    return f"pending_q_{i}"


@dataclass(frozen=True)
class PendingDeadlines:
    """Early and late deadline of one pending task; early <= late."""

    early: int
    late: int


@dataclass(frozen=True)
class AuxInstance:
    p: int
    q: int
    ordinary: tuple[Task, ...]
    long_pending: tuple[PendingDeadlines, ...]
    short_pending: tuple[PendingDeadlines, ...]

    def __init__(
        self,
        p: int,
        q: int,
        ordinary: Iterable[Task] = (),
        long_pending: Iterable[PendingDeadlines] = (),
        short_pending: Iterable[PendingDeadlines] = (),
    ):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "ordinary", tuple(ordinary))
        object.__setattr__(self, "long_pending", tuple(long_pending))
        object.__setattr__(self, "short_pending", tuple(short_pending))

    @property
    def pairs(self) -> int:
        """Number of pending pairs (the sequences have equal length)."""
        return len(self.long_pending)


def validate_aux(aux: AuxInstance) -> list[Violation]:
    """Check the structural conditions; an empty list means valid.

    Per length the deadline pairs must interleave into a nondecreasing chain
    early[1] <= late[1] <= early[2] <= ..., the i-th long late deadline may
    not exceed the i-th short early deadline, every late deadline must admit
    its task from release 0, and ordinary tasks need nonnegative releases and
    lengths in {p, q}.
    """
    out: list[Violation] = []
    if not aux.q >= 1:
        out.append(Violation("bad-lengths", (), f"q = {aux.q} must be >= 1"))
    if not aux.p > aux.q:
        out.append(Violation("bad-lengths", (), f"p = {aux.p} must exceed q = {aux.q}"))
    if len(aux.long_pending) != len(aux.short_pending):
        out.append(
            Violation(
                "pair-count",
                (),
                f"{len(aux.long_pending)} long vs {len(aux.short_pending)} short pending tasks",
            )
        )
        return out

    def chain(seq: tuple[PendingDeadlines, ...], name: str, length: int) -> None:
        prev = None
        for i, pd in enumerate(seq, start=1):
            if pd.early > pd.late:
                out.append(
                    Violation("early-after-late", (f"{name}[{i}]",), f"{pd.early} > {pd.late}")
                )
            if prev is not None and pd.early < prev:
                out.append(
                    Violation(
                        "chain-order",
                        (f"{name}[{i}]",),
                        f"early {pd.early} < preceding late {prev}",
                    )
                )
            if pd.late < length:
                out.append(
                    Violation(
                        "window-too-small",
                        (f"{name}[{i}]",),
                        f"late deadline {pd.late} < length {length}",
                    )
                )
            prev = pd.late

    chain(aux.long_pending, "long", aux.p)
    chain(aux.short_pending, "short", aux.q)
    for i, (lp, sp) in enumerate(zip(aux.long_pending, aux.short_pending), start=1):
        if lp.late > sp.early:
            out.append(
                Violation(
                    "cross-urgency",
                    (f"long[{i}]", f"short[{i}]"),
                    f"long late {lp.late} > short early {sp.early}",
                )
            )

    reserved = {long_id(i) for i in range(1, aux.pairs + 1)}
    reserved |= {short_id(i) for i in range(1, aux.pairs + 1)}
    for t in aux.ordinary:
        if t.release < 0:
            out.append(Violation("negative-release", (t.id,), f"release {t.release} < 0"))
        if t.length not in (aux.p, aux.q):
            out.append(
                Violation("bad-lengths", (t.id,), f"length {t.length} not in {{{aux.p},{aux.q}}}")
            )
        if t.id in reserved:
            out.append(Violation("reserved-id", (t.id,), "collides with a pending task id"))
    out.extend(validate_instance(Instance(aux.ordinary)))
    return out


def _require_valid(aux: AuxInstance) -> None:
    bad = validate_aux(aux)
    if bad:
        raise ValueError("invalid aux instance: " + "; ".join(str(v) for v in bad))


def expand_aux(aux: AuxInstance) -> Instance:
    """Materialize pending tasks with windows [0, late deadline]."""
    _require_valid(aux)
    tasks = list(aux.ordinary)
    tasks += [Task(long_id(i), 0, pd.late, aux.p) for i, pd in enumerate(aux.long_pending, 1)]
    tasks += [Task(short_id(i), 0, pd.late, aux.q) for i, pd in enumerate(aux.short_pending, 1)]
    return Instance(tasks)


def verify_aux_schedule(aux: AuxInstance, sch: Schedule) -> list[Violation]:
    """Plain feasibility on the expansion plus the per-pair early condition."""
    _require_valid(aux)
    out = verify_schedule(expand_aux(aux), sch)
    for i in range(1, aux.pairs + 1):
        lid, sid = long_id(i), short_id(i)
        if lid not in sch.starts or sid not in sch.starts:
            continue  # already reported as missing-start
        long_early = sch.starts[lid] + aux.p <= aux.long_pending[i - 1].early
        short_early = sch.starts[sid] + aux.q <= aux.short_pending[i - 1].early
        if not (long_early or short_early):
            out.append(
                Violation(
                    "pair-early-miss",
                    (lid, sid),
                    f"pair {i}: neither task finishes by its early deadline",
                )
            )
    return out


@dataclass(frozen=True)
class AuxOracleResult:
    verdict: str  # feasible | infeasible
    witness: Optional[Schedule]
    stats: SolveStats

    @property
    def feasible(self) -> bool:
        return self.verdict == "feasible"


def aux_oracle(aux: AuxInstance, *, max_pairs: int = 8) -> AuxOracleResult:
    """Exact feasibility by enumerating which task of each pair goes early.

    For each of the 2^pairs choices, the chosen task's deadline is tightened
    to its early deadline and the plain expansion is solved; any accepted
    schedule meets the tightened deadline, hence the pair condition.  The
    enumeration is exhaustive, so the combined verdict is exact.  Exponential
    in the pair count only, and independent of any instance rewriting whose
    correctness is checked against it.
    """
    _require_valid(aux)
    n = aux.pairs
    if n > max_pairs:
        raise OracleGuardError(f"{n} pending pairs exceed the {max_pairs}-pair guard")
    nodes = 0
    millis = 0
    for choice in range(1 << n):
        tasks = list(aux.ordinary)
        ok = True
        for i in range(1, n + 1):
            lp = aux.long_pending[i - 1]
            sp = aux.short_pending[i - 1]
            if (choice >> (i - 1)) & 1 == 0:
                lp_deadline, sp_deadline = lp.early, sp.late
            else:
                lp_deadline, sp_deadline = lp.late, sp.early
            if lp_deadline < aux.p or sp_deadline < aux.q:
                ok = False  # the forced task cannot fit its tightened window
                break
            tasks.append(Task(long_id(i), 0, lp_deadline, aux.p))
            tasks.append(Task(short_id(i), 0, sp_deadline, aux.q))
        if not ok:
            continue
        res = solve_decision(Instance(tasks))
        nodes += res.stats.nodes
        millis += res.stats.millis
        if res.feasible:
            witness = res.witness
            bad = verify_aux_schedule(aux, witness)
            if bad:
                raise AssertionError(
                    "internal error: tightened witness fails the pair check: "
                    + "; ".join(str(v) for v in bad)
                )
            return AuxOracleResult("feasible", witness, SolveStats(nodes, millis))
    return AuxOracleResult("infeasible", None, SolveStats(nodes, millis))


# --- JSON --------------------------------------------------------------------
#
# {"p": int, "q": int, "ordinary": [task...],
#  "long_pending": [{"early": int, "late": int}...], "short_pending": [...]}


def _pending_from_obj(obj: object, where: str) -> PendingDeadlines:
    if not isinstance(obj, dict) or "early" not in obj or "late" not in obj:
        raise FormatError(f"{where}: expected an object with 'early' and 'late'")
    return PendingDeadlines(
        _as_int(obj["early"], f"{where}.early"), _as_int(obj["late"], f"{where}.late")
    )


def aux_from_json(text: str) -> AuxInstance:
    doc = _load(text)
    if not isinstance(doc, dict):
        raise FormatError("top level: expected an object")
    for key in ("p", "q", "ordinary", "long_pending", "short_pending"):
        if key not in doc:
            raise FormatError(f"top level: missing field {key!r}")
    for key in ("ordinary", "long_pending", "short_pending"):
        if not isinstance(doc[key], list):
            raise FormatError(f"{key}: expected a list")
    aux = AuxInstance(
        p=_as_int(doc["p"], "p"),
        q=_as_int(doc["q"], "q"),
        ordinary=[task_from_obj(o, f"ordinary[{i}]") for i, o in enumerate(doc["ordinary"])],
        long_pending=[
            _pending_from_obj(o, f"long_pending[{i}]") for i, o in enumerate(doc["long_pending"])
        ],
        short_pending=[
            _pending_from_obj(o, f"short_pending[{i}]") for i, o in enumerate(doc["short_pending"])
        ],
    )
    bad = validate_aux(aux)
    if bad:
        raise FormatError("invalid aux instance: " + "; ".join(str(v) for v in bad))
    return aux


def aux_to_json(aux: AuxInstance) -> str:
    doc = {
        "p": aux.p,
        "q": aux.q,
        "ordinary": [task_to_obj(t) for t in aux.ordinary],
        "long_pending": [{"early": d.early, "late": d.late} for d in aux.long_pending],
        "short_pending": [{"early": d.early, "late": d.late} for d in aux.short_pending],
    }
    return json.dumps(doc, indent=2) + "\n"
