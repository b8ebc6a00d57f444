"""From CNF formulas to pending-pair scheduling instances.

The construction concatenates *blocks*: local gadgets whose windows and
deadlines are relative to an allocated slot of exactly the blocks' total task
length, with every relative deadline in [1, L+1].  Separators (pinned tasks
one unit after the preceding block's slot) split the sequence into runs so a
one-unit delay introduced inside a run propagates to its end but no further.

Per variable there are two literal gadgets: forcing the gadget's pending task
to meet its early deadline costs one unit of delay in that literal's run of
clause gadgets.  A clause gadget allows both of its pending tasks to go early
only when its run is undelayed and the literal satisfies the clause.  Dummy
gadgets at both ends anchor a counting argument: a schedule exists iff some
assignment satisfies every clause.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional

from .auxiliary import (
    AuxInstance,
    PendingDeadlines,
    long_id,
    short_id,
    validate_aux,
    verify_aux_schedule,
)
from .core import (
    FormatError,
    Schedule,
    Task,
    Violation,
    _as_int,
    _load,
    task_from_obj,
    task_to_obj,
)

BLOCK_KINDS = ("vplus", "vminus", "cactive", "cinactive", "dummy_long", "dummy_short")


@dataclass(frozen=True)
class CnfFormula:
    """Clauses over variables 1..num_vars; literals are signed variable codes."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __init__(self, num_vars: int, clauses: Iterable[Iterable[int]]):
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in clauses))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


def validate_cnf(cnf: CnfFormula) -> list[str]:
    out = []
    if cnf.num_vars < 0:
        out.append(f"variable count {cnf.num_vars} is negative")
    for j, clause in enumerate(cnf.clauses, start=1):
        if not clause:
            out.append(f"clause {j} is empty")
        for lit in clause:
            if lit == 0 or abs(lit) > cnf.num_vars:
                out.append(f"clause {j}: literal {lit} out of range")
    return out


def satisfies(cnf: CnfFormula, assignment: dict[int, bool]) -> bool:
    return all(
        any(assignment[abs(lit)] == (lit > 0) for lit in clause) for clause in cnf.clauses
    )


@dataclass(frozen=True)
class Block:
    """A local gadget: auxiliary tasks plus up to one pending task per length.

    Windows are relative to the block's slot; ``length`` is the total length
    of all tasks the block defines.
    """

    kind: str
    aux_jobs: tuple[Task, ...]
    long_pending: Optional[PendingDeadlines]
    short_pending: Optional[PendingDeadlines]
    length: int


def validate_block(block: Block) -> list[Violation]:
    out: list[Violation] = []
    deadlines = [(t.id, t.deadline) for t in block.aux_jobs]
    if block.long_pending:
        deadlines += [("long_pending.early", block.long_pending.early)]
        deadlines += [("long_pending.late", block.long_pending.late)]
    if block.short_pending:
        deadlines += [("short_pending.early", block.short_pending.early)]
        deadlines += [("short_pending.late", block.short_pending.late)]
    for name, d in deadlines:
        if not 1 <= d <= block.length + 1:
            out.append(
                Violation(
                    "deadline-outside-slot",
                    (name,),
                    f"relative deadline {d} outside [1,{block.length + 1}]",
                )
            )
    for t in block.aux_jobs:
        if t.release < 0:
            out.append(Violation("negative-release", (t.id,), f"release {t.release} < 0"))
        if t.release + t.length > t.deadline:
            out.append(
                Violation("window-too-small", (t.id,), f"window [{t.release},{t.deadline}]")
            )
    return out


def make_block(kind: str, p: int, q: int) -> Block:
    """Build one of the six gadget blocks for lengths p > q > 1.

    Unit lengths are rejected: the separator mechanism relies on a one-unit
    gap that no task can fill.
    """
    if q <= 1 or p <= q:
        raise ValueError(f"gadgets require p > q > 1, got p={p}, q={q}")
    if kind == "vplus":
        # positive literal: early completion of the long pending task forces
        # the last task one unit past the slot
        block = Block(
            kind,
            (Task("aux0", 1, 2 * q, q), Task("aux1", 0, p + 2 * q + 1, q)),
            PendingDeadlines(p + q + 1, p + 2 * q),
            None,
            p + 2 * q,
        )
    elif kind == "vminus":
        block = Block(
            kind,
            (Task("aux0", q + 1, p + q, q), Task("aux1", 0, p + 2 * q + 1, p)),
            None,
            PendingDeadlines(q, p + 2 * q),
            p + 2 * q,
        )
    elif kind == "cactive":
        block = Block(
            kind,
            (),
            PendingDeadlines(p + q, p + q + 1),
            PendingDeadlines(p + q, p + q + 1),
            p + q,
        )
    elif kind == "cinactive":
        block = Block(
            kind,
            (),
            PendingDeadlines(p + q - 1, p + q + 1),
            PendingDeadlines(p + q - 1, p + q + 1),
            p + q,
        )
    elif kind == "dummy_long":
        # its pending task can never meet the early deadline; anchors the count
        block = Block(kind, (), PendingDeadlines(p - 1, p), None, p)
    elif kind == "dummy_short":
        block = Block(kind, (), None, PendingDeadlines(q - 1, q), q)
    else:
        raise ValueError(f"unknown block kind {kind!r}")
    bad = validate_block(block)
    if bad:
        raise AssertionError(
            f"internal error: {kind} gadget invalid: " + "; ".join(str(v) for v in bad)
        )
    return block


@dataclass(frozen=True)
class FilledInstance:
    """A block sequence with separator positions; p and q fix the task lengths."""

    p: int
    q: int
    blocks: tuple[Block, ...]
    sep_after: frozenset[int]  # 1-based indices of blocks followed by a separator
    source_cnf: Optional[CnfFormula] = None

    def __init__(self, p, q, blocks, sep_after, source_cnf=None):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "blocks", tuple(blocks))
        object.__setattr__(self, "sep_after", frozenset(sep_after))
        object.__setattr__(self, "source_cnf", source_cnf)

    def offsets(self) -> list[int]:
        """Slot start per block: previous slot end, plus q+1 after a separator."""
        out = []
        ofs = 0
        for i, block in enumerate(self.blocks, start=1):
            out.append(ofs)
            ofs += block.length
            if i in self.sep_after:
                ofs += self.q + 1
        return out

    @property
    def pairs(self) -> int:
        return sum(1 for b in self.blocks if b.long_pending is not None)

    def long_block_indices(self) -> list[int]:
        """1-based block index defining the i-th long pending task."""
        return [i for i, b in enumerate(self.blocks, start=1) if b.long_pending]

    def short_block_indices(self) -> list[int]:
        return [i for i, b in enumerate(self.blocks, start=1) if b.short_pending]


def validate_filled(fi: FilledInstance) -> list[Violation]:
    out: list[Violation] = []
    for i, block in enumerate(fi.blocks, start=1):
        for v in validate_block(block):
            out.append(Violation(v.code, v.tasks, f"block {i}: {v.detail}"))
    longs = fi.long_block_indices()
    shorts = fi.short_block_indices()
    if len(longs) != len(shorts):
        out.append(
            Violation("pair-count", (), f"{len(longs)} long vs {len(shorts)} short pending tasks")
        )
        return out
    for i, (bl, bs) in enumerate(zip(longs, shorts), start=1):
        if bl >= bs:
            out.append(
                Violation(
                    "pair-order",
                    (),
                    f"pair {i}: long defined in block {bl}, not before short in block {bs}",
                )
            )
    for i in fi.sep_after:
        if not 1 <= i <= len(fi.blocks):
            out.append(Violation("bad-separator", (), f"separator after missing block {i}"))
    return out


def aux_task_id(block_index: int, local_id: str) -> str:
    return f"b{block_index}_{local_id}"


def sep_task_id(block_index: int) -> str:
    return f"blocksep_{block_index}"


def flatten_filled(fi: FilledInstance) -> AuxInstance:
    """Shift every block by its offset and collect the pending sequences.

    The result is asserted valid: relative deadlines in [1, L+1] keep the
    per-length chains nondecreasing, and defining each long task before the
    short task of the same pair yields the cross condition.  A failure here
    is a construction bug, not an input error.
    """
    bad = validate_filled(fi)
    if bad:
        raise ValueError("invalid block sequence: " + "; ".join(str(v) for v in bad))
    offsets = fi.offsets()
    ordinary: list[Task] = []
    long_pending: list[PendingDeadlines] = []
    short_pending: list[PendingDeadlines] = []
    for i, block in enumerate(fi.blocks, start=1):
        ofs = offsets[i - 1]
        for t in block.aux_jobs:
            ordinary.append(Task(aux_task_id(i, t.id), t.release + ofs, t.deadline + ofs, t.length))
        if block.long_pending:
            long_pending.append(
                PendingDeadlines(block.long_pending.early + ofs, block.long_pending.late + ofs)
            )
        if block.short_pending:
            short_pending.append(
                PendingDeadlines(block.short_pending.early + ofs, block.short_pending.late + ofs)
            )
        if i in fi.sep_after:
            end = ofs + block.length
            ordinary.append(Task(sep_task_id(i), end + 1, end + fi.q + 1, fi.q))
    aux = AuxInstance(fi.p, fi.q, ordinary, long_pending, short_pending)
    bad = validate_aux(aux)
    if bad:
        raise AssertionError(
            "internal error: flattened instance invalid: " + "; ".join(str(v) for v in bad)
        )
    return aux


# --- the formula construction -------------------------------------------------


def literal_index(lit: int) -> int:
    """Order of literals: x_1 -> 1, not-x_1 -> 2, x_2 -> 3, ..."""
    return 2 * abs(lit) - (1 if lit > 0 else 0)


def pending_labels(n: int, m: int) -> tuple[list[str], list[str]]:
    """Human-readable names of the pending tasks, in definition order.

    ``v_i`` is the per-variable pair; ``c_j_k`` is the k-th pair of clause j
    (k = 0..2n).  Long and short sequences carry the same names: pair i is
    the i-th name in either sequence.
    """
    labels = [f"c_{j}_0" for j in range(1, m + 1)]
    for i in range(1, n + 1):
        labels.append(f"v_{i}")
        labels += [f"c_{j}_{2 * i - 1}" for j in range(1, m + 1)]
        labels += [f"c_{j}_{2 * i}" for j in range(1, m + 1)]
    return labels, list(labels)


def build_block_sequence(cnf: CnfFormula, p: int = 3, q: int = 2) -> FilledInstance:
    """Lay out the gadget sequence for a formula.

    m long-dummy blocks; then for each literal x_1, not-x_1, ..., x_n,
    not-x_n one literal gadget followed by one clause gadget per clause
    (active when the literal occurs in the clause) and a separator; finally m
    short-dummy blocks.  Duplicate or contradictory literals inside a clause
    are kept as written; the layout only asks whether a literal occurs.
    """
    bad = validate_cnf(cnf)
    if bad:
        raise ValueError("invalid formula: " + "; ".join(bad))
    if q <= 1 or p <= q:
        raise ValueError(f"gadgets require p > q > 1, got p={p}, q={q}")
    n, m = cnf.num_vars, cnf.num_clauses
    blocks: list[Block] = [make_block("dummy_long", p, q) for _ in range(m)]
    sep_after: list[int] = []
    for k in range(1, 2 * n + 1):
        positive = k % 2 == 1
        var = (k + 1) // 2
        lit = var if positive else -var
        blocks.append(make_block("vplus" if positive else "vminus", p, q))
        for j in range(1, m + 1):
            active = lit in cnf.clauses[j - 1]
            blocks.append(make_block("cactive" if active else "cinactive", p, q))
        sep_after.append(len(blocks))
    blocks += [make_block("dummy_short", p, q) for _ in range(m)]
    return FilledInstance(p, q, blocks, sep_after, source_cnf=cnf)


def encode_model(cnf: CnfFormula, assignment: dict[int, bool], fi: FilledInstance) -> Schedule:
    """Turn a satisfying assignment into a schedule of the flattened instance.

    A true variable lets the positive-literal gadget finish inside its slot
    (long pending task meets only its late deadline) and delays the
    negative-literal gadget by one unit, and vice versa.  Clause gadgets run
    back to back with their run's delay; for each clause, gadgets up to the
    chosen satisfying literal run short-task-first and the rest long-first,
    which hands every pending pair one early completion.
    """
    if not satisfies(cnf, assignment):
        raise ValueError("assignment does not satisfy the formula")
    if fi.source_cnf is not None and fi.source_cnf != cnf:
        raise ValueError("block sequence was built from a different formula")
    n, m = cnf.num_vars, cnf.num_clauses
    p, q = fi.p, fi.q
    offsets = fi.offsets()
    witness: list[int] = []
    for clause in cnf.clauses:
        sat_lits = [literal_index(l) for l in clause if assignment[abs(l)] == (l > 0)]
        witness.append(min(sat_lits))

    starts: dict[str, int] = {}
    long_i = 0
    short_i = 0

    def place(i: int, local: dict[str, int]) -> None:
        ofs = offsets[i - 1]
        for tid, rel in local.items():
            starts[tid] = rel + ofs

    for i, block in enumerate(fi.blocks, start=1):
        if block.long_pending:
            long_i += 1
        if block.short_pending:
            short_i += 1
        if block.kind == "dummy_long":
            place(i, {long_id(long_i): 0})
        elif block.kind == "dummy_short":
            place(i, {short_id(short_i): 0})
        elif block.kind == "vplus":
            var = sum(1 for b in fi.blocks[:i] if b.kind == "vplus")
            if assignment[var]:
                place(i, {aux_task_id(i, "aux1"): 0, aux_task_id(i, "aux0"): q, long_id(long_i): 2 * q})
            else:
                place(i, {aux_task_id(i, "aux0"): 1, long_id(long_i): q + 1, aux_task_id(i, "aux1"): p + q + 1})
        elif block.kind == "vminus":
            var = sum(1 for b in fi.blocks[:i] if b.kind == "vminus")
            if assignment[var]:
                place(i, {short_id(short_i): 0, aux_task_id(i, "aux0"): q + 1, aux_task_id(i, "aux1"): 2 * q + 1})
            else:
                place(i, {aux_task_id(i, "aux1"): 0, aux_task_id(i, "aux0"): p, short_id(short_i): p + q})
        else:
            # clause gadget: find its literal row and clause number
            row = len([b for b in fi.blocks[:i] if b.kind in ("vplus", "vminus")])
            j = len([b for b in fi.blocks[:i] if b.kind in ("cactive", "cinactive")]) % m
            j = m if j == 0 else j
            var = (row + 1) // 2
            row_true = assignment[var] == (row % 2 == 1)
            delay = 0 if row_true else 1
            if row <= witness[j - 1]:
                place(i, {short_id(short_i): delay, long_id(long_i): delay + q})
            else:
                place(i, {long_id(long_i): delay, short_id(short_i): delay + p})
        if i in fi.sep_after:
            end = offsets[i - 1] + block.length
            starts[sep_task_id(i)] = end + 1

    aux = flatten_filled(fi)
    bad = verify_aux_schedule(aux, Schedule(starts))
    if bad:
        raise AssertionError(
            "internal error: encoded schedule invalid: " + "; ".join(str(v) for v in bad)
        )
    return Schedule(starts)


def decode_schedule(fi: FilledInstance, sch: Schedule) -> dict[int, bool]:
    """Read an assignment off a feasible schedule of the flattened instance.

    Variable i is true when its long pending task overruns its early
    deadline, false when the short one does; if both meet their early
    deadlines the variable is set to true (fixed, so decoding is
    deterministic).  The result is re-checked against the source formula and
    a failure aborts loudly, since the construction guarantees it.
    """
    cnf = fi.source_cnf
    if cnf is None:
        raise ValueError("decoding needs the block sequence built from a formula")
    aux = flatten_filled(fi)
    bad = verify_aux_schedule(aux, sch)
    if bad:
        raise ValueError("schedule rejected: " + "; ".join(str(v) for v in bad))
    labels_long, labels_short = pending_labels(cnf.num_vars, cnf.num_clauses)
    assignment: dict[int, bool] = {}
    for var in range(1, cnf.num_vars + 1):
        pair = labels_long.index(f"v_{var}") + 1
        long_done = sch.starts[long_id(pair)] + fi.p
        short_done = sch.starts[short_id(pair)] + fi.q
        long_early = long_done <= aux.long_pending[pair - 1].early
        short_early = short_done <= aux.short_pending[pair - 1].early
        if not long_early:
            assignment[var] = True
        elif not short_early:
            assignment[var] = False
        else:
            assignment[var] = True
    if not satisfies(cnf, assignment):
        raise AssertionError("internal error: decoded assignment fails the formula")
    return assignment


def check_offset_property(fi: FilledInstance, sch: Schedule) -> list[Violation]:
    """Diagnostic: tasks defined in a block may not start before its offset.

    Every feasible schedule satisfies this, so a violation implies the
    schedule is infeasible too; the check itself does not require
    feasibility and can be pointed at arbitrary start assignments.
    """
    offsets = fi.offsets()
    out: list[Violation] = []
    long_i = 0
    short_i = 0
    for i, block in enumerate(fi.blocks, start=1):
        ofs = offsets[i - 1]
        members = [aux_task_id(i, t.id) for t in block.aux_jobs]
        if block.long_pending:
            long_i += 1
            members.append(long_id(long_i))
        if block.short_pending:
            short_i += 1
            members.append(short_id(short_i))
        for tid in members:
            if tid not in sch.starts:
                out.append(Violation("missing-start", (tid,), f"block {i}: no start assigned"))
            elif sch.starts[tid] < ofs:
                out.append(
                    Violation(
                        "starts-before-block",
                        (tid,),
                        f"block {i}: start {sch.starts[tid]} < offset {ofs}",
                    )
                )
    return out


# --- JSON layout report --------------------------------------------------------


def _pending_obj(pd: Optional[PendingDeadlines]) -> Optional[dict]:
    return None if pd is None else {"early": pd.early, "late": pd.late}


def layout_to_json(fi: FilledInstance) -> str:
    """Serialize the block sequence, offsets, separators and pending names."""
    offsets = fi.offsets()
    doc: dict = {
        "p": fi.p,
        "q": fi.q,
        "blocks": [
            {
                "kind": b.kind,
                "length": b.length,
                "offset": offsets[i - 1],
                "aux_jobs": [task_to_obj(t) for t in b.aux_jobs],
                "long_pending": _pending_obj(b.long_pending),
                "short_pending": _pending_obj(b.short_pending),
            }
            for i, b in enumerate(fi.blocks, start=1)
        ],
        "separators_after": sorted(fi.sep_after),
    }
    if fi.source_cnf is not None:
        cnf = fi.source_cnf
        doc["cnf"] = {"num_vars": cnf.num_vars, "clauses": [list(c) for c in cnf.clauses]}
        labels_long, labels_short = pending_labels(cnf.num_vars, cnf.num_clauses)
        doc["pending_labels"] = {"long": labels_long, "short": labels_short}
    return json.dumps(doc, indent=2) + "\n"


def layout_from_json(text: str) -> FilledInstance:
    doc = _load(text)
    if not isinstance(doc, dict):
        raise FormatError("top level: expected an object")
    for key in ("p", "q", "blocks", "separators_after"):
        if key not in doc:
            raise FormatError(f"top level: missing field {key!r}")
    if not isinstance(doc["blocks"], list):
        raise FormatError("blocks: expected a list")
    blocks = []
    for i, b in enumerate(doc["blocks"], start=1):
        where = f"blocks[{i - 1}]"
        if not isinstance(b, dict):
            raise FormatError(f"{where}: expected an object")
        for key in ("kind", "length", "aux_jobs", "long_pending", "short_pending"):
            if key not in b:
                raise FormatError(f"{where}: missing field {key!r}")
        if b["kind"] not in BLOCK_KINDS:
            raise FormatError(f"{where}.kind: unknown kind {b['kind']!r}")

        def pend(obj, w):
            if obj is None:
                return None
            if not isinstance(obj, dict):
                raise FormatError(f"{w}: expected an object or null")
            return PendingDeadlines(_as_int(obj.get("early"), f"{w}.early"), _as_int(obj.get("late"), f"{w}.late"))

        blocks.append(
            Block(
                kind=b["kind"],
                aux_jobs=tuple(
                    task_from_obj(o, f"{where}.aux_jobs[{k}]") for k, o in enumerate(b["aux_jobs"])
                ),
                long_pending=pend(b["long_pending"], f"{where}.long_pending"),
                short_pending=pend(b["short_pending"], f"{where}.short_pending"),
                length=_as_int(b["length"], f"{where}.length"),
            )
        )
    sep_after = doc["separators_after"]
    if not isinstance(sep_after, list):
        raise FormatError("separators_after: expected a list")
    cnf = None
    if "cnf" in doc and doc["cnf"] is not None:
        c = doc["cnf"]
        if not isinstance(c, dict) or "num_vars" not in c or "clauses" not in c:
            raise FormatError("cnf: expected an object with 'num_vars' and 'clauses'")
        cnf = CnfFormula(
            _as_int(c["num_vars"], "cnf.num_vars"),
            [[_as_int(l, "cnf literal") for l in cl] for cl in c["clauses"]],
        )
    fi = FilledInstance(
        _as_int(doc["p"], "p"),
        _as_int(doc["q"], "q"),
        blocks,
        [_as_int(i, "separators_after[]") for i in sep_after],
        source_cnf=cnf,
    )
    bad = validate_filled(fi)
    if bad:
        raise FormatError("invalid block sequence: " + "; ".join(str(v) for v in bad))
    return fi
