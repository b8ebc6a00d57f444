"""Rewriting pending-pair instances into plain scheduling instances.

Each pending task is replaced by two ordinary tasks sharing its length: an
*inner* task deadlined at the early deadline and an *outer* task deadlined at
the late deadline.  Their windows extend to before time 0, where pinned
*separator* tasks partition the negative timeline into bins of length p + q,
one bin per pair.  Exactly one of inner/outer per pending task can run after
time 0 (representing the pending task); the other is parked in its bin.  The
instance is feasible iff the pending-pair instance is, and the two mapping
directions are constructive: ``embed_aux_schedule`` builds a schedule from a
pair-feasible one, while ``normalize_bins`` + ``extract_aux_schedule``
recover a pair-feasible schedule from any feasible schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

from .auxiliary import AuxInstance, long_id, short_id, validate_aux, verify_aux_schedule
from .core import Instance, Schedule, Task, verify_schedule


def inner_id(cls: str, i: int) -> str:
    return f"inner_{cls}_{i}"


def outer_id(cls: str, i: int) -> str:
    return f"outer_{cls}_{i}"


def sep_id(i: int) -> str:
    return f"sep_{i}"


@dataclass(frozen=True)
class StackedInstance:
    """The rewritten instance plus the geometry needed to map schedules back."""

    aux: AuxInstance
    instance: Instance

    @property
    def pairs(self) -> int:
        return self.aux.pairs

    def anchor(self, i: int) -> int:
        """Start of separator i; also the right edge of bin i."""
        p, q = self.aux.p, self.aux.q
        return -(p + 2 * q) * i + (p + q)

    def bin_bounds(self, i: int) -> tuple[int, int]:
        """Half-open-free [start, end] interval of bin i, length p + q."""
        end = self.anchor(i)
        return end - (self.aux.p + self.aux.q), end


def reduce_aux_to_instance(aux: AuxInstance) -> StackedInstance:
    """Build the rewritten instance: ordinary tasks + separators + task stacks.

    For pair i with anchor t_i: the separator occupies exactly [t_i, t_i+q];
    inner tasks get windows [t_i - len, early deadline] and outer tasks
    [t_i - p - q, late deadline].  Windows per length are nested across
    indices (releases strictly decrease, deadlines never decrease).
    """
    bad = validate_aux(aux)
    if bad:
        raise ValueError("invalid aux instance: " + "; ".join(str(v) for v in bad))
    p, q = aux.p, aux.q
    st = StackedInstance(aux, Instance(()))
    tasks = list(aux.ordinary)
    for i in range(1, aux.pairs + 1):
        t_i = st.anchor(i)
        lp = aux.long_pending[i - 1]
        sp = aux.short_pending[i - 1]
        tasks.append(Task(sep_id(i), t_i, t_i + q, q))
        tasks.append(Task(inner_id("p", i), t_i - p, lp.early, p))
        tasks.append(Task(outer_id("p", i), t_i - p - q, lp.late, p))
        tasks.append(Task(inner_id("q", i), t_i - q, sp.early, q))
        tasks.append(Task(outer_id("q", i), t_i - q - p, sp.late, q))
    inst = Instance(tasks)
    ids = {t.id for t in tasks}
    if len(ids) != len(tasks):
        raise ValueError("ordinary task ids collide with generated stack task ids")
    return StackedInstance(aux, inst)


def _stack_roster(st: StackedInstance) -> dict[str, tuple[str, str, int]]:
    """id -> (role, length class 'p'/'q', pair index) for all stack tasks."""
    roster = {}
    for i in range(1, st.pairs + 1):
        for cls in ("p", "q"):
            roster[inner_id(cls, i)] = ("inner", cls, i)
            roster[outer_id(cls, i)] = ("outer", cls, i)
    return roster


def embed_aux_schedule(aux: AuxInstance, aux_sch: Schedule) -> Schedule:
    """Turn a pair-feasible schedule into one for the rewritten instance.

    Ordinary tasks keep their starts.  A pending task that met its early
    deadline is represented by the inner task at the same position, otherwise
    by the outer task.  The two leftover tasks of pair i are parked in bin i;
    at least one leftover is an outer task (it has the early release needed
    for the left slot), so the bin is filled outer-first, long before short
    among equal roles.
    """
    bad = verify_aux_schedule(aux, aux_sch)
    if bad:
        raise ValueError("schedule fails the pair check: " + "; ".join(str(v) for v in bad))
    st = reduce_aux_to_instance(aux)
    p, q = aux.p, aux.q
    starts: dict[str, int] = {t.id: aux_sch.starts[t.id] for t in aux.ordinary}
    for i in range(1, st.pairs + 1):
        starts[sep_id(i)] = st.anchor(i)
        leftovers: list[tuple[int, int, str, int]] = []
        for cls, length, pid, pd in (
            ("p", p, long_id(i), aux.long_pending[i - 1]),
            ("q", q, short_id(i), aux.short_pending[i - 1]),
        ):
            s = aux_sch.starts[pid]
            if s + length <= pd.early:
                starts[inner_id(cls, i)] = s
                leftovers.append((1, 0 if cls == "p" else 1, outer_id(cls, i), length))
            else:
                starts[outer_id(cls, i)] = s
                leftovers.append((0, 0 if cls == "p" else 1, inner_id(cls, i), length))
        # sort key: outer (marker 1 above means the leftover IS the outer) first
        leftovers.sort(key=lambda e: (-e[0], e[1]))
        if leftovers[0][0] != 1:
            raise AssertionError("internal error: no outer task left over for the bin")
        lo, _hi = st.bin_bounds(i)
        starts[leftovers[0][2]] = lo
        starts[leftovers[1][2]] = lo + leftovers[0][3]
    bad = verify_schedule(st.instance, Schedule(starts))
    if bad:
        raise AssertionError(
            "internal error: embedded schedule infeasible: " + "; ".join(str(v) for v in bad)
        )
    return Schedule(starts)


def normalize_bins(st: StackedInstance, sch: Schedule) -> Schedule:
    """Exchange tasks until every bin holds its own pair in canonical form.

    Processes bins in index order.  For bin i: if no long task sits inside,
    the i-th outer long task (necessarily running after time 0) is swapped in
    at the left edge; bin occupants are pushed right while they fit and the
    overflow moves, left-justified in original order, into the slot the
    swapped task vacated.  Same for the short side.  Finally the two
    occupants are relabeled, exploiting the nesting of windows, so the left
    one is the i-th outer and the right one the i-th inner task of its
    length.  Tasks after time 0 are only touched by those label swaps and
    slot reuses, so feasibility is preserved at every step.
    """
    bad = verify_schedule(st.instance, sch)
    if bad:
        raise ValueError("schedule infeasible: " + "; ".join(str(v) for v in bad))
    p, q = st.aux.p, st.aux.q
    starts = dict(sch.starts)
    roster = _stack_roster(st)
    lengths = {tid: (p if cls == "p" else q) for tid, (_r, cls, _i) in roster.items()}

    def in_bin(i: int) -> list[str]:
        lo, hi = st.bin_bounds(i)
        found = [
            tid
            for tid in roster
            if lo <= starts[tid] and starts[tid] + lengths[tid] <= hi
        ]
        found.sort(key=lambda tid: starts[tid])
        return found

    def swap_in(tid: str, i: int) -> None:
        lo, hi = st.bin_bounds(i)
        vacated = starts[tid]
        occupants = in_bin(i)
        starts[tid] = lo
        cursor = lo + lengths[tid]
        spill = vacated
        for other in occupants:
            if cursor + lengths[other] <= hi:
                starts[other] = cursor
                cursor += lengths[other]
            else:
                starts[other] = spill
                spill += lengths[other]
        if spill > vacated + lengths[tid]:
            raise AssertionError("internal error: displaced tasks spill past the vacated slot")

    def relabel(occupant: str, wanted: str) -> None:
        if occupant != wanted:
            starts[occupant], starts[wanted] = starts[wanted], starts[occupant]

    for i in range(1, st.pairs + 1):
        occupants = in_bin(i)
        if not any(lengths[tid] == p for tid in occupants):
            swap_in(outer_id("p", i), i)
        occupants = in_bin(i)
        if not any(lengths[tid] == q for tid in occupants):
            swap_in(outer_id("q", i), i)
        left, right = in_bin(i)
        relabel(left, outer_id("p" if lengths[left] == p else "q", i))
        left, right = in_bin(i)
        relabel(right, inner_id("p" if lengths[right] == p else "q", i))

    out = Schedule(starts)
    bad = verify_schedule(st.instance, out)
    if bad:
        raise AssertionError(
            "internal error: normalization broke feasibility: " + "; ".join(str(v) for v in bad)
        )
    return out


def check_normal_form(st: StackedInstance, sch: Schedule) -> list[str]:
    """Explain every way ``sch`` deviates from the canonical bin layout."""
    problems: list[str] = []
    p, q = st.aux.p, st.aux.q
    roster = _stack_roster(st)
    lengths = {tid: (p if cls == "p" else q) for tid, (_r, cls, _i) in roster.items()}
    for i in range(1, st.pairs + 1):
        lo, hi = st.bin_bounds(i)
        inside = sorted(
            (tid for tid in roster if lo <= sch.starts[tid] and sch.starts[tid] + lengths[tid] <= hi),
            key=lambda tid: sch.starts[tid],
        )
        if len(inside) != 2:
            problems.append(f"bin {i}: holds {len(inside)} stack tasks instead of 2")
            continue
        left, right = inside
        role_l, cls_l, idx_l = roster[left]
        role_r, cls_r, idx_r = roster[right]
        if {cls_l, cls_r} != {"p", "q"}:
            problems.append(f"bin {i}: occupants {left},{right} are not one long, one short")
        if idx_l != i or idx_r != i:
            problems.append(f"bin {i}: occupants {left},{right} carry a foreign index")
        if role_l != "outer" or role_r != "inner":
            problems.append(f"bin {i}: expected outer-then-inner, found {role_l}-then-{role_r}")
        if sch.starts[left] != lo or sch.starts[right] != lo + lengths[left]:
            problems.append(f"bin {i}: occupants do not tile [{lo},{hi}]")
    for tid in roster:
        s = sch.starts[tid]
        if s < 0:
            end = s + lengths[tid]
            in_some = any(
                st.bin_bounds(i)[0] <= s and end <= st.bin_bounds(i)[1]
                for i in range(1, st.pairs + 1)
            )
            if not in_some:
                problems.append(f"{tid}: starts at {s} before 0 but lies in no bin")
    return problems


def extract_aux_schedule(aux: AuxInstance, st: StackedInstance, sch: Schedule) -> Schedule:
    """Read a pair-feasible schedule off a normalized one.

    Requires canonical bins (see ``normalize_bins``).  Pending task i of each
    length takes the start of whichever of its inner/outer tasks runs after
    time 0; the bin's outer occupant guarantees that per pair at least one
    representative is an inner task, which meets the early deadline by
    construction of the inner windows.
    """
    bad = verify_schedule(st.instance, sch)
    if bad:
        raise ValueError("schedule infeasible: " + "; ".join(str(v) for v in bad))
    problems = check_normal_form(st, sch)
    if problems:
        raise ValueError("schedule is not in normal form: " + "; ".join(problems))
    starts: dict[str, int] = {t.id: sch.starts[t.id] for t in aux.ordinary}
    for i in range(1, st.pairs + 1):
        for cls, pid in (("p", long_id(i)), ("q", short_id(i))):
            inner_start = sch.starts[inner_id(cls, i)]
            outer_start = sch.starts[outer_id(cls, i)]
            starts[pid] = inner_start if inner_start >= 0 else outer_start
    out = Schedule(starts)
    bad = verify_aux_schedule(aux, out)
    if bad:
        raise AssertionError(
            "internal error: extraction broke the pair check: " + "; ".join(str(v) for v in bad)
        )
    return out
