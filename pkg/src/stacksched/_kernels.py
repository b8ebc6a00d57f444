"""Array kernels for the feasibility search.

The depth-first search runs over flat int64 arrays so the identical code can
execute either numba-jitted (the default) or as plain interpreted Python.
Set STACKSCHED_NO_NUMBA=1 before import to force the interpreted path; the
two paths run the same statements and produce identical witnesses.

Search scheme: chronological branching.  A node carries the machine-free
time t and the set of already placed tasks.  Children either start one
released task at t, or jump t to the next pending release (an explicit idle
move, needed for completeness since waiting can be mandatory).  Moves are
re-derived from node state during backtracking, so the stack stores only one
move id and one timestamp per level and the whole search state is resumable:
the driver runs the kernel in node-budget slices and checks wall-clock time
between slices.

Pruning (all verdict-preserving):
  * a remaining task that cannot meet its deadline even alone kills the node;
  * infeasibility of the preemptive earliest-deadline-first relaxation of the
    remaining tasks kills the node;
  * per task length, only the released candidate with the smallest deadline
    (ties: longer first, then id rank) is branched on -- starting any other
    released task of equal length now is dominated, because the two tasks
    could swap slots in any feasible completion;
  * a candidate that directly follows the previous task, was already released
    when that task started, precedes it in candidate order, and could trade
    places with it without breaking its deadline is skipped: the swapped
    sequence lives in an earlier sibling subtree (transposition symmetry);
  * the idle move is skipped when a released task fits entirely inside the
    gap it would create (placing that task first is never worse).

Every exchange above strictly decreases the schedule's lexicographic rank
(by start time, then candidate order), so chains of exchanges terminate and
the lexicographically minimal feasible schedule survives all filters.
"""

from __future__ import annotations

import os

import numpy as np

FEASIBLE = 0
INFEASIBLE = 1
PAUSED = 2

IDLE = -1
NO_MOVE = -2
BIG = 2**62

# state vector layout
S_DEPTH = 0
S_TIME = 1
S_NSCHED = 2
S_NODES = 3
S_PHASE = 4
STATE_LEN = 5


def _env_disables_numba() -> bool:
    return os.environ.get("STACKSCHED_NO_NUMBA", "").strip().lower() in (
        "1",
        "true",
        "yes",
        "on",
    )


def _heap_push(heap_d, heap_r, size, d, r):
    i = size
    heap_d[i] = d
    heap_r[i] = r
    while i > 0:
        parent = (i - 1) >> 1
        if heap_d[parent] <= heap_d[i]:
            break
        heap_d[parent], heap_d[i] = heap_d[i], heap_d[parent]
        heap_r[parent], heap_r[i] = heap_r[i], heap_r[parent]
        i = parent
    return size + 1


def _heap_pop(heap_d, heap_r, size):
    size -= 1
    heap_d[0] = heap_d[size]
    heap_r[0] = heap_r[size]
    i = 0
    while True:
        left = 2 * i + 1
        if left >= size:
            break
        best = left
        right = left + 1
        if right < size and heap_d[right] < heap_d[left]:
            best = right
        if heap_d[i] <= heap_d[best]:
            break
        heap_d[i], heap_d[best] = heap_d[best], heap_d[i]
        heap_r[i], heap_r[best] = heap_r[best], heap_r[i]
        i = best
    return size


def _edf_feasible(t0, release, deadline, length, scheduled, ridx, heap_d, heap_r):
    """Preemptive earliest-deadline-first feasibility of the unplaced tasks.

    Event-driven simulation from time t0; releases before t0 are clipped to
    t0.  Returns False only when some task must miss its deadline even with
    preemption allowed, which makes it a sound pruning test for the
    non-preemptive search.
    """
    n = release.shape[0]
    size = 0
    cur = t0
    k = 0
    while True:
        while k < n:
            j = ridx[k]
            if scheduled[j] != 0:
                k += 1
            elif release[j] <= cur:
                size = _heap_push(heap_d, heap_r, size, deadline[j], length[j])
                k += 1
            else:
                break
        if size == 0:
            if k >= n:
                return True
            cur = release[ridx[k]]
            continue
        d0 = heap_d[0]
        r0 = heap_r[0]
        if cur + r0 > d0:
            return False
        nxt = BIG
        if k < n:
            nxt = release[ridx[k]]
        if cur + r0 <= nxt:
            cur = cur + r0
            size = _heap_pop(heap_d, heap_r, size)
        else:
            heap_r[0] = r0 - (nxt - cur)
            cur = nxt


def _remaining_ok(t, release, deadline, length, scheduled):
    """Every unplaced task can still meet its deadline if run next."""
    n = release.shape[0]
    for j in range(n):
        if scheduled[j] == 0:
            s = release[j]
            if s < t:
                s = t
            if s + length[j] > deadline[j]:
                return False
    return True


def _next_release(t, release, scheduled):
    n = release.shape[0]
    best = BIG
    for j in range(n):
        if scheduled[j] == 0 and release[j] > t and release[j] < best:
            best = release[j]
    return best


def _idle_move(t, release, length, scheduled):
    nxt = _next_release(t, release, scheduled)
    if nxt >= BIG:
        return NO_MOVE
    n = release.shape[0]
    for j in range(n):
        if scheduled[j] == 0 and release[j] <= t and t + length[j] <= nxt:
            return NO_MOVE
    return IDLE


def _task_move_after(last, t, release, deadline, length, sidx, scheduled, seen, prev_pos, prev_t):
    # branchable candidates: per distinct length, the first released
    # unplaced task in sidx order; return the first such position > last.
    # prev_pos/prev_t describe the move that reached this node (or -5).
    n = sidx.shape[0]
    prev_j = -1
    if prev_pos >= 0:
        prev_j = sidx[prev_pos]
    count = 0
    for pos in range(n):
        j = sidx[pos]
        if scheduled[j] != 0 or release[j] > t:
            continue
        if (
            prev_j >= 0
            and pos < prev_pos
            and release[j] <= prev_t
            and prev_t + length[j] + length[prev_j] <= deadline[prev_j]
        ):
            # swapping j in front of the previous task stays feasible, so
            # this order is covered by an earlier sibling
            continue
        ln = length[j]
        fresh = True
        for s in range(count):
            if seen[s] == ln:
                fresh = False
                break
        if fresh:
            if pos > last:
                return pos
            seen[count] = ln
            count += 1
    return NO_MOVE


def _first_move(t, release, deadline, length, sidx, scheduled, seen, prev_pos, prev_t):
    mv = _task_move_after(
        -1, t, release, deadline, length, sidx, scheduled, seen, prev_pos, prev_t
    )
    if mv != NO_MOVE:
        return mv
    return _idle_move(t, release, length, scheduled)


def _next_move(t, last, release, deadline, length, sidx, scheduled, seen, prev_pos, prev_t):
    if last == IDLE:
        return NO_MOVE
    mv = _task_move_after(
        last, t, release, deadline, length, sidx, scheduled, seen, prev_pos, prev_t
    )
    if mv != NO_MOVE:
        return mv
    return _idle_move(t, release, length, scheduled)


def _search_step(
    release,
    deadline,
    length,
    sidx,
    ridx,
    scheduled,
    starts,
    lv_move,
    lv_t,
    state,
    heap_d,
    heap_r,
    seen,
    node_cap,
):
    """Run the search until a verdict or until ``node_cap`` nodes were entered.

    Returns FEASIBLE (witness in ``starts``), INFEASIBLE, or PAUSED with all
    progress kept in the passed arrays so a later call resumes seamlessly.
    """
    n = release.shape[0]
    depth = state[S_DEPTH]
    t = state[S_TIME]
    nsch = state[S_NSCHED]
    nodes = state[S_NODES]
    phase = state[S_PHASE]
    status = -1
    while status < 0:
        if phase == 0:
            # entering the node reached by the current partial schedule
            if nodes >= node_cap:
                status = PAUSED
                break
            if nsch == n:
                status = FEASIBLE
                break
            if _remaining_ok(t, release, deadline, length, scheduled):
                prev_pos = np.int64(-5)
                prev_t = np.int64(0)
                if depth > 0:
                    prev_pos = lv_move[depth - 1]
                    prev_t = lv_t[depth - 1]
                mv = _first_move(
                    t, release, deadline, length, sidx, scheduled, seen, prev_pos, prev_t
                )
                if mv != NO_MOVE:
                    # only decision points consume budget and pay for the
                    # relaxation check; a forced move (single candidate) is
                    # followed for free -- skipping its check is sound, the
                    # next decision point prunes instead
                    branching = (
                        _next_move(
                            t, mv, release, deadline, length, sidx, scheduled, seen,
                            prev_pos, prev_t,
                        )
                        != NO_MOVE
                    )
                    if branching:
                        nodes += 1
                        if not _edf_feasible(
                            t, release, deadline, length, scheduled, ridx, heap_d, heap_r
                        ):
                            phase = 1
                            continue
                    lv_t[depth] = t
                    lv_move[depth] = mv
                    if mv == IDLE:
                        t = _next_release(t, release, scheduled)
                    else:
                        j = sidx[mv]
                        starts[j] = t
                        scheduled[j] = 1
                        nsch += 1
                        t = t + length[j]
                    depth += 1
                    continue
            nodes += 1
            phase = 1
        else:
            # undo the deepest move and advance to its next sibling
            if depth == 0:
                status = INFEASIBLE
                break
            depth -= 1
            mv = lv_move[depth]
            t = lv_t[depth]
            if mv != IDLE:
                j = sidx[mv]
                scheduled[j] = 0
                nsch -= 1
            prev_pos = np.int64(-5)
            prev_t = np.int64(0)
            if depth > 0:
                prev_pos = lv_move[depth - 1]
                prev_t = lv_t[depth - 1]
            mv = _next_move(
                t, mv, release, deadline, length, sidx, scheduled, seen, prev_pos, prev_t
            )
            if mv == NO_MOVE:
                continue
            lv_move[depth] = mv
            if mv == IDLE:
                t = _next_release(t, release, scheduled)
            else:
                j = sidx[mv]
                starts[j] = t
                scheduled[j] = 1
                nsch += 1
                t = t + length[j]
            depth += 1
            phase = 0
    state[S_DEPTH] = depth
    state[S_TIME] = t
    state[S_NSCHED] = nsch
    state[S_NODES] = nodes
    state[S_PHASE] = phase
    return status


def _edf_full(release, deadline, length, ridx, heap_d, heap_r):
    """Preemptive EDF feasibility of a whole instance."""
    n = release.shape[0]
    t0 = BIG
    for j in range(n):
        if release[j] < t0:
            t0 = release[j]
    scheduled = np.zeros(n, dtype=np.uint8)
    return _edf_feasible(t0, release, deadline, length, scheduled, ridx, heap_d, heap_r)


def _edf_probe(release, deadline, length, ridx, heap_d, heap_r, ov_j, ov_r, ov_d):
    """Whole-instance preemptive EDF with one task's window overridden.

    Used for window shaving: if the relaxation is already infeasible when
    task ov_j is confined to [ov_r, ov_d], no feasible schedule places it
    there.  ridx stays valid because the overridden task is merged manually.
    """
    n = release.shape[0]
    size = 0
    t0 = ov_r
    for idx in range(n):
        if idx != ov_j and release[idx] < t0:
            t0 = release[idx]
    cur = t0
    k = 0
    inserted = False
    while True:
        while k < n:
            j = ridx[k]
            if j == ov_j:
                k += 1
            elif release[j] <= cur:
                size = _heap_push(heap_d, heap_r, size, deadline[j], length[j])
                k += 1
            else:
                break
        if not inserted and ov_r <= cur:
            size = _heap_push(heap_d, heap_r, size, ov_d, length[ov_j])
            inserted = True
        nxt = BIG
        kk = k
        while kk < n and ridx[kk] == ov_j:
            kk += 1
        if kk < n:
            nxt = release[ridx[kk]]
        if not inserted and ov_r < nxt:
            nxt = ov_r
        if size == 0:
            if nxt >= BIG:
                return True
            cur = nxt
            continue
        d0 = heap_d[0]
        r0 = heap_r[0]
        if cur + r0 > d0:
            return False
        if cur + r0 <= nxt:
            cur = cur + r0
            size = _heap_pop(heap_d, heap_r, size)
        else:
            heap_r[0] = r0 - (nxt - cur)
            cur = nxt


NUMBA_ENABLED = False
if not _env_disables_numba():
    try:
        from numba import njit
    except ImportError:
        njit = None
    if njit is not None:
        _jit = njit(cache=True)
        # rebind in dependency order; callees must be jitted before callers
        # compile (compilation is lazy, so rebinding before first use is
        # sufficient)
        _heap_push = _jit(_heap_push)
        _heap_pop = _jit(_heap_pop)
        _edf_feasible = _jit(_edf_feasible)
        _remaining_ok = _jit(_remaining_ok)
        _next_release = _jit(_next_release)
        _idle_move = _jit(_idle_move)
        _task_move_after = _jit(_task_move_after)
        _first_move = _jit(_first_move)
        _next_move = _jit(_next_move)
        _search_step = _jit(_search_step)
        _edf_full = _jit(_edf_full)
        _edf_probe = _jit(_edf_probe)
        NUMBA_ENABLED = True

search_step = _search_step
edf_full = _edf_full
edf_probe = _edf_probe
