"""Data model for non-preemptive single-machine feasibility scheduling.

A task occupies the half-open interval [start, start + length) and must lie
inside its inclusive availability window [release, deadline].  All times are
integers (start times may be negative); feasibility checking is bit-exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


class FormatError(ValueError):
    """A JSON document could not be turned into a valid value."""


@dataclass(frozen=True)
class Task:
    """One job: availability window [release, deadline] plus a duration."""

    id: str
    release: int
    deadline: int
    length: int

    def shifted(self, delta: int) -> "Task":
        """Same task with the whole window moved by ``delta``."""
        return Task(self.id, self.release + delta, self.deadline + delta, self.length)


@dataclass(frozen=True)
class Violation:
    """One broken rule, naming the offending task(s)."""

    code: str
    tasks: tuple[str, ...]
    detail: str

    def __str__(self) -> str:
        return f"{self.code}[{','.join(self.tasks)}]: {self.detail}"


@dataclass(frozen=True)
class Instance:
    """An ordered collection of tasks to place on one machine."""

    tasks: tuple[Task, ...]

    def __init__(self, tasks: Iterable[Task]):
        object.__setattr__(self, "tasks", tuple(tasks))

    @property
    def lengths(self) -> frozenset[int]:
        """The set of distinct task lengths present."""
        return frozenset(t.length for t in self.tasks)

    def by_id(self) -> dict[str, Task]:
        return {t.id: t for t in self.tasks}

    def __len__(self) -> int:
        return len(self.tasks)


@dataclass(frozen=True)
class Schedule:
    """Start time per task id."""

    starts: dict[str, int]

    def __init__(self, starts: Mapping[str, int]):
        object.__setattr__(self, "starts", dict(starts))


def validate_instance(inst: Instance) -> list[Violation]:
    """Check every task invariant; an empty list means the instance is valid.

    Rules: unique ids, length >= 1, and release + length <= deadline (the
    window must admit the task).  Negative times are legal.
    """
    out: list[Violation] = []
    seen: set[str] = set()
    for t in inst.tasks:
        if t.id in seen:
            out.append(Violation("duplicate-id", (t.id,), "task id used more than once"))
        seen.add(t.id)
        if t.length < 1:
            out.append(Violation("bad-length", (t.id,), f"length {t.length} < 1"))
            continue
        if t.release + t.length > t.deadline:
            out.append(
                Violation(
                    "window-too-small",
                    (t.id,),
                    f"window [{t.release},{t.deadline}] cannot hold length {t.length}",
                )
            )
    return out


def verify_schedule(inst: Instance, sch: Schedule) -> list[Violation]:
    """Check a schedule against an instance; an empty list means feasible.

    Every task must start within its window and execution intervals
    [start, start + length) must be pairwise disjoint.  Tasks may abut.
    """
    out: list[Violation] = []
    tasks = inst.by_id()
    for tid in sch.starts:
        if tid not in tasks:
            out.append(Violation("unknown-task", (tid,), "start given for a task not in the instance"))
    running: list[tuple[int, int, str]] = []
    for t in inst.tasks:
        if t.id not in sch.starts:
            out.append(Violation("missing-start", (t.id,), "no start time assigned"))
            continue
        s = sch.starts[t.id]
        if s < t.release:
            out.append(Violation("starts-early", (t.id,), f"start {s} < release {t.release}"))
        if s + t.length > t.deadline:
            out.append(
                Violation("ends-late", (t.id,), f"completion {s + t.length} > deadline {t.deadline}")
            )
        running.append((s, s + t.length, t.id))
    running.sort()
    for (s0, e0, id0), (s1, e1, id1) in zip(running, running[1:]):
        if s1 < e0:
            out.append(
                Violation("overlap", (id0, id1), f"[{s0},{e0}) intersects [{s1},{e1})")
            )
    return out


# --- JSON round trip ---------------------------------------------------------
#
# Instance file: {"tasks": [{"id": str, "release": int, "deadline": int,
# "length": int}, ...]}.  Schedule file: {"starts": {id: int, ...}}.
# Integers outside 64 bits are rejected explicitly.


def _load(text: str) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None


def _as_int(value: object, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{where}: expected an integer, got {value!r}")
    if not INT64_MIN <= value <= INT64_MAX:
        raise FormatError(f"{where}: integer overflow, {value} does not fit in 64 bits")
    return value


def _as_str(value: object, where: str) -> str:
    if not isinstance(value, str):
        raise FormatError(f"{where}: expected a string, got {value!r}")
    return value


def task_from_obj(obj: object, where: str) -> Task:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    for key in ("id", "release", "deadline", "length"):
        if key not in obj:
            raise FormatError(f"{where}: missing field {key!r}")
    return Task(
        id=_as_str(obj["id"], f"{where}.id"),
        release=_as_int(obj["release"], f"{where}.release"),
        deadline=_as_int(obj["deadline"], f"{where}.deadline"),
        length=_as_int(obj["length"], f"{where}.length"),
    )


def task_to_obj(t: Task) -> dict:
    return {"id": t.id, "release": t.release, "deadline": t.deadline, "length": t.length}


def instance_from_json(text: str) -> Instance:
    """Parse and validate an instance document; invalid input raises FormatError."""
    doc = _load(text)
    if not isinstance(doc, dict) or "tasks" not in doc:
        raise FormatError("top level: expected an object with a 'tasks' field")
    raw = doc["tasks"]
    if not isinstance(raw, list):
        raise FormatError("tasks: expected a list")
    inst = Instance(task_from_obj(o, f"tasks[{i}]") for i, o in enumerate(raw))
    bad = validate_instance(inst)
    if bad:
        raise FormatError("invalid instance: " + "; ".join(str(v) for v in bad))
    return inst


def instance_to_json(inst: Instance) -> str:
    return json.dumps({"tasks": [task_to_obj(t) for t in inst.tasks]}, indent=2) + "\n"


def schedule_from_json(text: str) -> Schedule:
    doc = _load(text)
    if not isinstance(doc, dict) or "starts" not in doc:
        raise FormatError("top level: expected an object with a 'starts' field")
    raw = doc["starts"]
    if not isinstance(raw, dict):
        raise FormatError("starts: expected an object")
    return Schedule({k: _as_int(v, f"starts[{k!r}]") for k, v in raw.items()})


def schedule_to_json(sch: Schedule) -> str:
    return json.dumps({"starts": dict(sch.starts)}, indent=2) + "\n"
