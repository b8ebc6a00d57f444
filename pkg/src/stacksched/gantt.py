"""Schedule rendering: availability windows plus execution bars.

One row per task, sorted by start time.  Long and short tasks are told apart
by fill (ASCII) or color (SVG); the time origin is marked so constructions
that place work before t = 0 read naturally.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .core import Instance, Schedule, verify_schedule

_ROW_H = 18
_PAD_Y = 24
_PX = 14
_LABEL_W = 120

LONG_COLOR = "#c0392b"
SHORT_COLOR = "#2980b9"


def _check(inst: Instance, sch: Schedule) -> None:
    bad = verify_schedule(inst, sch)
    if bad:
        raise ValueError("schedule infeasible: " + "; ".join(str(v) for v in bad))


def _rows(inst: Instance, sch: Schedule):
    return sorted(inst.tasks, key=lambda t: (sch.starts[t.id], t.id))


def render_gantt(inst: Instance, sch: Schedule, format: str = "ascii") -> str:
    """Render a feasible schedule; deterministic for identical inputs."""
    _check(inst, sch)
    if format == "ascii":
        return _render_ascii(inst, sch)
    if format == "svg":
        return _render_svg(inst, sch)
    raise ValueError(f"unknown format {format!r} (expected 'ascii' or 'svg')")


def _bounds(inst: Instance, sch: Schedule) -> tuple[int, int]:
    lo = min(min(t.release for t in inst.tasks), min(sch.starts.values()))
    hi = max(t.deadline for t in inst.tasks)
    return lo, hi


def _render_ascii(inst: Instance, sch: Schedule) -> str:
    if not inst.tasks:
        return "(empty instance)\n"
    lo, hi = _bounds(inst, sch)
    span = hi - lo
    label_w = max(len(t.id) for t in inst.tasks) + 2
    longest = max(inst.lengths)
    lines = []
    origin = "".join("0" if lo + k == 0 else " " for k in range(span + 1))
    lines.append(" " * label_w + origin)
    for t in _rows(inst, sch):
        s = sch.starts[t.id]
        cells = []
        for k in range(span):
            tm = lo + k
            if s <= tm < s + t.length:
                cells.append("#" if t.length == longest else "=")
            elif t.release <= tm < t.deadline:
                cells.append("-")
            else:
                cells.append(" ")
        lines.append(t.id.ljust(label_w) + "".join(cells) + f"  [{s},{s + t.length})")
    return "\n".join(lines) + "\n"


def _render_svg(inst: Instance, sch: Schedule) -> str:
    head = '<?xml version="1.0" encoding="UTF-8"?>\n'
    if not inst.tasks:
        return (
            head
            + '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="40" height="20"/>'
            + "\n"
        )
    lo, hi = _bounds(inst, sch)
    rows = _rows(inst, sch)
    width = _LABEL_W + (hi - lo) * _PX + 20
    height = _PAD_Y + len(rows) * _ROW_H + 10
    longest = max(inst.lengths)

    def x(tm: int) -> int:
        return _LABEL_W + (tm - lo) * _PX

    parts = [
        head,
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}">\n',
        f'<text x="4" y="14" font-size="11" font-family="monospace">time {lo}..{hi}</text>\n',
    ]
    if lo <= 0 <= hi:
        parts.append(
            f'<line x1="{x(0)}" y1="{_PAD_Y - 6}" x2="{x(0)}" y2="{height - 4}" '
            'stroke="#555" stroke-dasharray="3,2"/>\n'
        )
    for i, t in enumerate(rows):
        y = _PAD_Y + i * _ROW_H
        s = sch.starts[t.id]
        color = LONG_COLOR if t.length == longest else SHORT_COLOR
        parts.append(
            f'<text x="4" y="{y + 12}" font-size="10" font-family="monospace">{escape(t.id)}</text>\n'
        )
        parts.append(
            f'<rect x="{x(t.release)}" y="{y + 7}" width="{(t.deadline - t.release) * _PX}" '
            f'height="3" fill="#ccc"/>\n'
        )
        parts.append(
            f'<rect x="{x(s)}" y="{y + 2}" width="{t.length * _PX}" height="13" '
            f'fill="{color}" fill-opacity="0.85"/>\n'
        )
    parts.append("</svg>\n")
    return "".join(parts)
