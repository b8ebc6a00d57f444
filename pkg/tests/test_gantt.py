import xml.etree.ElementTree as ET

import pytest

from stacksched.auxiliary import AuxInstance, PendingDeadlines
from stacksched.core import Instance, Schedule, Task
from stacksched.gantt import render_gantt
from stacksched.solve import solve_decision
from stacksched.stacked import reduce_aux_to_instance

TWO = Instance([Task("a", 0, 5, 3), Task("b", 0, 5, 2)])
SCH = Schedule({"a": 0, "b": 3})


class TestAscii:
    def test_rows_and_fills(self):
        out = render_gantt(TWO, SCH, format="ascii")
        lines = out.splitlines()
        assert lines[1].startswith("a") and lines[2].startswith("b")
        assert "###" in lines[1]  # the longer task
        assert "==" in lines[2]

    def test_deterministic(self):
        assert render_gantt(TWO, SCH) == render_gantt(TWO, SCH)

    def test_separator_pinned_before_zero(self):
        aux = AuxInstance(3, 2, (), [PendingDeadlines(3, 8)], [PendingDeadlines(8, 10)])
        st = reduce_aux_to_instance(aux)
        res = solve_decision(st.instance)
        out = render_gantt(st.instance, res.witness, format="ascii")
        sep_line = [l for l in out.splitlines() if l.startswith("sep_1")][0]
        assert "[-2,0)" in sep_line

    def test_empty_instance(self):
        assert render_gantt(Instance([]), Schedule({})) == "(empty instance)\n"

    def test_infeasible_schedule_rejected(self):
        with pytest.raises(ValueError):
            render_gantt(TWO, Schedule({"a": 0, "b": 1}))


class TestSvg:
    def test_valid_document_with_bars(self):
        out = render_gantt(TWO, SCH, format="svg")
        root = ET.fromstring(out)
        assert root.tag.endswith("svg")
        rects = [e for e in root.iter() if e.tag.endswith("rect")]
        assert len(rects) == 4  # one window and one execution bar per task

    def test_colors_distinguish_lengths(self):
        out = render_gantt(TWO, SCH, format="svg")
        assert "#c0392b" in out and "#2980b9" in out

    def test_empty_instance_is_valid_document(self):
        out = render_gantt(Instance([]), Schedule({}), format="svg")
        assert ET.fromstring(out).tag.endswith("svg")

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            render_gantt(TWO, SCH, format="png")
