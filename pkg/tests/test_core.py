import json

import pytest
from hypothesis import given, settings, strategies as st

from stacksched.core import (
    FormatError,
    Instance,
    Schedule,
    Task,
    instance_from_json,
    instance_to_json,
    schedule_from_json,
    schedule_to_json,
    validate_instance,
    verify_schedule,
)


def codes(violations):
    return {v.code for v in violations}


class TestValidate:
    def test_window_exactly_fits(self):
        assert validate_instance(Instance([Task("a", 0, 3, 3)])) == []

    def test_window_too_small(self):
        bad = validate_instance(Instance([Task("a", 0, 2, 3)]))
        assert codes(bad) == {"window-too-small"}
        assert bad[0].tasks == ("a",)

    def test_negative_release_is_legal(self):
        assert validate_instance(Instance([Task("a", -7, 10, 3)])) == []

    def test_zero_length(self):
        assert codes(validate_instance(Instance([Task("a", 0, 5, 0)]))) == {"bad-length"}

    def test_duplicate_ids(self):
        inst = Instance([Task("a", 0, 5, 2), Task("a", 0, 5, 2)])
        assert "duplicate-id" in codes(validate_instance(inst))


class TestVerify:
    def test_back_to_back_ok(self):
        inst = Instance([Task("a", 0, 5, 3), Task("b", 0, 5, 2)])
        assert verify_schedule(inst, Schedule({"a": 0, "b": 3})) == []

    def test_completion_past_deadline(self):
        inst = Instance([Task("a", 0, 4, 3), Task("b", 0, 4, 2)])
        bad = verify_schedule(inst, Schedule({"a": 0, "b": 3}))
        assert codes(bad) == {"ends-late"}
        assert bad[0].tasks == ("b",)

    def test_overlap(self):
        inst = Instance([Task("a", 0, 10, 3), Task("b", 0, 10, 2)])
        bad = verify_schedule(inst, Schedule({"a": 0, "b": 2}))
        assert codes(bad) == {"overlap"}
        assert set(bad[0].tasks) == {"a", "b"}

    def test_missing_and_unknown_ids(self):
        inst = Instance([Task("a", 0, 5, 2)])
        bad = verify_schedule(inst, Schedule({"b": 0}))
        assert codes(bad) == {"missing-start", "unknown-task"}

    def test_start_before_release(self):
        inst = Instance([Task("a", 2, 6, 2)])
        assert codes(verify_schedule(inst, Schedule({"a": 1}))) == {"starts-early"}


class TestJson:
    def test_round_trip(self):
        inst = Instance([Task("a", -7, 10, 3), Task("b", 0, 5, 2)])
        assert instance_from_json(instance_to_json(inst)) == inst

    def test_schedule_round_trip(self):
        sch = Schedule({"a": -3, "b": 4})
        assert schedule_from_json(schedule_to_json(sch)) == sch

    def test_zero_length_rejected(self):
        doc = json.dumps({"tasks": [{"id": "a", "release": 0, "deadline": 5, "length": 0}]})
        with pytest.raises(FormatError, match="bad-length"):
            instance_from_json(doc)

    def test_duplicate_id_rejected(self):
        doc = json.dumps(
            {
                "tasks": [
                    {"id": "a", "release": 0, "deadline": 5, "length": 2},
                    {"id": "a", "release": 0, "deadline": 5, "length": 2},
                ]
            }
        )
        with pytest.raises(FormatError, match="duplicate-id"):
            instance_from_json(doc)

    def test_overflow_rejected(self):
        doc = json.dumps({"tasks": [{"id": "a", "release": 0, "deadline": 2**63, "length": 2}]})
        with pytest.raises(FormatError, match="overflow"):
            instance_from_json(doc)

    def test_bool_is_not_an_integer(self):
        doc = json.dumps({"tasks": [{"id": "a", "release": True, "deadline": 5, "length": 2}]})
        with pytest.raises(FormatError):
            instance_from_json(doc)

    def test_parse_error_names_line(self):
        with pytest.raises(FormatError, match="line 2"):
            instance_from_json('{\n  "tasks": }')

    def test_field_order_and_whitespace_irrelevant(self):
        doc = ' {"tasks":[{"length":2,"id":"a", "deadline": 5,"release":0}]} '
        assert instance_from_json(doc) == Instance([Task("a", 0, 5, 2)])


task_st = st.builds(
    Task,
    id=st.text("ab_0123", min_size=1, max_size=6),
    release=st.integers(min_value=-50, max_value=50),
    deadline=st.integers(min_value=-50, max_value=120),
    length=st.integers(min_value=1, max_value=9),
)


def valid_instances():
    return (
        st.lists(task_st, max_size=6)
        .map(lambda ts: Instance({t.id: t for t in ts}.values()))
        .filter(lambda i: not validate_instance(i))
    )


class TestProperties:
    @given(valid_instances())
    @settings(max_examples=80, deadline=None)
    def test_json_round_trip_identity(self, inst):
        assert instance_from_json(instance_to_json(inst)) == inst

    @given(valid_instances(), st.integers(min_value=-30, max_value=30))
    @settings(max_examples=60, deadline=None)
    def test_translation_invariance(self, inst, delta):
        from stacksched.solve import solve_decision

        res = solve_decision(inst)
        if not res.feasible:
            return
        shifted = Instance([t.shifted(delta) for t in inst.tasks])
        moved = Schedule({k: v + delta for k, v in res.witness.starts.items()})
        assert verify_schedule(shifted, moved) == []

    @given(valid_instances())
    @settings(max_examples=40, deadline=None)
    def test_verdict_is_pure(self, inst):
        from stacksched.solve import solve_decision

        res = solve_decision(inst)
        if res.feasible:
            first = verify_schedule(inst, res.witness)
            second = verify_schedule(inst, res.witness)
            assert first == second == []

    @given(valid_instances())
    @settings(max_examples=60, deadline=None)
    def test_ok_schedule_fits_its_span(self, inst):
        from stacksched.solve import solve_decision

        res = solve_decision(inst)
        if not res.feasible or not inst.tasks:
            return
        starts = res.witness.starts
        total = sum(t.length for t in inst.tasks)
        span = max(starts[t.id] + t.length for t in inst.tasks) - min(starts.values())
        assert total <= span
