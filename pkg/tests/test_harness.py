import json
import random

import pytest

from stacksched.core import FormatError
from stacksched.harness import (
    PipelineDisagreement,
    parse_dimacs,
    run_roundtrip,
    sat_bruteforce,
    to_dimacs,
)
from stacksched.satgadget import CnfFormula
from stacksched.solve import OracleGuardError
from conftest import brute_sat, random_cnf


class TestParseDimacs:
    def test_single_unit_clause(self):
        cnf = parse_dimacs("p cnf 1 1\n1 0\n")
        assert cnf.num_vars == 1 and cnf.clauses == ((1,),)

    def test_two_clauses(self):
        cnf = parse_dimacs("p cnf 2 2\n1 2 0\n-1 0\n")
        assert cnf.clauses == ((1, 2), (-1,))

    def test_literal_out_of_range(self):
        with pytest.raises(FormatError, match="line 2.*out of range"):
            parse_dimacs("p cnf 1 1\n2 0\n")

    def test_comments_and_blank_lines(self):
        cnf = parse_dimacs("c hello\n\np cnf 2 1\nc mid\n1 -2 0\n")
        assert cnf.clauses == ((1, -2),)

    def test_clause_spanning_lines(self):
        cnf = parse_dimacs("p cnf 3 1\n1 2\n3 0\n")
        assert cnf.clauses == ((1, 2, 3),)

    def test_percent_trailer(self):
        cnf = parse_dimacs("p cnf 1 1\n1 0\n%\n0\n")
        assert cnf.num_clauses == 1

    def test_missing_terminator(self):
        with pytest.raises(FormatError, match="terminator"):
            parse_dimacs("p cnf 2 1\n1 2\n")

    def test_malformed_header(self):
        with pytest.raises(FormatError, match="line 1"):
            parse_dimacs("p dnf 2 1\n1 0\n")

    def test_clause_count_mismatch(self):
        with pytest.raises(FormatError, match="announces"):
            parse_dimacs("p cnf 2 2\n1 0\n")

    def test_serialize_parse_identity(self):
        rng = random.Random(3)
        for _ in range(25):
            cnf = random_cnf(rng)
            assert parse_dimacs(to_dimacs(cnf)) == cnf


class TestSatBruteforce:
    def test_positive_unit(self):
        res = sat_bruteforce(CnfFormula(1, [[1]]))
        assert res.satisfiable and res.model == {1: True}

    def test_contradiction(self):
        assert not sat_bruteforce(CnfFormula(1, [[1], [-1]])).satisfiable

    def test_lexicographically_first_model(self):
        res = sat_bruteforce(CnfFormula(2, [[1, 2], [-1, 2]]))
        assert res.model == {1: False, 2: True}

    def test_guard(self):
        with pytest.raises(OracleGuardError):
            sat_bruteforce(CnfFormula(21, [[1]]))

    def test_matches_independent_enumeration(self):
        rng = random.Random(4)
        for _ in range(30):
            cnf = random_cnf(rng)
            assert sat_bruteforce(cnf).satisfiable == (brute_sat(cnf) is not None)


class TestRoundtrip:
    def test_satisfiable_formula(self, warm_solver):
        report = run_roundtrip(CnfFormula(1, [[1]]))
        assert report.outcome == "sat"
        assert report.consistent is True
        assert report.assignment == {1: True}
        names = [s.name for s in report.stages]
        assert names == ["sat_bruteforce", "aux_oracle", "stacked_solver", "decode"]
        assert not any(s.skipped for s in report.stages)

    def test_unsatisfiable_formula(self, warm_solver):
        report = run_roundtrip(CnfFormula(1, [[1], [-1]]), skip_aux_oracle=True)
        assert report.outcome == "unsat"
        assert report.consistent is True
        assert report.assignment is None
        aux_stage = [s for s in report.stages if s.name == "aux_oracle"][0]
        assert aux_stage.skipped and aux_stage.verdict == "skipped"

    def test_empty_formula(self, warm_solver):
        report = run_roundtrip(CnfFormula(1, []))
        assert report.outcome == "sat"
        assert report.sizes["pending_pairs"] == 1

    def test_oversized_pair_count_skips_oracle(self, warm_solver):
        report = run_roundtrip(CnfFormula(2, [[1, 2], [-1, 2]]))
        aux_stage = [s for s in report.stages if s.name == "aux_oracle"][0]
        assert aux_stage.skipped  # 12 pending pairs exceed the default guard

    def test_budget_exhaustion_reported(self, warm_solver):
        report = run_roundtrip(CnfFormula(2, [[1], [-1]]), max_nodes=10, skip_aux_oracle=True)
        assert report.outcome == "budget_exhausted"
        assert report.consistent is None

    def test_report_json_shape(self, warm_solver):
        doc = json.loads(run_roundtrip(CnfFormula(1, [[1]])).to_json())
        assert doc["formula"] == {"num_vars": 1, "num_clauses": 1}
        assert doc["outcome"] == "sat"
        assert doc["assignment"] == {"1": True}
        assert {s["name"] for s in doc["stages"]} >= {"sat_bruteforce", "stacked_solver"}

    def test_all_verdicts_agree_on_small_formulas(self, warm_solver):
        rng = random.Random(9)
        for _ in range(10):
            cnf = random_cnf(rng, max_vars=2, max_clauses=2)
            report = run_roundtrip(cnf, skip_aux_oracle=cnf.num_clauses > 1)
            assert report.consistent is True
            assert (report.outcome == "sat") == (brute_sat(cnf) is not None)
