import itertools

import numpy as np
import pytest

from hornpac.core import (
    BOTTOM,
    AssignmentFamily,
    AttributeSet,
    HornFormula,
    Implication,
    env_closure,
)
from hornpac.oracle import (
    CachingOracle,
    DatasetOracle,
    TargetFormulaOracles,
    is_member,
)

from helpers import aset, family, formula, imp, random_family, uni


class TestDatasetOracle:
    def test_full_ask_returns_first_violating_row(self):
        u = uni(3)
        oracle = DatasetOracle(family(u, "ab", "ac"))
        assert oracle.ask(imp(u, "b", "a")) is None
        assert oracle.ask(imp(u, "a", "b")) == aset(u, "ac")
        assert oracle.full_queries == 2

    def test_restricted_matches_full_verdict(self):
        rng = np.random.default_rng(3)
        u = uni(6)
        for _ in range(20):
            v = random_family(rng, u, int(rng.integers(1, 6)))
            oracle = DatasetOracle(v)
            for _ in range(40):
                premise = AttributeSet(u, int(rng.integers(0, 64)))
                if rng.random() < 0.2:
                    candidate = Implication(premise, BOTTOM)
                else:
                    candidate = Implication(
                        premise, AttributeSet(u, int(rng.integers(0, 64)))
                    )
                assert oracle.ask_restricted(candidate) == (oracle.ask(candidate) is None)

    def test_reflexive_query_is_valid_and_counted(self):
        u = uni(2)
        oracle = DatasetOracle(family(u, "a"))
        before = oracle.restricted_queries
        assert oracle.ask_restricted(imp(u, "ab", "ab"))
        assert oracle.restricted_queries == before + 1

    def test_zoo_fig2_answers(self, zoo_doc):
        oracle = DatasetOracle(zoo_doc.family)
        u = zoo_doc.universe
        valid = Implication(u.make(["milk"]), u.make(["backbone", "breathes"]))
        assert oracle.ask(valid) is None
        invalid = Implication(u.make(["legs=8"]), u.make(["venomous"]))
        answer = oracle.ask(invalid)
        assert answer is not None and u.make(["legs=8"]) <= answer


class TestIsMember:
    def test_examples(self):
        u = uni(2)
        oracle = DatasetOracle(family(u, "a", "b"))
        assert is_member(u.empty(), oracle)
        assert not is_member(aset(u, "ab"), oracle)
        for row in oracle.data.rows:
            assert is_member(row, oracle)

    def test_membership_equals_envelope_fixpoint_exhaustively(self):
        # acceptance-grade oracle equivalence at small scale
        u = uni(4)
        all_rows = [AttributeSet(u, bits) for bits in range(16)]
        for size in (1, 2, 3):
            for combo in itertools.combinations(all_rows, size):
                v = AssignmentFamily(u, combo)
                oracle = DatasetOracle(v)
                for a in u.subsets():
                    closed = env_closure(v, a)
                    expected = closed is not BOTTOM and closed.bits == a.bits
                    assert is_member(a, oracle) == expected

    def test_membership_on_random_wide_universes(self):
        rng = np.random.default_rng(7)
        for n in (8, 10, 12):
            u = uni(n)
            v = random_family(rng, u, 8)
            oracle = DatasetOracle(v)
            for _ in range(60):
                a = AttributeSet(u, int(rng.integers(0, 1 << n)))
                closed = env_closure(v, a)
                expected = closed is not BOTTOM and closed.bits == a.bits
                assert is_member(a, oracle) == expected

    def test_query_budget(self):
        rng = np.random.default_rng(9)
        u = uni(6)
        v = random_family(rng, u, 4)
        for _ in range(60):
            a = AttributeSet(u, int(rng.integers(0, 64)))
            oracle = DatasetOracle(v)
            verdict = is_member(a, oracle)
            budget = len(u) - len(a) + 1
            assert oracle.queries <= budget
            if verdict:
                assert oracle.queries == budget


class TestTargetFormulaOracles:
    def test_member_is_model_check(self):
        u = uni(3)
        target = formula(u, ("a", "b"))
        oracle = TargetFormulaOracles(target)
        assert oracle.member(aset(u, "ab"))
        assert not oracle.member(aset(u, "a"))

    def test_equivalent_returns_smallest_mask_difference(self):
        u = uni(2)
        target = formula(u, ("a", "b"))
        oracle = TargetFormulaOracles(target)
        assert oracle.equivalent(target) is None
        diff = oracle.equivalent(HornFormula(u))
        assert diff == aset(u, "a")  # {a} is the lowest-mask disagreement

    def test_universe_cap(self):
        with pytest.raises(ValueError):
            TargetFormulaOracles(HornFormula(uni(21)))


class TestCachingOracle:
    def test_counterexample_cache_hit(self):
        u = uni(3)
        inner = DatasetOracle(family(u, "ac"))
        cached = CachingOracle(inner)
        first = cached.ask(imp(u, "a", "b"))
        assert first == aset(u, "ac")
        again = cached.ask(imp(u, "a", "b"))
        assert again == aset(u, "ac")
        assert inner.full_queries == 1
        assert cached.cache_hits == 1

    def test_confirmed_entailment_hit(self):
        u = uni(3)
        inner = DatasetOracle(family(u, "abc", "bc"))
        cached = CachingOracle(inner)
        assert cached.ask_restricted(imp(u, "a", "b"))
        assert cached.ask_restricted(imp(u, "b", "c"))
        inner_before = inner.restricted_queries
        assert cached.ask_restricted(imp(u, "a", "c"))  # entailed, no inner call
        assert inner.restricted_queries == inner_before
        assert cached.cache_hits == 1

    def test_fresh_cache_forwards(self):
        u = uni(2)
        inner = DatasetOracle(family(u, "ab"))
        cached = CachingOracle(inner)
        assert cached.ask(imp(u, "a", "b")) is None
        assert inner.full_queries == 1

    def test_transparent_on_random_query_sequences(self):
        # verdicts never change; cached counterexamples are genuine violating rows
        rng = np.random.default_rng(31)
        u = uni(5)
        for _ in range(15):
            v = random_family(rng, u, int(rng.integers(1, 6)))
            plain = DatasetOracle(v)
            cached = CachingOracle(DatasetOracle(v))
            for _ in range(80):
                premise = AttributeSet(u, int(rng.integers(0, 32)))
                if rng.random() < 0.25:
                    query = Implication(premise, BOTTOM)
                else:
                    query = Implication(premise, AttributeSet(u, int(rng.integers(0, 32))))
                if rng.random() < 0.5:
                    assert cached.ask_restricted(query) == plain.ask_restricted(query)
                else:
                    from_cache = cached.ask(query)
                    from_plain = plain.ask(query)
                    assert (from_cache is None) == (from_plain is None)
                    if from_cache is not None:
                        assert not query.satisfied_by(from_cache)
                        assert from_cache in v.rows
            assert cached.inner.queries <= plain.queries
