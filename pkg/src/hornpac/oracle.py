"""Implication oracles and the membership-query simulation built on them.

An implication oracle answers "does A -> B hold in the domain?" either
with None (valid) or with a positive counterexample: a row of the domain
containing the premise but not the conclusion.  The *restricted* form
returns only the boolean verdict.

Learner-side query streams are modelled as generators that yield
:class:`Query` objects and receive answers; :func:`drive` pumps such a
generator against a concrete oracle.  This keeps a single source of
truth for query order while letting the interactive service suspend a
learning session at any query.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Generator, Protocol, runtime_checkable

from .core import (
    BOTTOM,
    AssignmentFamily,
    AttributeSet,
    HornFormula,
    Implication,
    Universe,
    entails,
    holds_in_data,
    models,
)

#: Answer to a full implication query: None means valid.
OracleAnswer = AttributeSet | None


@dataclass(frozen=True)
class Query:
    """One implication query emitted by a learner.

    ``restricted`` queries expect a boolean answer (True = valid); full
    queries expect an :data:`OracleAnswer`.  The remaining fields are
    progress metadata for logs and the interactive service.
    """

    implication: Implication
    restricted: bool
    round: int = 0
    sample: int = 0
    budget: int = 0
    purpose: str = ""


@runtime_checkable
class ImplicationOracle(Protocol):
    """Anything able to answer implication queries over a fixed universe."""

    @property
    def universe(self) -> Universe: ...

    def ask(self, imp: Implication) -> OracleAnswer: ...

    def ask_restricted(self, imp: Implication) -> bool: ...


def drive(gen: Generator[Query, object, object], oracle: ImplicationOracle):
    """Pump a query generator against an oracle, returning the generator's result."""
    try:
        query = next(gen)
        while True:
            if query.restricted:
                answer: object = oracle.ask_restricted(query.implication)
            else:
                answer = oracle.ask(query.implication)
            query = gen.send(answer)
    except StopIteration as stop:
        return stop.value


class DatasetOracle:
    """Simulated domain expert backed by an explicit dataset.

    Valid implications are confirmed; invalid ones are answered with the
    first violating row in row order.  Restricted and full queries are
    tallied separately.
    """

    def __init__(self, data: AssignmentFamily):
        self.data = data
        self.restricted_queries = 0
        self.full_queries = 0
        # premise bits -> envelope closure bits (-1 encodes falsum)
        self._closure_memo: dict[int, int] = {}

    @property
    def universe(self) -> Universe:
        return self.data.universe

    @property
    def queries(self) -> int:
        return self.restricted_queries + self.full_queries

    def _closure_bits(self, premise_bits: int) -> int:
        memo = self._closure_memo
        cached = memo.get(premise_bits)
        if cached is not None:
            return cached
        acc = -1
        for row in self.data.rows:
            row_bits = row.bits
            if premise_bits & ~row_bits:
                continue
            acc &= row_bits
            if acc == premise_bits:
                break
        if len(memo) > 1_000_000:
            memo.clear()
        memo[premise_bits] = acc
        return acc

    def ask(self, imp: Implication) -> OracleAnswer:
        self.full_queries += 1
        return holds_in_data(self.data, imp)

    def ask_restricted(self, imp: Implication) -> bool:
        self.restricted_queries += 1
        closure = self._closure_bits(imp.premise.bits)
        if imp.conclusion is BOTTOM:
            return closure == -1
        if closure == -1:
            return True
        return imp.conclusion.bits & ~closure == 0


class TargetFormulaOracles:
    """Equivalence and membership oracles for an explicit Horn target.

    Works by exhaustive model comparison, so it is limited to small
    universes; it exists to validate the exact learner.  The equivalence
    counterexample is the assignment with the smallest bit mask (bit i =
    attribute i), which makes runs deterministic.
    """

    MAX_ATTRIBUTES = 20

    def __init__(self, target: HornFormula):
        if len(target.universe) > self.MAX_ATTRIBUTES:
            raise ValueError(
                f"target universe of size {len(target.universe)} exceeds "
                f"{self.MAX_ATTRIBUTES}; exhaustive oracles would not terminate in time"
            )
        self.target = target
        self.membership_queries = 0
        self.equivalence_queries = 0

    @property
    def universe(self) -> Universe:
        return self.target.universe

    def member(self, a: AttributeSet) -> bool:
        self.membership_queries += 1
        return models(a, self.target)

    def equivalent(self, h: HornFormula) -> AttributeSet | None:
        self.equivalence_queries += 1
        for a in self.universe.subsets():
            if models(a, h) != models(a, self.target):
                return a
        return None


#: Sentinel: the cache cannot answer the query.
CACHE_MISS = object()


class QueryCache:
    """Cache of confirmed implications and received counterexamples.

    Sound by construction: a stored example answers a query only if it
    genuinely violates it, and a cached confirmation only if the
    confirmed implications entail the query.
    """

    def __init__(
        self,
        universe: Universe,
        cache_counterexamples: bool = True,
        cache_confirmed: bool = True,
    ):
        self.universe = universe
        self.cache_counterexamples = cache_counterexamples
        self.cache_confirmed = cache_confirmed
        self.examples: list[AttributeSet] = []
        self.confirmed = HornFormula(universe)
        self.hits = 0

    def probe(self, imp: Implication):
        """None (valid), a violating example, or :data:`CACHE_MISS`."""
        if self.cache_counterexamples:
            for x in self.examples:
                if not imp.satisfied_by(x):
                    self.hits += 1
                    return x
        if self.cache_confirmed and len(self.confirmed) and entails(self.confirmed, imp):
            self.hits += 1
            return None
        return CACHE_MISS

    def record_valid(self, imp: Implication) -> None:
        if self.cache_confirmed:
            self.confirmed = self.confirmed.appended(imp)

    def record_example(self, x: AttributeSet) -> None:
        if self.cache_counterexamples and x not in self.examples:
            self.examples.append(x)


class CachingOracle:
    """Wrap an oracle with the query cache, leaving answers observably unchanged.

    Only the number of queries reaching the inner oracle changes; cached
    counterexamples are genuine domain rows and cached confirmations are
    entailed by confirmed implications.
    """

    def __init__(
        self,
        inner: ImplicationOracle,
        cache_counterexamples: bool = True,
        cache_confirmed: bool = True,
    ):
        self.inner = inner
        self.cache = QueryCache(inner.universe, cache_counterexamples, cache_confirmed)
        self.restricted_queries = 0
        self.full_queries = 0

    @property
    def universe(self) -> Universe:
        return self.inner.universe

    @property
    def cache_hits(self) -> int:
        return self.cache.hits

    def ask(self, imp: Implication) -> OracleAnswer:
        self.full_queries += 1
        hit = self.cache.probe(imp)
        if hit is not CACHE_MISS:
            return hit  # None or a stored example
        answer = self.inner.ask(imp)
        if answer is None:
            self.cache.record_valid(imp)
        else:
            self.cache.record_example(answer)
        return answer

    def ask_restricted(self, imp: Implication) -> bool:
        self.restricted_queries += 1
        hit = self.cache.probe(imp)
        if hit is not CACHE_MISS:
            return hit is None
        valid = self.inner.ask_restricted(imp)
        if valid:
            self.cache.record_valid(imp)
        return valid


def membership_probes(
    a: AttributeSet,
    round: int = 0,
    sample: int = 0,
    budget: int = 0,
    purpose: str = "membership",
) -> Generator[Query, object, bool]:
    """Restricted-query plan deciding membership of ``a`` in the intersection closure.

    Asks ``a -> falsum`` first, then ``a -> {x}`` for every missing
    attribute in universe index order, answering False at the first
    valid implication.
    """
    universe = a.universe
    valid = yield Query(
        Implication(a, BOTTOM), True, round, sample, budget, purpose
    )
    if valid is True:
        return False
    missing = ~a.bits & universe.full_mask
    while missing:
        low = missing & -missing
        missing ^= low
        valid = yield Query(
            Implication(a, AttributeSet(universe, low)), True, round, sample, budget, purpose
        )
        if valid is True:
            return False
    return True


def is_member(a: AttributeSet, oracle: ImplicationOracle) -> bool:
    """True iff ``a`` belongs to the intersection closure of the oracle's domain."""
    return drive(membership_probes(a), oracle)
