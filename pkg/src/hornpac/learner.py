"""Exact and PAC learners for Horn envelopes driven by implication queries.

The PAC learner refines a hypothesis from counterexamples delivered by a
sampled equivalence test: membership of a sample in the domain's
intersection closure is decided through restricted implication queries,
and a mismatch with the hypothesis's own model check yields a
counterexample.  The strong variant manufactures counterexamples from
any sample at which the hypothesis closure and the envelope closure
disagree.

Learning sessions are resumable state machines: the core loops are
generators yielding :class:`~hornpac.oracle.Query` objects, so a session
can suspend at any oracle call and resume with the answer.  Synchronous
entry points pump these generators against a concrete oracle.

Randomness contract: subsets are drawn from a seeded ``numpy`` PCG64
generator (``numpy.random.default_rng``), one ``integers(0, 2, size=n)``
draw per subset with array position equal to universe index.  Derived
substreams for batch experiments come from ``SeedSequence.spawn``; see
:mod:`hornpac.evaluate`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Generator

import numpy as np

from .core import (
    BOTTOM,
    AttributeSet,
    ClosureResult,
    HornFormula,
    Implication,
    Universe,
    entails,
    forward_closure,
    meet,
    models,
)
from .oracle import (
    CACHE_MISS,
    ImplicationOracle,
    Query,
    QueryCache,
    drive,
    membership_probes,
)

MODE_APPROX = "approx"
MODE_STRONG = "strong"

_MAX_SAMPLE_COUNT = 2**63 - 1


class LearnerError(RuntimeError):
    """Raised when a learning run cannot make progress (inconsistent oracles)."""


@dataclass(frozen=True)
class LearnerConfig:
    """Parameters of one learning run."""

    epsilon: float
    delta: float
    mode: str = MODE_APPROX
    cache_counterexamples: bool = False
    cache_confirmed: bool = False
    valid_hypothesis: bool = False
    merge_confirmed: bool = False
    seed: int = 0
    max_counterexamples: int | None = None

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError(f"epsilon must be in (0, 1], got {self.epsilon}")
        if not 0.0 < self.delta <= 1.0:
            raise ValueError(f"delta must be in (0, 1], got {self.delta}")
        if self.mode not in (MODE_APPROX, MODE_STRONG):
            raise ValueError(f"mode must be {MODE_APPROX!r} or {MODE_STRONG!r}, got {self.mode!r}")
        if self.merge_confirmed and not self.cache_confirmed:
            raise ValueError("merge_confirmed requires cache_confirmed")
        if self.max_counterexamples is not None and self.max_counterexamples <= 0:
            raise ValueError("max_counterexamples must be positive")


@dataclass
class QueryCounters:
    """Tallies of queries emitted to the oracle (cache hits excluded)."""

    restricted: int = 0
    full: int = 0
    samples: int = 0


@dataclass
class RunReport:
    """Outcome statistics of one learning run.

    ``wall_time`` is informational and excluded from the canonical
    serialized form so that runs with equal seeds produce byte-identical
    artifacts.
    """

    epsilon: float
    delta: float
    mode: str
    seed: int
    valid_hypothesis: bool
    cache_counterexamples: bool
    cache_confirmed: bool
    merge_confirmed: bool
    implications: int
    rounds: int
    samples: int
    negative_counterexamples: int
    positive_counterexamples: int
    restricted_queries: int
    full_queries: int
    cache_hits: int
    terminated: bool
    wall_time: float = 0.0

    @property
    def counterexamples(self) -> int:
        return self.negative_counterexamples + self.positive_counterexamples

    @property
    def total_queries(self) -> int:
        return self.restricted_queries + self.full_queries


def sample_count(epsilon: float, delta: float, i: int) -> int:
    """Sample budget ceil((1/epsilon) * (i + ln(1/delta))) of the i-th equivalence round."""
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must be in (0, 1], got {delta}")
    if i < 1:
        raise ValueError(f"equivalence-round index must be at least 1, got {i}")
    count = math.ceil((1.0 / epsilon) * (i + math.log(1.0 / delta)))
    if count > _MAX_SAMPLE_COUNT:
        raise OverflowError(f"sample count {count} exceeds the platform integer range")
    return count


def random_subset(rng: np.random.Generator, universe: Universe) -> AttributeSet:
    """Uniformly random subset: each attribute kept with probability 1/2.

    Consumes exactly one ``integers(0, 2, size=n)`` draw, bit ``i`` of
    the result taken from array position ``i``; this is the
    reproducibility contract seeds rely on.
    """
    n = len(universe)
    if n == 0:
        return universe.empty()
    draws = rng.integers(0, 2, size=n, dtype=np.uint8)
    bits = int.from_bytes(np.packbits(draws, bitorder="little").tobytes(), "little")
    return AttributeSet(universe, bits)


# ---------------------------------------------------------------------------
# Hypothesis refinement


def refine_positive(h: HornFormula, x: AttributeSet) -> HornFormula:
    """Shrink the conclusion of every implication violated by ``x`` to its meet with ``x``.

    A falsum conclusion stands for the full universe plus falsum, so it
    meets down to ``x`` itself.  Afterwards ``x`` models the formula.
    """
    out = []
    for imp in h:
        if imp.satisfied_by(x):
            out.append(imp)
        else:
            out.append(Implication(imp.premise, meet(imp.conclusion, x)))
    return HornFormula(h.universe, out)


def refine_negative(
    h: HornFormula, x: AttributeSet, member: Callable[[AttributeSet], bool]
) -> HornFormula:
    """First-match premise refinement against a negative counterexample.

    Scans in insertion order for an implication whose premise meets
    ``x`` to a strictly smaller non-member set, replacing it in place;
    appends ``x -> falsum`` when the scan fails.
    """
    for idx, imp in enumerate(h):
        c_bits = imp.premise.bits & x.bits
        if c_bits == imp.premise.bits:
            continue
        candidate = AttributeSet(h.universe, c_bits)
        if not member(candidate):
            return h.replaced(idx, Implication(candidate, imp.conclusion))
    return h.appended(Implication(x, BOTTOM))


def domain_closure_via_queries(a: AttributeSet, oracle: ImplicationOracle) -> ClosureResult:
    """Envelope closure of ``a`` recovered through restricted implication queries.

    Asks ``a -> falsum`` first; otherwise each attribute whose
    implication from ``a`` is confirmed joins the closure.
    """
    return drive(_closure_probes(a), oracle)


def valid_hypothesis_refine(
    h: HornFormula, x: AttributeSet, oracle: ImplicationOracle
) -> HornFormula:
    """Append the domain-valid implication from ``x`` instead of ``x -> falsum``.

    Used by the valid-hypothesis variant once the refinement scan has
    failed: the appended conclusion is the domain closure of ``x``, so
    the hypothesis stays valid in the domain.
    """
    return h.appended(Implication(x, domain_closure_via_queries(x, oracle)))


# ---------------------------------------------------------------------------
# Resumable query plans


def _closure_probes(
    a: AttributeSet, round: int = 0, sample: int = 0, budget: int = 0
) -> Generator[Query, object, ClosureResult]:
    universe = a.universe
    valid = yield Query(Implication(a, BOTTOM), True, round, sample, budget, "closure")
    if valid is True:
        return BOTTOM
    bits = a.bits
    missing = ~a.bits & universe.full_mask
    while missing:
        low = missing & -missing
        missing ^= low
        valid = yield Query(
            Implication(a, AttributeSet(universe, low)), True, round, sample, budget, "closure"
        )
        if valid is True:
            bits |= low
    if bits == a.bits:
        return a
    return AttributeSet(universe, bits)


def _approx_equivalence(
    h: HornFormula,
    epsilon: float,
    delta: float,
    i: int,
    rng: np.random.Generator,
    counters: QueryCounters,
) -> Generator[Query, object, AttributeSet | None]:
    """Sampled equivalence test: a counterexample, or None when all samples agree."""
    universe = h.universe
    budget = sample_count(epsilon, delta, i)
    for j in range(1, budget + 1):
        x = random_subset(rng, universe)
        counters.samples += 1
        member = yield from membership_probes(x, i, j, budget, "sample-membership")
        if models(x, h) != member:
            return x
    return None


def _strong_equivalence(
    h: HornFormula,
    epsilon: float,
    delta: float,
    i: int,
    rng: np.random.Generator,
    counters: QueryCounters,
) -> Generator[Query, object, AttributeSet | None]:
    """Strong sampled equivalence test comparing the two closure operators.

    For each sample X with hypothesis closure Y, an invalid X -> Y
    returns the oracle's row as a positive counterexample; a valid one
    with Y outside the intersection closure returns Y as a negative
    counterexample.  A falsum Y needs no membership check: falsum
    belongs to the extended family by convention.
    """
    universe = h.universe
    budget = sample_count(epsilon, delta, i)
    for j in range(1, budget + 1):
        x = random_subset(rng, universe)
        counters.samples += 1
        y = forward_closure(h, x)
        answer = yield Query(Implication(x, y), False, i, j, budget, "closure-check")
        if isinstance(answer, AttributeSet):
            return answer  # positive counterexample from the oracle
        if y is BOTTOM:
            continue
        member = yield from membership_probes(y, i, j, budget, "sample-membership")
        if not member:
            return y  # negative counterexample
    return None


def _negative_branch(
    h: HornFormula,
    x: AttributeSet,
    valid_hypothesis: bool,
    i: int,
) -> Generator[Query, object, HornFormula]:
    """Refine against a negative counterexample, querying membership as needed."""
    for idx, imp in enumerate(h):
        c_bits = imp.premise.bits & x.bits
        if c_bits == imp.premise.bits:
            continue
        candidate = AttributeSet(h.universe, c_bits)
        member = yield from membership_probes(candidate, i, 0, 0, "refine-membership")
        if member:
            continue
        if valid_hypothesis:
            conclusion = yield from _closure_probes(candidate, i)
        else:
            conclusion = imp.conclusion
        return h.replaced(idx, Implication(candidate, conclusion))
    if valid_hypothesis:
        conclusion = yield from _closure_probes(x, i)
    else:
        conclusion = BOTTOM
    return h.appended(Implication(x, conclusion))


def _pac_generator(
    config: LearnerConfig,
    universe: Universe,
    cache: QueryCache | None,
    counters: QueryCounters,
    on_hypothesis: Callable[[HornFormula], None] | None = None,
) -> Generator[Query, object, tuple[HornFormula, RunReport]]:
    rng = np.random.default_rng(config.seed)
    h = HornFormula(universe)
    equivalence = _approx_equivalence if config.mode == MODE_APPROX else _strong_equivalence
    i = 1
    rounds = 0
    negative = positive = 0
    merged = 0
    terminated = False
    start = time.perf_counter()
    while True:
        counterexample = yield from equivalence(h, config.epsilon, config.delta, i, rng, counters)
        rounds += 1
        if counterexample is None:
            terminated = True
            break
        if models(counterexample, h):
            h = yield from _negative_branch(h, counterexample, config.valid_hypothesis, i)
            negative += 1
        else:
            h = refine_positive(h, counterexample)
            positive += 1
        if on_hypothesis is not None:
            on_hypothesis(h)
        i += 1
        if config.merge_confirmed and cache is not None:
            while merged < len(cache.confirmed):
                imp = cache.confirmed[merged].normalized()
                merged += 1
                if not entails(h, imp):
                    h = h.appended(imp)
        if (
            config.max_counterexamples is not None
            and negative + positive >= config.max_counterexamples
        ):
            break
    report = RunReport(
        epsilon=config.epsilon,
        delta=config.delta,
        mode=config.mode,
        seed=config.seed,
        valid_hypothesis=config.valid_hypothesis,
        cache_counterexamples=config.cache_counterexamples,
        cache_confirmed=config.cache_confirmed,
        merge_confirmed=config.merge_confirmed,
        implications=len(h),
        rounds=rounds,
        samples=counters.samples,
        negative_counterexamples=negative,
        positive_counterexamples=positive,
        restricted_queries=counters.restricted,
        full_queries=counters.full,
        cache_hits=cache.hits if cache is not None else 0,
        terminated=terminated,
        wall_time=time.perf_counter() - start,
    )
    return h, report


def instrumented(
    gen: Generator[Query, object, object],
    cache: QueryCache | None,
    counters: QueryCounters,
    on_cache_hit: Callable[[Query, object], None] | None = None,
) -> Generator[Query, object, object]:
    """Middleware between a query plan and its oracle.

    Answers from the cache when possible, tallies queries that actually
    go out, normalizes the restricted-answer protocol (an attribute set
    sent back to a restricted query is recorded as a counterexample and
    collapsed to False) and records fresh answers into the cache.
    """
    try:
        query = next(gen)
        while True:
            implication = query.implication
            if cache is not None:
                hit = cache.probe(implication)
                if hit is not CACHE_MISS:
                    answer: object = (hit is None) if query.restricted else hit
                    if on_cache_hit is not None:
                        on_cache_hit(query, answer)
                    query = gen.send(answer)
                    continue
            raw = yield query
            if query.restricted:
                counters.restricted += 1
                if isinstance(raw, AttributeSet):
                    if cache is not None:
                        cache.record_example(raw)
                    answer = False
                elif raw is True:
                    if cache is not None:
                        cache.record_valid(implication)
                    answer = True
                elif raw is False:
                    answer = False
                else:
                    raise TypeError(f"restricted query answered with {raw!r}")
            else:
                counters.full += 1
                if raw is None:
                    if cache is not None:
                        cache.record_valid(implication)
                elif isinstance(raw, AttributeSet):
                    if cache is not None:
                        cache.record_example(raw)
                else:
                    raise TypeError(f"full query answered with {raw!r}")
                answer = raw
            query = gen.send(answer)
    except StopIteration as stop:
        return stop.value


@dataclass
class SessionHandles:
    """A resumable learning run plus live views of its counters and cache."""

    generator: Generator[Query, object, tuple[HornFormula, RunReport]]
    counters: QueryCounters
    cache: QueryCache | None


def open_learning_session(
    config: LearnerConfig,
    universe: Universe,
    on_cache_hit: Callable[[Query, object], None] | None = None,
    on_hypothesis: Callable[[HornFormula], None] | None = None,
) -> SessionHandles:
    """Wire up a resumable learning run, exposing its counters and cache.

    The interactive service uses the hooks to log cache-answered queries
    and to snapshot the evolving hypothesis.
    """
    counters = QueryCounters()
    cache = None
    if config.cache_counterexamples or config.cache_confirmed:
        cache = QueryCache(universe, config.cache_counterexamples, config.cache_confirmed)
    generator = instrumented(
        _pac_generator(config, universe, cache, counters, on_hypothesis),
        cache,
        counters,
        on_cache_hit,
    )
    return SessionHandles(generator, counters, cache)


def learning_session(
    config: LearnerConfig, universe: Universe
) -> Generator[Query, object, tuple[HornFormula, RunReport]]:
    """A fully wired resumable learning run: pump it, or drive it with an oracle."""
    return open_learning_session(config, universe).generator


def pac_horn_approximation(
    oracle: ImplicationOracle, config: LearnerConfig
) -> tuple[HornFormula, RunReport]:
    """Run the PAC learner to completion against an oracle."""
    return drive(learning_session(config, oracle.universe), oracle)


def is_approximately_equivalent(
    h: HornFormula,
    oracle: ImplicationOracle,
    epsilon: float,
    delta: float,
    i: int,
    rng: np.random.Generator,
) -> AttributeSet | None:
    """One plain equivalence round; None means approximately equivalent."""
    counters = QueryCounters()
    return drive(
        instrumented(_approx_equivalence(h, epsilon, delta, i, rng, counters), None, counters),
        oracle,
    )


def is_strongly_approximately_equivalent(
    h: HornFormula,
    oracle: ImplicationOracle,
    epsilon: float,
    delta: float,
    i: int,
    rng: np.random.Generator,
) -> AttributeSet | None:
    """One strong equivalence round; None means strongly approximately equivalent."""
    counters = QueryCounters()
    return drive(
        instrumented(_strong_equivalence(h, epsilon, delta, i, rng, counters), None, counters),
        oracle,
    )


def horn1(
    equivalent: Callable[[HornFormula], AttributeSet | None],
    member: Callable[[AttributeSet], bool],
    universe: Universe,
    max_counterexamples: int = 100_000,
    on_refine: Callable[[HornFormula], None] | None = None,
) -> HornFormula:
    """Exact learner with equivalence and membership oracles.

    Against oracles consistent with a Horn target this returns the
    target's canonical basis.  ``on_refine`` observes the hypothesis
    after each counterexample; the cap guards against inconsistent
    oracles that would prevent termination.
    """
    h = HornFormula(universe)
    seen = 0
    while True:
        x = equivalent(h)
        if x is None:
            return h
        seen += 1
        if seen > max_counterexamples:
            raise LearnerError(
                f"no convergence after {max_counterexamples} counterexamples; "
                "are the oracles consistent with a Horn target?"
            )
        if models(x, h):
            h = refine_negative(h, x, member)
        else:
            h = refine_positive(h, x)
        if on_refine is not None:
            on_refine(h)
