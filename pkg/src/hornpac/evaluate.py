"""Sampled quality measures and the seeded experiment harness.

Precision asks how often a formula infers only knowledge valid in the
data; recall asks how often the knowledge inferred from an assignment is
complete with respect to the envelope.  Both are estimated on uniform
subsets drawn with replacement, with the sample size chosen from
Hoeffding's inequality.

The experiment harness replays the learner over an (epsilon, delta)
grid with derived seeds: the master seed spawns one ``SeedSequence``
child per run, and each child in turn yields the learner seed and the
evaluation stream, so whole reports are reproducible from one integer.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .core import (
    BOTTOM,
    AssignmentFamily,
    AttributeSet,
    HornFormula,
    Universe,
    env_closure,
    forward_closure,
    holds_in_data,
)
from .learner import LearnerConfig, pac_horn_approximation, random_subset
from .oracle import DatasetOracle


@dataclass(frozen=True)
class EvalConfig:
    """Estimator settings: confidence eta, tolerance t, optional explicit sample count."""

    eta: float = 0.001
    t: float = 0.01
    samples: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.eta < 1.0:
            raise ValueError(f"eta must be in (0, 1), got {self.eta}")
        if not 0.0 < self.t < 1.0:
            raise ValueError(f"t must be in (0, 1), got {self.t}")
        if self.samples is not None and self.samples <= 0:
            raise ValueError("explicit sample count must be positive")

    def sample_size(self) -> int:
        if self.samples is not None:
            return self.samples
        return hoeffding_samples(self.eta, self.t)


def hoeffding_samples(eta: float, t: float) -> int:
    """Samples needed so the estimate undershoots by more than t with probability < eta."""
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must be in (0, 1), got {eta}")
    if not 0.0 < t < 1.0:
        raise ValueError(f"t must be in (0, 1), got {t}")
    return math.ceil(math.log(1.0 / eta) / (2.0 * t * t))


def estimate_precision(
    h: HornFormula, v: AssignmentFamily, n: int, rng: np.random.Generator
) -> float:
    """Fraction of sampled subsets whose hypothesis closure is valid in the data.

    A falsum closure counts as valid exactly when the data contains no
    row above the sample.  Checked against the envelope closure
    directly; no oracle budget is consumed.
    """
    if n <= 0:
        raise ValueError("sample count must be positive")
    hits = 0
    for _ in range(n):
        a = random_subset(rng, h.universe)
        closed = forward_closure(h, a)
        env = env_closure(v, a)
        if closed is BOTTOM:
            hits += env is BOTTOM
        elif env is BOTTOM:
            hits += 1  # no row contains the sample: any implication from it is valid
        else:
            hits += closed.bits & ~env.bits == 0
    return hits / n


def estimate_recall(
    h: HornFormula, v: AssignmentFamily, n: int, rng: np.random.Generator
) -> float:
    """Fraction of sampled subsets whose envelope closure the hypothesis entails."""
    if n <= 0:
        raise ValueError("sample count must be positive")
    hits = 0
    for _ in range(n):
        a = random_subset(rng, h.universe)
        closed = forward_closure(h, a)
        if closed is BOTTOM:
            hits += 1
            continue
        env = env_closure(v, a)
        if env is BOTTOM:
            continue
        hits += env.bits & ~closed.bits == 0
    return hits / n


def fraction_valid(h: HornFormula, v: AssignmentFamily) -> float:
    """Share of the formula's implications valid in the data; 1.0 for the empty formula."""
    if len(h) == 0:
        return 1.0
    valid = sum(1 for imp in h if holds_in_data(v, imp) is None)
    return valid / len(h)


def dataset_density(v: AssignmentFamily) -> float:
    """Mean incidence: fraction of set bits over rows times attributes."""
    cells = len(v.rows) * len(v.universe)
    if cells == 0:
        return 0.0
    return sum(row.bits.bit_count() for row in v.rows) / cells


def generate_random_dataset(
    rows: int, universe: Universe, density: float, rng: np.random.Generator
) -> AssignmentFamily:
    """Independent coin flips at the given density for every cell."""
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must be in [0, 1], got {density}")
    n = len(universe)
    made = []
    for _ in range(rows):
        if n == 0:
            made.append(universe.empty())
            continue
        draws = rng.random(n) < density
        bits = int.from_bytes(
            np.packbits(draws.astype(np.uint8), bitorder="little").tobytes(), "little"
        )
        made.append(AttributeSet(universe, bits))
    return AssignmentFamily(universe, made)


@dataclass
class RunRecord:
    """One learner run within an experiment grid."""

    epsilon: float
    delta: float
    repetition: int
    seed: int
    basis_size: int
    fraction_valid: float
    precision: float
    recall: float
    restricted_queries: int
    full_queries: int
    terminated: bool
    wall_time: float = 0.0
    error: str | None = None


@dataclass
class CellSummary:
    epsilon: float
    delta: float
    runs: int
    basis_size_mean: float
    basis_size_std: float
    fraction_valid_mean: float
    fraction_valid_std: float
    precision_mean: float
    precision_std: float
    recall_mean: float
    recall_std: float
    queries_mean: float


@dataclass
class ExperimentReport:
    """Per-run records plus per-cell aggregates, recomputable from the records."""

    master_seed: int
    eval_samples: int
    records: list[RunRecord] = field(default_factory=list)

    def summarize(self) -> list[CellSummary]:
        cells: dict[tuple[float, float], list[RunRecord]] = {}
        for record in self.records:
            if record.error is not None:
                continue
            cells.setdefault((record.epsilon, record.delta), []).append(record)
        out = []
        for (eps, delta), recs in sorted(cells.items()):
            def stats(values: Sequence[float]) -> tuple[float, float]:
                arr = np.asarray(values, dtype=float)
                return float(arr.mean()), float(arr.std())

            bs = stats([r.basis_size for r in recs])
            dp = stats([r.fraction_valid for r in recs])
            pr = stats([r.precision for r in recs])
            sr = stats([r.recall for r in recs])
            queries = float(
                np.mean([r.restricted_queries + r.full_queries for r in recs])
            )
            out.append(
                CellSummary(
                    eps, delta, len(recs),
                    bs[0], bs[1], dp[0], dp[1], pr[0], pr[1], sr[0], sr[1], queries,
                )
            )
        return out


def derived_seeds(master_seed: int, count: int) -> list[np.random.SeedSequence]:
    """Independent substreams for a batch of runs, one spawn child per run."""
    return np.random.SeedSequence(master_seed).spawn(count)


def run_experiment(
    dataset: AssignmentFamily,
    grid: Iterable[tuple[float, float]],
    repetitions: int,
    eval_config: EvalConfig,
    mode: str = "approx",
    valid_hypothesis: bool = False,
    max_counterexamples: int | None = None,
) -> ExperimentReport:
    """Repeated seeded learner runs over an (epsilon, delta) grid.

    Per-run failures are recorded, not fatal.  Deterministic given the
    evaluation config's seed.
    """
    grid = list(grid)
    if repetitions <= 0:
        raise ValueError("repetitions must be positive")
    n_samples = eval_config.sample_size()
    report = ExperimentReport(master_seed=eval_config.seed, eval_samples=n_samples)
    children = derived_seeds(eval_config.seed, len(grid) * repetitions)
    run_index = 0
    for epsilon, delta in grid:
        for repetition in range(repetitions):
            learner_ss, eval_ss = children[run_index].spawn(2)
            run_index += 1
            learner_seed = int(learner_ss.generate_state(1, np.uint64)[0])
            started = time.perf_counter()
            try:
                config = LearnerConfig(
                    epsilon=epsilon,
                    delta=delta,
                    mode=mode,
                    valid_hypothesis=valid_hypothesis,
                    seed=learner_seed,
                    max_counterexamples=max_counterexamples,
                )
                oracle = DatasetOracle(dataset)
                formula, run = pac_horn_approximation(oracle, config)
                eval_rng = np.random.default_rng(eval_ss)
                record = RunRecord(
                    epsilon=epsilon,
                    delta=delta,
                    repetition=repetition,
                    seed=learner_seed,
                    basis_size=len(formula),
                    fraction_valid=fraction_valid(formula, dataset),
                    precision=estimate_precision(formula, dataset, n_samples, eval_rng),
                    recall=estimate_recall(formula, dataset, n_samples, eval_rng),
                    restricted_queries=run.restricted_queries,
                    full_queries=run.full_queries,
                    terminated=run.terminated,
                    wall_time=time.perf_counter() - started,
                )
            except Exception as exc:  # per-run failures are data, not crashes
                record = RunRecord(
                    epsilon=epsilon,
                    delta=delta,
                    repetition=repetition,
                    seed=learner_seed,
                    basis_size=0,
                    fraction_valid=0.0,
                    precision=0.0,
                    recall=0.0,
                    restricted_queries=0,
                    full_queries=0,
                    terminated=False,
                    wall_time=time.perf_counter() - started,
                    error=f"{type(exc).__name__}: {exc}",
                )
            report.records.append(record)
    return report
