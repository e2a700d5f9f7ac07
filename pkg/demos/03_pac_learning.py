"""PAC learning of a Horn envelope through implication queries.

Run with: python demos/03_pac_learning.py
"""

from hornpac import (
    DatasetOracle,
    LearnerConfig,
    fraction_valid,
    pac_horn_approximation,
)
from hornpac.exact import reduced
from hornpac.io import load_context, packaged_dataset_path, packaged_scaling_path

doc = load_context(packaged_dataset_path("zoo"), packaged_scaling_path("zoo"))

# The dataset plays the domain expert: it confirms valid implications and
# refutes invalid ones with the first violating animal.
oracle = DatasetOracle(doc.family)
config = LearnerConfig(epsilon=0.1, delta=0.1, seed=42, valid_hypothesis=True)
hypothesis, report = pac_horn_approximation(oracle, config)

print(f"learned {len(hypothesis)} implications in {report.rounds} equivalence rounds")
print(f"queries to the expert: {report.total_queries} "
      f"({report.samples} samples, {report.counterexamples} counterexamples)")
print(f"fraction of implications valid in the data: "
      f"{fraction_valid(hypothesis, doc.family):.2f}")
print("a few learned rules (premises stripped from conclusions):")
for rule in list(reduced(hypothesis))[:6]:
    print("   ", rule)

# Strong mode manufactures counterexamples from closure disagreements and
# carries the stronger guarantee on the closure operators themselves.
strong_config = LearnerConfig(epsilon=0.1, delta=0.1, seed=42, mode="strong")
strong_hypothesis, strong_report = pac_horn_approximation(
    DatasetOracle(doc.family), strong_config
)
print(f"\nstrong mode: {len(strong_hypothesis)} implications, "
      f"{strong_report.total_queries} queries "
      f"({strong_report.full_queries} full, {strong_report.restricted_queries} restricted)")

# Caching confirmed implications and counterexamples cuts the query bill.
cached_config = LearnerConfig(
    epsilon=0.1, delta=0.1, seed=42, valid_hypothesis=True,
    cache_counterexamples=True, cache_confirmed=True,
)
_, cached_report = pac_horn_approximation(DatasetOracle(doc.family), cached_config)
print(f"\nwith caching: {cached_report.total_queries} queries reach the expert "
      f"({cached_report.cache_hits} cache hits)")
