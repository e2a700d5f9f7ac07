"""Quality measures and the seeded experiment harness.

Run with: python demos/04_evaluation.py
"""

import numpy as np

from hornpac import (
    EvalConfig,
    dataset_closure,
    dg_basis,
    estimate_precision,
    estimate_recall,
    generate_random_dataset,
    hoeffding_samples,
    run_experiment,
)
from hornpac.core import Universe
from hornpac.evaluate import dataset_density
from hornpac.io import (
    load_context,
    packaged_dataset_path,
    packaged_scaling_path,
    summary_table,
)

# Hoeffding sizing: how many uniform samples make the estimates trustworthy.
print("samples for eta=0.001, t=0.01:", hoeffding_samples(0.001, 0.01))

doc = load_context(packaged_dataset_path("zoo"), packaged_scaling_path("zoo"))
envelope = dg_basis(dataset_closure(doc.family), doc.universe)
rng = np.random.default_rng(7)
n = 5000
print("exact envelope scores: precision",
      estimate_precision(envelope, doc.family, n, rng),
      "recall", estimate_recall(envelope, doc.family, n, rng))

# Random datasets with the same shape and density as a reference dataset.
density = dataset_density(doc.family)
print(f"\nzoo density: {density:.3f}")
random_universe = Universe([f"a{k}" for k in range(12)])
random_rows = generate_random_dataset(60, random_universe, density, rng)
print("random dataset density:", round(dataset_density(random_rows), 3))

# A small experiment grid over the random data, reproducible from one seed.
report = run_experiment(
    random_rows,
    grid=[(0.1, 0.1), (0.5, 0.1)],
    repetitions=3,
    eval_config=EvalConfig(samples=2000, seed=123),
    valid_hypothesis=True,
)
print("\nexperiment summary (SR recall, DP valid fraction, BS basis size):")
print(summary_table(report), end="")
