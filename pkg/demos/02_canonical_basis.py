"""Exact canonical bases: the minimum implication representation of a dataset.

Run with: python demos/02_canonical_basis.py
"""

import time

from hornpac import (
    brute_force_dg,
    characteristic_models,
    dataset_closure,
    dg_basis,
    reduced,
)
from hornpac.core import AssignmentFamily, Universe
from hornpac.io import load_context, packaged_dataset_path, packaged_scaling_path

# Tiny example first: two routes to the same canonical basis.
universe = Universe(["a", "b", "c"])
rows = AssignmentFamily(universe, [
    universe.make(["a", "b"]),
    universe.make(["b", "c"]),
    universe.make(["b"]),
])
closure = dataset_closure(rows)

fast = dg_basis(closure, universe)          # lectic next-closure traversal
slow = brute_force_dg(closure, universe)    # literal pseudo-closed recursion
assert list(fast) == list(slow)
print("canonical basis of the toy dataset:")
for rule in fast:
    print("   ", rule)
print("reduced presentation:")
for rule in reduced(fast):
    print("   ", rule)

print("characteristic models:", characteristic_models(rows))

# The Zoo dataset: 101 animals, 28 binary attributes after nominal scaling.
doc = load_context(packaged_dataset_path("zoo"), packaged_scaling_path("zoo"))
started = time.perf_counter()
zoo_basis = dg_basis(dataset_closure(doc.family), doc.universe)
elapsed = time.perf_counter() - started
print(f"\nzoo canonical basis: {len(zoo_basis)} implications in {elapsed:.2f}s")
print("first three rules:")
for rule in list(reduced(zoo_basis))[:3]:
    print("   ", rule)
