"""Closure algebra basics: universes, assignments, implications, envelopes.

Run with: python demos/01_closure_algebra.py
"""

from hornpac import (
    BOTTOM,
    AssignmentFamily,
    HornFormula,
    Implication,
    Universe,
    entails,
    env_closure,
    forward_closure,
    holds_in_data,
    intersection_closure,
    models,
)

universe = Universe(["feathers", "flies", "lays_eggs", "swims"])
make = universe.make

# A Horn formula is an ordered list of implications; conclusions may be falsum.
birdlore = HornFormula(universe, [
    Implication(make(["feathers"]), make(["lays_eggs"])),
    Implication(make(["flies", "swims"]), make(["feathers"])),
    Implication(make(["feathers", "swims", "flies", "lays_eggs"]), BOTTOM),
])

print("formula:")
for rule in birdlore:
    print("   ", rule)

# forward_closure saturates an assignment under the implications
start = make(["flies", "swims"])
print("closure of", start, "->", forward_closure(birdlore, start))

# models/entailment
print("is {feathers, lays_eggs} a model?", models(make(["feathers", "lays_eggs"]), birdlore))
probe = Implication(make(["feathers", "flies", "swims"]), BOTTOM)
print("does the formula entail", probe, "?", entails(birdlore, probe))

# A dataset is an ordered list of assignments; its Horn envelope is
# determined by the intersection closure of the rows.
observations = AssignmentFamily(universe, [
    make(["feathers", "flies", "lays_eggs"]),   # sparrow
    make(["feathers", "lays_eggs", "swims"]),   # penguin
    make(["lays_eggs", "swims"]),               # turtle
])

print("\ndataset rows:", list(observations))
print("intersection closure:", sorted(intersection_closure(observations), key=len))

# env_closure evaluates the envelope's closure operator straight from data
for labels in (["feathers"], ["swims"], ["flies", "swims"]):
    print(f"envelope closure of {labels}:", env_closure(observations, make(labels)))

# holds_in_data answers implication queries the way a domain expert would
query = Implication(make(["flies"]), make(["feathers"]))
print("does {flies} -> {feathers} hold?", holds_in_data(observations, query))
query = Implication(make(["swims"]), make(["feathers"]))
print("does {swims} -> {feathers} hold? counterexample:",
      holds_in_data(observations, query))
