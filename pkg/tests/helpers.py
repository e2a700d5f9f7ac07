"""Shared brute-force utilities and random generators for the test suite.

Everything here is deliberately independent of the implementation paths
it checks: model sets are enumerated subset by subset, and envelope
fixpoints come straight from the closure definition.
"""

from __future__ import annotations

import string

import numpy as np

from hornpac.core import (
    BOTTOM,
    AssignmentFamily,
    AttributeSet,
    HornFormula,
    Implication,
    Universe,
    env_closure,
    models,
)

LETTERS = string.ascii_lowercase


def uni(n: int) -> Universe:
    return Universe(LETTERS[:n])


def aset(universe: Universe, labels: str | list[str]) -> AttributeSet:
    if isinstance(labels, str):
        labels = [c for c in labels]
    return universe.make(labels)


def imp(universe: Universe, premise, conclusion) -> Implication:
    if conclusion is None:
        return Implication(aset(universe, premise), BOTTOM)
    return Implication(aset(universe, premise), aset(universe, conclusion))


def formula(universe: Universe, *pairs) -> HornFormula:
    return HornFormula(universe, [imp(universe, p, c) for p, c in pairs])


def family(universe: Universe, *rows) -> AssignmentFamily:
    return AssignmentFamily(universe, [aset(universe, r) for r in rows])


def random_family(rng: np.random.Generator, universe: Universe, rows: int,
                  density: float = 0.5) -> AssignmentFamily:
    n = len(universe)
    made = []
    for _ in range(rows):
        bits = 0
        for k in range(n):
            if rng.random() < density:
                bits |= 1 << k
        made.append(AttributeSet(universe, bits))
    return AssignmentFamily(universe, made)


def random_formula(rng: np.random.Generator, universe: Universe, max_implications: int,
                   bottom_share: float = 0.2) -> HornFormula:
    n = len(universe)
    implications = []
    for _ in range(int(rng.integers(0, max_implications + 1))):
        premise = int(rng.integers(0, 1 << n))
        if rng.random() < bottom_share:
            implications.append(Implication(AttributeSet(universe, premise), BOTTOM))
        else:
            conclusion = premise | int(rng.integers(0, 1 << n))
            implications.append(
                Implication(AttributeSet(universe, premise), AttributeSet(universe, conclusion))
            )
    return HornFormula(universe, implications)


def model_bits(h: HornFormula) -> set[int]:
    """All models of a formula by direct enumeration."""
    return {a.bits for a in h.universe.subsets() if models(a, h)}


def envelope_fixpoint_bits(v: AssignmentFamily) -> set[int]:
    """Members of the intersection closure, straight from the closure definition."""
    out = set()
    for a in v.universe.subsets():
        closed = env_closure(v, a)
        if closed is not BOTTOM and closed.bits == a.bits:
            out.add(a.bits)
    return out


def equivalent_formulas(h1: HornFormula, h2: HornFormula) -> bool:
    return model_bits(h1) == model_bits(h2)
