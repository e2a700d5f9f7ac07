"""Deterministic reference computations: canonical bases and exact errors.

Two independent routes compute the canonical (Duquenne-Guigues) basis of
a closure operator: :func:`dg_basis` enumerates closed and pseudo-closed
sets in lectic order, while :func:`brute_force_dg` classifies every
subset with the literal recursive definition.  The brute-force route is
the test oracle for the enumeration route and must agree with it bit for
bit.

The closure operators handled here map into the extended lattice with
falsum on top: a premise whose closure is falsum yields an implication
concluding :data:`~hornpac.core.BOTTOM`.
"""

from __future__ import annotations

import functools

from .core import (
    BOTTOM,
    AssignmentFamily,
    AttributeSet,
    ClosureOperator,
    ClosureResult,
    HornFormula,
    Implication,
    Universe,
    env_closure,
    forward_closure,
    intersection_closure,
    models,
)


class BudgetExceededError(RuntimeError):
    """The lectic traversal hit its step budget before finishing."""


def lectic_key(a: AttributeSet) -> int:
    """Rank of ``a`` in the lectic order induced by the universe order.

    Smaller key means lectically smaller; the set whose earliest
    differing attribute is present is the larger one, so attribute 0
    carries the highest weight.
    """
    n = len(a.universe)
    key = 0
    bits = a.bits
    while bits:
        low = bits & -bits
        key |= 1 << (n - low.bit_length())
        bits ^= low
    return key


def lectic_less(a: AttributeSet, b: AttributeSet) -> bool:
    return lectic_key(a) < lectic_key(b)


def dataset_closure(v: AssignmentFamily) -> ClosureOperator:
    """The dataset's envelope closure as a standalone operator."""
    return functools.partial(env_closure, v)


def formula_closure(h: HornFormula) -> ClosureOperator:
    """The closure operator of an explicit Horn formula."""
    return functools.partial(forward_closure, h)


def _unit_closure(imps: list[tuple[int, int]], bits: int) -> int:
    """Fixpoint of premise/conclusion mask pairs applied to ``bits``."""
    changed = True
    while changed:
        changed = False
        for premise, conclusion in imps:
            if premise & ~bits:
                continue
            missing = conclusion & ~bits
            if missing:
                bits |= missing
                changed = True
    return bits


def dg_basis(
    closure: ClosureOperator,
    universe: Universe,
    budget: int | None = None,
) -> HornFormula:
    """Canonical basis of ``closure``: pseudo-closed premises with full closures.

    Standard next-closure traversal: sets closed under the implications
    found so far are visited in lectic order; each one that the operator
    does not close is a pseudo-closed premise.  Falsum-valued closures
    are treated as the full attribute set during the traversal, and a
    final rule appends ``full -> falsum`` when the whole universe itself
    is pseudo-closed in the extended lattice.

    ``budget`` caps the number of visited sets (the traversal is
    exponential in the worst case).
    """
    n = len(universe)
    full = universe.full_mask
    internal: list[tuple[int, int]] = []  # conclusions with falsum widened to full
    found: list[Implication] = []
    bottom_seen = False
    bottom_at_full = False

    current = 0
    steps = 0
    while True:
        steps += 1
        if budget is not None and steps > budget:
            raise BudgetExceededError(f"lectic traversal exceeded {budget} steps")
        closed = closure(AttributeSet(universe, current))
        if closed is BOTTOM:
            widened = full
            if current == full:
                bottom_at_full = True
            else:
                bottom_seen = True
                found.append(Implication(AttributeSet(universe, current), BOTTOM))
                internal.append((current, full))
        else:
            widened = closed.bits
            if widened != current:
                found.append(Implication(AttributeSet(universe, current), closed))
                internal.append((current, widened))
        if current == full:
            break
        # Lectic successor among sets closed under the implications so far.
        for i in range(n - 1, -1, -1):
            if current >> i & 1:
                continue
            prefix = current & ((1 << i) - 1)
            candidate = _unit_closure(internal, prefix | (1 << i))
            if candidate & ~current & ((1 << i) - 1) == 0:
                current = candidate
                break
        else:
            break

    # The full set is pseudo-closed in the extended lattice exactly when
    # it closes to falsum and no smaller pseudo-closed set does.
    if bottom_at_full and not bottom_seen:
        found.append(Implication(universe.full(), BOTTOM))
    return HornFormula(universe, found)


def brute_force_dg(closure: ClosureOperator, universe: Universe) -> HornFormula:
    """Literal evaluation of the canonical-basis definition over all subsets.

    Classifies every subset as pseudo-closed by cardinality-increasing
    recursion and emits the corresponding implications in lectic order of
    premises.  This is the oracle :func:`dg_basis` is checked against.
    """
    n = len(universe)
    if n > 12:
        raise ValueError(f"universe of size {n} too large for the brute-force path")
    closure_of: dict[int, ClosureResult] = {}
    for mask in range(1 << n):
        closure_of[mask] = closure(AttributeSet(universe, mask))

    pseudo: dict[int, bool] = {}
    for mask in sorted(range(1 << n), key=lambda m: m.bit_count()):
        closed = closure_of[mask]
        if closed is not BOTTOM and closed.bits == mask:
            pseudo[mask] = False
            continue
        result = True
        sub = (mask - 1) & mask if mask else 0
        while mask:
            if pseudo[sub]:
                closed_sub = closure_of[sub]
                if closed_sub is BOTTOM or closed_sub.bits == mask or closed_sub.bits & ~mask:
                    result = False
                    break
            if sub == 0:
                break
            sub = (sub - 1) & mask
        pseudo[mask] = result

    premises = [m for m in range(1 << n) if pseudo[m]]
    premises.sort(key=lambda m: lectic_key(AttributeSet(universe, m)))
    return HornFormula(
        universe,
        [Implication(AttributeSet(universe, m), closure_of[m]) for m in premises],
    )


def reduced(h: HornFormula) -> HornFormula:
    """Presentation form with premises removed from conclusions."""
    out = []
    for imp in h:
        if imp.conclusion is BOTTOM:
            out.append(imp)
        else:
            out.append(Implication(imp.premise, imp.conclusion - imp.premise))
    return HornFormula(h.universe, out)


def characteristic_models(v: AssignmentFamily) -> set[AttributeSet]:
    """Members of the intersection closure not recoverable as meets of others."""
    family = intersection_closure(v)
    out = set()
    for m in family:
        acc = -1
        for x in family:
            if m < x:
                acc &= x.bits
        if acc == -1 or acc != m.bits:
            out.add(m)
    return out


def _envelope_fixpoints(v: AssignmentFamily) -> set[int]:
    return {
        a.bits
        for a in v.universe.subsets()
        if (closed := env_closure(v, a)) is not BOTTOM and closed.bits == a.bits
    }


def _check_exhaustive(universe: Universe) -> None:
    if len(universe) > 20:
        raise ValueError(
            f"universe of size {len(universe)} too large for exhaustive enumeration"
        )


def exact_plain_error(h: HornFormula, v: AssignmentFamily) -> float:
    """Fraction of assignments on which ``h`` and the envelope disagree as models."""
    _check_exhaustive(h.universe)
    envelope = _envelope_fixpoints(v)
    differ = sum(
        1 for a in h.universe.subsets() if models(a, h) != (a.bits in envelope)
    )
    return differ / (1 << len(h.universe))


def exact_strong_error(h: HornFormula, v: AssignmentFamily) -> float:
    """Fraction of subsets on which the two closure operators differ."""
    _check_exhaustive(h.universe)
    differ = 0
    for a in h.universe.subsets():
        left = forward_closure(h, a)
        right = env_closure(v, a)
        if left is BOTTOM or right is BOTTOM:
            if left is not right:
                differ += 1
        elif left.bits != right.bits:
            differ += 1
    return differ / (1 << len(h.universe))
