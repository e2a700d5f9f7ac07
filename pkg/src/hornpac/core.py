"""Attribute universes, assignments, implications and the closure algebra.

Variable assignments over a fixed attribute universe are stored as bit
vectors (Python ints), with bit ``i`` standing for the attribute at
position ``i``.  The falsum closure value is the distinct sentinel
:data:`BOTTOM`, treated as the absorbing top element of the subset
order: every assignment is a subset of it and meets with it yield the
assignment unchanged.

All types are immutable after construction; the operations below are
pure functions and safe to share across threads.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Union


class UniverseMismatchError(ValueError):
    """Raised when operands belong to different attribute universes."""


class Universe:
    """An ordered set of distinct attribute labels."""

    __slots__ = ("names", "_index", "_hash")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        index: dict[str, int] = {}
        for i, name in enumerate(names):
            if not isinstance(name, str) or not name:
                raise ValueError(f"attribute label at position {i} is empty or not a string")
            if name in index:
                raise ValueError(f"duplicate attribute label {name!r}")
            index[name] = i
        self.names = names
        self._index = index
        self._hash = hash(names)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Universe) and self.names == other.names

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Universe({list(self.names)!r})"

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"unknown attribute label {label!r}") from None

    def label(self, position: int) -> str:
        return self.names[position]

    @property
    def full_mask(self) -> int:
        return (1 << len(self.names)) - 1

    def empty(self) -> AttributeSet:
        return AttributeSet(self, 0)

    def full(self) -> AttributeSet:
        return AttributeSet(self, self.full_mask)

    def singleton(self, position: int) -> AttributeSet:
        if not 0 <= position < len(self.names):
            raise ValueError(f"attribute position {position} out of range")
        return AttributeSet(self, 1 << position)

    def make(self, labels: Iterable[str]) -> AttributeSet:
        bits = 0
        for label in labels:
            bits |= 1 << self.index(label)
        return AttributeSet(self, bits)

    def from_bits(self, bits: int) -> AttributeSet:
        return AttributeSet(self, bits)

    def subsets(self) -> Iterator[AttributeSet]:
        """All subsets in increasing bit-mask order (2^n of them)."""
        for mask in range(1 << len(self.names)):
            yield AttributeSet(self, mask)


class AttributeSet:
    """An immutable subset of a universe, i.e. a variable assignment."""

    __slots__ = ("universe", "bits")

    def __init__(self, universe: Universe, bits: int):
        if bits >> len(universe.names):
            raise ValueError("bit vector wider than the universe")
        self.universe = universe
        self.bits = bits

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AttributeSet)
            and self.bits == other.bits
            and self.universe == other.universe
        )

    def __hash__(self) -> int:
        return hash((self.bits, self.universe._hash))

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __contains__(self, label: str) -> bool:
        return bool(self.bits >> self.universe.index(label) & 1)

    def __iter__(self) -> Iterator[str]:
        bits = self.bits
        names = self.universe.names
        while bits:
            low = bits & -bits
            yield names[low.bit_length() - 1]
            bits ^= low

    def __le__(self, other: AttributeSet) -> bool:
        _same_universe(self.universe, other.universe)
        return self.bits & ~other.bits == 0

    def __lt__(self, other: AttributeSet) -> bool:
        return self <= other and self.bits != other.bits

    def __and__(self, other: AttributeSet) -> AttributeSet:
        _same_universe(self.universe, other.universe)
        return AttributeSet(self.universe, self.bits & other.bits)

    def __or__(self, other: AttributeSet) -> AttributeSet:
        _same_universe(self.universe, other.universe)
        return AttributeSet(self.universe, self.bits | other.bits)

    def __sub__(self, other: AttributeSet) -> AttributeSet:
        _same_universe(self.universe, other.universe)
        return AttributeSet(self.universe, self.bits & ~other.bits)

    def complement(self) -> AttributeSet:
        return AttributeSet(self.universe, self.universe.full_mask & ~self.bits)

    def labels(self) -> tuple[str, ...]:
        return tuple(self)

    def __repr__(self) -> str:
        return "{" + ", ".join(self) + "}"


class _Bottom:
    """Falsum: the closure value identified with the whole universe plus falsum."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BOTTOM"


BOTTOM = _Bottom()

#: A closure value: either a genuine attribute set or falsum.
ClosureResult = Union[AttributeSet, _Bottom]

#: A closure operator as consumed by the exact algorithms.
ClosureOperator = Callable[[AttributeSet], ClosureResult]


def is_bottom(value: ClosureResult) -> bool:
    return value is BOTTOM


def covers(value: ClosureResult, a: AttributeSet) -> bool:
    """True if ``a`` is a subset of ``value``; falsum covers everything."""
    if value is BOTTOM:
        return True
    return a <= value


def meet(value: ClosureResult, a: AttributeSet) -> AttributeSet:
    """Intersection of a closure value with a set; falsum meets to ``a`` itself."""
    if value is BOTTOM:
        return a
    return value & a


def _same_universe(u: Universe, v: Universe) -> None:
    if u is not v and u != v:
        raise UniverseMismatchError("operands belong to different universes")


class Implication:
    """A premise/conclusion pair ``A -> B`` with ``B`` possibly falsum.

    No containment between premise and conclusion is required; use
    :meth:`normalized` to fold the premise into the conclusion.
    """

    __slots__ = ("premise", "conclusion")

    def __init__(self, premise: AttributeSet, conclusion: ClosureResult):
        if conclusion is not BOTTOM:
            _same_universe(premise.universe, conclusion.universe)
        self.premise = premise
        self.conclusion = conclusion

    def satisfied_by(self, a: AttributeSet) -> bool:
        """Model check for a single implication: premise not contained, or conclusion is."""
        if self.premise.bits & ~a.bits:
            return True
        if self.conclusion is BOTTOM:
            return False
        return self.conclusion.bits & ~a.bits == 0

    def normalized(self) -> Implication:
        """Add the premise's attributes to the conclusion; idempotent."""
        if self.conclusion is BOTTOM:
            return self
        merged = self.premise.bits | self.conclusion.bits
        if merged == self.conclusion.bits:
            return self
        return Implication(self.premise, AttributeSet(self.premise.universe, merged))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Implication)
            and self.premise == other.premise
            and (
                self.conclusion is other.conclusion
                or self.conclusion == other.conclusion
            )
        )

    def __hash__(self) -> int:
        tail = -1 if self.conclusion is BOTTOM else self.conclusion.bits
        return hash((self.premise.bits, tail, self.premise.universe._hash))

    def __repr__(self) -> str:
        return f"{self.premise!r} -> {self.conclusion!r}"


class HornFormula:
    """An ordered list of implications; iteration order is insertion order."""

    __slots__ = ("universe", "implications")

    def __init__(self, universe: Universe, implications: Iterable[Implication] = ()):
        implications = tuple(implications)
        for imp in implications:
            _same_universe(universe, imp.premise.universe)
        self.universe = universe
        self.implications = implications

    def __len__(self) -> int:
        return len(self.implications)

    def __iter__(self) -> Iterator[Implication]:
        return iter(self.implications)

    def __getitem__(self, i: int) -> Implication:
        return self.implications[i]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, HornFormula)
            and self.universe == other.universe
            and self.implications == other.implications
        )

    def __hash__(self) -> int:
        return hash((self.universe._hash, self.implications))

    def appended(self, imp: Implication) -> HornFormula:
        _same_universe(self.universe, imp.premise.universe)
        return HornFormula(self.universe, self.implications + (imp,))

    def replaced(self, position: int, imp: Implication) -> HornFormula:
        imps = list(self.implications)
        imps[position] = imp
        return HornFormula(self.universe, imps)

    def __repr__(self) -> str:
        return f"HornFormula({len(self.implications)} implications)"


class AssignmentFamily:
    """A dataset: an ordered list of assignments, optionally labelled rows.

    Row order is ingestion order and is significant: oracles return the
    first violating row, so determinism of learning runs depends on it.
    Duplicate rows are kept.
    """

    __slots__ = ("universe", "rows", "labels")

    def __init__(
        self,
        universe: Universe,
        rows: Iterable[AttributeSet],
        labels: Iterable[str] | None = None,
    ):
        rows = tuple(rows)
        for row in rows:
            _same_universe(universe, row.universe)
        self.universe = universe
        self.rows = rows
        self.labels = None if labels is None else tuple(labels)
        if self.labels is not None and len(self.labels) != len(rows):
            raise ValueError("row label count does not match row count")

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[AttributeSet]:
        return iter(self.rows)

    def __repr__(self) -> str:
        return f"AssignmentFamily({len(self.rows)} rows over {len(self.universe)} attributes)"


# ---------------------------------------------------------------------------
# Closure and entailment algebra


def forward_closure(h: HornFormula, a: AttributeSet) -> ClosureResult:
    """Least fixpoint of applying the implications of ``h`` to ``a``.

    Unit propagation by round-robin passes over the implication list
    until a pass makes no change.  Returns falsum exactly when an
    applicable implication concludes falsum.
    """
    _same_universe(h.universe, a.universe)
    bits = a.bits
    changed = True
    while changed:
        changed = False
        for imp in h.implications:
            if imp.premise.bits & ~bits:
                continue
            conclusion = imp.conclusion
            if conclusion is BOTTOM:
                return BOTTOM
            missing = conclusion.bits & ~bits
            if missing:
                bits |= missing
                changed = True
    if bits == a.bits:
        return a
    return AttributeSet(a.universe, bits)


def models(a: AttributeSet, h: HornFormula) -> bool:
    """True if ``a`` is a model of every implication in ``h``."""
    _same_universe(h.universe, a.universe)
    bits = a.bits
    for imp in h.implications:
        if imp.premise.bits & ~bits:
            continue
        if imp.conclusion is BOTTOM or imp.conclusion.bits & ~bits:
            return False
    return True


def entails(h: HornFormula, imp: Implication) -> bool:
    """True if every model of ``h`` satisfies ``imp``."""
    closed = forward_closure(h, imp.premise)
    if closed is BOTTOM:
        return True
    if imp.conclusion is BOTTOM:
        return False
    return imp.conclusion <= closed


def env_closure(v: AssignmentFamily, a: AttributeSet) -> ClosureResult:
    """Intersection of all rows containing ``a``; falsum if there is none.

    This evaluates the closure operator of the dataset's Horn envelope
    directly on the data, without materializing the envelope.
    """
    _same_universe(v.universe, a.universe)
    bits = a.bits
    acc = -1
    for row in v.rows:
        row_bits = row.bits
        if bits & ~row_bits:
            continue
        acc &= row_bits
        if acc == bits:
            break
    if acc == -1:
        return BOTTOM
    if acc == bits:
        return a
    return AttributeSet(a.universe, acc)


def holds_in_data(v: AssignmentFamily, imp: Implication) -> AttributeSet | None:
    """None if every row containing the premise contains the conclusion.

    Otherwise the first violating row in row order.
    """
    _same_universe(v.universe, imp.premise.universe)
    premise = imp.premise.bits
    conclusion = imp.conclusion
    for row in v.rows:
        if premise & ~row.bits:
            continue
        if conclusion is BOTTOM or conclusion.bits & ~row.bits:
            return row
    return None


def intersection_closure(v: AssignmentFamily) -> set[AttributeSet]:
    """Least family containing the rows and closed under pairwise intersection.

    Only intersections over nonempty subfamilies are added, so the empty
    family closes to the empty family and the full universe appears only
    if it is itself a row.  Intended for small universes.
    """
    current: set[int] = {row.bits for row in v.rows}
    frontier = set(current)
    while frontier:
        fresh: set[int] = set()
        for x in frontier:
            for y in current:
                z = x & y
                if z not in current:
                    fresh.add(z)
        current |= fresh
        frontier = fresh
    return {AttributeSet(v.universe, bits) for bits in current}


def is_pseudo_closed(a: AttributeSet, closure: ClosureOperator) -> bool:
    """Literal recursive test of pseudo-closedness, memoized by subset.

    A set is pseudo-closed when it is not closed and the closure of each
    pseudo-closed proper subset stays strictly inside it.  Exponential;
    meant for the brute-force reference path on small universes.
    """
    universe = a.universe
    memo: dict[int, bool] = {}

    def pc(bits: int) -> bool:
        cached = memo.get(bits)
        if cached is not None:
            return cached
        closed = closure(AttributeSet(universe, bits))
        if closed is not BOTTOM and closed.bits == bits:
            memo[bits] = False
            return False
        result = True
        if bits:
            sub = (bits - 1) & bits
            while True:
                if pc(sub):
                    closed_sub = closure(AttributeSet(universe, sub))
                    if closed_sub is BOTTOM or closed_sub.bits == bits or closed_sub.bits & ~bits:
                        result = False
                        break
                if sub == 0:
                    break
                sub = (sub - 1) & bits
        memo[bits] = result
        return result

    return pc(a.bits)
