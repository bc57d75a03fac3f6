"""Finite linearly ordered sets.

Order is positional: a label's rank is its index in ``elements``.  Label text
never participates in comparisons.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import total_ordering
from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping

from .errors import GultraError


class OrderError(GultraError):
    """Raised on ill-formed ordered-set input."""


class LabelCollision(OrderError):
    pass


@dataclass(frozen=True)
class FiniteOrderedSet:
    elements: tuple[Hashable, ...] = ()
    _rank: Mapping[Hashable, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        rank = {e: i for i, e in enumerate(elements)}
        if len(rank) != len(elements):
            raise OrderError(f"duplicate labels in {elements!r}")
        object.__setattr__(self, "_rank", rank)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, label):
        return label in self._rank

    def __hash__(self):
        return hash(self.elements)

    def rank(self, label) -> int:
        try:
            return self._rank[label]
        except KeyError:
            raise OrderError(f"{label!r} is not an element") from None

    # exponent-index protocol shared with ValueDomain
    def key(self, label) -> int:
        return self.rank(label)

    def le(self, a, b) -> bool:
        return self.rank(a) <= self.rank(b)

    def lt(self, a, b) -> bool:
        return self.rank(a) < self.rank(b)

    def min(self):
        return self.elements[0]

    def max(self):
        return self.elements[-1]

    def element(self, label) -> "Element":
        self.rank(label)
        return Element(self, label)

    def dual(self) -> "FiniteOrderedSet":
        return FiniteOrderedSet(self.elements[::-1])

    def one_point_extension(self, bottom) -> "BottomedOrderedSet":
        if bottom in self:
            raise LabelCollision(f"bottom label {bottom!r} already in the set")
        return BottomedOrderedSet(FiniteOrderedSet((bottom,) + self.elements))


@total_ordering
@dataclass(frozen=True, eq=False)
class Element:
    """A label bound to its ordered set, so that Python comparisons work."""

    owner: FiniteOrderedSet
    label: Hashable

    def _check(self, other):
        if not isinstance(other, Element) or other.owner != self.owner:
            return NotImplemented
        return None

    def __eq__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self.label == other.label

    def __lt__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self.owner.rank(self.label) < self.owner.rank(other.label)

    def __hash__(self):
        return hash((self.owner.elements, self.label))

    def __repr__(self):
        return f"Element({self.label!r})"


@dataclass(frozen=True)
class BottomedOrderedSet:
    """A finite ordered set whose first element is its least element."""

    base: FiniteOrderedSet

    def __post_init__(self):
        if not len(self.base):
            raise OrderError("a bottomed set needs at least its bottom")

    @classmethod
    def from_labels(cls, labels: Iterable[Hashable]) -> "BottomedOrderedSet":
        return cls(FiniteOrderedSet(tuple(labels)))

    @property
    def bottom(self):
        return self.base.elements[0]

    @property
    def elements(self):
        return self.base.elements

    def stars(self) -> FiniteOrderedSet:
        return FiniteOrderedSet(self.base.elements[1:])

    def __contains__(self, label):
        return label in self.base

    def __len__(self):
        return len(self.base)

    def __iter__(self):
        return iter(self.base)

    def rank(self, label) -> int:
        return self.base.rank(label)

    def element(self, label) -> Element:
        return self.base.element(label)

    @property
    def zero(self) -> Element:
        return self.base.element(self.bottom)


def dual(L: FiniteOrderedSet) -> FiniteOrderedSet:
    return L.dual()


def one_point_extension(L: FiniteOrderedSet, bottom_label) -> BottomedOrderedSet:
    return L.one_point_extension(bottom_label)


def is_characteristic(T: Iterable, S: BottomedOrderedSet) -> bool:
    """True iff T holds the bottom and reaches below every positive element."""
    T = set(T)
    stray = [t for t in T if t not in S]
    if stray:
        raise OrderError(f"not a subset: {stray!r}")
    if S.bottom not in T:
        return False
    positive_T = [S.rank(t) for t in T if t != S.bottom]
    for s in S.stars():
        if not any(t <= S.rank(s) for t in positive_T):
            return False
    return True


def _is_cut(C: frozenset, L: FiniteOrderedSet) -> bool:
    if not C:
        return False
    # bounded above: always true in a nonempty finite set
    for x in C:
        if any(y not in C for y in L.elements[: L.rank(x)]):
            return False
    upper = [b for b in L if all(L.le(x, b) for x in C)]
    if upper:
        sup = min(upper, key=L.rank)
        if sup not in C:
            return False
    return True


def dedekind_completion(L: FiniteOrderedSet):
    """Cuts of ``L`` ordered by inclusion, with the embedding a -> {x <= a}.

    Returns ``(completion, iota)`` where the completion's labels are the cuts
    themselves (frozensets) and ``iota`` is a dict from labels of ``L``.
    """
    if not len(L):
        raise OrderError("completion of the empty set is not defined")
    items = L.elements
    cuts = []
    for r in range(1, len(items) + 1):
        for subset in combinations(items, r):
            C = frozenset(subset)
            if _is_cut(C, L):
                cuts.append(C)
    cuts.sort(key=len)
    for a, b in zip(cuts, cuts[1:]):
        if not a < b:
            raise AssertionError("cuts are not a chain")
    iota = {a: frozenset(items[: L.rank(a) + 1]) for a in items}
    return FiniteOrderedSet(tuple(cuts)), iota


def _total(f: Mapping | Callable, L: FiniteOrderedSet) -> Callable:
    if callable(f) and not isinstance(f, Mapping):
        return f
    missing = [x for x in L if x not in f]
    if missing:
        raise OrderError(f"map not total; missing {missing!r}")
    return f.__getitem__


def check_isotone(f, L: FiniteOrderedSet, R: FiniteOrderedSet) -> bool:
    g = _total(f, L)
    return all(R.le(g(a), g(b)) for a, b in combinations(L.elements, 2))


def check_antitone(f, L: FiniteOrderedSet, R: FiniteOrderedSet) -> bool:
    g = _total(f, L)
    return all(R.le(g(b), g(a)) for a, b in combinations(L.elements, 2))


def check_coinitial(f, L: FiniteOrderedSet, R: FiniteOrderedSet) -> bool:
    """Every element of R has some image at or below it."""
    g = _total(f, L)
    images = [R.rank(g(a)) for a in L]
    return all(any(i <= R.rank(y) for i in images) for y in R)


def check_cofinal(f, L: FiniteOrderedSet, R: FiniteOrderedSet) -> bool:
    g = _total(f, L)
    images = [R.rank(g(a)) for a in L]
    return all(any(i >= R.rank(y) for i in images) for y in R)
