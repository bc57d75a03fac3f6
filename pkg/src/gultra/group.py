"""Linearly ordered Abelian groups used as value domains.

Three concrete groups are supported, all with exact rational coefficients:

* ``rational``: :class:`fractions.Fraction`
* ``lex``: :class:`LexVector`, tuples ordered lexicographically (coordinate 0
  is the most significant)
* ``hahn``: :class:`~gultra.hahn.HahnSeries` over a finite ordered set (a Hahn
  group) or over another domain (a Hahn field)

Elements are plain Python numbers with operator overloading; a
:class:`ValueDomain` describes which group a value belongs to.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from itertools import combinations
from numbers import Rational
from typing import Sequence, Union

from .errors import DomainMismatch, GultraError
from .hahn import HahnSeries
from .order import FiniteOrderedSet


@total_ordering
class LexVector:
    """An element of Z^n or Q^n under the lexicographic order."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        self.coords = tuple(Fraction(c) for c in coords)

    @classmethod
    def _raw(cls, coords):
        v = cls.__new__(cls)
        v.coords = tuple(coords)
        return v

    @classmethod
    def zero(cls, rank):
        return cls((0,) * rank)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _check(self, other):
        if not isinstance(other, LexVector):
            return False
        if len(other.coords) != len(self.coords):
            raise DomainMismatch(f"lex ranks differ: {len(self)} vs {len(other)}")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        return LexVector._raw([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return LexVector._raw([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return LexVector._raw([-a for a in self.coords])

    def __mul__(self, k):
        if isinstance(k, (Rational, int)):
            return LexVector(k * a for a in self.coords)
        return NotImplemented

    __rmul__ = __mul__

    def __abs__(self):
        return -self if self < LexVector.zero(len(self)) else self

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        if not isinstance(other, LexVector):
            return NotImplemented
        return self.coords == other.coords

    def __lt__(self, other):
        if not self._check(other):
            return NotImplemented
        return self.coords < other.coords

    def __hash__(self):
        return hash(("lex", self.coords))

    def leading_index(self):
        for i, c in enumerate(self.coords):
            if c:
                return i
        return None

    def __repr__(self):
        return "LexVector(%s)" % ", ".join(str(c) for c in self.coords)


GroupElement = Union[Fraction, LexVector, HahnSeries]


@dataclass(frozen=True)
class ValueDomain:
    kind: str
    rank: int = 0
    base: str = "rational"
    index: object = None

    def __post_init__(self):
        if self.kind == "lex":
            if self.rank < 1:
                raise GultraError("lex rank must be at least 1")
            if self.base not in ("integer", "rational"):
                raise GultraError(f"unknown lex base {self.base!r}")
        elif self.kind == "hahn":
            if not isinstance(self.index, (FiniteOrderedSet, ValueDomain)):
                raise GultraError("hahn domain needs a FiniteOrderedSet or ValueDomain index")
        elif self.kind != "rational":
            raise GultraError(f"unknown domain kind {self.kind!r}")

    @classmethod
    def rational(cls):
        return cls("rational")

    @classmethod
    def lex(cls, rank, base="integer"):
        return cls("lex", rank=rank, base=base)

    @classmethod
    def hahn(cls, index):
        return cls("hahn", index=index)

    @property
    def is_field(self) -> bool:
        return self.kind == "hahn" and isinstance(self.index, ValueDomain)

    def zero(self):
        if self.kind == "rational":
            return Fraction(0)
        if self.kind == "lex":
            return LexVector.zero(self.rank)
        return HahnSeries.zero_of(self.index)

    def one(self):
        if self.kind == "rational":
            return Fraction(1)
        if self.is_field:
            return HahnSeries.constant(self.index, 1)
        raise GultraError(f"{self} is not a field")

    def contains(self, x) -> bool:
        if self.kind == "rational":
            return isinstance(x, Rational) and not isinstance(x, bool)
        if self.kind == "lex":
            if not isinstance(x, LexVector) or len(x) != self.rank:
                return False
            return self.base == "rational" or all(c.denominator == 1 for c in x.coords)
        return isinstance(x, HahnSeries) and x.index == self.index

    def check(self, x):
        if not self.contains(x):
            raise DomainMismatch(f"{x!r} is not in {self.describe()}")
        return Fraction(x) if self.kind == "rational" else x

    # exponent-index protocol (see gultra.hahn)
    def key(self, x):
        return self.check(x)

    def add(self, a, b):
        return a + b

    def describe(self) -> str:
        if self.kind == "rational":
            return "Q"
        if self.kind == "lex":
            return f"lex{self.rank}({self.base})"
        inner = self.index.describe() if isinstance(self.index, ValueDomain) else f"L{len(self.index)}"
        return f"H[{inner}]"


def domain_of(x) -> ValueDomain:
    if isinstance(x, HahnSeries):
        return ValueDomain.hahn(x.index)
    if isinstance(x, LexVector):
        base = "integer" if all(c.denominator == 1 for c in x.coords) else "rational"
        return ValueDomain.lex(len(x), base)
    if isinstance(x, Rational):
        return ValueDomain.rational()
    raise DomainMismatch(f"{x!r} is not a group element")


def _same_kind(a, b):
    if type(a) is not type(b) and not (isinstance(a, Rational) and isinstance(b, Rational)):
        raise DomainMismatch(f"cannot combine {type(a).__name__} with {type(b).__name__}")


def add(a, b):
    _same_kind(a, b)
    return a + b


def neg(a):
    return -a


def compare(a, b) -> int:
    _same_kind(a, b)
    return (a > b) - (a < b)


def absolute(x):
    """x if x >= 0 else -x."""
    return abs(x)


def _zero_like(x):
    if isinstance(x, HahnSeries):
        return HahnSeries.zero_of(x.index)
    if isinstance(x, LexVector):
        return LexVector.zero(len(x))
    return Fraction(0)


# -- Archimedean classes ------------------------------------------------------


@total_ordering
@dataclass(frozen=True, eq=False)
class ArchClass:
    """An Archimedean class, or the adjoined bottom when ``rep`` is None.

    ``rep`` is the leading coordinate index for lex values, the maximal support
    exponent for Hahn values, and ``0`` for the single class of Q.
    """

    kind: str
    rep: object = None
    index: object = None

    @property
    def is_bottom(self) -> bool:
        return self.rep is None

    def _key(self):
        if self.rep is None:
            return (0,)
        if self.kind == "rational":
            return (1, 0)
        if self.kind == "lex":
            return (1, -self.rep)
        return (1, self.index.key(self.rep))

    def _check(self, other):
        if not isinstance(other, ArchClass):
            return False
        if other.kind != self.kind or (self.index is not None and other.index is not None and other.index != self.index):
            raise DomainMismatch("Archimedean classes of different groups")
        return True

    def __eq__(self, other):
        if not isinstance(other, ArchClass):
            return NotImplemented
        return self.kind == other.kind and self.rep == other.rep and (
            self.rep is None or self.index == other.index
        )

    def __lt__(self, other):
        if not self._check(other):
            return NotImplemented
        return self._key() < other._key()

    def __hash__(self):
        return hash((self.kind, self.rep))

    def __repr__(self):
        if self.rep is None:
            return "ArchClass(bottom)"
        return f"ArchClass({self.kind}:{self.rep!r})"


def arch_bottom(kind: str = "rational", index=None) -> ArchClass:
    return ArchClass(kind, None, index)


def _class_of_nonzero(x) -> ArchClass:
    if isinstance(x, HahnSeries):
        return ArchClass("hahn", x.leading()[0], x.index)
    if isinstance(x, LexVector):
        return ArchClass("lex", x.leading_index())
    return ArchClass("rational", 0)


def lambda_(x) -> ArchClass:
    """Archimedean class of abs(x); the bottom class for zero."""
    if not x:
        kind = "hahn" if isinstance(x, HahnSeries) else "lex" if isinstance(x, LexVector) else "rational"
        return arch_bottom(kind, x.index if isinstance(x, HahnSeries) else None)
    return _class_of_nonzero(x)


class Arch(enum.Enum):
    LL = "<<"
    EQ = "~"
    GG = ">>"


def _require_positive(*xs):
    for x in xs:
        if not x > _zero_like(x):
            raise GultraError(f"Archimedean comparison needs positive input, got {x!r}")


def arch_cmp(x, y) -> Arch:
    _same_kind(x, y)
    _require_positive(x, y)
    cx, cy = lambda_(x), lambda_(y)
    if cx < cy:
        return Arch.LL
    if cy < cx:
        return Arch.GG
    return Arch.EQ


def arch_cmp_bounded(x, y, bound: int = 64) -> Arch:
    """Definitional check with multiples 1..bound; an oracle for tests only."""
    _same_kind(x, y)
    _require_positive(x, y)
    if all(n * x < y for n in range(1, bound + 1)):
        return Arch.LL
    if all(n * y < x for n in range(1, bound + 1)):
        return Arch.GG
    return Arch.EQ


# -- metric generators ----------------------------------------------------------


def _distinct(points: Sequence):
    for a, b in combinations(points, 2):
        _same_kind(a, b)
        if a == b:
            raise GultraError(f"duplicate point {a!r}")


def metric_abs(points: Sequence):
    """Table of abs(x - y)."""
    from .space import MetricTable, PointSpace

    _distinct(points)
    n = len(points)
    labels = [f"p{i}" for i in range(n)]
    zero = _zero_like(points[0]) if points else Fraction(0)
    values = [[abs(points[i] - points[j]) for j in range(n)] for i in range(n)]
    return MetricTable(PointSpace(labels), values, zero=zero, flavor="metric")


def metric_lambda(points: Sequence):
    """Table of lambda(x - y), an ultrametric valued in the classes."""
    from .space import MetricTable, PointSpace

    _distinct(points)
    n = len(points)
    labels = [f"p{i}" for i in range(n)]
    values = [[lambda_(points[i] - points[j]) for j in range(n)] for i in range(n)]
    zero = lambda_(_zero_like(points[0])) if points else arch_bottom()
    return MetricTable(PointSpace(labels), values, zero=zero, flavor="ultrametric")


def lex_index(rank: int) -> FiniteOrderedSet:
    """Coordinate labels in ascending order: c{rank-1} < ... < c0."""
    return FiniteOrderedSet(tuple(f"c{i}" for i in reversed(range(rank))))


def lex_to_hahn(x: LexVector) -> HahnSeries:
    if not isinstance(x, LexVector):
        raise DomainMismatch(f"lex_to_hahn needs a lex value, got {x!r}")
    return HahnSeries(lex_index(len(x)), ((f"c{i}", c) for i, c in enumerate(x.coords) if c))
