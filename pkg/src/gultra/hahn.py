"""Finite-support Hahn series.

A series over an exponent *index* is a finite map exponent -> nonzero rational.
The index is either a :class:`~gultra.order.FiniteOrderedSet` (the Hahn group
H(L)) or an ordered group domain (the Hahn field K(G)); anything exposing
``key(e)`` works, and multiplication additionally needs ``add(e, f)`` and
``zero()``.

Series compare by the sign of the coefficient difference at the largest
exponent where they differ.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, total_ordering
from numbers import Rational

from .errors import DomainMismatch, NotAGroup
from .order import BottomedOrderedSet, FiniteOrderedSet, OrderError


@total_ordering
class HahnSeries:
    __slots__ = ("index", "terms", "_hash")

    def __init__(self, index, terms=()):
        items = terms.items() if isinstance(terms, dict) else terms
        acc = {}
        for exp, coeff in items:
            index.key(exp)  # membership check
            acc[exp] = acc.get(exp, 0) + Fraction(coeff)
        ordered = sorted(
            ((e, c) for e, c in acc.items() if c), key=lambda t: index.key(t[0]), reverse=True
        )
        self.index = index
        self.terms = tuple(ordered)
        self._hash = None

    @classmethod
    def _raw(cls, index, terms):
        # terms already canonical
        s = cls.__new__(cls)
        s.index, s.terms, s._hash = index, tuple(terms), None
        return s

    @classmethod
    def monomial(cls, index, exp, coeff=1):
        return cls(index, ((exp, coeff),))

    @classmethod
    def constant(cls, index, c):
        if not hasattr(index, "add"):
            raise NotAGroup(f"{index!r} has no unit exponent")
        return cls(index, ((index.zero(), c),))

    @classmethod
    def zero_of(cls, index):
        return cls._raw(index, ())

    # -- inspection -------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    @property
    def support(self):
        return tuple(e for e, _ in self.terms)

    def leading(self):
        """(max exponent, its coefficient); raises on the zero series."""
        if not self.terms:
            raise ValueError("zero series has no leading term")
        return self.terms[0]

    def coefficient(self, exp) -> Fraction:
        for e, c in self.terms:
            if e == exp:
                return c
        return Fraction(0)

    def sign(self) -> int:
        if not self.terms:
            return 0
        return 1 if self.terms[0][1] > 0 else -1

    # -- group structure --------------------------------------------------
    def _same(self, other):
        if not isinstance(other, HahnSeries):
            return False
        if other.index != self.index:
            raise DomainMismatch(f"exponent structures differ: {self.index!r} vs {other.index!r}")
        return True

    def __add__(self, other):
        if not self._same(other):
            return NotImplemented
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return HahnSeries(self.index, acc)

    def __neg__(self):
        return HahnSeries._raw(self.index, ((e, -c) for e, c in self.terms))

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __sub__(self, other):
        if not self._same(other):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (Rational, int)):
            if other == 0:
                return HahnSeries.zero_of(self.index)
            k = Fraction(other)
            return HahnSeries._raw(self.index, ((e, c * k) for e, c in self.terms))
        if not self._same(other):
            return NotImplemented
        add = getattr(self.index, "add", None)
        if add is None:
            raise NotAGroup(f"exponents of {self.index!r} cannot be added")
        acc = {}
        for e, c in self.terms:
            for f, k in other.terms:
                s = add(e, f)
                acc[s] = acc.get(s, 0) + c * k
        return HahnSeries(self.index, acc)

    def __rmul__(self, other):
        if isinstance(other, (Rational, int)):
            return self * other
        return NotImplemented

    # -- order ------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, HahnSeries):
            return NotImplemented
        return self.index == other.index and self.terms == other.terms

    def __lt__(self, other):
        if not self._same(other):
            return NotImplemented
        return (other - self).sign() > 0

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __repr__(self):
        if not self.terms:
            return "HahnSeries(0)"
        body = " + ".join(f"{c}*t^{e!r}" for e, c in self.terms)
        return f"HahnSeries({body})"


def h_add(f: HahnSeries, g: HahnSeries) -> HahnSeries:
    return f + g


def h_neg(f: HahnSeries) -> HahnSeries:
    return -f


def h_mul(f: HahnSeries, g: HahnSeries) -> HahnSeries:
    return f * g


def h_cmp(f: HahnSeries, g: HahnSeries) -> int:
    f._same(g)
    return (f - g).sign()


def embed_E(L, s) -> HahnSeries:
    """Indicator series of ``s``: coefficient 1 at ``s`` and 0 elsewhere."""
    try:
        L.key(s)
    except (OrderError, TypeError, ValueError) as exc:
        raise OrderError(f"{s!r} is not in the exponent index") from exc
    return HahnSeries._raw(L, ((s, Fraction(1)),))


def _positive_part(S: BottomedOrderedSet, s):
    if s not in S:
        raise OrderError(f"{s!r} is not in {S!r}")
    return S.stars().dual()


def embed_W(S: BottomedOrderedSet, s) -> HahnSeries:
    """Negated indicator in H((S*)^op); strictly isotone on S*."""
    index = _positive_part(S, s)
    if s == S.bottom:
        raise OrderError("W is undefined at the bottom element")
    return -embed_E(index, s)


@lru_cache(maxsize=256)
def pscal_domain(S: BottomedOrderedSet):
    """The field K(H((S*)^op)) that hosts embed_I's values."""
    from .group import ValueDomain

    return ValueDomain.hahn(ValueDomain.hahn(S.stars().dual()))


def embed_I(S: BottomedOrderedSet, s) -> HahnSeries:
    field = pscal_domain(S)
    if s not in S:
        raise OrderError(f"{s!r} is not in {S!r}")
    if s == S.bottom:
        return HahnSeries.zero_of(field.index)
    return HahnSeries._raw(field.index, ((embed_W(S, s), Fraction(1)),))
