"""Simultaneous extension of metrics and ultrametrics from A to X.

Given a base ultrametric ``h`` on X, a retraction ``r`` of X onto A and a
gauge chain, every metric ``d`` on A is extended by::

    k[d] = round_down(d)              (on A)
    u[d] = r*k[d] v h                 (on X)
    Phi(d) = r*d v Theta[u[d], A]     (on X)

where ``Theta[h, A](x, y) = min(h(x, y), max(dist(x, A), dist(y, A)))``.
The extension restricts to ``d`` on A, preserves the flavor of ``d``, is
monotone and commutes with pointwise maxima.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from .errors import CertificateFailure, GultraError
from .group import LexVector, lambda_
from .hahn import HahnSeries, embed_I
from .order import BottomedOrderedSet, FiniteOrderedSet
from .retract import Retraction
from .space import (
    METRIC,
    ULTRAMETRIC,
    MetricTable,
    PointSpace,
    dist_to_set,
    is_valid,
    join,
    transport,
    ud_distance,
    validate,
)


class ChainError(GultraError):
    """The gauge chain has no entry strictly below some input value."""


@dataclass(frozen=True)
class GaugeChain:
    """Strictly descending positive values l(0) > l(1) > ... > l(m)."""

    values: tuple

    def __post_init__(self):
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise ChainError("a gauge chain needs at least one entry")
        for a, b in zip(values, values[1:]):
            if not a > b:
                raise ChainError(f"chain is not strictly descending at {a!r}, {b!r}")
        if not values[-1] > _zero_of(values[-1]):
            raise ChainError("chain entries must be positive")
        key = _chain_key(self)
        for a, b in zip(values, values[1:]):
            if not key(a) > key(b):
                raise ChainError(f"chain entries {a!r}, {b!r} share an Archimedean class")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @property
    def top(self):
        return self.values[0]

    @property
    def level(self) -> str:
        # rational chains round by value, group-valued chains by Archimedean class
        return "value" if isinstance(self.values[0], Rational) else "class"

    def is_characteristic_for(self, values) -> bool:
        key = _chain_key(self)
        low = key(self.values[-1])
        return all(v == _zero_of(v) or low < key(v) for v in values)

    @classmethod
    def auto(cls, *tables: MetricTable) -> "GaugeChain":
        """Every distinct positive rational value, plus half the smallest one."""
        positive = sorted({v for t in tables for v in t.off_diagonal() if v > 0}, reverse=True)
        if not positive:
            return cls((Fraction(1),))
        return cls(tuple(positive) + (positive[-1] / 2,))


def _zero_of(v):
    if isinstance(v, HahnSeries):
        return HahnSeries.zero_of(v.index)
    if isinstance(v, LexVector):
        return LexVector.zero(len(v))
    return Fraction(0)


def _chain_key(chain: GaugeChain):
    return (lambda v: v) if chain.level == "value" else lambda_


def round_down(chain: GaugeChain, v):
    """The chain entry l(a+1) with l(a+1) < v <= l(a); l(0) above the chain; 0 at 0."""
    zero = _zero_of(v)
    if v == zero:
        return zero
    key = _chain_key(chain)
    kv = key(v)
    if key(chain.values[0]) < kv:
        return chain.values[0]
    for upper, lower in zip(chain.values, chain.values[1:]):
        if key(lower) < kv <= key(upper):
            return lower
    raise ChainError(f"no chain entry lies strictly below {v!r}")


def _check_retraction(h: MetricTable, r: Retraction):
    if r.space.points != h.space.points:
        raise GultraError("retraction and base ultrametric live on different point sets")
    if set(r.space.subset) != set(h.space.subset):
        raise GultraError("retraction and base ultrametric disagree on the subset A")


def theta(h: MetricTable, A: Sequence | None = None) -> MetricTable:
    """Pseudo-ultrametric vanishing on A x A."""
    if h.flavor != ULTRAMETRIC:
        raise GultraError("theta needs an ultrametric base")
    A = tuple(h.space.subset if A is None else A)
    if not A:
        raise GultraError("the subset A is empty")
    rho = [dist_to_set(h, p, A) for p in h.space.points]
    n = len(h)
    values = [[min(h.values[i][j], max(rho[i], rho[j])) for j in range(n)] for i in range(n)]
    return MetricTable(h.space, values, h.zero, ULTRAMETRIC, h.domain, pseudo=True, check=False)


def _pull(r: Retraction, d: MetricTable, space: PointSpace):
    """Matrix of d(r x, r y) for x, y in ``space``."""
    try:
        idx = [d.space.index(r[p]) for p in space.points]
    except KeyError as exc:
        raise GultraError(f"retraction undefined at {exc}") from None
    return [[d.values[a][b] for b in idx] for a in idx]


def psi(h: MetricTable, r: Retraction, d: MetricTable) -> MetricTable:
    """r*d v Theta[h, A]: a metric on X extending d."""
    _check_retraction(h, r)
    if set(d.space.points) != set(h.space.subset):
        raise GultraError("d must be defined exactly on the subset A")
    th = theta(h)
    pulled = _pull(r, d, h.space)
    n = len(h)
    values = [[max(pulled[i][j], th.values[i][j]) for j in range(n)] for i in range(n)]
    return MetricTable(h.space, values, d.zero, d.flavor, d.domain, check=False)


def sigma(h: MetricTable, r: Retraction, k: MetricTable) -> MetricTable:
    """r*k v h: an ultrametric on X dominating h."""
    _check_retraction(h, r)
    if k.flavor != ULTRAMETRIC:
        raise GultraError("sigma needs an ultrametric on A")
    if set(k.space.points) != set(h.space.subset):
        raise GultraError("k must be defined exactly on the subset A")
    pulled = _pull(r, k, h.space)
    n = len(h)
    values = [[max(pulled[i][j], h.values[i][j]) for j in range(n)] for i in range(n)]
    return MetricTable(h.space, values, h.zero, ULTRAMETRIC, h.domain, check=False)


def rounded(chain: GaugeChain, d: MetricTable) -> MetricTable:
    """k[d]: every entry of d rounded strictly down onto the chain."""
    values = [[round_down(chain, v) for v in row] for row in d.values]
    return MetricTable(d.space, values, d.zero, ULTRAMETRIC, d.domain, check=False)


def default_base(space: PointSpace, chain: GaugeChain) -> MetricTable:
    """h(x, y) = l(0) for x != y."""
    top = chain.top
    zero = _zero_of(top)
    n = len(space)
    values = [[zero if i == j else top for j in range(n)] for i in range(n)]
    return MetricTable(space, values, zero, ULTRAMETRIC)


@dataclass
class ExtensionReport:
    d: MetricTable
    h: MetricTable
    r: Retraction
    chain: GaugeChain
    k: MetricTable
    u: MetricTable
    theta: MetricTable
    output: MetricTable
    certificates: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.certificates.values())


def _check_base(h: MetricTable):
    if h.flavor != ULTRAMETRIC:
        raise GultraError("the base h must be an ultrametric")
    report = validate(h)
    if report:
        raise GultraError(f"invalid base ultrametric: {report[0]}")


def _agrees_on_A(out: MetricTable, d: MetricTable) -> bool:
    return out.restrict(d.space.points).values == d.values


def extensor_phi(d: MetricTable, h: MetricTable, r: Retraction, chain: GaugeChain) -> ExtensionReport:
    _check_base(h)
    _check_retraction(h, r)
    if not chain.is_characteristic_for(d.off_diagonal()):
        raise ChainError("gauge chain is not characteristic for the values of d")
    if chain.level == "value" and d.flavor != ULTRAMETRIC:
        # rational values stand for their images in the Hahn field, which are
        # pairwise Archimedean-inequivalent; only ultrametrics survive that reading
        raise GultraError("a rational chain can only extend ultrametrics; use a group-valued chain for metrics")
    k = rounded(chain, d)
    u = sigma(h, r, k)
    th = theta(u)
    out = psi(u, r, d)
    certs = {
        "restriction": _agrees_on_A(out, d),
        "flavor": is_valid(out, d.flavor),
        "round_down_strict": all(a < b for a, b in zip(k.off_diagonal(), d.off_diagonal())),
    }
    if not certs["restriction"] or not certs["flavor"]:
        raise CertificateFailure(f"extension certificate failed: {certs}")
    return ExtensionReport(d, h, r, chain, k, u, th, out, certs)


def value_set(*tables: MetricTable, chain: GaugeChain | None = None) -> tuple:
    """Sorted distinct values of the tables and chain, zero included."""
    vals = {Fraction(0)}
    for t in tables:
        vals.update(v for row in t.values for v in row)
    if chain is not None:
        vals.update(chain.values)
    return tuple(sorted(vals))


def extensor_upsilon(
    d: MetricTable,
    h: MetricTable,
    r: Retraction,
    chain: GaugeChain,
    S: Sequence | None = None,
    other: MetricTable | None = None,
) -> ExtensionReport:
    """The ultrametric extension over a rational value set S, with optional pairwise checks."""
    if d.flavor != ULTRAMETRIC:
        raise GultraError("upsilon extends ultrametrics")
    if not chain.level == "value":
        raise GultraError("upsilon needs a rational chain")
    if S is not None:
        allowed = set(Fraction(s) for s in S)
        used = set(value_set(d, h, chain=chain)) | (set(value_set(other)) if other else set())
        stray = sorted(used - allowed)
        if stray:
            raise GultraError(f"values outside S: {stray}")
    rep = extensor_phi(d, h, r, chain)
    if other is not None:
        rep2 = extensor_phi(other, h, r, chain)
        dj = join(rep.d, rep2.d)
        repj = extensor_phi(dj, h, r, chain)
        rep.certificates["join"] = repj.output == join(rep.output, rep2.output)
        rep.certificates["isometry"] = ud_distance(rep.output, rep2.output) == ud_distance(rep.d, rep2.d)
        if _le(rep.d, rep2.d):
            rep.certificates["monotone"] = _le(rep.output, rep2.output)
    return rep


def _le(d: MetricTable, e: MetricTable) -> bool:
    return all(a <= b for a, b in zip(d.off_diagonal(), e.off_diagonal()))


# -- cross-validation through the Hahn field ------------------------------------


@dataclass
class CrosscheckResult:
    equal: bool
    witness: tuple | None = None
    direct: MetricTable | None = None
    embedded: MetricTable | None = None


def crosscheck_embed(d: MetricTable, h: MetricTable, r: Retraction, chain: GaugeChain) -> CrosscheckResult:
    """Run the extension in the field K(H((S*)^op)) and compare with the rational run."""
    direct = extensor_upsilon(d, h, r, chain).output
    S = BottomedOrderedSet(FiniteOrderedSet(value_set(d, h, chain=chain)))
    embed = {s: embed_I(S, s) for s in S}
    back = {v: s for s, v in embed.items()}
    field_zero = embed[S.bottom]
    lift = lambda t: transport(embed.__getitem__, t, zero=field_zero)
    field_chain = GaugeChain(tuple(embed[v] for v in chain.values))
    rep = extensor_phi(lift(d), lift(h), r, field_chain)
    out = rep.output
    if not is_valid(out.replace(flavor=METRIC, check=False), METRIC):
        return CrosscheckResult(False, ("metric axioms",), direct, out)
    try:
        recovered = transport(back.__getitem__, out, zero=S.bottom)
    except KeyError as exc:
        return CrosscheckResult(False, ("value outside I(S)", exc.args[0]), direct, out)
    for i, row in enumerate(direct.values):
        for j, v in enumerate(row):
            if recovered.values[i][j] != v:
                pts = direct.space.points
                return CrosscheckResult(False, (pts[i], pts[j]), direct, out)
    return CrosscheckResult(True, None, direct, out)
