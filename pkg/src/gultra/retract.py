"""Retractions of finite ultrametric spaces onto a subset.

``compute_retraction`` picks, for every point x, the earliest point (in input
order) of A whose distance to x is at most tau times the distance from x to A.
The result is tau^2-Lipschitz; each call re-verifies that bound exactly and
raises :class:`~gultra.errors.CertificateFailure` if it ever fails.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from numbers import Rational

from .errors import CertificateFailure, GultraError
from .group import LexVector, lex_to_hahn
from .hahn import HahnSeries, embed_I
from .order import BottomedOrderedSet, FiniteOrderedSet
from .space import ULTRAMETRIC, MetricTable, PointSpace, dist_to_set

DEFAULT_TAU = Fraction(2)
DEFAULT_BOUND = 7


@dataclass(frozen=True)
class Retraction:
    space: PointSpace
    mapping: dict
    tau: object = None
    certificate: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        A = set(self.space.subset)
        for p in self.space.points:
            if p not in self.mapping:
                raise GultraError(f"retraction undefined at {p!r}")
            if self.mapping[p] not in A:
                raise GultraError(f"{p!r} is mapped outside the subset")
        for a in A:
            if self.mapping[a] != a:
                raise GultraError(f"retraction moves subset point {a!r}")

    def __call__(self, x):
        return self.mapping[x]

    def __getitem__(self, x):
        return self.mapping[x]

    @classmethod
    def identity(cls, space: PointSpace) -> "Retraction":
        return cls(space, {p: p for p in space.points})

    def index_map(self) -> list[int]:
        pts = self.space.points
        return [pts.index(self.mapping[p]) for p in pts]


class _Scaler:
    """Embeds table values somewhere rational multiples of them make sense."""

    def __init__(self, d: MetricTable, tau):
        self.tau = tau
        sample = next(iter(d.off_diagonal()), d.zero)
        if isinstance(tau, HahnSeries):
            if not isinstance(sample, HahnSeries) or sample.index != tau.index:
                raise GultraError("a series-valued tau needs values in the same field")
            self.embed = lambda v: v
        elif isinstance(sample, Rational):
            self.embed = lambda v: v
        elif isinstance(sample, LexVector):
            self.embed = lex_to_hahn
        elif isinstance(sample, HahnSeries):
            self.embed = lambda v: v
        else:
            values = sorted(set(v for row in d.values for v in row) | {d.zero})
            if values[0] != d.zero:
                raise GultraError("table has values below its zero")
            S = BottomedOrderedSet(FiniteOrderedSet(tuple(values)))
            self.embed = lambda v: embed_I(S, v)

    def scale(self, k, v):
        return k * self.embed(v)


def _check_inputs(d: MetricTable, tau):
    if d.flavor != ULTRAMETRIC:
        raise GultraError("retraction needs an ultrametric table")
    if not d.space.subset:
        raise GultraError("the subset A is empty")
    one = HahnSeries.constant(tau.index, 1) if isinstance(tau, HahnSeries) else 1
    if not tau > one:
        raise GultraError(f"tau must exceed 1, got {tau}")


def _coerce_tau(tau):
    if isinstance(tau, HahnSeries):
        return tau
    return Fraction(tau)


def st_set(d: MetricTable, x, tau=DEFAULT_TAU, _scaler=None) -> tuple:
    """Points a of A with d(x, a) <= tau * dist(x, A), in point order."""
    tau = _coerce_tau(tau)
    _check_inputs(d, tau)
    sc = _scaler or _Scaler(d, tau)
    i = d.space.index(x)
    rho = dist_to_set(d, x)
    limit = sc.scale(tau, rho)
    return tuple(
        d.space.points[j] for j in d.space.subset_indices if sc.embed(d.values[i][j]) <= limit
    )


def compute_retraction(d: MetricTable, tau=DEFAULT_TAU) -> Retraction:
    tau = _coerce_tau(tau)
    _check_inputs(d, tau)
    sc = _Scaler(d, tau)
    mapping = {}
    for x in d.space.points:
        candidates = st_set(d, x, tau, sc)
        mapping[x] = candidates[0]
    r = Retraction(d.space, mapping, tau)
    cert = lipschitz_certificate(d, r, tau * tau, sc)
    if not cert["holds"]:
        raise CertificateFailure(f"tau^2-Lipschitz bound fails at {cert['violation']}")
    object.__setattr__(r, "certificate", cert)
    return r


def lipschitz_certificate(d: MetricTable, r: Retraction, factor, scaler=None) -> dict:
    """Check d(r x, r y) <= factor * d(x, y) on every pair; report the worst ratio."""
    sc = scaler or _Scaler(d, Fraction(2))
    idx = r.index_map()
    v = d.values
    worst, worst_pair = None, None
    for i, j in combinations(range(len(v)), 2):
        lhs, rhs = v[idx[i]][idx[j]], v[i][j]
        if not sc.embed(lhs) <= sc.scale(factor, rhs):
            return {"holds": False, "violation": (d.space.points[i], d.space.points[j])}
        if isinstance(rhs, Rational) and rhs:
            ratio = Fraction(lhs) / rhs
            if worst is None or ratio > worst:
                worst, worst_pair = ratio, (d.space.points[i], d.space.points[j])
    return {"holds": True, "factor": factor, "worst_ratio": worst, "worst_pair": worst_pair}


def is_one_lipschitz(d: MetricTable, r: Retraction) -> bool:
    idx = r.index_map()
    v = d.values
    n = len(v)
    return all(v[idx[i]][idx[j]] <= v[i][j] for i in range(n) for j in range(i + 1, n))


def one_lipschitz_remetrize(h: MetricTable, r: Retraction) -> MetricTable:
    """k(x, y) = max(h(x, y), h(r x, r y)); r is 1-Lipschitz for k."""
    if r.space.points != h.space.points:
        raise GultraError("retraction and table live on different spaces")
    idx = r.index_map()
    n = len(h)
    values = [[max(h.values[i][j], h.values[idx[i]][idx[j]]) for j in range(n)] for i in range(n)]
    k = h.replace(values=values)
    if not is_one_lipschitz(k, r):
        raise CertificateFailure("remetrized table does not make r 1-Lipschitz")
    return k


def find_one_lipschitz_retraction(d: MetricTable, bound: int = DEFAULT_BOUND) -> Retraction | None:
    """First 1-Lipschitz retraction onto A in lexicographic candidate order.

    Free points are assigned in point order and each one tries the points of A
    in point order, so the first complete assignment found by the backtracking
    search is the lexicographically least one.
    """
    n = len(d)
    if n > bound:
        raise GultraError(f"{n} points exceed the brute-force bound {bound}")
    A = d.space.subset_indices
    if not A:
        raise GultraError("the subset A is empty")
    v = d.values
    free = [i for i in range(n) if i not in A]
    image = {a: a for a in A}

    def consistent(i, a):
        for j, b in image.items():
            if v[a][b] > v[i][j]:
                return False
        return True

    def search(k):
        if k == len(free):
            return True
        i = free[k]
        for a in A:
            if consistent(i, a):
                image[i] = a
                if search(k + 1):
                    return True
                del image[i]
        return False

    if not search(0):
        return None
    pts = d.space.points
    return Retraction(d.space, {pts[i]: pts[image[i]] for i in range(n)})


def field_retraction(d: MetricTable, tau=DEFAULT_TAU) -> Retraction:
    """compute_retraction run on the image of d under I, read back on d's space.

    Distinct values become Archimedean-inequivalent in the field, so rational
    multiples no longer reach across values and St_A(x) holds only nearest points.
    """
    tau = _coerce_tau(tau)
    _check_inputs(d, tau)
    values = sorted(set(v for row in d.values for v in row) | {d.zero})
    S = BottomedOrderedSet(FiniteOrderedSet(tuple(values)))
    image = {v: embed_I(S, v) for v in values}
    lifted = d.replace(values=[[image[v] for v in row] for row in d.values], zero=image[d.zero], domain=None)
    r = compute_retraction(lifted, tau)
    return Retraction(d.space, dict(r.mapping), tau, r.certificate)
