"""Finite point spaces carrying distance tables.

A :class:`MetricTable` stores a full n x n matrix of values from some totally
ordered domain (rationals, lex vectors, Hahn series, Archimedean classes, or
elements of a bottomed ordered set).  ``zero`` is the domain's least element
for ultrametrics and the group zero for metrics.

Axiom names follow this numbering::

    M0 / U0  d(x, y) = 0 implies x = y
    M1 / U1  d(x, x) = 0
    M2 / U2  0 <= d(x, y)
    M3 / U3  d(x, y) = d(y, x)
    M4       d(x, y) <= d(x, z) + d(z, y)
    U4       d(x, y) <= max(d(x, z), d(z, y))
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Sequence

from .errors import AxiomViolation, GultraError

METRIC = "metric"
ULTRAMETRIC = "ultrametric"


@dataclass(frozen=True)
class PointSpace:
    points: tuple
    subset: tuple = ()

    def __post_init__(self):
        points = tuple(self.points)
        subset = tuple(self.subset)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "subset", subset)
        if len(set(points)) != len(points):
            raise GultraError(f"duplicate point labels in {points!r}")
        stray = [a for a in subset if a not in points]
        if stray:
            raise GultraError(f"subset points not in space: {stray!r}")
        if len(set(subset)) != len(subset):
            raise GultraError("duplicate labels in subset")

    def __len__(self):
        return len(self.points)

    def index(self, p) -> int:
        try:
            return self.points.index(p)
        except ValueError:
            raise GultraError(f"unknown point {p!r}") from None

    @property
    def subset_indices(self) -> tuple[int, ...]:
        # kept in point order, which is also the tie-break order for retractions
        chosen = set(self.subset)
        return tuple(i for i, p in enumerate(self.points) if p in chosen)

    def with_subset(self, subset) -> "PointSpace":
        return PointSpace(self.points, tuple(subset))

    def restrict(self, labels) -> "PointSpace":
        labels = tuple(labels)
        sub = tuple(a for a in self.subset if a in labels)
        return PointSpace(labels, sub)


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.axiom} at {self.witness}: {self.detail}"


@dataclass(frozen=True, eq=False)
class MetricTable:
    space: PointSpace
    values: tuple
    zero: object
    flavor: str = METRIC
    domain: object = None
    pseudo: bool = False
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        values = tuple(tuple(row) for row in self.values)
        object.__setattr__(self, "values", values)
        if self.flavor not in (METRIC, ULTRAMETRIC):
            raise GultraError(f"unknown flavor {self.flavor!r}")
        n = len(self.space)
        if len(values) != n or any(len(row) != n for row in values):
            raise GultraError(f"table shape does not match {n} points")
        if self.check:
            report = validate(self)
            if report:
                raise AxiomViolation("; ".join(str(v) for v in report[:5]))

    def __len__(self):
        return len(self.values)

    def __call__(self, x, y):
        return self.values[self.space.index(x)][self.space.index(y)]

    def __getitem__(self, ij):
        i, j = ij
        return self.values[i][j]

    def __eq__(self, other):
        if not isinstance(other, MetricTable):
            return NotImplemented
        return self.space.points == other.space.points and self.values == other.values

    def __hash__(self):
        return hash((self.space.points, self.values))

    def replace(self, **kw) -> "MetricTable":
        args = dict(
            space=self.space, values=self.values, zero=self.zero, flavor=self.flavor,
            domain=self.domain, pseudo=self.pseudo, check=False,
        )
        args.update(kw)
        return MetricTable(**args)

    def off_diagonal(self):
        n = len(self)
        for i in range(n):
            for j in range(n):
                if i != j:
                    yield self.values[i][j]

    def restrict(self, labels) -> "MetricTable":
        idx = [self.space.index(p) for p in labels]
        values = [[self.values[i][j] for j in idx] for i in idx]
        return self.replace(space=self.space.restrict(labels), values=values)

    def on_subset(self) -> "MetricTable":
        return self.restrict(self.space.subset)


def table(points: Sequence, rows, zero, flavor=METRIC, subset=(), **kw) -> MetricTable:
    return MetricTable(PointSpace(tuple(points), tuple(subset)), rows, zero, flavor, **kw)


def _ranked(t: MetricTable):
    """The table with every value replaced by its rank among the distinct values."""
    distinct = sorted(set(v for row in t.values for v in row) | {t.zero})
    rank = {v: i for i, v in enumerate(distinct)}
    return [[rank[v] for v in row] for row in t.values], rank[t.zero]


def _quick_ultrametric(t: MetricTable) -> bool:
    v, z = _ranked(t)
    n = len(v)
    for i in range(n):
        if v[i][i] != z:
            return False
        row = v[i]
        for j in range(n):
            if i == j:
                continue
            x = row[j]
            if x < z or (x == z and not t.pseudo) or x != v[j][i]:
                return False
    for i in range(n):
        vi = v[i]
        for j in range(i + 1, n):
            x = vi[j]
            for k in range(n):
                if x > vi[k] and x > v[k][j]:
                    return False
    return True


def _quick_metric(t: MetricTable) -> bool:
    v, z = t.values, t.zero
    n = len(v)
    for i in range(n):
        if v[i][i] != z:
            return False
        for j in range(i + 1, n):
            x = v[i][j]
            if x != v[j][i] or x < z or (x == z and not t.pseudo):
                return False
    for i in range(n):
        vi = v[i]
        for j in range(i + 1, n):
            x = vi[j]
            for k in range(n):
                if k != i and k != j and x > vi[k] + v[k][j]:
                    return False
    return True


def validate(t: MetricTable, flavor: str | None = None) -> list[Violation]:
    """Every violated axiom with a witness; empty iff the table is valid."""
    flavor = flavor or t.flavor
    quick = _quick_ultrametric if flavor == ULTRAMETRIC else _quick_metric
    if quick(t):
        return []
    tag = "U" if flavor == ULTRAMETRIC else "M"
    n = len(t.values)
    v = t.values
    zero = t.zero
    out = []
    for i in range(n):
        if v[i][i] != zero:
            out.append(Violation(f"{tag}1", (i,), f"d(p{i},p{i}) = {v[i][i]!r}"))
    for i, j in product(range(n), repeat=2):
        if i == j:
            continue
        if v[i][j] == zero and not t.pseudo:
            out.append(Violation(f"{tag}0", (i, j), "distinct points at distance zero"))
        if v[i][j] < zero:
            out.append(Violation(f"{tag}2", (i, j), f"negative value {v[i][j]!r}"))
        if i < j and v[i][j] != v[j][i]:
            out.append(Violation(f"{tag}3", (i, j), f"{v[i][j]!r} != {v[j][i]!r}"))
    for i, j, k in product(range(n), repeat=3):
        if flavor == ULTRAMETRIC:
            if v[i][j] > max(v[i][k], v[k][j]):
                out.append(Violation("U4", (i, j, k), f"{v[i][j]!r} > max({v[i][k]!r}, {v[k][j]!r})"))
        else:
            if v[i][j] > v[i][k] + v[k][j]:
                out.append(Violation("M4", (i, j, k), f"{v[i][j]!r} > {v[i][k]!r} + {v[k][j]!r}"))
    return out


def is_valid(t: MetricTable, flavor: str | None = None) -> bool:
    return not validate(t, flavor)


def _compatible(d: MetricTable, e: MetricTable):
    if d.space.points != e.space.points:
        raise GultraError("tables live on different point sets")
    if d.zero != e.zero:
        raise GultraError("tables live in different value domains")


def join(d: MetricTable, e: MetricTable) -> MetricTable:
    _compatible(d, e)
    if d.flavor != e.flavor:
        raise GultraError("cannot join a metric with an ultrametric")
    n = len(d)
    values = [[max(d.values[i][j], e.values[i][j]) for j in range(n)] for i in range(n)]
    return d.replace(values=values, pseudo=d.pseudo and e.pseudo, check=False)


def pullback(f, d: MetricTable, points: Sequence | None = None) -> MetricTable:
    """(f*d)(x, y) = d(f(x), f(y)); ``f`` maps labels of ``points`` to labels of d."""
    points = tuple(points if points is not None else d.space.points)
    g = f.__getitem__ if hasattr(f, "__getitem__") else f
    try:
        images = [d.space.index(g(x)) for x in points]
    except (KeyError, IndexError) as exc:
        raise GultraError(f"map is not total: {exc}") from None
    values = [[d.values[a][b] for b in images] for a in images]
    return MetricTable(
        PointSpace(points), values, d.zero, d.flavor, d.domain, pseudo=True, check=False,
    )


def dist_to_set(d: MetricTable, x, A: Iterable | None = None):
    """min over a in A of d(x, a)."""
    A = tuple(d.space.subset if A is None else A)
    if not A:
        raise GultraError("distance to an empty set")
    i = d.space.index(x)
    return min(d.values[i][d.space.index(a)] for a in A)


def closed_ball(d: MetricTable, x, s) -> frozenset:
    i = d.space.index(x)
    return frozenset(p for j, p in enumerate(d.space.points) if d.values[i][j] <= s)


def open_ball(d: MetricTable, x, s) -> frozenset:
    i = d.space.index(x)
    return frozenset(p for j, p in enumerate(d.space.points) if d.values[i][j] < s)


def check_isosceles(d: MetricTable) -> bool:
    """d(x,z) < d(y,z) implies d(y,z) = d(x,y), for all triples."""
    v = d.values
    n = len(v)
    for x, y, z in product(range(n), repeat=3):
        if v[x][z] < v[y][z] and v[y][z] != v[x][y]:
            return False
    return True


def m_s_table(S, points: Sequence) -> MetricTable:
    """M(x, y) = max(x, y) for x != y and the bottom on the diagonal."""
    points = tuple(points)
    if len(set(points)) != len(points):
        raise GultraError("duplicate points")
    elems = [S.element(p) for p in points]
    n = len(points)
    values = [[S.zero if i == j else max(elems[i], elems[j]) for j in range(n)] for i in range(n)]
    return MetricTable(PointSpace(tuple(str(p) for p in points)), values, S.zero, ULTRAMETRIC, S)


def in_neighborhood(e: MetricTable, d: MetricTable, eps) -> bool:
    """e may exceed d only below eps, and d may exceed e only below eps.

    Read literally, ``e < d v eps`` would keep d out of its own neighbourhood
    wherever d >= eps, so equality is allowed: e <= d or e < eps, and vice versa.
    """
    _compatible(d, e)
    if not eps > d.zero:
        raise GultraError("neighbourhood radius must be positive")
    n = len(d)
    for i, j in product(range(n), repeat=2):
        a, b = d.values[i][j], e.values[i][j]
        if not ((b <= a or b < eps) and (a <= b or a < eps)):
            return False
    return True


def ud_distance(d: MetricTable, e: MetricTable):
    """Least eps with d <= max(e, eps) and e <= max(d, eps) pointwise."""
    _compatible(d, e)
    if d.flavor != ULTRAMETRIC or e.flavor != ULTRAMETRIC:
        raise GultraError("UD is defined between ultrametrics")
    best = d.zero
    for a, b in zip(d.off_diagonal(), e.off_diagonal()):
        if a != b:
            best = max(best, a, b)
    return best


def ud_distance_by_scan(d: MetricTable, e: MetricTable, candidates: Iterable):
    """Definitional UD: smallest candidate eps satisfying both inequalities."""
    _compatible(d, e)
    for eps in sorted(set(candidates)):
        ok = all(
            a <= max(b, eps) and b <= max(a, eps) for a, b in zip(d.off_diagonal(), e.off_diagonal())
        )
        if ok:
            return eps
    return None


def transport(psi: Callable, d: MetricTable, flavor: str | None = None, zero=None, domain=None) -> MetricTable:
    """Apply an isotone value map to every entry of ``d``."""
    occurring = sorted(set(v for row in d.values for v in row))
    image = {v: psi(v) for v in occurring}
    new_zero = psi(d.zero) if zero is None else zero
    for v in occurring:
        if v != d.zero and image[v] == new_zero:
            raise GultraError(f"value map collapses positive value {v!r} to the bottom")
    for a, b in zip(occurring, occurring[1:]):
        if image[b] < image[a]:
            raise GultraError(f"value map is not isotone: {a!r} -> {image[a]!r}, {b!r} -> {image[b]!r}")
    values = [[image[v] for v in row] for row in d.values]
    return MetricTable(d.space, values, new_zero, flavor or d.flavor, domain, d.pseudo, check=False)
