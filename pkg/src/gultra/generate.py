"""Seeded random instances: hierarchical ultrametrics and rational metrics."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .space import METRIC, ULTRAMETRIC, MetricTable, PointSpace


def dyadic_levels(rng: random.Random, depth: int, max_step: int = 2) -> list[Fraction]:
    """depth+1 strictly decreasing powers of two, starting at or below 1."""
    k = rng.randint(0, max_step)
    levels = []
    for _ in range(depth + 1):
        levels.append(Fraction(1, 2**k))
        k += rng.randint(1, max_step)
    return levels


def random_ultrametric(
    rng: random.Random,
    n: int,
    depth: int = 3,
    branching: int = 3,
    levels: Sequence[Fraction] | None = None,
    subset: Sequence | None = None,
    labels: Sequence | None = None,
) -> MetricTable:
    """Distance of two points is the level value of their deepest common ancestor.

    Each point draws a random root-to-leaf path of length ``depth``; points
    sharing the whole path sit at the finest level.
    """
    levels = list(levels) if levels is not None else dyadic_levels(rng, depth)
    paths = [tuple(rng.randrange(branching) for _ in range(depth)) for _ in range(n)]
    labels = tuple(labels) if labels is not None else tuple(f"p{i}" for i in range(n))

    def lca(p, q):
        ell = 0
        while ell < depth and p[ell] == q[ell]:
            ell += 1
        return ell

    zero = levels[0] - levels[0]
    values = [
        [zero if i == j else levels[lca(paths[i], paths[j])] for j in range(n)] for i in range(n)
    ]
    if subset is None:
        subset = random_subset(rng, labels)
    return MetricTable(PointSpace(labels, tuple(subset)), values, zero, ULTRAMETRIC)


def random_subset(rng: random.Random, labels: Sequence) -> tuple:
    """A nonempty subset, kept in label order."""
    size = rng.randint(1, len(labels))
    chosen = set(rng.sample(list(labels), size))
    return tuple(p for p in labels if p in chosen)


def random_metric(rng: random.Random, labels: Sequence, max_weight: int = 8, denominators=(1, 2, 4)) -> MetricTable:
    """Shortest-path closure of random positive rational edge weights."""
    n = len(labels)
    w = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w[i][j] = w[j][i] = Fraction(rng.randint(1, max_weight), rng.choice(denominators))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if w[i][k] + w[k][j] < w[i][j]:
                    w[i][j] = w[i][k] + w[k][j]
    return MetricTable(PointSpace(tuple(labels)), w, Fraction(0), METRIC)


def random_ultrametric_on(rng: random.Random, labels: Sequence, levels: Sequence[Fraction], depth: int | None = None) -> MetricTable:
    depth = len(levels) - 1 if depth is None else depth
    return random_ultrametric(rng, len(labels), depth=depth, levels=levels, subset=(), labels=labels)


TAUS = (Fraction(3, 2), Fraction(2), Fraction(3))


def random_extension_instance(rng: random.Random, max_points: int = 8, taus=TAUS):
    """(d, h, r, chain) with d a dyadic ultrametric on the subset of h."""
    from .extend import GaugeChain
    from .retract import compute_retraction

    n = rng.randint(2, max_points)
    h = random_ultrametric(rng, n, depth=rng.randint(1, 4))
    r = compute_retraction(h, rng.choice(taus))
    d = random_ultrametric_on(rng, h.space.subset, dyadic_levels(rng, 3))
    return d, h, r, GaugeChain.auto(d, h)


def unit_chain(rank: int):
    """Gauge chain e_0 > e_1 > ... of lex unit vectors, one per Archimedean class."""
    from .extend import GaugeChain
    from .group import LexVector

    return GaugeChain(tuple(LexVector([int(i == a) for i in range(rank)]) for a in range(rank)))


def random_lex_extension_instance(rng: random.Random, rank: int = 4, max_points: int = 8, coord: int = 3):
    """(d, h, r, chain): d = D[abs] of random lex points on A, h valued in the unit chain.

    The first and last coordinates of every point are zero, so all values of d
    sit strictly between the top and the lowest chain class.
    """
    if rank < 3:
        raise ValueError("lex instances need rank at least 3")
    from .group import LexVector, metric_abs
    from .retract import compute_retraction

    chain = unit_chain(rank)
    n = rng.randint(2, max_points)
    labels = tuple(f"p{i}" for i in range(n))
    h = random_ultrametric(rng, n, depth=rank - 1, levels=chain.values[: rank], labels=labels)
    A = h.space.subset
    while True:
        pts = [LexVector([0] + [rng.randint(-coord, coord) for _ in range(rank - 2)] + [0]) for _ in A]
        if len(set(pts)) == len(pts):
            break
    t = metric_abs(pts)
    d = MetricTable(PointSpace(A), t.values, t.zero, METRIC)
    return d, h, compute_retraction(h, rng.choice(TAUS)), chain
