import random
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from gultra.errors import GultraError
from gultra.extend import (
    ChainError,
    GaugeChain,
    crosscheck_embed,
    default_base,
    extensor_phi,
    extensor_upsilon,
    psi,
    round_down,
    sigma,
    theta,
)
from gultra.generate import dyadic_levels, random_extension_instance, random_lex_extension_instance, random_ultrametric, random_ultrametric_on
from gultra.group import LexVector, metric_abs
from gultra.retract import Retraction, compute_retraction, field_retraction
from gultra.space import METRIC, ULTRAMETRIC, MetricTable, PointSpace, dist_to_set, in_neighborhood, is_valid, join, table, ud_distance

CHAIN = GaugeChain((F(8), F(4), F(1, 2)))


def fixture():
    h = table(("a", "b", "x"), [[0, 4, 1], [4, 0, 4], [1, 4, 0]], F(0), ULTRAMETRIC, subset=("a", "b"))
    d = table(("a", "b"), [[0, 2], [2, 0]], F(0), ULTRAMETRIC)
    return d, h, compute_retraction(h, 2)


def test_theta_examples():
    d, h, r = fixture()
    th = theta(h)
    assert th("a", "b") == 0
    assert th("a", "x") == 1 and th("b", "x") == 1
    h2 = h.replace(space=h.space.with_subset(h.space.points))
    assert all(v == 0 for row in theta(h2).values for v in row)
    with pytest.raises(GultraError):
        theta(h, ())


@given(st.integers(0, 10**6))
@settings(max_examples=100)
def test_theta_properties(seed):
    h = random_ultrametric(random.Random(seed), 8)
    th = theta(h)
    assert is_valid(th.replace(pseudo=True), ULTRAMETRIC)
    A = set(h.space.subset)
    rho = {p: dist_to_set(h, p) for p in h.space.points}
    for x, y, z in product(h.space.points, repeat=3):
        if x in A and y in A:
            assert th(x, y) == 0
        m = max(rho[x], rho[y])
        assert h(x, y) <= max(h(x, z), h(z, y))
        assert m <= max(rho[x], rho[z], h(z, y))
        assert m <= max(h(x, z), rho[z], rho[y])
        assert m <= max(rho[x], rho[z], rho[y])
    off = [p for p in h.space.points if p not in A]
    if off:
        assert is_valid(th.restrict(off).replace(pseudo=False), ULTRAMETRIC)


def test_psi_example():
    d, h, r = fixture()
    out = psi(h, r, d)
    assert out("a", "b") == 2 and out("x", "b") == 2 and out("a", "x") == 1
    assert is_valid(out, ULTRAMETRIC)


def test_sigma_examples():
    d, h, r = fixture()
    k = d.replace(values=[[0, F(1, 2)], [F(1, 2), 0]])
    s = sigma(h, r, k)
    assert all(a >= b for a, b in zip(s.off_diagonal(), h.off_diagonal()))
    assert s.restrict(("a", "b")).values == join(k, h.restrict(("a", "b"))).values
    full = h.replace(space=h.space.with_subset(h.space.points))
    kk = full.replace(values=[[0, 1, 2], [1, 0, 2], [2, 2, 0]])
    assert sigma(full, Retraction.identity(full.space), kk).values == join(kk, full).values


def test_round_down_examples():
    c = GaugeChain((F(8), F(4), F(2)))
    assert round_down(c, F(5)) == 4
    assert round_down(c, F(4)) == 2
    assert round_down(c, F(0)) == 0
    assert round_down(c, F(100)) == 8
    with pytest.raises(ChainError):
        round_down(c, F(2))


def test_chain_validation():
    with pytest.raises(ChainError):
        GaugeChain((F(1), F(2)))
    with pytest.raises(ChainError):
        GaugeChain((F(1), F(0)))
    with pytest.raises(ChainError):
        GaugeChain((LexVector((1, 0)), LexVector((2, 0))))
    assert GaugeChain((LexVector((1, 0)), LexVector((0, 1)))).level == "class"


@given(st.lists(st.fractions(min_value=F(1, 64), max_value=64), min_size=1, max_size=10))
def test_round_down_strict(vs):
    c = GaugeChain.auto(table(("p",), [[0]], F(0)), *[table(("p", "q"), [[0, v], [v, 0]], F(0)) for v in vs])
    for v in vs:
        assert round_down(c, v) < v


def test_worked_pipeline():
    d, h, r = fixture()
    rep = extensor_phi(d, h, r, CHAIN)
    assert rep.k("a", "b") == F(1, 2)
    assert rep.output("a", "b") == 2 and rep.output("x", "b") == 2 and rep.output("a", "x") == 1
    assert rep.ok
    assert crosscheck_embed(d, h, r, CHAIN).equal


def test_total_space_is_fixed():
    h = random_ultrametric(random.Random(2), 5, subset=("p0", "p1", "p2", "p3", "p4"))
    r = Retraction.identity(h.space)
    d = random_ultrametric_on(random.Random(3), h.space.points, dyadic_levels(random.Random(4), 3))
    chain = GaugeChain.auto(d, h)
    assert extensor_phi(d, h, r, chain).output.values == d.values
    assert crosscheck_embed(d, h, r, chain).equal


def test_default_base():
    sp = PointSpace(("a", "b", "c"), ("a",))
    h = default_base(sp, CHAIN)
    assert set(h.off_diagonal()) == {F(8)} and is_valid(h)


def test_phi_rejections():
    d, h, r = fixture()
    with pytest.raises(ChainError):
        extensor_phi(d, h, r, GaugeChain((F(8), F(4))))
    bad = h.replace(values=[[0, 4, 1], [4, 0, 1], [1, 1, 0]])
    with pytest.raises(GultraError):
        extensor_phi(d, bad, r, CHAIN)
    dm = d.replace(flavor=METRIC)
    with pytest.raises(GultraError):
        extensor_phi(dm, h, r, CHAIN)


def test_upsilon_value_set():
    d, h, r = fixture()
    with pytest.raises(GultraError):
        extensor_upsilon(d, h, r, CHAIN, S=(0, 2, 4, 8))
    rep = extensor_upsilon(d, h, r, CHAIN, S=(0, F(1, 2), 1, 2, 4, 8))
    assert rep.output.restrict(("a", "b")).values == d.values


@given(st.integers(0, 10**6))
@settings(max_examples=100)
def test_lex_metric_extension(seed):
    d, h, r, chain = random_lex_extension_instance(random.Random(seed))
    rep = extensor_phi(d, h, r, chain)
    assert rep.output.restrict(d.space.points).values == d.values
    assert is_valid(rep.output, METRIC)


@given(st.integers(0, 10**6))
@settings(max_examples=100)
def test_monotone_and_join(seed):
    rng = random.Random(seed)
    h = random_ultrametric(rng, rng.randint(2, 9))
    r = field_retraction(h, rng.choice([F(3, 2), F(2), F(3)]))
    levels = dyadic_levels(rng, 3)
    d = random_ultrametric_on(rng, h.space.subset, levels)
    e = random_ultrametric_on(rng, h.space.subset, levels)
    chain = GaugeChain.auto(d, e, h)
    pd, pe = extensor_phi(d, h, r, chain).output, extensor_phi(e, h, r, chain).output
    pj = extensor_phi(join(d, e), h, r, chain).output
    assert pj == join(pd, pe)
    assert all(a <= b for a, b in zip(pd.off_diagonal(), pj.off_diagonal()))
    assert ud_distance(pd, pe) == ud_distance(d, e)


def test_join_law_needs_nearest_retraction():
    # with rational tau-scaling r(x) = a0 is not a nearest point of A, and the
    # distance from x to A then depends on d; the join law breaks here
    pts = ("a0", "a1", "a2", "x")
    h = table(pts, [[0, 2, 2, 2], [2, 0, 1, 1], [2, 1, 0, 1], [2, 1, 1, 0]], F(0), ULTRAMETRIC, subset=pts[:3])
    r = compute_retraction(h, 2)
    assert r("x") == "a0" and dist_to_set(h, "x") == 1
    d = table(pts[:3], [[0, F(1, 2), 8], [F(1, 2), 0, 8], [8, 8, 0]], F(0), ULTRAMETRIC)
    e = table(pts[:3], [[0, 8, F(1, 2)], [8, 0, 8], [F(1, 2), 8, 0]], F(0), ULTRAMETRIC)
    chain = GaugeChain((F(8), F(4), F(1, 4)))
    run = lambda t, rr: extensor_phi(t, h, rr, chain).output
    assert run(join(d, e), r)("x", "a0") == 2
    assert join(run(d, r), run(e, r))("x", "a0") == 1
    rf = field_retraction(h, 2)
    assert rf("x") == "a1"
    assert run(join(d, e), rf) == join(run(d, rf), run(e, rf))


@given(st.integers(0, 10**6))
@settings(max_examples=60)
def test_continuity_surrogate(seed):
    rng = random.Random(seed)
    d, h, r, _ = random_extension_instance(rng)
    levels = sorted(set(d.off_diagonal()))
    if not levels:
        return
    # e agrees with d except that values below eta may move below eta
    eta = rng.choice(levels)
    e = random_ultrametric_on(rng, d.space.points, [v for v in dyadic_levels(rng, 3)])
    e = join(d, e.replace(values=[[min(v, eta / 2) for v in row] for row in e.values]))
    chain = GaugeChain.auto(d, e, h)
    eps = next((c for c in reversed(chain.values) if c > eta), None)
    if eps is None or not in_neighborhood(e, d, eta):
        return
    assert in_neighborhood(extensor_phi(e, h, r, chain).output, extensor_phi(d, h, r, chain).output, eps)


@given(st.integers(0, 10**6))
@settings(max_examples=40)
def test_crosscheck_random(seed):
    d, h, r, chain = random_extension_instance(random.Random(seed))
    assert crosscheck_embed(d, h, r, chain).equal
