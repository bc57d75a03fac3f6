import random
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from gultra.errors import GultraError
from gultra.generate import random_ultrametric
from gultra.group import LexVector
from gultra.retract import (
    Retraction,
    compute_retraction,
    field_retraction,
    find_one_lipschitz_retraction,
    is_one_lipschitz,
    one_lipschitz_remetrize,
    st_set,
)
from gultra.space import ULTRAMETRIC, dist_to_set, is_valid, table


def three(dab=4, dxb=4, subset=("a", "b")):
    return table(("a", "b", "x"), [[0, dab, 1], [dab, 0, dxb], [1, dxb, 0]], F(0), ULTRAMETRIC, subset=subset)


def brute_one_lipschitz(d):
    """First 1-Lipschitz retraction by plain enumeration of all maps X\\A -> A."""
    pts = d.space.points
    A = [p for p in pts if p in d.space.subset]
    free = [p for p in pts if p not in A]
    for images in product(A, repeat=len(free)):
        m = {a: a for a in A}
        m.update(zip(free, images))
        if all(d(m[x], m[y]) <= d(x, y) for x in pts for y in pts):
            return m
    return None


def test_st_set_examples():
    d = three()
    assert st_set(d, "a", 2) == ("a",)
    assert st_set(d, "x", 2) == ("a",)
    d2 = table(("a", "b", "x"), [[0, 2, 1], [2, 0, 2], [1, 2, 0]], F(0), ULTRAMETRIC, subset=("a", "b"))
    assert st_set(d2, "x", 2) == ("a", "b")


def test_st_set_errors():
    with pytest.raises(GultraError):
        st_set(three(), "x", 1)
    with pytest.raises(GultraError):
        st_set(three(subset=()), "x", 2)


def test_compute_retraction_fixture():
    d = three()
    r = compute_retraction(d, 2)
    assert r("x") == "a" and r("a") == "a" and r("b") == "b"
    assert d(r("x"), r("b")) == 4 <= 4 * 4 * d("x", "b")
    assert r.certificate["holds"]


def test_identity_and_constant():
    d = three(subset=("a", "b", "x"))
    assert compute_retraction(d).mapping == {p: p for p in d.space.points}
    d = three(subset=("b",))
    assert set(compute_retraction(d).mapping.values()) == {"b"}


def test_retraction_invariants_checked():
    sp = three().space
    with pytest.raises(GultraError):
        Retraction(sp, {"a": "b", "b": "b", "x": "a"})
    with pytest.raises(GultraError):
        Retraction(sp, {"a": "a", "b": "b", "x": "x"})


@given(st.integers(0, 10**6), st.sampled_from([F(3, 2), F(2), F(3)]))
@settings(max_examples=150)
def test_retraction_properties(seed, tau):
    d = random_ultrametric(random.Random(seed), 9)
    r = compute_retraction(d, tau)
    for x in d.space.points:
        S = st_set(d, x, tau)
        rho = dist_to_set(d, x)
        assert any(d(x, a) == rho for a in S)
        assert d(x, r(x)) <= tau * rho
    for x, y in product(d.space.points, repeat=2):
        assert d(r(x), r(y)) <= tau * tau * d(x, y)


def test_lex_valued_retraction():
    e0, e1 = LexVector((1, 0)), LexVector((0, 1))
    z = LexVector((0, 0))
    d = table(("a", "b", "x"), [[z, e0, e1], [e0, z, e0], [e1, e0, z]], z, ULTRAMETRIC, subset=("a", "b"))
    r = compute_retraction(d, 2)
    assert r("x") == "a" and r.certificate["holds"]


def test_field_retraction_is_nearest():
    rng = random.Random(5)
    for _ in range(50):
        d = random_ultrametric(rng, 8)
        r = field_retraction(d, 3)
        for x in d.space.points:
            assert d(x, r(x)) == dist_to_set(d, x)


def test_remetrize_examples():
    d = three(subset=("a", "b", "x"))
    assert one_lipschitz_remetrize(d, Retraction.identity(d.space)).values == d.values
    d = three()
    r = compute_retraction(d, 2)
    k = one_lipschitz_remetrize(d, r)
    assert k("x", "b") == 4 and k(r("x"), r("b")) == 4


@given(st.integers(0, 10**6))
@settings(max_examples=100)
def test_remetrize_properties(seed):
    d = random_ultrametric(random.Random(seed), 9)
    r = compute_retraction(d, 3)
    k = one_lipschitz_remetrize(d, r)
    assert is_valid(k, ULTRAMETRIC) and is_one_lipschitz(k, r)
    assert all(a >= b for a, b in zip(k.off_diagonal(), d.off_diagonal()))
    assert k.on_subset().values == d.on_subset().values


def test_find_examples():
    d = three(subset=("a", "b", "x"))
    assert find_one_lipschitz_retraction(d).mapping == {p: p for p in d.space.points}
    r = find_one_lipschitz_retraction(three())
    assert r("x") == "a"
    big = random_ultrametric(random.Random(1), 8)
    with pytest.raises(GultraError):
        find_one_lipschitz_retraction(big, bound=7)


@given(st.integers(0, 10**6))
@settings(max_examples=150)
def test_find_matches_enumeration(seed):
    rng = random.Random(seed)
    d = random_ultrametric(rng, rng.randint(1, 6))
    r = find_one_lipschitz_retraction(d)
    assert r is not None
    assert r.mapping == brute_one_lipschitz(d)
