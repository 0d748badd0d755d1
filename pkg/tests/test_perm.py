import itertools
import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chisquare

from permauth.perm import (Permutation, apply, compose, identity, inverse, make_rng, order, power,
                           random_permutation, rotation)


@st.composite
def perms(draw, n=None):
    n = n if n is not None else draw(st.integers(1, 64))
    return Permutation(tuple(draw(st.permutations(range(n)))))


def basis_action(p, q):
    """Oracle: recover compose(p, q) from its action on the labelled vector [0..n-1]."""
    v = list(range(p.degree))
    return Permutation(tuple(p.apply(q.apply(v))))


def test_identity():
    assert identity(3).mapping == (0, 1, 2)
    assert identity(5).order() == 1
    assert identity(4).apply([9, 8, 7, 6]) == [9, 8, 7, 6]


@pytest.mark.parametrize("n", [0, -1])
def test_identity_rejects_bad_degree(n):
    with pytest.raises(ValueError, match="invalid degree"):
        identity(n)


def test_invalid_mapping():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))
    with pytest.raises(ValueError):
        Permutation((1, 2, 3))


def test_apply_pull_convention():
    assert Permutation((2, 0, 1)).apply([10, 20, 30]) == [30, 10, 20]
    assert Permutation((2, 0, 1)).apply("abc") == "cab"
    with pytest.raises(ValueError, match="length mismatch"):
        Permutation((2, 0, 1)).apply([1, 2])


def test_compose_example_matches_action_contract():
    p, q = Permutation((1, 2, 0)), Permutation((2, 1, 0))
    assert compose(p, q) == basis_action(p, q)
    # frozen from the basis-vector oracle above
    assert compose(p, q).mapping == (1, 0, 2)


def test_compose_degree_mismatch():
    with pytest.raises(ValueError, match="degree mismatch"):
        compose(identity(3), identity(4))


def test_inverse_examples():
    assert inverse(identity(5)) == identity(5)
    assert inverse(Permutation((1, 2, 0))).mapping == (2, 0, 1)


def test_inverse_involution(rng):
    for _ in range(100):
        p = random_permutation(rng.randrange(1, 40), rng)
        assert inverse(inverse(p)) == p


def test_power_and_order_examples():
    c4 = Permutation((1, 2, 3, 0))
    assert power(c4, 0) == identity(4)
    assert power(c4, 4) == identity(4)
    assert order(c4) == 4
    assert order(Permutation((1, 0, 3, 4, 2))) == 6
    assert order(rotation(9)) == 9


def test_power_matches_naive(rng):
    for _ in range(50):
        p = random_permutation(12, rng)
        k = rng.randrange(0, 40)
        naive = identity(12)
        for _ in range(k):
            naive = compose(p, naive)
        assert power(p, k) == naive


def test_order_random_n16(rng):
    for _ in range(100):
        p = random_permutation(16, rng)
        k = order(p)
        assert power(p, k) == identity(16)
        assert all(not power(p, d).is_identity() for d in range(1, k) if k % d == 0 and d < k)


@pytest.mark.parametrize("n", [4, 8, 64])
def test_group_laws(n, rng):
    for _ in range(50):
        p, q, r = (random_permutation(n, rng) for _ in range(3))
        assert compose(compose(p, q), r) == compose(p, compose(q, r))
        assert compose(identity(n), q) == q == compose(q, identity(n))
        assert compose(p, inverse(p)) == identity(n) == compose(inverse(p), p)
        v = [rng.randrange(1000) for _ in range(n)]
        assert apply(compose(p, q), v) == apply(p, apply(q, v))


@given(perms())
def test_order_divides_lcm(p):
    lcm = math.lcm(*range(1, p.degree + 1))
    assert lcm % p.order() == 0
    assert p.power(p.order()).is_identity()


@given(st.data())
def test_action_compatibility(data):
    n = data.draw(st.integers(1, 30))
    p, q = data.draw(perms(n)), data.draw(perms(n))
    v = data.draw(st.lists(st.integers(), min_size=n, max_size=n))
    assert apply(compose(p, q), v) == apply(p, apply(q, v))


def test_random_single_point(rng):
    assert random_permutation(1, rng).mapping == (0,)


def test_random_deterministic():
    a = random_permutation(64, random.Random(7))
    b = random_permutation(64, random.Random(7))
    assert a == b


def test_random_uniform_s4():
    rng = random.Random(99)
    counts = Counter(random_permutation(4, rng).mapping for _ in range(10_000))
    all_perms = list(itertools.permutations(range(4)))
    observed = [counts[p] for p in all_perms]
    assert sum(observed) == 10_000 and len(counts) == 24
    for c in observed:
        assert abs(c / 10_000 - 1 / 24) <= 0.02
    assert chisquare(observed).pvalue > 0.001


def test_make_rng_env(monkeypatch):
    monkeypatch.setenv("PERMAUTH_SEED", "42")
    assert make_rng().random() == random.Random(42).random()
    monkeypatch.delenv("PERMAUTH_SEED")
    assert isinstance(make_rng(), random.SystemRandom)


@given(perms())
def test_text_roundtrip(p):
    assert Permutation.from_text(p.to_text()) == p


@given(perms())
def test_binary_roundtrip(p):
    data = p.to_bytes()
    assert len(data) == 2 + 2 * p.degree
    assert Permutation.from_bytes(data) == p


def test_encodings_literal():
    p = Permutation((2, 0, 3, 1))
    assert p.to_text() == "perm:4:2,0,3,1"
    assert p.to_bytes().hex() == "0004" "0002" "0000" "0003" "0001"


@settings(max_examples=200)
@given(st.binary(max_size=40))
def test_binary_decoder_total(data):
    try:
        Permutation.from_bytes(data)
    except ValueError:
        pass
