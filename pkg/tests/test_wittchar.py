from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ffmoments.ffpoly import FpPoly, PrimeField, TruncatedUnit, enumerate_monic
from ffmoments.wittchar import (
    CharacterPoint,
    PrimitivityMismatch,
    ah_decompose,
    ah_recompose,
    all_points,
    artin_hasse_series,
    block_length,
    character_eval,
    chi_on_monic,
    is_primitive,
    is_primitive_direct,
    max_level,
    primitive_points,
    witt_add_ghost,
    witt_add_points,
    witt_blocks,
    witt_zmod_iso,
    zmod_witt_iso,
)


@pytest.mark.parametrize("p,l,w,expected", [(3, 1, (2,), 2), (3, 2, (1, 0), 1), (3, 2, (2, 0), 8)])
def test_witt_zmod_iso_examples(p, l, w, expected):
    assert witt_zmod_iso(p, l, w) == expected


@pytest.mark.parametrize("p,l", [(2, 3), (3, 2), (3, 3), (5, 2)])
def test_witt_iso_is_bijective_and_inverse(p, l):
    images = {witt_zmod_iso(p, l, w) for w in itertools.product(range(p), repeat=l)}
    assert images == set(range(p**l))
    for t in range(p**l):
        assert witt_zmod_iso(p, l, zmod_witt_iso(p, l, t)) == t


@pytest.mark.parametrize("p,l", [(2, 3), (3, 2), (5, 2)])
def test_witt_iso_is_additive_against_ghost_components(p, l):
    for x in itertools.product(range(p), repeat=l):
        for y in itertools.product(range(p), repeat=l):
            s = witt_add_ghost(p, x, y)
            assert witt_zmod_iso(p, l, s) == (witt_zmod_iso(p, l, x) + witt_zmod_iso(p, l, y)) % p**l


def test_artin_hasse_examples():
    assert artin_hasse_series(3, 1) == [1, 2]
    assert artin_hasse_series(2, 2) == [1, 1, 0]


def _exp_series(g: list[Fraction], N: int) -> list[Fraction]:
    e = [Fraction(1)] + [Fraction(0)] * N
    for j in range(1, N + 1):
        e[j] = sum(i * g[i] * e[j - i] for i in range(1, j + 1)) / j
    return e


@pytest.mark.parametrize("p", [2, 3, 5])
def test_artin_hasse_is_p_integral_and_matches_rational_expansion(p):
    N = 12
    g = [Fraction(0)] * (N + 1)
    k = 0
    while p**k <= N:
        g[p**k] = Fraction(-1, p**k)
        k += 1
    exact = _exp_series(g, N)
    assert all(c.denominator % p for c in exact)
    assert artin_hasse_series(p, N) == [c.numerator * pow(c.denominator, -1, p) % p for c in exact]


def test_block_structure():
    assert witt_blocks(3, 4) == ((1, 2), (2, 1), (4, 1))
    assert block_length(3, 1, 9) == 3
    assert max_level(2, 4) == 3


def test_decompose_identity_and_first_order():
    w = ah_decompose(TruncatedUnit.one(3, 4), 3, 4)
    assert all(a == 0 for a in w.flat().values())
    for c in range(3):
        assert ah_decompose(TruncatedUnit(3, (c,)), 3, 1).flat()[1] == (-c) % 3


def test_decompose_roundtrip_random():
    rng = random.Random(7)
    for _ in range(100):
        u = TruncatedUnit(3, tuple(rng.randrange(3) for _ in range(6)))
        assert ah_recompose(ah_decompose(u, 3, 6)) == u


def test_character_trivial_cases():
    b = CharacterPoint(3, 4, (1, 2, 0, 1))
    assert character_eval(b, TruncatedUnit.one(3, 4)).exponent == 0
    zero = CharacterPoint(3, 4, (0, 0, 0, 0))
    for c in itertools.product(range(3), repeat=4):
        assert character_eval(zero, TruncatedUnit(3, c)).is_one


def test_character_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension mismatch"):
        character_eval(CharacterPoint(3, 4, (0, 0, 0, 1)), TruncatedUnit.one(3, 3))


def test_multiplicativity_random():
    rng = random.Random(11)
    p, n = 3, 4
    N = p ** max_level(p, n)
    for _ in range(1000):
        b = CharacterPoint(p, n, tuple(rng.randrange(p) for _ in range(n)))
        u = TruncatedUnit(p, tuple(rng.randrange(p) for _ in range(n)))
        v = TruncatedUnit(p, tuple(rng.randrange(p) for _ in range(n)))
        lhs = character_eval(b, u * v).exponent
        assert lhs == (character_eval(b, u).exponent + character_eval(b, v).exponent) % N


@settings(max_examples=50, deadline=None)
@given(st.tuples(*[st.integers(0, 2)] * 4), st.tuples(*[st.integers(0, 2)] * 4), st.tuples(*[st.integers(0, 2)] * 4))
def test_characters_add_under_witt_addition(b, c, u):
    B, C = CharacterPoint(3, 4, b), CharacterPoint(3, 4, c)
    U = TruncatedUnit(3, u)
    N = 3 ** max_level(3, 4)
    assert character_eval(witt_add_points(B, C), U).exponent == (
        character_eval(B, U).exponent + character_eval(C, U).exponent
    ) % N


def test_points_name_distinct_characters():
    p, n = 3, 3
    units = [TruncatedUnit(p, c) for c in itertools.product(range(p), repeat=n)]
    tables = {tuple(character_eval(b, u).exponent for u in units) for b in all_points(p, n)}
    assert len(tables) == p**n


def test_chi_on_monic():
    b = CharacterPoint(3, 4, (2, 1, 0, 1))
    ctx = PrimeField(3)
    assert chi_on_monic(b, FpPoly(3, (1,))).is_one
    assert chi_on_monic(b, FpPoly(3, (0, 0, 0, 1))).is_one
    rng = random.Random(3)
    monics = [f for d in range(4) for f in enumerate_monic(ctx, d)]
    N = 3 ** max_level(3, 4)
    for _ in range(200):
        f, g = rng.choice(monics), rng.choice(monics)
        assert chi_on_monic(b, f * g).exponent == (chi_on_monic(b, f).exponent + chi_on_monic(b, g).exponent) % N


def test_primitivity():
    assert not is_primitive(CharacterPoint(3, 4, (1, 2, 1, 0)))
    assert is_primitive(CharacterPoint(3, 4, (0, 0, 0, 1)))
    assert len(primitive_points(3, 4)) == 54


@pytest.mark.parametrize("p,n", [(2, 3), (2, 4), (3, 3), (3, 4), (3, 6), (5, 3)])
def test_primitivity_criteria_agree(p, n):
    for b in all_points(p, n):
        assert (b.b[-1] != 0) == is_primitive_direct(b)


def test_primitivity_mismatch_is_raised(monkeypatch):
    import ffmoments.wittchar as wc

    monkeypatch.setattr(wc, "is_primitive_direct", lambda b: True)
    with pytest.raises(PrimitivityMismatch):
        wc.is_primitive(CharacterPoint(3, 4, (1, 0, 0, 0)))
