from __future__ import annotations

import cmath
import itertools

import pytest
from hypothesis import given, strategies as st

from ffmoments.cyclo import (
    CycloScalar,
    HalfPowerScalar,
    LaurentTensor,
    cyclo_mul,
    embed_complex,
    norm_check,
    phi,
    sqrt_p_in_field,
    vandermonde_multiply,
)

FIELDS = [(3, 1), (3, 2), (5, 1), (2, 3), (7, 1)]


def test_cube_root_reduction():
    z = CycloScalar.zeta_power(3, 1, 1)
    assert cyclo_mul(z, z) == CycloScalar(3, 1, (-1, -1))
    one = CycloScalar.one(3, 1)
    assert cyclo_mul(z, one) == z
    assert (one + z) * (one + z * z) == one


def test_norm_check():
    assert norm_check(CycloScalar.zeta_power(3, 2, 5)) == 1
    assert norm_check(CycloScalar.one(3, 1) + CycloScalar.zeta_power(3, 1, 1)) == 1
    assert norm_check(CycloScalar.integer(5, 1, 2)) == 4


def scalars(p, L):
    return st.lists(st.integers(-5, 5), min_size=phi(p, L), max_size=phi(p, L)).map(
        lambda c: CycloScalar(p, L, tuple(c))
    )


@pytest.mark.parametrize("p,L", FIELDS)
def test_ring_axioms_against_complex(p, L):
    @given(scalars(p, L), scalars(p, L), scalars(p, L))
    def check(a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert abs((a * b).to_complex() - a.to_complex() * b.to_complex()) < 1e-8
        assert abs(a.conjugate().to_complex() - a.to_complex().conjugate()) < 1e-9

    check()


@pytest.mark.parametrize("p,L", FIELDS)
def test_zeta_powers_are_periodic(p, L):
    N = p**L
    z = CycloScalar.zeta_power(p, L, 1)
    assert z**N == CycloScalar.one(p, L)
    assert sum((CycloScalar.zeta_power(p, L, k) for k in range(N)), CycloScalar.zero(p, L)).is_zero()


def test_sqrt_p_membership():
    for p, L in [(5, 1), (13, 1), (5, 2), (2, 3)]:
        root = sqrt_p_in_field(p, L)
        assert root * root == CycloScalar.integer(p, L, p)
    # for p = 3 mod 4 only i*sqrt(p) is cyclotomic
    for p, L in [(3, 1), (7, 1), (2, 1), (2, 2)]:
        assert sqrt_p_in_field(p, L) is None


def test_half_power_canonical_equality():
    a = HalfPowerScalar.integer(3, 1, 9, -2)
    b = HalfPowerScalar.integer(3, 1, 1, 2)
    assert a == b and hash(a) == hash(b)
    five = HalfPowerScalar.integer(5, 1, 1, 1)
    assert five * five == HalfPowerScalar.integer(5, 1, 5)
    assert abs(five.to_complex() - 5**0.5) < 1e-12


def test_half_power_mixed_parity_addition_fails():
    with pytest.raises(ArithmeticError):
        HalfPowerScalar.integer(3, 1, 1, 1) + HalfPowerScalar.integer(3, 1, 1, 0)


def test_half_power_unit_inverse():
    z = HalfPowerScalar(CycloScalar.zeta_power(3, 2, 4), 0)
    assert z * z**-1 == HalfPowerScalar.integer(3, 2, 1)


def test_embed_complex_examples():
    assert embed_complex(HalfPowerScalar.integer(3, 1, 1)) == pytest.approx(1.0)
    z = embed_complex(HalfPowerScalar(CycloScalar.zeta_power(3, 1, 1), 0))
    assert abs(z - complex(-0.5, 0.8660254037844386)) < 1e-12
    assert embed_complex(HalfPowerScalar.integer(3, 1, 1, 2), 3) == pytest.approx(3.0)


def test_json_roundtrip():
    t = LaurentTensor(3, 2, 2)
    t.add_term((0, 1), HalfPowerScalar(CycloScalar.zeta_power(3, 2, 4), -3))
    t.add_term((2, -1), HalfPowerScalar.integer(3, 2, 7, 1))
    assert LaurentTensor.from_json(t.to_json()) == t


def test_vandermonde_multiply_examples():
    t = LaurentTensor(3, 1, 2)
    t.add_term((0, 0), HalfPowerScalar.integer(3, 1, 1))
    out = vandermonde_multiply(t)
    assert dict(out) == {(0, 1): HalfPowerScalar.integer(3, 1, -1), (1, 0): HalfPowerScalar.integer(3, 1, 1)}
    assert len(vandermonde_multiply(LaurentTensor(3, 1, 2))) == 0


def test_vandermonde_multiply_matches_polynomial_product():
    k = 3
    t = LaurentTensor(3, 1, k)
    for i, d in enumerate(itertools.product(range(3), repeat=k)):
        t.add_term(d, HalfPowerScalar.integer(3, 1, (i * 7) % 5 - 2))
    out = vandermonde_multiply(t)
    xs = [cmath.exp(0.3j), cmath.exp(1.1j), cmath.exp(-0.7j)]

    def ev(tensor):
        return sum(v.to_complex() * xs[0] ** d[0] * xs[1] ** d[1] * xs[2] ** d[2] for d, v in tensor)

    V = (xs[0] - xs[1]) * (xs[0] - xs[2]) * (xs[1] - xs[2])
    assert abs(ev(out) - V * ev(t)) < 1e-9


def test_vandermonde_of_symmetric_input_is_antisymmetric():
    t = LaurentTensor(3, 1, 3)
    for d in itertools.product(range(2), repeat=3):
        t.add_term(d, HalfPowerScalar.integer(3, 1, 1 + sum(d)))
    out = vandermonde_multiply(t)
    assert len(out)
    for d, v in out:
        assert out.get((d[1], d[0], d[2])) == -v
        assert out.get((d[0], d[2], d[1])) == -v
