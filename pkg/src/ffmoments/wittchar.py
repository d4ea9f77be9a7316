"""Witt vectors over F_p, the Artin-Hasse series, and even characters of 1-units.

Characters of (F_p[x]/x^{n+1})^x modulo constants are parameterised by points
b in F_p^n.  A 1-unit u factors uniquely as
    u = prod_{j=m p^e <= n} P_m(a_j x^j),   P_m(y) = AH(y)^{1/m},
with AH(y) = exp(-sum_k y^{p^k}/p^k).  For each m <= n prime to p the
coordinates (a_m, a_{pm}, ...) form a Witt vector of length l(m, n), and the
character value is a root of unity whose exponent pairs these with b.

Coordinate convention for b: the Witt block for m lists
(b_{p^{l-1} m}, ..., b_{pm}, b_m).  With this ordering the character is
primitive exactly when b_n != 0.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cyclo import CycloScalar
from .ffpoly import TruncatedUnit, series_inverse, series_mul


def block_length(p: int, m: int, n: int) -> int:
    """Least l with p^l * m > n."""
    l = 0
    while p**l * m <= n:
        l += 1
    return l


@functools.lru_cache(maxsize=None)
def witt_blocks(p: int, n: int) -> tuple[tuple[int, int], ...]:
    """(m, l(m, n)) for every m <= n prime to p."""
    return tuple((m, block_length(p, m, n)) for m in range(1, n + 1) if m % p)


def max_level(p: int, n: int) -> int:
    return max(l for _, l in witt_blocks(p, n))


def split_index(p: int, j: int) -> tuple[int, int]:
    """Write j = m p^e with m prime to p."""
    e = 0
    while j % p == 0:
        j //= p
        e += 1
    return j, e


def teichmuller(p: int, l: int, a: int) -> int:
    return pow(a % p, p ** (l - 1), p**l)


def witt_zmod_iso(p: int, l: int, w: Sequence[int]) -> int:
    """Ring isomorphism W_l(F_p) -> Z/p^l: sum_i tau(w_i) p^i."""
    if l < 1 or len(w) != l:
        raise ValueError("need a Witt vector of length l >= 1")
    return sum(teichmuller(p, l, a) * p**i for i, a in enumerate(w)) % p**l


def zmod_witt_iso(p: int, l: int, t: int) -> tuple[int, ...]:
    """Inverse of :func:`witt_zmod_iso`."""
    t %= p**l
    out = []
    for level in range(l, 0, -1):
        a = t % p
        out.append(a)
        t = (t - teichmuller(p, level, a)) % p**level // p
    return tuple(out)


def witt_add_ghost(p: int, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
    """Witt vector addition over F_p via ghost components of integer lifts.

    Independent of :func:`witt_zmod_iso`; used as a cross-check.
    """
    l = len(x)
    gx = [sum(p**i * x[i] ** (p ** (k - i)) for i in range(k + 1)) for k in range(l)]
    gy = [sum(p**i * y[i] ** (p ** (k - i)) for i in range(k + 1)) for k in range(l)]
    s: list[int] = []
    for k in range(l):
        rest = gx[k] + gy[k] - sum(p**i * s[i] ** (p ** (k - i)) for i in range(k))
        assert rest % p**k == 0
        s.append(rest // p**k)
    return tuple(v % p for v in s)


def _reduce_fraction(c: Fraction, p: int) -> int:
    if c.denominator % p == 0:
        raise ArithmeticError(f"coefficient {c} is not p-integral for p={p}")
    return c.numerator * pow(c.denominator, -1, p) % p


@functools.lru_cache(maxsize=None)
def _ah_root_rational(p: int, m: int, N: int) -> tuple[Fraction, ...]:
    """exp(-(1/m) sum_k y^{p^k}/p^k) over Q up to y^N."""
    g = [Fraction(0)] * (N + 1)
    k = 0
    while p**k <= N:
        g[p**k] = Fraction(-1, m * p**k)
        k += 1
    e = [Fraction(1)] + [Fraction(0)] * N
    for j in range(1, N + 1):
        e[j] = sum(i * g[i] * e[j - i] for i in range(1, j + 1)) / j
    return tuple(e)


@functools.lru_cache(maxsize=None)
def ah_root_series(p: int, m: int, N: int) -> tuple[int, ...]:
    """AH(y)^{1/m} mod p up to y^N (m prime to p)."""
    return tuple(_reduce_fraction(c, p) for c in _ah_root_rational(p, m, N))


def artin_hasse_series(p: int, N: int) -> list[int]:
    """AH(x) = exp(-sum_k x^{p^k}/p^k) reduced mod p, coefficients of x^0..x^N."""
    if N < 1:
        raise ValueError("N must be at least 1")
    return list(ah_root_series(p, 1, N))


def _factor_series(p: int, j: int, a: int, n: int) -> list[int]:
    """P_m(a x^j) mod x^{n+1} where j = m p^e."""
    m, _ = split_index(p, j)
    base = ah_root_series(p, m, n // j)
    out = [0] * (n + 1)
    for k, c in enumerate(base):
        out[k * j] = c * pow(a, k, p) % p
    return out


@dataclass(frozen=True)
class WittCoordinates:
    """Artin-Hasse coordinates of a 1-unit, grouped into Witt blocks."""

    p: int
    n: int
    blocks: dict[int, tuple[int, ...]]  # m -> (a_m, a_{pm}, ...)

    def flat(self) -> dict[int, int]:
        return {m * self.p**e: a for m, blk in self.blocks.items() for e, a in enumerate(blk)}


def ah_decompose(u: TruncatedUnit, p: int, n: int) -> WittCoordinates:
    """Coordinates a_j with u = prod_j P_m(a_j x^j) mod x^{n+1}."""
    if u.N != n or u.p != p:
        raise ValueError("unit does not match (p, n)")
    rest = u.series()
    coords: dict[int, int] = {}
    for j in range(1, n + 1):
        m, _ = split_index(p, j)
        a = (-m * rest[j]) % p
        coords[j] = a
        if a:
            rest = series_mul(rest, series_inverse(_factor_series(p, j, a, n), n, p), n, p)
    assert all(c == 0 for c in rest[1:])
    return WittCoordinates(
        p, n, {m: tuple(coords[m * p**e] for e in range(l)) for m, l in witt_blocks(p, n)}
    )


def ah_recompose(w: WittCoordinates) -> TruncatedUnit:
    p, n = w.p, w.n
    out = [1] + [0] * n
    for j, a in sorted(w.flat().items()):
        if a:
            out = series_mul(out, _factor_series(p, j, a, n), n, p)
    return TruncatedUnit(p, tuple(out[1:]))


@dataclass(frozen=True)
class CharacterPoint:
    """Point b = (b_1, ..., b_n) of A^n(F_p) naming an even character."""

    p: int
    n: int
    b: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.b) != self.n:
            raise ValueError(f"b has {len(self.b)} coordinates, expected n={self.n}")
        object.__setattr__(self, "b", tuple(x % self.p for x in self.b))

    def block(self, m: int, l: int) -> tuple[int, ...]:
        # Witt coordinate i carries b_{p^{l-1-i} m}
        return tuple(self.b[m * self.p ** (l - 1 - i) - 1] for i in range(l))

    def block_integers(self) -> list[int]:
        p = self.p
        return [witt_zmod_iso(p, l, self.block(m, l)) for m, l in witt_blocks(p, self.n)]

    @classmethod
    def from_block_integers(cls, p: int, n: int, ints: Sequence[int]) -> CharacterPoint:
        b = [0] * n
        for (m, l), t in zip(witt_blocks(p, n), ints):
            for i, a in enumerate(zmod_witt_iso(p, l, t)):
                b[m * p ** (l - 1 - i) - 1] = a
        return cls(p, n, tuple(b))


@dataclass(frozen=True)
class CharacterValue:
    """The root of unity zeta_{p^L}^exponent."""

    p: int
    L: int
    exponent: int

    def to_cyclo(self) -> CycloScalar:
        return CycloScalar.zeta_power(self.p, self.L, self.exponent)

    def to_complex(self) -> complex:
        return self.to_cyclo().to_complex()

    @property
    def is_one(self) -> bool:
        return self.exponent % self.p**self.L == 0


def unit_exponent_row(p: int, n: int, u: TruncatedUnit) -> list[int]:
    """Per-block integers A_m * p^{L - l_m}; the character exponent is their dot with b."""
    L = max_level(p, n)
    w = ah_decompose(u, p, n)
    return [witt_zmod_iso(p, l, w.blocks[m]) * p ** (L - l) for m, l in witt_blocks(p, n)]


def character_eval(b: CharacterPoint, u: TruncatedUnit, psi_mult: int = 1) -> CharacterValue:
    """Value of the character named by b at the 1-unit u.

    ``psi_mult`` selects the additive characters psi_m(1) = zeta^{psi_mult}.
    """
    if (b.p, b.n) != (u.p, u.N):
        raise ValueError(f"dimension mismatch: b has (p={b.p}, n={b.n}), unit has (p={u.p}, N={u.N})")
    L = max_level(b.p, b.n)
    row = unit_exponent_row(b.p, b.n, u)
    t = sum(x * y for x, y in zip(row, b.block_integers())) * psi_mult
    return CharacterValue(b.p, L, t % b.p**L)


def chi_on_monic(b: CharacterPoint, f, psi_mult: int = 1) -> CharacterValue:
    from .ffpoly import reverse_unit

    return character_eval(b, reverse_unit(f, b.n), psi_mult)


def witt_add_points(b: CharacterPoint, c: CharacterPoint) -> CharacterPoint:
    """Group law on character points: blockwise Witt addition."""
    ints = [
        (x + y) % b.p**l
        for (m, l), x, y in zip(witt_blocks(b.p, b.n), b.block_integers(), c.block_integers())
    ]
    return CharacterPoint.from_block_integers(b.p, b.n, ints)


class PrimitivityMismatch(AssertionError):
    pass


def is_primitive_direct(b: CharacterPoint) -> bool:
    p, n = b.p, b.n
    for a in range(1, p):
        u = TruncatedUnit(p, (0,) * (n - 1) + (a,))
        if not character_eval(b, u).is_one:
            return True
    return False


def is_primitive(b: CharacterPoint) -> bool:
    """Primitivity via b_n != 0, checked against the direct test on 1 + a x^n."""
    by_coordinate = b.b[-1] != 0
    direct = is_primitive_direct(b)
    if by_coordinate != direct:
        raise PrimitivityMismatch(
            f"b={b.b}: b_n != 0 is {by_coordinate} but direct test gives {direct}"
        )
    return direct


def all_points(p: int, n: int) -> Iterable[CharacterPoint]:
    """Every b in F_p^n in lexicographic order."""
    import itertools

    for b in itertools.product(range(p), repeat=n):
        yield CharacterPoint(p, n, b)


def primitive_points(p: int, n: int) -> list[CharacterPoint]:
    return [b for b in all_points(p, n) if b.b[-1] != 0]


def exponent_matrix(p: int, n: int, units: Sequence[TruncatedUnit]) -> np.ndarray:
    """Rows of :func:`unit_exponent_row` for many units at once."""
    return np.array([unit_exponent_row(p, n, u) for u in units], dtype=np.int64).reshape(
        len(units), len(witt_blocks(p, n))
    )
