"""Prime-field polynomials, truncated 1-units and monic/irreducible enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

NEG_INF = float("-inf")
DEFAULT_MAX_PRIME = 13


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def mobius(n: int) -> int:
    result, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    return -result if n > 1 else result


def necklace_count(p: int, d: int) -> int:
    """Number of monic irreducibles of degree d over F_p."""
    total = sum(mobius(e) * p ** (d // e) for e in range(1, d + 1) if d % e == 0)
    return total // d


@dataclass(frozen=True)
class PrimeField:
    p: int
    max_prime: int = DEFAULT_MAX_PRIME

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p > self.max_prime:
            raise ValueError(f"p={self.p} exceeds the configured maximum {self.max_prime}")

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return pow(a, self.p - 2, self.p)


def _strip(coeffs: Sequence[int], p: int) -> tuple[int, ...]:
    c = [x % p for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class FpPoly:
    """Dense polynomial over F_p, lowest degree coefficient first."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _strip(self.coeffs, self.p))

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __mul__(self, other: FpPoly) -> FpPoly:
        if not self.coeffs or not other.coeffs:
            return FpPoly(self.p, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return FpPoly(self.p, tuple(out))

    def divmod(self, other: FpPoly) -> tuple[FpPoly, FpPoly]:
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        p = self.p
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        inv_lead = pow(other.coeffs[-1], p - 2, p)
        quot = [0] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] * inv_lead % p
            if c:
                quot[i - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] = (rem[i - dq + j] - c * b) % p
        return FpPoly(p, tuple(quot)), FpPoly(p, tuple(rem))

    def strip_t(self) -> tuple[int, FpPoly]:
        """Write self = T^v * g with g(0) != 0; returns (v, g)."""
        v = 0
        while v < len(self.coeffs) and self.coeffs[v] == 0:
            v += 1
        return v, FpPoly(self.p, self.coeffs[v:])

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mon = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if not mon:
                terms.append(str(c))
            else:
                terms.append(mon if c == 1 else f"{c}{mon}")
        return " + ".join(terms)


@dataclass(frozen=True)
class TruncatedUnit:
    """u = 1 + c_1 x + ... + c_N x^N in (F_p[x]/x^{N+1})^x."""

    p: int
    coeffs: tuple[int, ...]  # c_1 .. c_N

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(c % self.p for c in self.coeffs))

    @property
    def N(self) -> int:
        return len(self.coeffs)

    @classmethod
    def one(cls, p: int, N: int) -> TruncatedUnit:
        return cls(p, (0,) * N)

    def series(self) -> list[int]:
        return [1, *self.coeffs]

    def __mul__(self, other: TruncatedUnit) -> TruncatedUnit:
        if (self.p, self.N) != (other.p, other.N):
            raise ValueError("truncation orders or primes differ")
        return TruncatedUnit(self.p, tuple(series_mul(self.series(), other.series(), self.N, self.p)[1:]))

    def inverse(self) -> TruncatedUnit:
        return TruncatedUnit(self.p, tuple(series_inverse(self.series(), self.N, self.p)[1:]))


def series_mul(a: Sequence[int], b: Sequence[int], N: int, p: int) -> list[int]:
    """Product of two power series mod (x^{N+1}, p)."""
    out = [0] * (N + 1)
    for i, x in enumerate(a[: N + 1]):
        if x:
            for j, y in enumerate(b[: N + 1 - i]):
                out[i + j] += x * y
    return [c % p for c in out]


def series_inverse(a: Sequence[int], N: int, p: int) -> list[int]:
    """Inverse of a power series with constant term 1 mod (x^{N+1}, p)."""
    if a[0] % p != 1:
        raise ValueError("series_inverse needs constant term 1")
    a = list(a) + [0] * (N + 1 - len(a))
    out = [1] + [0] * N
    for k in range(1, N + 1):
        out[k] = -sum(a[j] * out[k - j] for j in range(1, k + 1)) % p
    return out


def enumerate_monic(
    ctx: PrimeField, d: int, start: int = 0, stop: int | None = None
) -> Iterator[FpPoly]:
    """Monic polynomials of degree d in lexicographic order of (c_{d-1}, ..., c_0).

    ``start``/``stop`` select an index range of that order for parallel splits.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    p = ctx.p
    it = itertools.product(range(p), repeat=d)
    for top_first in itertools.islice(it, start, stop):
        yield FpPoly(p, (*reversed(top_first), 1))


def enumerate_irreducible(ctx: PrimeField, d_max: int) -> list[FpPoly]:
    """All monic irreducibles of degree <= d_max, by trial division against the table."""
    if d_max < 1:
        raise ValueError("d_max must be at least 1")
    table: list[FpPoly] = []
    for d in range(1, d_max + 1):
        for f in enumerate_monic(ctx, d):
            if all(f.divmod(g)[1].coeffs for g in table if 2 * g.degree <= d):
                table.append(f)
    return table


def reverse_unit(f: FpPoly, n: int) -> TruncatedUnit:
    """f(x^{-1}) x^{deg f} reduced mod x^{n+1}; f must be monic."""
    if not f.is_monic:
        raise ValueError("reverse_unit needs a monic polynomial")
    d = len(f.coeffs) - 1
    rev = [f.coeffs[d - j] for j in range(d + 1)]
    rev = rev[: n + 1] + [0] * max(0, n + 1 - len(rev))
    return TruncatedUnit(f.p, tuple(rev[1:]))
