"""Exact arithmetic in Z[zeta_{p^L}] and sparse Laurent tensors over it.

Values are stored in the power basis 1, z, ..., z^{phi-1} with
phi = p^{L-1}(p-1).  A :class:`HalfPowerScalar` multiplies such a value by an
integer power of sqrt(p); the square root is never expanded numerically.
"""

from __future__ import annotations

import cmath
import itertools
import math
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence


def phi(p: int, L: int) -> int:
    return p ** (L - 1) * (p - 1)


@dataclass(frozen=True)
class CycloScalar:
    """Element of Z[zeta] with zeta a primitive p^L-th root of unity."""

    p: int
    L: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.L < 1:
            raise ValueError("L must be at least 1")
        if len(self.coeffs) != phi(self.p, self.L):
            raise ValueError(
                f"expected {phi(self.p, self.L)} coefficients, got {len(self.coeffs)}"
            )

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls, p: int, L: int) -> CycloScalar:
        return cls(p, L, (0,) * phi(p, L))

    @classmethod
    def integer(cls, p: int, L: int, k: int) -> CycloScalar:
        c = [0] * phi(p, L)
        c[0] = k
        return cls(p, L, tuple(c))

    @classmethod
    def one(cls, p: int, L: int) -> CycloScalar:
        return cls.integer(p, L, 1)

    @classmethod
    def zeta_power(cls, p: int, L: int, k: int) -> CycloScalar:
        counts = [0] * p**L
        counts[k % p**L] = 1
        return cls.from_exponent_counts(p, L, counts)

    @classmethod
    def from_exponent_counts(cls, p: int, L: int, counts: Sequence[int]) -> CycloScalar:
        """Reduce sum_k counts[k] zeta^k (k mod p^L) to the power basis."""
        N = p**L
        if len(counts) != N:
            raise ValueError(f"expected {N} exponent counts")
        f = phi(p, L)
        block = p ** (L - 1)
        out = [int(c) for c in counts[:f]]
        # zeta^{f+k} = -sum_{j<p-1} zeta^{k + j p^{L-1}}
        for k in range(N - f):
            c = int(counts[f + k])
            if c:
                for j in range(p - 1):
                    out[k + j * block] -= c
        return cls(p, L, tuple(out))

    # structure --------------------------------------------------------
    @property
    def order(self) -> int:
        return self.p**self.L

    def _check(self, other: CycloScalar) -> None:
        if (self.p, self.L) != (other.p, other.L):
            raise ValueError(
                f"field mismatch: (p={self.p}, L={self.L}) vs (p={other.p}, L={other.L})"
            )

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def rational_integer(self) -> int | None:
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def exponent_counts(self) -> list[int]:
        out = list(self.coeffs) + [0] * (self.order - len(self.coeffs))
        return out

    # arithmetic -------------------------------------------------------
    def __add__(self, other: CycloScalar) -> CycloScalar:
        self._check(other)
        return CycloScalar(self.p, self.L, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: CycloScalar) -> CycloScalar:
        self._check(other)
        return CycloScalar(self.p, self.L, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> CycloScalar:
        return CycloScalar(self.p, self.L, tuple(-a for a in self.coeffs))

    def scale(self, k: int) -> CycloScalar:
        return CycloScalar(self.p, self.L, tuple(k * a for a in self.coeffs))

    def __mul__(self, other: CycloScalar | int) -> CycloScalar:
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        N = self.order
        counts = [0] * N
        bc = [(j, b) for j, b in enumerate(other.coeffs) if b]
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in bc:
                    counts[(i + j) % N] += a * b
        return CycloScalar.from_exponent_counts(self.p, self.L, counts)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> CycloScalar:
        if k < 0:
            raise ValueError("negative powers need an explicit unit inverse")
        result = CycloScalar.one(self.p, self.L)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> CycloScalar:
        N = self.order
        counts = [0] * N
        for i, a in enumerate(self.coeffs):
            if a:
                counts[(-i) % N] += a
        return CycloScalar.from_exponent_counts(self.p, self.L, counts)

    def galois(self, k: int) -> CycloScalar:
        """Apply zeta -> zeta^k (k prime to p)."""
        if k % self.p == 0:
            raise ValueError("Galois twist must be prime to p")
        N = self.order
        counts = [0] * N
        for i, a in enumerate(self.coeffs):
            if a:
                counts[(i * k) % N] += a
        return CycloScalar.from_exponent_counts(self.p, self.L, counts)

    def divisible_by(self, k: int) -> bool:
        return all(c % k == 0 for c in self.coeffs)

    def exact_div(self, k: int) -> CycloScalar:
        if not self.divisible_by(k):
            raise ArithmeticError(f"{self} not divisible by {k}")
        return CycloScalar(self.p, self.L, tuple(c // k for c in self.coeffs))

    def to_complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.order)
        return sum((c * z**i for i, c in enumerate(self.coeffs) if c), 0j)

    def lift(self, L: int) -> CycloScalar:
        """Embed into Z[zeta_{p^L}] for L >= self.L via zeta -> zeta_{p^L}^{p^{L-self.L}}."""
        if L < self.L:
            raise ValueError("can only lift to a larger field")
        if L == self.L:
            return self
        step = self.p ** (L - self.L)
        counts = [0] * self.p**L
        for i, c in enumerate(self.coeffs):
            counts[i * step] += c
        return CycloScalar.from_exponent_counts(self.p, L, counts)

    def __repr__(self) -> str:
        terms = [f"{c}*z^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"Cyclo[p={self.p},L={self.L}](" + (" + ".join(terms) or "0") + ")"


def cyclo_mul(a: CycloScalar, b: CycloScalar) -> CycloScalar:
    return a * b


def norm_check(a: CycloScalar) -> int | None:
    """a * conj(a) as a rational integer, or None if it is not one."""
    return (a * a.conjugate()).rational_integer()


@lru_cache(maxsize=None)
def sqrt_p_in_field(p: int, L: int) -> CycloScalar | None:
    """sqrt(p) as an element of Z[zeta_{p^L}] when it lies there, else None."""
    if p == 2:
        if L < 3:
            return None
        e = 2 ** (L - 3)  # zeta^e is a primitive 8th root of unity
        return CycloScalar.zeta_power(p, L, e) + CycloScalar.zeta_power(p, L, -e)
    if p % 4 != 1:
        return None
    # quadratic Gauss sum over zeta_p = zeta^{p^{L-1}}
    counts = [0] * p**L
    step = p ** (L - 1)
    for a in range(1, p):
        counts[(a * step) % p**L] += 1 if pow(a, (p - 1) // 2, p) == 1 else -1
    return CycloScalar.from_exponent_counts(p, L, counts)


@dataclass(frozen=True, eq=False)
class HalfPowerScalar:
    """value * p^{half_exp/2}, kept in a canonical form so equality is exact.

    Canonical form: factors of p are moved out of ``value`` into the exponent,
    and when sqrt(p) lies in the cyclotomic field odd exponents are folded
    into the value.  Zero always has exponent 0.
    """

    value: CycloScalar
    half_exp: int = 0

    def __post_init__(self) -> None:
        v, k = self.value, self.half_exp
        if v.is_zero():
            k = 0
        else:
            root = sqrt_p_in_field(v.p, v.L)
            if k % 2 and root is not None:
                v, k = v * root, k - 1
            while v.divisible_by(v.p):
                v, k = v.exact_div(v.p), k + 2
        object.__setattr__(self, "value", v)
        object.__setattr__(self, "half_exp", k)

    @classmethod
    def zero(cls, p: int, L: int) -> HalfPowerScalar:
        return cls(CycloScalar.zero(p, L), 0)

    @classmethod
    def integer(cls, p: int, L: int, k: int, half_exp: int = 0) -> HalfPowerScalar:
        return cls(CycloScalar.integer(p, L, k), half_exp)

    @property
    def p(self) -> int:
        return self.value.p

    @property
    def L(self) -> int:
        return self.value.L

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HalfPowerScalar):
            return NotImplemented
        return self.value == other.value and self.half_exp == other.half_exp

    def __hash__(self) -> int:
        return hash((self.value, self.half_exp))

    def __mul__(self, other: HalfPowerScalar | int) -> HalfPowerScalar:
        if isinstance(other, int):
            return HalfPowerScalar(self.value.scale(other), self.half_exp)
        return HalfPowerScalar(self.value * other.value, self.half_exp + other.half_exp)

    __rmul__ = __mul__

    def __neg__(self) -> HalfPowerScalar:
        return HalfPowerScalar(-self.value, self.half_exp)

    def __add__(self, other: HalfPowerScalar) -> HalfPowerScalar:
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        a, b = self, other
        if a.half_exp > b.half_exp:
            a, b = b, a
        diff = b.half_exp - a.half_exp
        if diff % 2:
            raise ArithmeticError(
                "cannot add scalars whose sqrt(p) exponents differ in parity "
                f"(p={self.p}, exponents {self.half_exp} and {other.half_exp})"
            )
        return HalfPowerScalar(a.value + b.value.scale(self.p ** (diff // 2)), a.half_exp)

    def __sub__(self, other: HalfPowerScalar) -> HalfPowerScalar:
        return self + (-other)

    def __pow__(self, k: int) -> HalfPowerScalar:
        if k < 0:
            return self.unit_inverse() ** (-k)
        return HalfPowerScalar(self.value**k, self.half_exp * k)

    def conjugate(self) -> HalfPowerScalar:
        # sqrt(p) is real, so conjugation only touches the cyclotomic part
        return HalfPowerScalar(self.value.conjugate(), self.half_exp)

    def norm(self) -> HalfPowerScalar:
        return self * self.conjugate()

    def has_unit_modulus(self) -> bool:
        n = self.norm()
        return n.half_exp == 0 and n.value.rational_integer() == 1

    def unit_inverse(self) -> HalfPowerScalar:
        """Inverse of a modulus-one scalar, which is its conjugate."""
        if not self.has_unit_modulus():
            raise ArithmeticError("unit_inverse needs a scalar of modulus one")
        return self.conjugate()

    def to_complex(self) -> complex:
        return self.value.to_complex() * math.sqrt(self.p) ** self.half_exp

    def lift(self, L: int) -> HalfPowerScalar:
        return HalfPowerScalar(self.value.lift(L), self.half_exp)

    def to_json(self) -> dict[str, object]:
        return {"half_exp": self.half_exp, "zeta_coeffs": list(self.value.coeffs)}

    @classmethod
    def from_json(cls, p: int, L: int, obj: Mapping[str, object]) -> HalfPowerScalar:
        return cls(CycloScalar(p, L, tuple(int(c) for c in obj["zeta_coeffs"])), int(obj["half_exp"]))

    def __repr__(self) -> str:
        return f"{self.value!r} * p^({self.half_exp}/2)"


def embed_complex(s: HalfPowerScalar, q: int | None = None) -> complex:
    if q is not None and q != s.p:
        raise ValueError("only prime fields are supported: q must equal p")
    return s.to_complex()


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def vandermonde_terms(k: int) -> list[tuple[int, tuple[int, ...]]]:
    """prod_{i<j}(x_i - x_j) as a list of (sign, exponent tuple)."""
    global_sign = -1 if (k * (k - 1) // 2) % 2 else 1
    return [
        (global_sign * permutation_sign(s), tuple(s))
        for s in itertools.permutations(range(k))
    ]


@dataclass
class LaurentTensor:
    """Sparse map from integer exponent tuples to HalfPowerScalar."""

    p: int
    L: int
    arity: int
    entries: dict[tuple[int, ...], HalfPowerScalar] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.entries = {k: v for k, v in self.entries.items() if not v.is_zero()}
        for k in self.entries:
            if len(k) != self.arity:
                raise ValueError(f"exponent tuple {k} has wrong arity")

    def get(self, d: Iterable[int]) -> HalfPowerScalar:
        return self.entries.get(tuple(d), HalfPowerScalar.zero(self.p, self.L))

    def add_term(self, d: tuple[int, ...], v: HalfPowerScalar) -> None:
        if v.is_zero():
            return
        cur = self.entries.get(d)
        new = v if cur is None else cur + v
        if new.is_zero():
            self.entries.pop(d, None)
        else:
            self.entries[d] = new

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], HalfPowerScalar]]:
        return iter(sorted(self.entries.items()))

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentTensor):
            return NotImplemented
        return (self.p, self.arity) == (other.p, other.arity) and self.entries == other.entries

    def to_json(self) -> dict[str, object]:
        return {
            "p": self.p,
            "L": self.L,
            "arity": self.arity,
            "entries": [
                {
                    "d": list(d),
                    **v.to_json(),
                    "complex": [v.to_complex().real, v.to_complex().imag],
                }
                for d, v in self
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, object]) -> LaurentTensor:
        p, L, arity = int(obj["p"]), int(obj["L"]), int(obj["arity"])
        t = cls(p, L, arity)
        for e in obj["entries"]:
            t.add_term(tuple(int(x) for x in e["d"]), HalfPowerScalar.from_json(p, L, e))
        return t


def vandermonde_multiply(t: LaurentTensor) -> LaurentTensor:
    """Multiply by prod_{i<j}(x_i - x_j), expanded as a signed permutation sum."""
    if t.arity < 1:
        raise ValueError("vandermonde_multiply needs arity >= 1")
    out = LaurentTensor(t.p, t.L, t.arity)
    terms = vandermonde_terms(t.arity)
    for d, v in t:
        for sign, shift in terms:
            out.add_term(tuple(a + b for a, b in zip(d, shift)), v if sign > 0 else -v)
    return out
