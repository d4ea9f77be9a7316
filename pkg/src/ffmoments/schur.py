"""Highest weights, Jacobi-Trudi expansions and trace sums F(V) from the moment tensor.

Sign conventions, all in one place.  Write theta_1..theta_{n-1} for the
normalised Frobenius eigenvalues of a character, so that
sum_d lambda_d x^d = prod_i (1 - theta_i x).  Then

  * trace on wedge^d           e_d(theta) = (-1)^d lambda_d
  * trace on det               e_{n-1}(theta) = (-1)^{n-1} eps
  * trace on det^{-rt}         (-1)^{(n-1) rt} eps^{-rt}
  * F(V)                       sum over the family of trace(V)
  * F(det^{-rt} (x) wedge^d)   (-1)^{sum d + (n-1) rt} T_raw(d)
  * F(V_w)                     (-1)^{sum d + (n-1) rt} sum_sigma sgn(sigma) T_raw(d_i + i - sigma(i))
  * Vandermonde coefficient    [x^{d_i + i - 1}] V(x) T_raw(x) = (-1)^{C(k,2) + sum d + (n-1) rt} F(V_w)

with T_raw(d) = sum_chi eps^{-rt} prod lambda_{d_i} and V(x) = prod_{i<j} (x_i - x_j).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .cyclo import HalfPowerScalar, LaurentTensor, permutation_sign
from .lfam import LFunctionRecord, l_polynomial_roots


@dataclass(frozen=True)
class HighestWeight:
    d: tuple[int, ...]
    r: int
    rt: int
    n: int

    def __post_init__(self) -> None:
        if len(self.d) != self.r + self.rt:
            raise ValueError("weight length must be r + rt")
        if list(self.d) != sorted(self.d):
            raise ValueError(f"weight {self.d} is not sorted")
        if self.d and (self.d[0] < 0 or self.d[-1] > self.n - 1):
            raise ValueError(f"weight {self.d} outside [0, n-1]")

    @property
    def k(self) -> int:
        return len(self.d)

    @property
    def shifted(self) -> tuple[int, ...]:
        return tuple(di + i for i, di in enumerate(self.d))


def all_weights(n: int, r: int, rt: int) -> Iterator[HighestWeight]:
    for d in itertools.combinations_with_replacement(range(n), r + rt):
        yield HighestWeight(d, r, rt, n)


def jacobi_trudi_terms(w: HighestWeight) -> list[tuple[int, tuple[int, ...]]]:
    """(sgn sigma, (d_i + i - sigma(i))_i) for sigma with every wedge degree in [0, n-1]."""
    out = []
    for sigma in itertools.permutations(range(w.k)):
        degs = tuple(w.d[i] + i - sigma[i] for i in range(w.k))
        if all(0 <= x <= w.n - 1 for x in degs):
            out.append((permutation_sign(sigma), degs))
    return out


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def F_of_irreducible(T: LaurentTensor, w: HighestWeight) -> HalfPowerScalar:
    """Family trace sum of V_w twisted by det^{-rt}, exactly."""
    if T.arity != w.k:
        raise ValueError("tensor arity does not match the weight")
    acc = HalfPowerScalar.zero(T.p, T.L)
    for sgn, degs in jacobi_trudi_terms(w):
        v = T.get(degs)
        acc = acc + (v if sgn > 0 else -v)
    return acc * _sign(sum(w.d) + (w.n - 1) * w.rt)


def vandermonde_sign(w: HighestWeight) -> int:
    """Sign s with [x^{shifted}] V*T_raw = s * F(V_w)."""
    return _sign(w.k * (w.k - 1) // 2 + sum(w.d) + (w.n - 1) * w.rt)


def elementary_from_roots(rec: LFunctionRecord) -> np.ndarray:
    """e_0..e_{n-1} of the normalised eigenvalues, computed from the roots of L."""
    q = rec.p
    roots = l_polynomial_roots(rec)
    thetas = [1 / (z * math.sqrt(q)) for z in roots]
    poly = np.poly(thetas) if thetas else np.array([1.0])  # prod (x - theta)
    k = len(thetas)
    # prod (x - theta) = sum_j (-1)^j e_j x^{k-j}
    return np.array([poly[j] * (-1) ** j for j in range(k + 1)], dtype=complex)


def schur_at_zeros(rec: LFunctionRecord, w: HighestWeight, e: np.ndarray | None = None) -> complex:
    """Schur function det[e_{d_i + i - j}] of the eigenvalues times det^{-rt}."""
    if e is None:
        e = elementary_from_roots(rec)
    n = rec.n

    def ee(j: int) -> complex:
        return e[j] if 0 <= j <= n - 1 else 0.0

    k = w.k
    if k == 0:
        val = 1.0 + 0j
    else:
        M = np.array([[ee(w.d[i] + i - j) for j in range(k)] for i in range(k)], dtype=complex)
        val = complex(np.linalg.det(M))
    det = e[n - 1]
    return val * det ** (-w.rt)


def is_major_arc(w: HighestWeight, m: int) -> bool:
    if m < 1:
        raise ValueError("m must be positive")
    for k in range(w.k + 1):
        if (k - w.r) % m:
            continue
        if sum(w.d[:k]) <= w.n - 1 and sum(w.n - 1 - x for x in w.d[k:]) <= w.n - 1:
            return True
    return False


def multiplicity(w: HighestWeight) -> int:
    """Weyl dimension prod_{i<j}(e_j - e_i) / prod (i-1)! with e_i = d_i + i - 1."""
    e = w.shifted
    num = math.prod(e[j] - e[i] for i in range(w.k) for j in range(i + 1, w.k))
    den = math.prod(math.factorial(i) for i in range(w.k))
    if num % den:
        raise ArithmeticError(f"non-integral multiplicity for {w.d}")
    return num // den


def weyl_dimension(highest: Sequence[int]) -> int:
    """Dimension of the GL_k irreducible with the given weight (any order)."""
    lam = sorted(highest, reverse=True)
    k = len(lam)
    num = math.prod(lam[i] - lam[j] + j - i for i in range(k) for j in range(i + 1, k))
    den = math.prod(math.factorial(i) for i in range(k))
    return num // den


@dataclass(frozen=True)
class BettiBudget:
    n: int
    r: int
    rt: int

    @property
    def base(self) -> int:
        return 2 + max(self.r, self.rt)

    @property
    def C(self) -> int:
        return self.base ** (max(self.r, self.rt) + 1)

    def bound(self, d: Sequence[int]) -> int:
        return 4 * self.base ** (self.n + sum(d))

    def error_budget(self, q: int, w: float) -> float:
        """q^{(w-n)/2} C^n n^{r+rt} with constant 1 (reference line only)."""
        return q ** ((w - self.n) / 2) * float(self.C) ** self.n * self.n ** (self.r + self.rt)


def betti_bound(budget: BettiBudget, d: Sequence[int]) -> int:
    if any(x < 0 or x > budget.n - 1 for x in d):
        raise ValueError("degrees must lie in [0, n-1]")
    return budget.bound(d)


def power_savings_w(n: int, p: int, r: int) -> float:
    """Reference exponent n + 1 - (p - 2r) n / (p r) for rt = 1."""
    return float(n + 1 - Fraction(p - 2 * r, p * r) * n)
