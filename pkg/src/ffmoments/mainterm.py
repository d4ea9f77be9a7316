"""Main-term side: ratio-tuple counts, M_S coefficients, the R tensor and closed forms.

Orientation convention.  For a subset S of the slots, slots in S carry
|f_i|^{-1/2 + alpha_i} (positive powers of x_i = q^{alpha_i}) and slots outside
S carry |f_i|^{-1/2 - alpha_i} together with a prefactor x_i^{n-1} coming from
the functional equation.  G_S is the sum over monic tuples with
prod_S f_i / prod_{S^c} f_i in T^Z, and M_S = V(x) G_S(x) with
V(x) = prod_{i<j} (x_i - x_j).  The R tensor is

    R(d) = sum_{S : m | r - |S|} (q^n - q^{n-1}) mu^{(r-|S|)/m} [x^d] x^{(n-1) 1_{S^c}} M_S(x).
"""

from __future__ import annotations

import cmath
import functools
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .cyclo import CycloScalar, HalfPowerScalar, LaurentTensor, vandermonde_terms
from .ffpoly import PrimeField, enumerate_monic, necklace_count
from .lfam import BudgetExceeded

DEFAULT_COUNT_BUDGET = 10**7


@dataclass(frozen=True)
class SubsetSpec:
    """S as 0-based slot indices; printed 1-based."""

    S: tuple[int, ...]
    r: int
    rt: int

    def __post_init__(self) -> None:
        k = self.r + self.rt
        s = tuple(sorted(set(self.S)))
        if any(i < 0 or i >= k for i in s):
            raise ValueError(f"S={self.S} not inside the {k} slots")
        object.__setattr__(self, "S", s)

    @property
    def k(self) -> int:
        return self.r + self.rt

    @property
    def complement(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.k) if i not in self.S)

    def admissible(self, m: int, anchor: int | None = None) -> bool:
        a = self.r if anchor is None else anchor
        return (a - len(self.S)) % m == 0

    def label(self) -> str:
        return "{" + ",".join(str(i + 1) for i in self.S) + "}"


def all_subsets(r: int, rt: int) -> list[SubsetSpec]:
    k = r + rt
    return [
        SubsetSpec(S, r, rt) for size in range(k + 1) for S in itertools.combinations(range(k), size)
    ]


def admissible_subsets(
    r: int, rt: int, m: int | None, anchor: int | None = None
) -> list[SubsetSpec]:
    """Subsets with m | anchor - |S| (anchor defaults to r).

    m=None keeps only |S| = anchor, which is the full set whenever m > max(r, rt).
    """
    a = r if anchor is None else anchor
    if m is None:
        return [s for s in all_subsets(r, rt) if len(s.S) == a]
    return [s for s in all_subsets(r, rt) if s.admissible(m, a)]


# ---------------------------------------------------------------------------
# counting


@functools.lru_cache(maxsize=None)
def _stripped_monics(p: int, d: int) -> tuple[tuple[int, ...], ...]:
    return tuple(f.strip_t()[1].coeffs for f in enumerate_monic(PrimeField(p), d))


def _poly_mul(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(c % p for c in out)


@functools.lru_cache(maxsize=None)
def _side_products(p: int, degrees: tuple[int, ...]) -> Counter:
    """Counter of T-free parts of prod f_i over monic f_i of the given degrees."""
    acc: Counter = Counter({(1,): 1})
    for d in degrees:
        nxt: Counter = Counter()
        polys = _stripped_monics(p, d)
        for h, c in acc.items():
            for g in polys:
                nxt[_poly_mul(h, g, p)] += c
        acc = nxt
    return acc


def count_cost(p: int, S: SubsetSpec, degrees: Sequence[int]) -> int:
    a = sum(degrees[i] for i in S.S)
    b = sum(degrees[i] for i in S.complement)
    return p**a + p**b


def count_ratio_tuples(
    p: int, S: SubsetSpec, degrees: Sequence[int], budget: int = DEFAULT_COUNT_BUDGET
) -> int:
    """#{monic f_i, deg f_i = degrees[i] : prod_S f_i / prod_{S^c} f_i in T^Z}.

    Brute force, meeting in the middle on the T-free part of each side.
    """
    if len(degrees) != S.k or any(d < 0 for d in degrees):
        raise ValueError("need one nonnegative degree per slot")
    cost = count_cost(p, S, degrees)
    if cost > budget:
        raise BudgetExceeded(f"ratio count at degrees {tuple(degrees)}", cost, budget)
    left = _side_products(p, tuple(sorted(degrees[i] for i in S.S)))
    right = _side_products(p, tuple(sorted(degrees[i] for i in S.complement)))
    if len(left) > len(right):
        left, right = right, left
    return sum(c * right.get(h, 0) for h, c in left.items())


def count_singleton_side(p: int, many: Sequence[int], single: int) -> int:
    """Closed count when one side of the ratio is a single polynomial.

    The single polynomial is T^v times the T-free part of the product of the
    others, so the count is the number of tuples whose T-free product has
    degree <= ``single``.  A monic of degree e has T-free part of degree w with
    multiplicity 1 (w = 0) or (p-1) p^{w-1} (0 < w <= e).
    """
    def c(w: int) -> int:
        return 1 if w == 0 else (p - 1) * p ** (w - 1)

    dist = {0: 1}
    for e in many:
        nxt: dict[int, int] = {}
        for t, v in dist.items():
            for w in range(0, e + 1):
                if t + w <= single:
                    nxt[t + w] = nxt.get(t + w, 0) + v * c(w)
        dist = nxt
    return sum(dist.values())


# ---------------------------------------------------------------------------
# M_S coefficients and the R tensor


def gs_coefficient(
    p: int, S: SubsetSpec, e: Sequence[int], L: int = 1, budget: int = DEFAULT_COUNT_BUDGET
) -> HalfPowerScalar:
    """Coefficient of x^e in G_S (before the Vandermonde factor)."""
    if any(e[i] < 0 for i in S.S) or any(e[i] > 0 for i in S.complement):
        return HalfPowerScalar.zero(p, L)
    degs = [abs(x) for x in e]
    N = count_ratio_tuples(p, S, degs, budget)
    return HalfPowerScalar(CycloScalar.integer(p, L, N), -sum(degs))


def ms_coefficient(
    p: int, S: SubsetSpec, d: Sequence[int], L: int = 1, budget: int = DEFAULT_COUNT_BUDGET
) -> HalfPowerScalar:
    """Coefficient of x^d in M_S = V(x) G_S(x)."""
    acc = HalfPowerScalar.zero(p, L)
    for sign, shift in vandermonde_terms(S.k):
        v = gs_coefficient(p, S, [a - b for a, b in zip(d, shift)], L, budget)
        acc = acc + (v if sign > 0 else -v)
    return acc


def comparison_window(n: int, k: int) -> list[tuple[int, ...]]:
    """Strictly increasing tuples 0 <= d_1 < ... < d_k <= n + k - 2."""
    return list(itertools.combinations(range(n + k - 1), k))


def rs_coefficient(
    p: int, n: int, S: SubsetSpec, m: int, mu: HalfPowerScalar, d: Sequence[int],
    budget: int = DEFAULT_COUNT_BUDGET, anchor: int | None = None,
) -> HalfPowerScalar:
    a = S.r if anchor is None else anchor
    shifted = [x - (n - 1 if i in S.complement else 0) for i, x in enumerate(d)]
    coeff = ms_coefficient(p, S, shifted, mu.L, budget)
    if coeff.is_zero():
        return coeff
    scale = HalfPowerScalar.integer(p, mu.L, p**n - p ** (n - 1))
    return scale * mu ** ((a - len(S.S)) // m) * coeff


@dataclass
class RTensor:
    total: LaurentTensor
    parts: dict[tuple[int, ...], LaurentTensor]


def r_tensor(
    p: int, n: int, r: int, rt: int, m: int, mu: HalfPowerScalar,
    window: Iterable[Sequence[int]] | None = None, budget: int = DEFAULT_COUNT_BUDGET,
    anchor: int | None = None,
) -> RTensor:
    """R tensor over ``window``; ``anchor`` replaces r in the size rule (for contrast checks)."""
    k = r + rt
    if window is None:
        window = comparison_window(n, k)
    subsets = admissible_subsets(r, rt, m, anchor)
    total = LaurentTensor(p, mu.L, k)
    parts = {s.S: LaurentTensor(p, mu.L, k) for s in subsets}
    for d in window:
        d = tuple(d)
        for s in subsets:
            v = rs_coefficient(p, n, s, m, mu, d, budget, anchor)
            parts[s.S].add_term(d, v)
            total.add_term(d, v)
    return RTensor(total, parts)


def matched_predicate(d: Sequence[int], S: SubsetSpec, n: int, form: str = "bounded") -> bool:
    """Range where orthogonality alone forces T(d) = R_S(d).

    With A = sum_S d_i - C(|S|,2) and B = sum_{S^c}(n-1-d_i) + C(k,2) - C(|S|,2):
    form="bounded" tests 0 <= A <= n-1 and B <= n-1; form="lower" drops A <= n-1
    (kept only to show that the identity then fails).
    """
    s = len(S.S)
    a = sum(d[i] for i in S.S) - math.comb(s, 2)
    b = sum(n - 1 - d[i] for i in S.complement) + math.comb(S.k, 2) - math.comb(s, 2)
    if form == "bounded":
        return 0 <= a <= n - 1 and b <= n - 1
    if form == "lower":
        return 0 <= a and b <= n - 1
    raise ValueError(f"unknown predicate form {form!r}")


# ---------------------------------------------------------------------------
# numeric series for M_S (singleton side), used to evaluate the main term


def _gs_grid(p: int, S: SubsetSpec, box: int) -> np.ndarray:
    """G_S coefficients N(|e|) q^{-sum|e|/2} on [0, box]^k as floats.

    Axis i holds |e_i|; slots in S carry x_i^{+|e_i|}, slots outside x_i^{-|e_i|}.
    Uses :func:`count_singleton_side`, so one side must have at most one slot.
    """
    k = S.k
    if len(S.complement) <= 1:
        many, single = list(S.S), list(S.complement)
    elif len(S.S) <= 1:
        many, single = list(S.complement), list(S.S)
    else:
        raise NotImplementedError("numeric M_S series needs a side with at most one slot")
    s = p**-0.5
    c = np.array([1.0] + [(p - 1) * float(p) ** (w - 1) for w in range(1, box + 1)])
    # A[e_1..e_j, t]: weighted count of T-free degree t for the first j slots
    A = np.ones((1,))
    for _ in many:
        prev = A
        tlen = prev.shape[-1] + box
        A = np.zeros(prev.shape[:-1] + (box + 1, tlen))
        for e in range(box + 1):
            for w in range(e + 1):
                A[..., e, w : w + prev.shape[-1]] += prev * c[w]
    cum = np.cumsum(A, axis=-1)
    tmax = cum.shape[-1] - 1
    nm = len(many)
    sum_many = np.indices((box + 1,) * nm).sum(axis=0) if nm else np.zeros(())
    grid = np.zeros((box + 1,) * k)
    singles = range(box + 1) if single else [0]
    for e1 in singles:
        block = cum[..., min(e1, tmax)] * s ** (sum_many + e1)
        idx: list = [slice(None)] * k
        if single:
            idx[single[0]] = e1
        # remaining axes of grid[idx] are the slots of ``many`` in increasing order
        grid[tuple(idx)] = block
    return grid


def ms_series(p: int, S: SubsetSpec, box: int) -> tuple[np.ndarray, np.ndarray]:
    """M_S coefficients as (exponent array, value array), exact for |exponents| <= box - k + 1."""
    k = S.k
    g = _gs_grid(p, S, box)
    # orient: axis i of ``dense`` is exponent + box, negative on slots outside S
    flips = tuple(i for i in S.complement)
    oriented = np.flip(g, axis=flips) if flips else g
    lim = box - k + 1
    size = 2 * box + 1
    dense = np.zeros((size,) * k)
    base = [slice(box, None) if i in S.S else slice(0, box + 1) for i in range(k)]
    src = np.zeros((size,) * k)
    src[tuple(base)] = oriented
    for sgn, shift in vandermonde_terms(k):
        dense += sgn * np.roll(src, shift, axis=tuple(range(k)))
    core = tuple(slice(box - lim, box + lim + 1) for _ in range(k))
    block = dense[core]
    idx = np.argwhere(block != 0.0)
    return idx - lim, block[tuple(idx.T)]


def main_term_from_series(
    p: int, n: int, r: int, rt: int, alphas: Sequence[complex], *, box: int = 44,
    m: int | None = None, mu: complex = 1.0,
) -> complex:
    """Family-normalised main term sum_S mu^{(r-|S|)/m} x^{(n-1)1_{S^c}} M_S(x) / V(x)."""
    k = r + rt
    x = np.array([cmath.exp(a * math.log(p)) for a in alphas])
    V = math.prod(x[i] - x[j] for i in range(k) for j in range(i + 1, k))
    if abs(V) < 1e-12:
        raise ValueError("shifts must be distinct")
    total = 0j
    for S in admissible_subsets(r, rt, m):
        exps, vals = ms_series(p, S, box)
        mon = np.prod(x[None, :] ** exps, axis=1)
        pref = math.prod(x[i] ** (n - 1) for i in S.complement)
        power = (r - len(S.S)) // m if m else 0
        total += mu**power * pref * complex(np.dot(vals, mon))
    return total / V


# ---------------------------------------------------------------------------
# closed forms


class PoleError(ValueError):
    pass


def _guard(value: complex, label: str, tol: float = 1e-10) -> complex:
    if abs(value) < tol:
        raise PoleError(f"pole: factor {label} vanishes")
    return value


def first_moment_closed_form(
    alphas: Sequence[complex], q: int, n: int, r: int, prefactor_sign: int = 1
) -> complex:
    """rt = 1 main term, family-normalised.

    sum_j q^{s alpha_j (n-1)} / (1 - q^{-1/2-alpha_j})
          prod_{i != j} (1 - q^{-1+alpha_i-alpha_j}) / ((1 - q^{-1/2+alpha_i})(1 - q^{alpha_i-alpha_j}))
    with s = prefactor_sign (+1 is the convention fixed by the exact coefficient identity).
    """
    if len(alphas) != r + 1:
        raise ValueError("need r + 1 shifts")
    lq = math.log(q)
    Q = lambda z: cmath.exp(z * lq)  # noqa: E731
    total = 0j
    for j, aj in enumerate(alphas):
        term = Q(prefactor_sign * aj * (n - 1)) / _guard(1 - Q(-0.5 - aj), f"1-q^(-1/2-a{j+1})")
        for i, ai in enumerate(alphas):
            if i == j:
                continue
            den = _guard(1 - Q(-0.5 + ai), f"1-q^(-1/2+a{i+1})") * _guard(
                1 - Q(ai - aj), f"1-q^(a{i+1}-a{j+1}); use the limit routine for coincident shifts"
            )
            term *= (1 - Q(-1 + ai - aj)) / den
        total += term
    return total


def fourth_moment_term(alphas: Sequence[complex], q: int, S: Sequence[int]) -> complex:
    """Rational part of the |S| = 2 term; slots in S carry |f|^{-1/2-alpha}."""
    lq = math.log(q)
    Q = lambda z: cmath.exp(z * lq)  # noqa: E731
    C = [i for i in range(4) if i not in S]
    beta = -sum(alphas[i] for i in S) + sum(alphas[i] for i in C)
    val = (1 - Q(-1 + beta)) / _guard(1 - Q(-2 + beta), "1-q^(-2-...)")
    for i in S:
        val /= _guard(1 - Q(-0.5 - alphas[i]), f"1-q^(-1/2-a{i+1})")
    for i in C:
        val /= _guard(1 - Q(-0.5 + alphas[i]), f"1-q^(-1/2+a{i+1})")
    for i in S:
        for j in C:
            val *= (1 - Q(-1 - alphas[i] + alphas[j])) / _guard(
                1 - Q(-alphas[i] + alphas[j]), f"1-q^(-a{i+1}+a{j+1})"
            )
    return val


def fourth_moment_closed_form(
    alphas: Sequence[complex], q: int, n: int, orientation: str = "corrected"
) -> complex:
    """Six-term r = rt = 2 main term.

    ``corrected`` puts the x^{n-1} prefactor on the slots carrying
    |f|^{-1/2-alpha}; ``literal`` puts it on the complementary slots.
    """
    if len(alphas) != 4:
        raise ValueError("need four shifts")
    lq = math.log(q)
    total = 0j
    for S in itertools.combinations(range(4), 2):
        C = [i for i in range(4) if i not in S]
        pref_slots = S if orientation == "corrected" else C
        pref = cmath.exp(lq * (n - 1) * sum(alphas[i] for i in pref_slots))
        total += pref * fourth_moment_term(alphas, q, S)
    return total


def fourth_moment_series(q: int, max_total: int) -> dict[tuple[int, int, int, int], Fraction]:
    """Exact Laurent expansion of :func:`fourth_moment_term` for S = (0, 1).

    Monomials are in u = (q^{-alpha_1}, q^{-alpha_2}, q^{alpha_3}, q^{alpha_4});
    the coefficient of u^a is returned as R with coefficient = R * q^{-|a|/2}.
    """
    D = max_total
    Fq = Fraction(q)
    series: dict[tuple[int, ...], Fraction] = {(0, 0, 0, 0): Fraction(1)}

    def mul(factor: dict[tuple[int, ...], Fraction]) -> None:
        nonlocal series
        out: dict[tuple[int, ...], Fraction] = {}
        for a, x in series.items():
            for b, y in factor.items():
                c = tuple(i + j for i, j in zip(a, b))
                if sum(c) <= D:
                    out[c] = out.get(c, Fraction(0)) + x * y
        series = {k: v for k, v in out.items() if v}

    def unit(i: int) -> tuple[int, ...]:
        return tuple(1 if j == i else 0 for j in range(4))

    def power(vec: tuple[int, ...], t: int) -> tuple[int, ...]:
        return tuple(t * v for v in vec)

    # 1/(1 - s u_i): reduced coefficient 1 on u_i^t
    for i in range(4):
        mul({power(unit(i), t): Fraction(1) for t in range(D + 1)})
    # (1 - q^{-1} W)/(1 - q^{-2} W), W = u_1u_2u_3u_4: reduced 1 - q for t >= 1
    W = (1, 1, 1, 1)
    mul({power(W, t): (Fraction(1) if t == 0 else 1 - Fq) for t in range(D // 4 + 1)})
    # (1 - q^{-1} u_i u_j)/(1 - u_i u_j): reduced (1 - 1/q) q^t for t >= 1
    for i in (0, 1):
        for j in (2, 3):
            vec = tuple(int(x == i or x == j) for x in range(4))
            mul({power(vec, t): (Fraction(1) if t == 0 else (1 - 1 / Fq) * Fq**t) for t in range(D // 2 + 1)})
    return series


def per_prime_count(e: Sequence[int]) -> int:
    """#{a, b, c, d >= 0 : a + b = e1, c + d = e2, a + c = e3, b + d = e4}."""
    e1, e2, e3, e4 = e
    if e1 + e2 != e3 + e4:
        return 0
    return sum(1 for a in range(e1 + 1) if 0 <= e3 - a <= e2 and 0 <= e1 - a <= e4)


def arithmetic_factor(
    p: int, r: int, rt: int, D: int, variant: str = "corrected"
) -> tuple[float, float]:
    """Euler product a_{r,rt} over irreducibles of degree <= D, with a tail bound.

    variant="corrected": T-factor (1-q^{-1})^{r rt} (1-q^{-1/2})^{-(r+rt)}, the
    value of the local factor at T of the main term at alpha = 0.
    variant="literal": exponent +(r+rt) on (1-q^{-1/2}).
    Returns (value, absolute tail bound).
    """
    if D < 1:
        raise ValueError("D must be at least 1")
    q = float(p)
    if variant == "corrected":
        t_exp = -(r + rt)
    elif variant == "literal":
        t_exp = r + rt
    else:
        raise ValueError(f"unknown variant {variant!r}")
    t_factor = (1 - 1 / q) ** (r * rt) * (1 - q**-0.5) ** t_exp
    log_prod = 0.0
    for k in range(1, D + 1):
        count = necklace_count(p, k) - (1 if k == 1 else 0)
        log_prod += count * math.log(_local_factor(q**-k, r, rt))
    value = t_factor * math.exp(log_prod)
    if r == 0 or rt == 0:
        return value, 0.0
    const = 4 ** (r * rt + r + rt)
    delta = const * q ** -(D + 1) / ((D + 1) * (1 - 1 / q))
    return value, abs(value) * math.expm1(delta)


def _local_factor(u: float, r: int, rt: int) -> float:
    if r == 0 or rt == 0:
        return 1.0
    total, e, term = 0.0, 0, 1.0
    while True:
        term = math.comb(e + r - 1, r - 1) * math.comb(e + rt - 1, rt - 1) * u**e
        total += term
        if e > 4 and term < 1e-18 * total:
            break
        e += 1
    return (1 - u) ** (r * rt) * total


def rm_factor(r: int, rt: int) -> Fraction:
    g = Fraction(math.factorial(r * rt))
    for j in range(r):
        g *= Fraction(math.factorial(j), math.factorial(j + rt))
    return g


def weyl_sum_mainterm(alphas: Sequence[complex], q: int, n: int, r: int, rt: int) -> complex:
    """sum_{|S|=r} prod_{i not in S} q^{alpha_i(n-1)} / prod_{i in S, j not in S} (1 - q^{alpha_i - alpha_j})."""
    k = r + rt
    if len(alphas) != k:
        raise ValueError("need r + rt shifts")
    lq = math.log(q)
    total = 0j
    for S in itertools.combinations(range(k), r):
        C = [i for i in range(k) if i not in S]
        num = cmath.exp(lq * (n - 1) * sum(alphas[i] for i in C))
        den = 1 + 0j
        for i in S:
            for j in C:
                den *= _guard(1 - cmath.exp(lq * (alphas[i] - alphas[j])), f"1-q^(a{i+1}-a{j+1})")
        total += num / den
    return total


def weyl_dimension_at_zero(n: int, r: int, rt: int) -> int:
    from .schur import weyl_dimension

    return weyl_dimension([n - 1] * rt + [0] * r)


def limit_at_zero(
    f: Callable[[Sequence[complex]], complex], k: int, *, radius: float = 0.2,
    points: int = 32, directions: Sequence[float] | None = None,
) -> complex:
    """Value at alpha = 0 of a function with a removable singularity there.

    Sets alpha_i = t v_i and averages over the circle |t| = radius (mean value
    property); exact up to exponentially small terms when f(t v) is analytic
    on a disc of radius comfortably larger than ``radius``.
    """
    if directions is None:
        directions = [(i - (k - 1) / 2) / max(k - 1, 1) + 0.05 * i * i for i in range(k)]
    vals = []
    for j in range(points):
        t = radius * cmath.exp(2j * math.pi * (j + 0.5) / points)
        vals.append(f([t * v for v in directions]))
    return sum(vals) / points
