"""End-to-end checks: family invariants, the matched-region identity, closed-form
series checks, minor-arc reports, moment comparison, point counts and the
Kloosterman-type identity.

Every report is a plain dict carrying a ``schema`` string; :data:`SCHEMAS`
holds the JSON Schemas and :func:`validate_report` checks one.
"""

from __future__ import annotations

import cmath
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, TypeVar

import jsonschema
import numpy as np

from .cyclo import CycloScalar, HalfPowerScalar, vandermonde_multiply
from .ffpoly import TruncatedUnit
from .lfam import (
    BudgetExceeded,
    ConsistencyError,
    FamilyCache,
    check_record,
    empirical_m_mu,
    family_size,
    moment_tensor,
)
from .mainterm import (
    SubsetSpec,
    admissible_subsets,
    comparison_window,
    count_ratio_tuples,
    first_moment_closed_form,
    fourth_moment_closed_form,
    fourth_moment_series,
    matched_predicate,
    ms_series,
    r_tensor,
)
from .schur import (
    BettiBudget,
    F_of_irreducible,
    HighestWeight,
    all_weights,
    elementary_from_roots,
    is_major_arc,
    multiplicity,
    power_savings_w,
    schur_at_zeros,
)
from .wittchar import all_points, character_eval, max_level

KLOOSTERMAN_BUDGET = 10**7
POINTCOUNT_BUDGET = 10**7

X = TypeVar("X")
Y = TypeVar("Y")


def ordered_map(fn: Callable[[X], Y], items: Sequence[X], threads: int = 1) -> list[Y]:
    """map with an optional thread pool; results always in input order."""
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def scalar_json(v: HalfPowerScalar) -> dict[str, object]:
    z = v.to_complex()
    return {**v.to_json(), "complex": [z.real, z.imag]}


# ---------------------------------------------------------------------------
# family and L-function invariants


def lfun_check(cache: FamilyCache, threads: int = 1, tol: float = 1e-9) -> dict[str, object]:
    """Exact invariants and the root-circle check for every record."""
    diags = ordered_map(lambda rec: check_record(rec, tol), cache.records, threads)
    return {
        "schema": "ffmoments-lfun-v1",
        "p": cache.p,
        "n": cache.n,
        "size": cache.size,
        "expected_size": family_size(cache.p, cache.n),
        "exact_invariants_ok": True,
        "root_tolerance": tol,
        "max_root_deviation": max(d.max_root_deviation for d in diags),
        "records": [{"b": list(d.b), "root_deviation": d.max_root_deviation} for d in diags],
    }


def psi_invariance(base: FamilyCache, alt: FamilyCache) -> dict[str, object]:
    """Compare family aggregates built with two additive-character choices."""
    def key(cache: FamilyCache) -> list[tuple]:
        return sorted(tuple(tuple(x.coeffs) for x in r.c) for r in cache.records)

    mb, ma = empirical_m_mu(base), empirical_m_mu(alt)
    return {
        "same_l_polynomials": key(base) == key(alt),
        "same_m": mb.m == ma.m,
        "same_mu": mb.mu == ma.mu,
    }


# ---------------------------------------------------------------------------
# matched region


@dataclass
class MatchedRow:
    d: tuple[int, ...]
    matched: list[SubsetSpec]
    T: HalfPowerScalar
    R: dict[tuple[int, ...], HalfPowerScalar]

    @property
    def cls(self) -> str:
        return ["unmatched", "unique"][len(self.matched)] if len(self.matched) < 2 else "multiple"

    def equal_flags(self) -> list[bool]:
        return [self.T == self.R[S.S] for S in self.matched]


def verify_matched(
    cache: FamilyCache, r: int, rt: int, *, threads: int = 1, anchor: int | None = None,
    predicate: str = "bounded", strict: bool = True,
) -> dict[str, object]:
    """T(d) == R_S(d) exactly for every matched pair (d, S) in the comparison window."""
    p, n = cache.p, cache.n
    mono = empirical_m_mu(cache)
    if not mono.found:
        raise ConsistencyError("no empirical m found; cannot build R")
    k = r + rt
    T = vandermonde_multiply(moment_tensor(cache, r, rt, threads))
    window = comparison_window(n, k)
    subsets = admissible_subsets(r, rt, mono.m, anchor)
    if not subsets:
        raise ValueError(f"no admissible S for r={r}, rt={rt}, m={mono.m}")

    def work(d: tuple[int, ...]) -> MatchedRow:
        R = r_tensor(p, n, r, rt, mono.m, mono.mu, [d], anchor=anchor)
        matched = [S for S in subsets if matched_predicate(d, S, n, predicate)]
        return MatchedRow(d, matched, T.get(d), {S: R.parts[S].get(d) for S in R.parts})

    rows = ordered_map(work, window, threads)
    failures = [
        (row.d, S.label()) for row in rows for S, ok in zip(row.matched, row.equal_flags()) if not ok
    ]
    if strict and failures:
        raise ConsistencyError(f"matched identity fails at {failures}")
    counts = {c: sum(1 for row in rows if row.cls == c) for c in ("unique", "multiple", "unmatched")}
    return {
        "schema": "ffmoments-matched-v1",
        "p": p,
        "n": n,
        "r": r,
        "rt": rt,
        "m": mono.m,
        "mu": scalar_json(mono.mu),
        "size_rule": "|S| = r mod m" if anchor is None else f"|S| = {anchor} mod m",
        "predicate": predicate,
        "window_size": len(window),
        "classes": counts,
        "matched_pairs": sum(len(row.matched) for row in rows),
        "failures": [{"d": list(d), "S": s} for d, s in failures],
        "all_equal": not failures,
        "rows": [
            {
                "d": list(row.d),
                "class": row.cls,
                "S": [S.label() for S in row.matched],
                "T": scalar_json(row.T),
                "R_S": [scalar_json(row.R[S.S]) for S in row.matched],
                "equal": row.equal_flags(),
            }
            for row in rows
        ],
    }


def convention_contrast(cache: FamilyCache, r: int, rt: int) -> dict[str, int]:
    """Failure counts of the alternative readings; the adopted ones have zero."""
    out = {}
    for name, kw in [
        ("adopted", {}),
        ("size_rule_rt", {"anchor": rt}),
        ("predicate_lower_only", {"predicate": "lower"}),
    ]:
        rep = verify_matched(cache, r, rt, strict=False, **kw)
        out[name] = len(rep["failures"])
    return out


# ---------------------------------------------------------------------------
# fourth-moment series identity


def fourth_moment_check(p: int, max_total: int = 6, threads: int = 1) -> dict[str, object]:
    """Laurent coefficients of the |S| = 2 term against brute-force counts."""
    series = fourth_moment_series(p, max_total)
    S = SubsetSpec((0, 1), 2, 2)
    monos = [e for e in itertools.product(range(max_total + 1), repeat=4) if sum(e) <= max_total]
    counts = ordered_map(lambda e: count_ratio_tuples(p, S, e), monos, threads)
    rows = []
    for e, N in zip(monos, counts):
        R = series.get(e, 0)
        rows.append({"e": list(e), "series": str(R), "count": N, "equal": R == N})
    return {
        "schema": "ffmoments-fourth-v1",
        "p": p,
        "max_total": max_total,
        "monomials": len(rows),
        "all_equal": all(r["equal"] for r in rows),
        "rows": rows,
    }


# ---------------------------------------------------------------------------
# minor-arc report


def _omega(absF: float, q: int, n: int) -> float | None:
    return None if absF == 0 else 2 * math.log(absF, q) - n


def schur_family_sum(cache: FamilyCache, w: HighestWeight, es: list[np.ndarray] | None = None) -> complex:
    if es is None:
        es = [elementary_from_roots(rec) for rec in cache.records]
    return sum((schur_at_zeros(rec, w, e) for rec, e in zip(cache.records, es)), 0j)


def schur_crosscheck(
    cache: FamilyCache, r: int, rt: int, weights: Sequence[HighestWeight] | None = None
) -> list[dict[str, object]]:
    """Exact F(V_w) against the family sum of Schur functions of the zeros."""
    T = moment_tensor(cache, r, rt)
    if weights is None:
        weights = list(all_weights(cache.n, r, rt))
    es = [elementary_from_roots(rec) for rec in cache.records]
    out = []
    for w in weights:
        F = F_of_irreducible(T, w).to_complex()
        S = schur_family_sum(cache, w, es)
        out.append({"d": list(w.d), "F": [F.real, F.imag], "schur_sum": [S.real, S.imag],
                    "rel_err": abs(F - S) / max(abs(F), 1.0)})
    return out


def hypothesis_report(cache: FamilyCache, r: int, rt: int) -> dict[str, object]:
    """Observed cancellation exponents for the minor-arc weights (reported, not asserted)."""
    p, n = cache.p, cache.n
    mono = empirical_m_mu(cache)
    if not mono.found:
        raise ConsistencyError("no empirical m found")
    weights = list(all_weights(n, r, rt))
    minor = [w for w in weights if not is_major_arc(w, mono.m)]
    T = moment_tensor(cache, r, rt)
    es = [elementary_from_roots(rec) for rec in cache.records]
    budget = BettiBudget(n, r, rt)
    rows = []
    for w in minor:
        F = F_of_irreducible(T, w)
        Fc = F.to_complex()
        S = schur_family_sum(cache, w, es)
        om = _omega(0.0 if F.is_zero() else abs(Fc), p, n)
        rows.append({
            "d": list(w.d),
            "F": scalar_json(F),
            "abs_F": abs(Fc),
            "exact_zero": F.is_zero(),
            "omega": om,
            "multiplicity": multiplicity(w),
            "betti_bound": budget.bound(w.d),
            "schur_sum": [S.real, S.imag],
            "schur_rel_err": abs(Fc - S) / max(abs(Fc), 1.0),
        })
    omegas = [row["omega"] for row in rows if row["omega"] is not None]
    hist: dict[str, int] = {}
    for om in omegas:
        key = f"{math.floor(om * 2) / 2:.1f}"
        hist[key] = hist.get(key, 0) + 1
    refs = [{"label": "n-1", "w": float(n - 1), "budget": budget.error_budget(p, n - 1)}]
    if rt == 1 and r >= 1:
        ws = power_savings_w(n, p, r)
        refs.append({"label": "power savings", "w": ws, "budget": budget.error_budget(p, ws)})
    return {
        "schema": "ffmoments-hypothesis-v1",
        "p": p,
        "n": n,
        "r": r,
        "rt": rt,
        "m": mono.m,
        "weights_total": len(weights),
        "major_arc": len(weights) - len(minor),
        "minor_arc": len(minor),
        "max_omega": max(omegas) if omegas else None,
        "histogram": dict(sorted(hist.items())),
        "reference_lines": refs,
        "C": budget.C,
        "rows": rows,
    }


# ---------------------------------------------------------------------------
# moment comparison


def family_average(cache: FamilyCache, r: int, rt: int, alphas: Sequence[complex]) -> complex:
    """(1/|family|) sum eps^{-rt} prod_i sum_d lambda_d x_i^d with x_i = q^{alpha_i}."""
    q = cache.p
    x = [cmath.exp(a * math.log(q)) for a in alphas]
    total = 0j
    for rec in cache.records:
        lam = rec.lambdas_complex()
        v = rec.epsilon_inverse.to_complex() ** rt
        for xi in x:
            v *= complex(np.polyval(lam[::-1], xi))
        total += v
    return total / cache.size


def _main_term_coefficients(
    p: int, n: int, r: int, rt: int, m: int, mu: complex, box: int
) -> dict[tuple[int, ...], complex]:
    out: dict[tuple[int, ...], complex] = {}
    for S in admissible_subsets(r, rt, m):
        exps, vals = ms_series(p, S, box)
        shift = np.array([n - 1 if i in S.complement else 0 for i in range(S.k)])
        scale = mu ** ((r - len(S.S)) // m)
        for e, v in zip(map(tuple, exps + shift), vals):
            out[e] = out.get(e, 0j) + scale * v
    return out


def moment_compare(
    cache: FamilyCache, r: int, rt: int, alphas: Sequence[complex], *, box: int = 40
) -> dict[str, object]:
    """Family average against the main term at the given shifts."""
    p, n = cache.p, cache.n
    k = r + rt
    if len(alphas) != k:
        raise ValueError(f"need {k} shifts")
    if len({complex(a) for a in alphas}) != k:
        raise ValueError("shifts must be distinct")
    mono = empirical_m_mu(cache)
    lhs = family_average(cache, r, rt, alphas)
    x = [cmath.exp(a * math.log(p)) for a in alphas]
    V = math.prod(x[i] - x[j] for i in range(k) for j in range(i + 1, k))
    method, rhs, recon = None, None, None
    try:
        coeffs = _main_term_coefficients(p, n, r, rt, mono.m, mono.mu.to_complex(), box)
        method = "series"
        rhs = sum(v * math.prod(xi**e for xi, e in zip(x, d)) for d, v in coeffs.items()) / V
        # rebuild the difference from the exact tensor minus the series coefficients
        T = vandermonde_multiply(moment_tensor(cache, r, rt))
        diff = {d: -v for d, v in coeffs.items()}
        for d, t in T:
            diff[d] = diff.get(d, 0j) + t.to_complex() / cache.size
        recon = sum(v * math.prod(xi**e for xi, e in zip(x, d)) for d, v in diff.items()) / V
    except NotImplementedError:
        if (r, rt) == (2, 2) and mono.m > 2:
            method = "closed form"
            rhs = fourth_moment_closed_form(alphas, p, n)
    if rhs is None and rt == 1 and mono.m > r:
        method = "closed form"
        rhs = first_moment_closed_form(alphas, p, n, r)
    budget = BettiBudget(n, r, rt)
    refs = [{"w": float(n - 1), "budget": budget.error_budget(p, n - 1)}]
    if rt == 1 and r >= 1:
        ws = power_savings_w(n, p, r)
        refs.append({"w": ws, "budget": budget.error_budget(p, ws)})

    def cj(z: complex | None) -> list[float] | None:
        return None if z is None else [z.real, z.imag]

    return {
        "schema": "ffmoments-compare-v1",
        "p": p,
        "n": n,
        "r": r,
        "rt": rt,
        "alphas": [[complex(a).real, complex(a).imag] for a in alphas],
        "method": method,
        "lhs": cj(lhs),
        "rhs": cj(rhs),
        "abs_diff": None if rhs is None else abs(lhs - rhs),
        "reconstructed_diff": cj(recon),
        "reconstruction_err": None if recon is None else abs((lhs - rhs) - recon),
        "reference_budgets": refs,
    }


# ---------------------------------------------------------------------------
# point counts and the Kloosterman-type identity


def _linear_unit(p: int, n: int, a: int) -> TruncatedUnit:
    return TruncatedUnit(p, ((-a) % p,) + (0,) * (n - 1))


def _unit_product(units: Sequence[TruncatedUnit], p: int, n: int) -> TruncatedUnit:
    out = TruncatedUnit.one(p, n)
    for u in units:
        out = out * u
    return out


def z_point_count(p: int, n: int, m1: int, m2: int, budget: int = POINTCOUNT_BUDGET) -> dict[str, object]:
    """#Z by enumeration and by the character sum over all characters of the 1-units."""
    if p ** (m1 + m2) > budget:
        raise BudgetExceeded(f"point count (p={p}, m1={m1}, m2={m2})", p ** (m1 + m2), budget)
    lin = [_linear_unit(p, n, a) for a in range(p)]
    prods_a = [_unit_product([lin[a] for a in t], p, n) for t in itertools.product(range(p), repeat=m1)]
    prods_b = [_unit_product([lin[b] for b in t], p, n) for t in itertools.product(range(p), repeat=m2)]
    brute = sum(1 for u in prods_a for v in prods_b if u == v)
    L = max_level(p, n)
    total = CycloScalar.zero(p, L)
    for b in all_points(p, n):
        s = CycloScalar.zero(p, L)
        for u in lin:
            s = s + character_eval(b, u).to_cyclo()
        total = total + s**m1 * s.conjugate() ** m2
    value = total.rational_integer()
    if value is None:
        raise ConsistencyError("character sum is not a rational integer")
    if value % p**n:
        raise ConsistencyError("character sum is not divisible by p^n")
    return {
        "schema": "ffmoments-pointcount-v1",
        "p": p,
        "n": n,
        "m1": m1,
        "m2": m2,
        "brute_force": brute,
        "character_sum": value // p**n,
        "equal": brute == value // p**n,
    }


def _all_units(p: int, n: int) -> list[TruncatedUnit]:
    return [TruncatedUnit(p, c) for c in itertools.product(range(p), repeat=n)]


def _psi_counts_to_cyclo(p: int, L: int, counts: Sequence[int]) -> CycloScalar:
    step = p ** (L - 1)
    full = [0] * p**L
    for t, c in enumerate(counts):
        full[t * step] = c
    return CycloScalar.from_exponent_counts(p, L, full)


def kloosterman_brute(p: int, n: int, m: int, trivial: bool = False) -> list[int]:
    """Counts by psi-exponent of sum psi(sum_j a_{n,j}) over tuples with product 1.

    Enumerates m-1 free factors; the last is their inverse.
    """
    units = _all_units(p, n)
    one = TruncatedUnit.one(p, n)
    counts = [0] * p
    for tup in itertools.product(units, repeat=m - 1):
        prod = one
        for u in tup:
            prod = prod * u
        t = sum(u.coeffs[-1] for u in tup) + prod.inverse().coeffs[-1]
        counts[0 if trivial else t % p] += 1
    return counts


def kloosterman_convolution(p: int, n: int, m: int, trivial: bool = False) -> list[int]:
    """Same sum by dynamic programming over the unit group (exact integers)."""
    units = _all_units(p, n)
    index = {u.coeffs: i for i, u in enumerate(units)}
    G = len(units)
    table = np.array([[index[(a * b).coeffs] for b in units] for a in units])
    tn = [0 if trivial else u.coeffs[-1] for u in units]
    f = np.zeros((G, p), dtype=object)
    f[index[(0,) * n], 0] = 1
    for _ in range(m):
        g = np.zeros((G, p), dtype=object)
        for a in range(G):
            if not f[a].any():
                continue
            for b in range(G):
                g[table[a, b]] += np.roll(f[a], tn[b])
        f = g
    return [int(x) for x in f[index[(0,) * n]]]


def kloosterman_fourier(p: int, n: int, m: int) -> CycloScalar:
    """(1/p^n) sum over all characters chi of (sum_u psi(a_n(u)) chi(u))^m."""
    L = max_level(p, n)
    units = _all_units(p, n)
    total = CycloScalar.zero(p, L)
    step = p ** (L - 1)
    for b in all_points(p, n):
        counts = [0] * p**L
        for u in units:
            counts[(character_eval(b, u).exponent + u.coeffs[-1] * step) % p**L] += 1
        total = total + CycloScalar.from_exponent_counts(p, L, counts) ** m
    if not total.divisible_by(p**n):
        raise ConsistencyError("Fourier total not divisible by p^n")
    return total.exact_div(p**n)


def kloosterman_family_side(cache: FamilyCache, m: int) -> HalfPowerScalar:
    """q^{m(n+1)/2 - n} sum of eps^m over characters with chi(1 + a x^n) = psi(-a)."""
    p, n, L = cache.p, cache.n, cache.L
    unit = TruncatedUnit(p, (0,) * (n - 1) + (1,))
    target = (-1 * p ** (L - 1)) % p**L
    acc = HalfPowerScalar.zero(p, L)
    for rec in cache.records:
        if character_eval(rec.b, unit, cache.psi_mult).exponent == target:
            acc = acc + rec.epsilon**m
    return acc * HalfPowerScalar.integer(p, L, 1, m * (n + 1) - 2 * n)


def kloosterman_check(
    cache: FamilyCache, m: int | None = None, *, budget: int = KLOOSTERMAN_BUDGET,
    trivial: bool = False,
) -> dict[str, object]:
    """The Kloosterman-type sum against q^{m(n+1)/2 - 1} mu.

    Tuple enumeration runs only when p^{nm} is within ``budget``; the exact
    group convolution and the Fourier route always run.
    """
    p, n, L = cache.p, cache.n, cache.L
    mono = empirical_m_mu(cache)
    if m is None:
        m = mono.m
    conv = kloosterman_convolution(p, n, m, trivial)
    K = _psi_counts_to_cyclo(p, L, conv)
    notes = []
    brute_equal = None
    if p ** (n * m) <= budget:
        brute_equal = kloosterman_brute(p, n, m, trivial) == conv
    else:
        notes.append(
            f"tuple enumeration skipped: p^(nm) = {p ** (n * m):,} exceeds budget {budget:,}"
        )
    fourier_equal = None if trivial else kloosterman_fourier(p, n, m) == K
    Kh = HalfPowerScalar(K, 0)
    modulus_ok = K * K.conjugate() == CycloScalar.integer(p, L, p ** (m * (n + 1) - 2))
    family_ok = None if trivial else Kh == kloosterman_family_side(cache, m)
    mu_ok = None
    if mono.found and m == mono.m:
        mu_ok = Kh == HalfPowerScalar.integer(p, L, 1, m * (n + 1) - 2) * mono.mu
    z = K.to_complex()
    return {
        "schema": "ffmoments-kloosterman-v1",
        "p": p,
        "n": n,
        "m": m,
        "psi": "trivial" if trivial else "standard",
        "K": [z.real, z.imag],
        "modulus_identity": modulus_ok,
        "equals_q_power_mu": mu_ok,
        "family_identity": family_ok,
        "brute_force_equal": brute_equal,
        "fourier_equal": fourier_equal,
        "notes": notes,
    }


# ---------------------------------------------------------------------------
# schemas

_NUM = {"type": "number"}
_PAIR = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}
_SCALAR = {
    "type": "object",
    "required": ["half_exp", "zeta_coeffs", "complex"],
    "properties": {"half_exp": {"type": "integer"}, "complex": _PAIR},
}

SCHEMAS: dict[str, dict] = {
    "ffmoments-hypothesis-v1": {
        "type": "object",
        "required": ["schema", "p", "n", "r", "rt", "m", "minor_arc", "max_omega", "rows"],
        "properties": {
            "schema": {"const": "ffmoments-hypothesis-v1"},
            "max_omega": {"type": ["number", "null"]},
            "rows": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["d", "F", "abs_F", "omega", "multiplicity", "betti_bound"],
                    "properties": {
                        "d": {"type": "array", "items": {"type": "integer"}},
                        "F": _SCALAR,
                        "abs_F": _NUM,
                        "omega": {"type": ["number", "null"]},
                        "multiplicity": {"type": "integer", "minimum": 1},
                        "betti_bound": {"type": "integer", "minimum": 1},
                    },
                },
            },
        },
    },
    "ffmoments-matched-v1": {
        "type": "object",
        "required": ["schema", "p", "n", "r", "rt", "m", "classes", "all_equal", "rows"],
        "properties": {
            "schema": {"const": "ffmoments-matched-v1"},
            "all_equal": {"type": "boolean"},
            "rows": {"type": "array", "items": {"type": "object", "required": ["d", "class", "S", "T", "R_S", "equal"]}},
        },
    },
    "ffmoments-lfun-v1": {
        "type": "object",
        "required": ["schema", "p", "n", "size", "expected_size", "max_root_deviation"],
        "properties": {"schema": {"const": "ffmoments-lfun-v1"}},
    },
    "ffmoments-fourth-v1": {
        "type": "object",
        "required": ["schema", "p", "max_total", "all_equal", "rows"],
        "properties": {"schema": {"const": "ffmoments-fourth-v1"}},
    },
    "ffmoments-compare-v1": {
        "type": "object",
        "required": ["schema", "p", "n", "r", "rt", "lhs", "rhs", "abs_diff"],
        "properties": {"schema": {"const": "ffmoments-compare-v1"}, "lhs": _PAIR},
    },
    "ffmoments-pointcount-v1": {
        "type": "object",
        "required": ["schema", "brute_force", "character_sum", "equal"],
        "properties": {"schema": {"const": "ffmoments-pointcount-v1"}},
    },
    "ffmoments-kloosterman-v1": {
        "type": "object",
        "required": ["schema", "K", "modulus_identity", "notes"],
        "properties": {"schema": {"const": "ffmoments-kloosterman-v1"}},
    },
}


def validate_report(obj: dict) -> None:
    """Raise jsonschema.ValidationError if ``obj`` does not match its declared schema."""
    name = obj.get("schema")
    if name not in SCHEMAS:
        raise jsonschema.ValidationError(f"unknown schema {name!r}")
    jsonschema.validate(obj, SCHEMAS[name])
