"""The family of primitive even characters mod x^{n+1}: L-coefficients, root numbers,
moment tensors and the empirical monodromy constants."""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import mpmath
import numpy as np

from .cyclo import CycloScalar, HalfPowerScalar, LaurentTensor
from .ffpoly import PrimeField, enumerate_monic, reverse_unit
from .wittchar import (
    CharacterPoint,
    exponent_matrix,
    is_primitive,
    max_level,
    primitive_points,
)

CACHE_VERSION = "ffmoments-cache-v1"
DEFAULT_BUDGET = 10**9


class BudgetExceeded(RuntimeError):
    def __init__(self, what: str, cost: int, budget: int) -> None:
        super().__init__(f"{what}: estimated cost {cost:,} exceeds budget {budget:,}")
        self.cost = cost
        self.budget = budget


class ConsistencyError(AssertionError):
    pass


def psi_tag(psi_mult: int) -> str:
    return f"psi{psi_mult}"


@dataclass(frozen=True)
class LFunctionRecord:
    """c_d = sum over monic f of degree d of chi(f), for 0 <= d < n."""

    b: CharacterPoint
    c: tuple[CycloScalar, ...]

    @property
    def p(self) -> int:
        return self.b.p

    @property
    def n(self) -> int:
        return self.b.n

    def lam(self, d: int) -> HalfPowerScalar:
        if 0 <= d < self.n:
            return HalfPowerScalar(self.c[d], -d)
        return HalfPowerScalar.zero(self.p, self.c[0].L)

    @property
    def epsilon(self) -> HalfPowerScalar:
        return self.lam(self.n - 1)

    @property
    def epsilon_inverse(self) -> HalfPowerScalar:
        # eps^{-1} = conj(c_{n-1}) q^{-(n-1)/2} because |eps| = 1
        return HalfPowerScalar(self.c[self.n - 1].conjugate(), -(self.n - 1))

    def lambdas_complex(self) -> np.ndarray:
        q = self.p
        return np.array([self.c[d].to_complex() * q ** (-d / 2) for d in range(self.n)])


def family_size(p: int, n: int) -> int:
    return p**n - p ** (n - 1)


def build_cost(p: int, n: int) -> int:
    return family_size(p, n) * sum(p**d for d in range(n))


def _monic_rows(p: int, n: int) -> list[np.ndarray]:
    ctx = PrimeField(p)
    rows = []
    for d in range(n):
        units = [reverse_unit(f, n) for f in enumerate_monic(ctx, d)]
        rows.append(exponent_matrix(p, n, units))
    return rows


def _record_from_rows(
    b: CharacterPoint, rows: Sequence[np.ndarray], L: int, psi_mult: int
) -> LFunctionRecord:
    N = b.p**L
    beta = np.array(b.block_integers(), dtype=np.int64)
    c = []
    for A in rows:
        t = (A @ beta * psi_mult) % N
        counts = np.bincount(t, minlength=N)
        c.append(CycloScalar.from_exponent_counts(b.p, L, counts.tolist()))
    return LFunctionRecord(b, tuple(c))


@dataclass
class FamilyCache:
    p: int
    n: int
    psi_mult: int
    records: list[LFunctionRecord]
    metadata: dict[str, str] = field(default_factory=dict)

    @property
    def L(self) -> int:
        return max_level(self.p, self.n)

    @property
    def size(self) -> int:
        return len(self.records)

    def to_json(self) -> dict[str, object]:
        return {
            "version": CACHE_VERSION,
            "p": self.p,
            "n": self.n,
            "psi_tag": psi_tag(self.psi_mult),
            "L": self.L,
            "metadata": dict(sorted(self.metadata.items())),
            "records": [
                {"b": list(r.b.b), "c": [list(x.coeffs) for x in r.c]} for r in self.records
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> FamilyCache:
        if obj.get("version") != CACHE_VERSION:
            raise ValueError(f"unsupported cache version {obj.get('version')!r}")
        p, n, L = int(obj["p"]), int(obj["n"]), int(obj["L"])
        mult = int(str(obj["psi_tag"]).removeprefix("psi"))
        records = [
            LFunctionRecord(
                CharacterPoint(p, n, tuple(r["b"])),
                tuple(CycloScalar(p, L, tuple(c)) for c in r["c"]),
            )
            for r in obj["records"]
        ]
        return cls(p, n, mult, records, dict(obj.get("metadata", {})))


def build_family(
    p: int,
    n: int,
    *,
    threads: int = 1,
    psi_mult: int = 1,
    budget: int = DEFAULT_BUDGET,
    force: bool = False,
    check_primitivity: bool = True,
) -> FamilyCache:
    """Exact L-coefficients for every primitive character mod x^{n+1}."""
    if n < 2:
        raise ValueError("n must be at least 2")
    PrimeField(p)
    if psi_mult % p == 0:
        raise ValueError("psi multiplier must be prime to p")
    cost = build_cost(p, n)
    if cost > budget and not force:
        raise BudgetExceeded(f"family build at (p={p}, n={n})", cost, budget)
    L = max_level(p, n)
    rows = _monic_rows(p, n)
    points = primitive_points(p, n)
    if check_primitivity:
        for b in points:
            is_primitive(b)

    def work(chunk: Sequence[CharacterPoint]) -> list[LFunctionRecord]:
        return [_record_from_rows(b, rows, L, psi_mult) for b in chunk]

    chunks = _chunks(points, threads)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]
    records = [r for part in parts for r in part]
    meta = {"built": datetime.now(timezone.utc).isoformat(timespec="seconds")}
    return FamilyCache(p, n, psi_mult, records, meta)


def _chunks(items: Sequence, threads: int) -> list[Sequence]:
    k = max(1, threads) * 4
    size = max(1, math.ceil(len(items) / k))
    return [items[i : i + size] for i in range(0, len(items), size)]


def cache_dir() -> Path:
    return Path(os.environ.get("FFMOMENTS_CACHE_DIR", Path.home() / ".cache" / "ffmoments"))


def cache_path(p: int, n: int, psi_mult: int = 1, directory: Path | None = None) -> Path:
    return (directory or cache_dir()) / f"family_p{p}_n{n}_{psi_tag(psi_mult)}.json"


def save_cache(cache: FamilyCache, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(cache.to_json(), separators=(",", ":")), encoding="utf-8")


def load_cache(path: Path) -> FamilyCache:
    return FamilyCache.from_json(json.loads(path.read_text(encoding="utf-8")))


def load_or_build(
    p: int, n: int, *, psi_mult: int = 1, threads: int = 1, force: bool = False,
    budget: int = DEFAULT_BUDGET, use_disk: bool = True,
) -> FamilyCache:
    path = cache_path(p, n, psi_mult)
    if use_disk and path.exists():
        try:
            return load_cache(path)
        except (ValueError, KeyError, json.JSONDecodeError):
            pass
    cache = build_family(p, n, threads=threads, psi_mult=psi_mult, force=force, budget=budget)
    if use_disk:
        try:
            save_cache(cache, path)
        except OSError:
            pass
    return cache


ROOT_DPS = 50


def l_polynomial_roots(rec: LFunctionRecord, dps: int = ROOT_DPS) -> list[complex]:
    """Roots in u of sum_d c_d u^d.

    Computed at ``dps`` digits: repeated roots occur in these families, and
    double-precision companion eigenvalues only resolve them to ~1e-8.
    """
    ctx = mpmath.MPContext()  # private context: the global one is not thread safe
    ctx.dps = dps
    N = rec.c[0].order
    z = [ctx.expjpi(ctx.mpf(2 * k) / N) for k in range(N)]
    coeffs = [ctx.fsum(c * z[i] for i, c in enumerate(x.coeffs) if c) for x in rec.c]
    if abs(coeffs[-1]) == 0:
        raise ConsistencyError(f"b={rec.b.b}: L-polynomial has degree < n-1")
    if len(coeffs) == 1:
        return []
    roots = ctx.polyroots(coeffs[::-1], maxsteps=200, extraprec=2 * dps)
    return [complex(x) for x in roots]


@dataclass
class RecordDiagnostics:
    b: tuple[int, ...]
    max_root_deviation: float
    degree: int


def check_record(rec: LFunctionRecord, tol: float = 1e-9) -> RecordDiagnostics:
    """Exact invariants plus the numeric check that all roots lie on |u| = q^{-1/2}."""
    p, n = rec.p, rec.n
    L = rec.c[0].L
    where = f"b={rec.b.b}"
    if rec.c[0] != CycloScalar.one(p, L):
        raise ConsistencyError(f"{where}: c_0 != 1")
    top = rec.c[n - 1]
    if top * top.conjugate() != CycloScalar.integer(p, L, p ** (n - 1)):
        raise ConsistencyError(f"{where}: c_(n-1) conj(c_(n-1)) != q^(n-1)")
    for d in range(n):
        lhs = rec.c[n - 1 - d].scale(p**d)
        rhs = top * rec.c[d].conjugate()
        if lhs != rhs:
            raise ConsistencyError(f"{where}: functional equation fails at d={d}")
    roots = l_polynomial_roots(rec)
    dev = max((abs(abs(z) - p**-0.5) for z in roots), default=0.0)
    if dev > tol:
        raise ConsistencyError(f"{where}: root off the critical circle by {dev:.3e}")
    return RecordDiagnostics(rec.b.b, dev, n - 1)


def moment_tensor(cache: FamilyCache, r: int, rt: int, threads: int = 1) -> LaurentTensor:
    """T_raw(d) = sum over the family of eps^{-rt} prod_i lambda_{d_i}, d in [0, n-1]^{r+rt}.

    Unnormalised and without any (-1)^{sum d} sign.
    """
    if r < 0 or rt < 0 or r + rt < 1:
        raise ValueError("need r, rt >= 0 and r + rt >= 1")
    p, n, L = cache.p, cache.n, cache.L
    k = r + rt
    tuples = [d for d in itertools.product(range(n), repeat=k) if list(d) == sorted(d)]

    def work(chunk: Sequence[LFunctionRecord]) -> dict[tuple[int, ...], CycloScalar]:
        acc = {d: CycloScalar.zero(p, L) for d in tuples}
        for rec in chunk:
            tw = rec.c[n - 1].conjugate() ** rt
            for d in tuples:
                v = tw
                for di in d:
                    v = v * rec.c[di]
                acc[d] = acc[d] + v
        return acc

    chunks = _chunks(cache.records, threads)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]
    total = {d: CycloScalar.zero(p, L) for d in tuples}
    for part in parts:
        for d, v in part.items():
            total[d] = total[d] + v
    t = LaurentTensor(p, L, k)
    for d in itertools.product(range(n), repeat=k):
        s = tuple(sorted(d))
        t.add_term(d, HalfPowerScalar(total[s], -sum(d) - rt * (n - 1)))
    return t


@dataclass
class MonodromyReport:
    found: bool
    m: int | None
    mu: HalfPowerScalar | None
    det_eigenvalue: HalfPowerScalar | None
    p_power_floor: int
    divisibility_ok: bool | None
    mu_unit_modulus: bool | None

    def to_json(self) -> dict[str, object]:
        def enc(x: HalfPowerScalar | None) -> object:
            if x is None:
                return None
            z = x.to_complex()
            return {**x.to_json(), "complex": [z.real, z.imag]}

        return {
            "label": "empirical m",
            "found": self.found,
            "m": self.m,
            "mu": enc(self.mu),
            "det_eigenvalue": enc(self.det_eigenvalue),
            "p_power_floor": self.p_power_floor,
            "divisibility_ok": self.divisibility_ok,
            "mu_unit_modulus": self.mu_unit_modulus,
        }


def least_p_power_at_least(p: int, x: float) -> int:
    k = 1
    while k < x:
        k *= p
    return k


def empirical_m_mu(cache: FamilyCache, m_max: int | None = None) -> MonodromyReport:
    """Smallest m <= m_max with eps^m constant over the family.

    mu = eps^m (the common value); the determinant of normalised Frobenius is
    (-1)^{n-1} eps, so its m-th power is (-1)^{m(n-1)} mu.
    """
    p, n = cache.p, cache.n
    if m_max is None:
        m_max = 4 * p * p
    if m_max < 1:
        raise ValueError("m_max must be positive")
    floor = least_p_power_at_least(p, (n - 1) / 2)
    eps = [r.epsilon for r in cache.records]
    powers = list(eps)
    for m in range(1, m_max + 1):
        if all(x == powers[0] for x in powers):
            mu = powers[0]
            det = mu if (m * (n - 1)) % 2 == 0 else -mu
            return MonodromyReport(True, m, mu, det, floor, m % floor == 0, mu.has_unit_modulus())
        powers = [x * e for x, e in zip(powers, eps)]
    return MonodromyReport(False, None, None, None, floor, None, None)


def full_group_orthogonality(p: int, n: int, f, g, psi_mult: int = 1) -> tuple[CycloScalar, int]:
    """Sum over all even characters of chi(f) conj(chi(g)) and the predicted value."""
    from .ffpoly import reverse_unit as rev
    from .wittchar import all_points, character_eval

    L = max_level(p, n)
    N = p**L
    counts = [0] * N
    uf, ug = rev(f, n), rev(g, n)
    for b in all_points(p, n):
        t = character_eval(b, uf, psi_mult).exponent - character_eval(b, ug, psi_mult).exponent
        counts[t % N] += 1
    expected = p**n if uf == ug else 0
    return CycloScalar.from_exponent_counts(p, L, counts), expected
