"""Command-line front end."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from . import harness
from .ffpoly import DEFAULT_MAX_PRIME, is_prime
from .lfam import BudgetExceeded, ConsistencyError, DEFAULT_BUDGET, empirical_m_mu, load_or_build, moment_tensor
from .mainterm import (
    admissible_subsets,
    arithmetic_factor,
    count_ratio_tuples,
    rm_factor,
)
from .schur import BettiBudget, F_of_irreducible, all_weights, is_major_arc

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    p: int | None = None
    n: int | None = None
    r: int = 1
    rt: int = 1
    shifts: list[float] = field(default_factory=list)
    real_shift: bool = False
    D: int = 10
    threads: int = 1
    budget: int = DEFAULT_BUDGET
    out: Path | None = None
    fmt: str = "json"
    psi: int = 1
    force: bool = False

    def validate(self, need_family: bool = True) -> None:
        if need_family:
            if self.p is None or self.n is None:
                raise ConfigError("--p and --n are required")
            if not is_prime(self.p) or self.p > DEFAULT_MAX_PRIME:
                raise ConfigError(f"p={self.p} must be a prime <= {DEFAULT_MAX_PRIME}")
            if self.n < 2:
                raise ConfigError("n must be at least 2")
            if self.psi % self.p == 0:
                raise ConfigError("--psi must be prime to p")
        if self.r < 0 or self.rt < 0 or self.r + self.rt < 1:
            raise ConfigError("need r, rt >= 0 and r + rt >= 1")
        if self.shifts and len(self.shifts) != self.r + self.rt:
            raise ConfigError(f"need exactly r + rt = {self.r + self.rt} shifts")
        if self.threads < 1:
            raise ConfigError("--threads must be positive")

    @property
    def alphas(self) -> list[complex]:
        return [complex(t) if self.real_shift else 1j * t for t in self.shifts]


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--r", type=int, default=1)
    common.add_argument("--rt", type=int, default=1)
    common.add_argument("--shifts", type=float, nargs="*", default=[],
                        help="imaginary parts t_i of the shifts alpha_i = i t_i")
    common.add_argument("--real-shift", action="store_true",
                        help="read --shifts as real shifts (exploration only)")
    common.add_argument("--D", type=int, default=10, help="Euler-product truncation degree")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--force", action="store_true", help="build above the cost budget")
    common.add_argument("--out", type=Path, help="directory for report files")
    common.add_argument("--format", dest="fmt", choices=["json", "csv"], default="json")
    common.add_argument("--psi", type=int, default=1, help="additive character multiplier")
    parser = argparse.ArgumentParser(prog="ffmoments", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "pointcount":
            p.add_argument("--m1", type=int, default=2)
            p.add_argument("--m2", type=int, default=2)
        if name == "kloosterman":
            p.add_argument("--m", type=int, help="number of factors (default: empirical m)")
            p.add_argument("--trivial-psi", action="store_true")
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        p=ns.p, n=ns.n, r=ns.r, rt=ns.rt, shifts=list(ns.shifts), real_shift=ns.real_shift,
        D=ns.D, threads=ns.threads, budget=ns.budget, out=ns.out, fmt=ns.fmt, psi=ns.psi,
        force=ns.force,
    )


def _cache(cfg: RunConfig):
    return load_or_build(cfg.p, cfg.n, psi_mult=cfg.psi, threads=cfg.threads,
                         force=cfg.force, budget=cfg.budget)


def dump_json(obj: object) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def dump_csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


@dataclass
class Outcome:
    summary: list[str]
    report: dict | None = None
    csv_table: tuple[list[str], list[list[object]]] | None = None
    ok: bool = True
    stem: str = "report"


def _emit(cfg: RunConfig, out: Outcome) -> None:
    for line in out.summary:
        print(line)
    if cfg.out is None:
        return
    cfg.out.mkdir(parents=True, exist_ok=True)
    if cfg.fmt == "csv" and out.csv_table is not None:
        path = cfg.out / f"{out.stem}.csv"
        path.write_text(dump_csv(*out.csv_table), encoding="utf-8")
    elif out.report is not None:
        path = cfg.out / f"{out.stem}.json"
        path.write_text(dump_json(out.report), encoding="utf-8")
    else:
        return
    print(f"wrote {path}")


def _stem(cmd: str, cfg: RunConfig, with_weights: bool = True) -> str:
    s = f"{cmd}_p{cfg.p}_n{cfg.n}"
    return s + (f"_r{cfg.r}_rt{cfg.rt}" if with_weights else "")


# ---------------------------------------------------------------------------
# subcommands


def cmd_family(cfg: RunConfig, ns: argparse.Namespace) -> Outcome:
    cfg.validate()
    cache = _cache(cfg)
    return Outcome([f"|S_{{{cfg.n},{cfg.p}}}| = {cache.size}"], cache.to_json() | {"metadata": {}},
                   stem=_stem("family", cfg, False))


def cmd_lfun_check(cfg: RunConfig, ns: argparse.Namespace) -> Outcome:
    cfg.validate()
    cache = _cache(cfg)
    rep = harness.lfun_check(cache, cfg.threads)
    mono = empirical_m_mu(cache)
    rep["monodromy"] = mono.to_json()
    ok = rep["size"] == rep["expected_size"] and mono.found and bool(mono.divisibility_ok) and bool(mono.mu_unit_modulus)
    lines = [
        f"|S_{{{cfg.n},{cfg.p}}}| = {rep['size']} (expected {rep['expected_size']})",
        "exact invariants: ok",
        f"max root deviation from |u| = q^(-1/2): {rep['max_root_deviation']:.2e}",
        f"empirical m = {mono.m}, mu = {mono.mu.to_complex() if mono.mu else None}, "
        f"p-power floor {mono.p_power_floor} divides m: {mono.divisibility_ok}",
    ]
    table = (["b", "root_deviation"], [[" ".join(map(str, r["b"])), r["root_deviation"]] for r in rep["records"]])
    return Outcome(lines, rep, table, ok, _stem("lfun", cfg, False))


def cmd_moments(cfg: RunConfig, ns: argparse.Namespace) -> Outcome:
    cfg.validate()
    cache = _cache(cfg)
    T = moment_tensor(cache, cfg.r, cfg.rt, cfg.threads)
    rep = {"schema": "ffmoments-moments-v1", "p": cfg.p, "n": cfg.n, "r": cfg.r, "rt": cfg.rt,
           "tensor": T.to_json()}
    k = cfg.r + cfg.rt
    rows = [[*d, v.half_exp, v.to_complex().real, v.to_complex().imag] for d, v in T]
    header = [f"d{i + 1}" for i in range(k)] + ["half_exp", "value_re", "value_im"]
    return Outcome([f"moment tensor: {len(T)} nonzero entries"], rep, (header, rows),
                   stem=_stem("moments", cfg))


def cmd_schur(cfg: RunConfig, ns: argparse.Namespace) -> Outcome:
    cfg.validate()
    cache = _cache(cfg)
    T = moment_tensor(cache, cfg.r, cfg.rt, cfg.threads)
    mono = empirical_m_mu(cache)
    rows = []
    for w in all_weights(cfg.n, cfg.r, cfg.rt):
        F = F_of_irreducible(T, w)
        arc = "major" if is_major_arc(w, mono.m) else "minor"
        rows.append({"d": list(w.d), "arc": arc, "F": harness.scalar_json(F)})
    rep = {"schema": "ffmoments-schur-v1", "p": cfg.p, "n": cfg.n, "r": cfg.r, "rt": cfg.rt,
           "m": mono.m, "rows": rows}
    k = cfg.r + cfg.rt
    header = [f"d{i + 1}" for i in range(k)] + ["arc", "half_exp", "value_re", "value_im"]
    table = [[*r["d"], r["arc"], r["F"]["half_exp"], *r["F"]["complex"]] for r in rows]
    return Outcome([f"{len(rows)} weights, {sum(r['arc'] == 'minor' for r in rows)} minor-arc"],
                   rep, (header, table), stem=_stem("schur", cfg))


def cmd_mainterm(cfg: RunConfig, ns: argparse.Namespace) -> Outcome:
    """Count table N(S, degrees) for every S and every degree tuple up to --D in total."""
    if cfg.p is None:
        raise ConfigError("--p is required")
    cfg.validate(need_family=False)
    if not is_prime(cfg.p):
        raise ConfigError(f"p={cfg.p} is not prime")
    k = cfg.r + cfg.rt
    header = [f"d{i + 1}" for i in range(k)] + ["S", "count", "half_exp", "value_re", "value_im"]
    rows = []
    entries = []
    m = None
    if cfg.n is not None:
        m = empirical_m_mu(_cache(cfg)).m
    subsets = admissible_subsets(cfg.r, cfg.rt, m)
    degs = [e for tot in range(cfg.D + 1) for e in _compositions(tot, k)]
    for S in subsets:
        for e in degs:
            N = count_ratio_tuples(cfg.p, S, e, cfg.budget)
            d = [x if i in S.S else -x for i, x in enumerate(e)]
            val = N * cfg.p ** (-sum(e) / 2)
            rows.append([*d, S.label(), N, -sum(e), val, 0.0])
            entries.append({"d": d, "S": S.label(), "count": N, "half_exp": -sum(e)})
    rep = {"schema": "ffmoments-counts-v1", "p": cfg.p, "r": cfg.r, "rt": cfg.rt,
           "max_total_degree": cfg.D, "entries": entries}
    lines = [f"{len(rows)} count entries over {len(subsets)} subsets S (total degree <= {cfg.D})"]
    if cfg.shifts and cfg.n is not None and cfg.rt == 1:
        from .mainterm import first_moment_closed_form

        v = first_moment_closed_form(cfg.alphas, cfg.p, cfg.n, cfg.r)
        rep["first_moment_closed_form"] = [v.real, v.imag]
        lines.append(f"first-moment main term at the shifts: {v:.12g}")
    return Outcome(lines, rep, (header, rows), stem=f"mainterm_p{cfg.p}_r{cfg.r}_rt{cfg.rt}")


def _compositions(total: int, k: int) -> list[tuple[int, ...]]:
    if k == 1:
        return [(total,)]
    return [(a, *rest) for a in range(total + 1) for rest in _compositions(total - a, k - 1)]


def cmd_verify_matched(cfg: RunConfig, ns: argparse.Namespace) -> Outcome:
    cfg.validate()
    cache = _cache(cfg)
    rep = harness.verify_matched(cache, cfg.r, cfg.rt, threads=cfg.threads, strict=False)
    c = rep["classes"]
    lines = [
        f"window {rep['window_size']} tuples: {c['unique']} uniquely matched, "
        f"{c['multiple']} multiply matched, {c['unmatched']} unmatched",
        f"matched pairs {rep['matched_pairs']}, exact failures {len(rep['failures'])}",
        "matched identity: " + ("PASS" if rep["all_equal"] else "FAIL"),
    ]
    k = cfg.r + cfg.rt
    header = [f"d{i + 1}" for i in range(k)] + ["class", "S", "equal", "T_re", "T_im"]
    table = [[*r["d"], r["class"], " ".join(r["S"]), all(r["equal"]), *r["T"]["complex"]] for r in rep["rows"]]
    return Outcome(lines, rep, (header, table), rep["all_equal"], _stem("matched", cfg))


def cmd_hypothesis(cfg: RunConfig, ns: argparse.Namespace) -> Outcome:
    cfg.validate()
    cache = _cache(cfg)
    rep = harness.hypothesis_report(cache, cfg.r, cfg.rt)
    harness.validate_report(rep)
    mx = rep["max_omega"]
    lines = [
        f"{rep['weights_total']} weights: {rep['major_arc']} major-arc (excluded), {rep['minor_arc']} minor-arc",
        "max observed omega: " + ("none (no minor-arc weight with F != 0)" if mx is None else f"{mx:.6f}"),
    ]
    lines += [f"reference w = {r['w']:.6f} ({r['label']})" for r in rep["reference_lines"]]
    k = cfg.r + cfg.rt
    header = [f"d{i + 1}" for i in range(k)] + ["abs_F", "omega", "multiplicity", "betti_bound"]
    table = [[*r["d"], r["abs_F"], r["omega"], r["multiplicity"], r["betti_bound"]] for r in rep["rows"]]
    return Outcome(lines, rep, (header, table), stem=_stem("hypothesis", cfg))


def cmd_compare(cfg: RunConfig, ns: argparse.Namespace) -> Outcome:
    cfg.validate()
    if not cfg.shifts:
        raise ConfigError("--shifts is required for compare")
    if len(set(cfg.shifts)) != len(cfg.shifts):
        raise ConfigError("shifts must be distinct")
    cache = _cache(cfg)
    rep = harness.moment_compare(cache, cfg.r, cfg.rt, cfg.alphas)
    lhs = complex(*rep["lhs"])
    lines = [f"family average: {lhs:.12g}"]
    if rep["rhs"] is not None:
        lines.append(f"main term ({rep['method']}): {complex(*rep['rhs']):.12g}")
        lines.append(f"|difference| = {rep['abs_diff']:.6e}")
    else:
        lines.append("main term: not available for this shape")
    for b in rep["reference_budgets"]:
        lines.append(f"reference budget at w = {b['w']:.4f}: {b['budget']:.4e}")
    return Outcome(lines, rep, stem=_stem("compare", cfg))


def cmd_pointcount(cfg: RunConfig, ns: argparse.Namespace) -> Outcome:
    cfg.validate()
    rep = harness.z_point_count(cfg.p, cfg.n, ns.m1, ns.m2)
    lines = [f"#Z = {rep['brute_force']} (enumeration), {rep['character_sum']} (character sum): "
             + ("PASS" if rep["equal"] else "FAIL")]
    return Outcome(lines, rep, ok=rep["equal"], stem=f"pointcount_p{cfg.p}_n{cfg.n}_m{ns.m1}_{ns.m2}")


def cmd_kloosterman(cfg: RunConfig, ns: argparse.Namespace) -> Outcome:
    cfg.validate()
    cache = _cache(cfg)
    rep = harness.kloosterman_check(cache, ns.m, trivial=ns.trivial_psi)
    lines = [f"m = {rep['m']}, psi {rep['psi']}: K = {complex(*rep['K']):.12g}"]
    for key in ("modulus_identity", "equals_q_power_mu", "family_identity", "brute_force_equal", "fourier_equal"):
        lines.append(f"{key}: {rep[key]}")
    lines += rep["notes"]
    checks = [rep[k] for k in ("family_identity", "brute_force_equal", "fourier_equal") if rep[k] is not None]
    if rep["equals_q_power_mu"] is not None:
        checks += [rep["modulus_identity"], rep["equals_q_power_mu"]]
    ok = all(checks) if not ns.trivial_psi else True
    return Outcome(lines, rep, ok=ok, stem=f"kloosterman_p{cfg.p}_n{cfg.n}_m{rep['m']}")


def cmd_constants(cfg: RunConfig, ns: argparse.Namespace) -> Outcome:
    cfg.validate(need_family=False)
    p = cfg.p or 3
    g = rm_factor(cfg.r, cfg.rt)
    C = BettiBudget(cfg.n or 2, cfg.r, cfg.rt).C
    a, tail = arithmetic_factor(p, cfg.r, cfg.rt, cfg.D)
    rep = {"schema": "ffmoments-constants-v1", "p": p, "r": cfg.r, "rt": cfg.rt, "D": cfg.D,
           "g": str(g), "C": C, "a": a, "a_tail_bound": tail}
    lines = [
        f"g_{{{cfg.r},{cfg.rt}}} = {g}",
        f"C_{{{cfg.r},{cfg.rt}}} = {C}",
        f"a_{{{cfg.r},{cfg.rt}}}(q={p}, D={cfg.D}) = {a:.12g} +- {tail:.3e}",
    ]
    return Outcome(lines, rep, stem=f"constants_p{p}_r{cfg.r}_rt{cfg.rt}_D{cfg.D}")


COMMANDS: dict[str, Callable[[RunConfig, argparse.Namespace], Outcome]] = {
    "family": cmd_family,
    "lfun-check": cmd_lfun_check,
    "moments": cmd_moments,
    "schur": cmd_schur,
    "mainterm": cmd_mainterm,
    "verify-matched": cmd_verify_matched,
    "hypothesis": cmd_hypothesis,
    "compare": cmd_compare,
    "pointcount": cmd_pointcount,
    "kloosterman": cmd_kloosterman,
    "constants": cmd_constants,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    cfg = _config(ns)
    try:
        outcome = COMMANDS[ns.command](cfg, ns)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        print(f"refused: {exc} (rerun with --force or a larger --budget)", file=sys.stderr)
        return EXIT_BUDGET
    except ConsistencyError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(cfg, outcome)
    return EXIT_OK if outcome.ok else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
