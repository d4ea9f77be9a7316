from __future__ import annotations

import pytest

from ffmoments.harness import (
    convention_contrast,
    fourth_moment_check,
    hypothesis_report,
    kloosterman_brute,
    kloosterman_check,
    kloosterman_convolution,
    kloosterman_fourier,
    lfun_check,
    moment_compare,
    ordered_map,
    psi_invariance,
    schur_crosscheck,
    validate_report,
    verify_matched,
    z_point_count,
)
from ffmoments.lfam import build_family


def test_ordered_map_keeps_order():
    items = list(range(50))
    assert ordered_map(lambda x: x * x, items, threads=8) == [x * x for x in items]


def test_lfun_check_report(fam34):
    rep = lfun_check(fam34, threads=4)
    validate_report(rep)
    assert rep["size"] == rep["expected_size"] == 54
    assert rep["max_root_deviation"] < 1e-9


def test_psi_invariance():
    rep = psi_invariance(build_family(3, 3), build_family(3, 3, psi_mult=2))
    assert rep == {"same_l_polynomials": True, "same_m": True, "same_mu": True}


@pytest.mark.parametrize("fixture,r,rt", [("fam34", 1, 1), ("fam53", 1, 1), ("fam34", 2, 1)])
def test_matched_classes_partition_window(fixture, r, rt, request):
    cache = request.getfixturevalue(fixture)
    rep = verify_matched(cache, r, rt)
    validate_report(rep)
    assert rep["all_equal"]
    assert sum(rep["classes"].values()) == rep["window_size"] == len(rep["rows"])
    assert rep["matched_pairs"] > 0


def test_convention_contrast(fam34):
    out = convention_contrast(fam34, 2, 1)
    assert out["adopted"] == 0
    assert out["size_rule_rt"] > 0 and out["predicate_lower_only"] > 0


def test_fourth_moment_check_small():
    rep = fourth_moment_check(3, 4)
    validate_report(rep)
    assert rep["all_equal"] and rep["monomials"] == 70


def test_schur_crosscheck_all_weights(fam53):
    rows = schur_crosscheck(fam53, 1, 1)
    assert len(rows) == 6
    assert max(r["rel_err"] for r in rows) < 1e-8


def test_hypothesis_report(fam34):
    rep = hypothesis_report(fam34, 2, 1)
    validate_report(rep)
    assert rep["major_arc"] + rep["minor_arc"] == rep["weights_total"]
    assert rep["minor_arc"] == len(rep["rows"]) > 0
    assert all(row["schur_rel_err"] < 1e-8 for row in rep["rows"])
    assert rep["max_omega"] is not None and rep["max_omega"] < fam34.n - 1


def test_hypothesis_report_with_no_minor_arc(fam34):
    rep = hypothesis_report(fam34, 1, 1)
    validate_report(rep)
    assert rep["minor_arc"] == 0 and rep["max_omega"] is None and rep["histogram"] == {}


def test_moment_compare_reconstruction(fam34):
    rep = moment_compare(fam34, 1, 1, [0.05j, 0.4j])
    validate_report(rep)
    assert rep["method"] == "series"
    assert rep["reconstruction_err"] < 1e-8


def test_moment_compare_conjugation(fam34):
    a = moment_compare(fam34, 1, 1, [0.1 + 0.3j, -0.2 + 0.7j])
    b = moment_compare(fam34, 1, 1, [0.1 - 0.3j, -0.2 - 0.7j])
    assert a["lhs"][0] == pytest.approx(b["lhs"][0], abs=1e-10)
    assert a["lhs"][1] == pytest.approx(-b["lhs"][1], abs=1e-10)
    assert a["rhs"][1] == pytest.approx(-b["rhs"][1], abs=1e-8)


def test_moment_compare_rejects_repeated_shifts(fam34):
    with pytest.raises(ValueError):
        moment_compare(fam34, 1, 1, [0.2j, 0.2j])


@pytest.mark.parametrize("p,n,m1,m2,expected", [
    (3, 2, 0, 0, 1), (3, 2, 1, 0, 1), (3, 2, 1, 1, 3), (3, 2, 2, 2, 15), (3, 3, 2, 2, 15),
])
def test_z_point_count(p, n, m1, m2, expected):
    rep = z_point_count(p, n, m1, m2)
    validate_report(rep)
    assert rep["brute_force"] == rep["character_sum"] == expected


def test_kloosterman_routes_agree():
    brute = kloosterman_brute(3, 3, 3)
    assert brute == kloosterman_convolution(3, 3, 3)
    from ffmoments.harness import _psi_counts_to_cyclo

    assert kloosterman_fourier(3, 3, 3) == _psi_counts_to_cyclo(3, 2, brute)


def test_kloosterman_check_at_monodromy_order(fam33):
    rep = kloosterman_check(fam33)
    validate_report(rep)
    assert rep["m"] == 9
    assert rep["modulus_identity"] and rep["equals_q_power_mu"]
    assert rep["family_identity"] and rep["fourier_equal"]
    assert rep["brute_force_equal"] is None and rep["notes"]


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_kloosterman_family_identity(fam53, m):
    rep = kloosterman_check(fam53, m)
    assert rep["family_identity"] and rep["fourier_equal"]
    if m * 3 <= 9:
        assert rep["brute_force_equal"]


def test_kloosterman_vanishes_below_monodromy_order(fam33):
    rep = kloosterman_check(fam33, 3)
    assert rep["K"] == [0.0, 0.0] and not rep["modulus_identity"]
    assert rep["brute_force_equal"] and rep["family_identity"]


def test_trivial_psi_breaks_identity(fam53):
    rep = kloosterman_check(fam53, trivial=True)
    # with psi trivial the sum just counts tuples with product 1
    assert rep["K"] == [float(5 ** (3 * 4)), 0.0]
    assert rep["equals_q_power_mu"] is False and rep["modulus_identity"] is False


def test_validate_report_rejects_unknown():
    import jsonschema

    with pytest.raises(jsonschema.ValidationError):
        validate_report({"schema": "nope"})
    with pytest.raises(jsonschema.ValidationError):
        validate_report({"schema": "ffmoments-lfun-v1"})
