from __future__ import annotations

import numpy as np
import pytest

from ffmoments.cyclo import HalfPowerScalar
from ffmoments.lfam import moment_tensor
from ffmoments.schur import (
    BettiBudget,
    F_of_irreducible,
    HighestWeight,
    all_weights,
    betti_bound,
    elementary_from_roots,
    is_major_arc,
    jacobi_trudi_terms,
    multiplicity,
    power_savings_w,
    schur_at_zeros,
    weyl_dimension,
)


def test_weight_validation():
    with pytest.raises(ValueError):
        HighestWeight((2, 1), 1, 1, 4)
    with pytest.raises(ValueError):
        HighestWeight((0, 4), 1, 1, 4)
    with pytest.raises(ValueError):
        HighestWeight((0,), 1, 1, 4)


def test_jacobi_trudi_terms_rank_two():
    assert sorted(jacobi_trudi_terms(HighestWeight((1, 1), 1, 1, 4))) == [(-1, (0, 2)), (1, (1, 1))]
    assert jacobi_trudi_terms(HighestWeight((0, 0), 1, 1, 4)) == [(1, (0, 0))]
    # (3, 3) drops the term with wedge degree 4
    assert jacobi_trudi_terms(HighestWeight((3, 3), 1, 1, 4)) == [(1, (3, 3))]


def test_multiplicity_and_dimension():
    assert multiplicity(HighestWeight((0, 2), 1, 1, 4)) == 3
    assert multiplicity(HighestWeight((0, 0, 0), 2, 1, 4)) == 1
    assert multiplicity(HighestWeight((0, 1, 2), 2, 1, 4)) == 8
    assert weyl_dimension([1, 0, 0]) == 3
    assert weyl_dimension([2, 1, 0]) == 8


def test_betti_budget():
    b = BettiBudget(4, 1, 1)
    assert betti_bound(b, (0, 0)) == 324
    assert b.C == 9
    assert BettiBudget(4, 2, 2).C == 64
    with pytest.raises(ValueError):
        betti_bound(b, (0, 4))


def test_power_savings_reference():
    assert power_savings_w(4, 3, 1) == pytest.approx(4 + 1 - 4 / 3)


def test_major_arc():
    assert is_major_arc(HighestWeight((0, 3), 1, 1, 4), 18)
    scan = [w.d for w in all_weights(4, 2, 1) if not is_major_arc(w, 18)]
    assert scan and all(sum(d) > 0 for d in scan)
    with pytest.raises(ValueError):
        is_major_arc(HighestWeight((0, 0), 1, 1, 4), 0)


@pytest.mark.parametrize("r,rt", [(1, 1), (2, 1)])
def test_schur_identity_over_family(fam34, r, rt):
    T = moment_tensor(fam34, r, rt)
    elem = [elementary_from_roots(rec) for rec in fam34.records]
    for w in all_weights(4, r, rt):
        exact = F_of_irreducible(T, w).to_complex()
        numeric = sum(schur_at_zeros(rec, w, e) for rec, e in zip(fam34.records, elem))
        assert abs(exact - numeric) <= 1e-7 * max(1.0, abs(exact))


def test_elementary_constant_term(fam53):
    for rec in fam53.records[:10]:
        e = elementary_from_roots(rec)
        assert e[0] == pytest.approx(1.0)
        assert abs(abs(e[-1]) - 1) < 1e-9


def test_trivial_weight_counts_family(fam34):
    T = moment_tensor(fam34, 1, 1)
    val = F_of_irreducible(T, HighestWeight((0, 3), 1, 1, 4))
    assert val.to_complex() == pytest.approx(54)
    assert np.isclose(schur_at_zeros(fam34.records[0], HighestWeight((0, 3), 1, 1, 4)), 1)
    assert isinstance(val, HalfPowerScalar)
