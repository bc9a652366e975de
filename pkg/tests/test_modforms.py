"""Level conditions, cusp orders, Legendre symbol, and Hecke checks."""

from fractions import Fraction

import pytest

from helpers import euler_power
from overcolor.arith import legendre
from overcolor.modforms import (
    EtaQuotient,
    all_cusp_orders_nonnegative,
    check_level_conditions,
    cusp_orders,
    eigenform_check,
    eta6_weight3_level16,
    eta_quotient_expansion,
    hecke_tp,
)
from overcolor.series import EXACT, Series


def test_legendre_basics():
    assert legendre(4, 5) == 1
    assert legendre(6, 3) == 0
    assert legendre(2, 3) == -1
    assert legendre(-1, 5) == 1
    assert legendre(-1, 7) == -1


def test_legendre_rejects_bad_prime():
    with pytest.raises(ValueError):
        legendre(3, 2)
    with pytest.raises(ValueError):
        legendre(3, 9)


def test_legendre_multiplicative():
    for p in (3, 5, 7, 11, 13):
        for a in range(1, 51):
            for b in range(1, 51):
                assert legendre(a * b, p) == legendre(a, p) * legendre(b, p)


def test_level_conditions_weight3_quotient():
    eq = eta6_weight3_level16()
    conds = check_level_conditions(eq)
    assert eq.weight == 3
    assert conds.weight_integral
    assert conds.scaled_sum_ok  # sum d*r = 24
    assert conds.dual_sum_ok  # sum (N/d)*r = 24
    assert conds.character_discriminant == -(4**6)
    assert eq.q_offset == 1


def test_level_conditions_discriminant_form():
    eq = EtaQuotient(1, {1: 24})
    conds = check_level_conditions(eq)
    assert eq.weight == 12
    assert conds.scaled_sum_ok and conds.dual_sum_ok
    assert conds.character_discriminant == 1


def test_level_conditions_single_eta():
    eq = EtaQuotient(1, {1: 1})
    conds = check_level_conditions(eq)
    assert not conds.scaled_sum_ok
    assert not conds.weight_integral
    assert conds.character_discriminant is None


def test_level_validation():
    with pytest.raises(ValueError):
        EtaQuotient(16, {3: 1})
    with pytest.raises(ValueError):
        EtaQuotient(0, {1: 1})


def test_cusp_orders_weight3_quotient():
    eq = eta6_weight3_level16()
    orders = cusp_orders(eq)
    assert set(orders) == {1, 2, 4, 8, 16}
    assert all(v == 1 for v in orders.values())
    assert all_cusp_orders_nonnegative(eq)


def test_cusp_orders_single_eta():
    orders = cusp_orders(EtaQuotient(1, {1: 1}))
    assert orders == {1: Fraction(1, 24)}


def test_cusp_orders_negative_case():
    # 1/eta has negative order everywhere
    assert not all_cusp_orders_nonnegative(EtaQuotient(1, {1: -1}))


def test_expansion_applies_offset():
    series = eta_quotient_expansion(eta6_weight3_level16(), 9)
    assert series.to_list() == [0, 1, 0, 0, 0, -6, 0, 0, 0, 9]
    with pytest.raises(ValueError, match="offset"):
        eta_quotient_expansion(EtaQuotient(1, {1: 1}), 9)


def test_hecke_zero_series():
    zero = Series.zero(EXACT, 30)
    assert hecke_tp(zero, 3, 3, -1) == Series.zero(EXACT, 10)


def test_hecke_truncation_guard():
    with pytest.raises(ValueError):
        hecke_tp(Series.one(EXACT, 2), 5, 3, 1)


def _b_series(n):
    return eta_quotient_expansion(eta6_weight3_level16(), n)


def test_hecke_annihilates_at_three():
    b = _b_series(300)
    out = hecke_tp(b, 3, 3, legendre(-(4**6) % 3, 3))
    assert out == Series.zero(EXACT, 100)


def test_hecke_scales_at_five():
    b = _b_series(300)
    out = hecke_tp(b, 5, 3, legendre(-(4**6) % 5, 5))
    assert out == b.truncated(60).scalar_mul(-6)


@pytest.mark.parametrize("p,lam", [(3, 0), (5, -6), (7, 0), (11, 0), (13, 10)])
def test_eigenform_check(p, lam):
    result = eigenform_check(eta6_weight3_level16(), p, 500)
    assert result.residual is None
    assert result.eigenvalue == lam
    assert (result.eigenvalue == 0) == (p % 4 == 3)
    assert result.note == "finite verification, not proof"


def test_eigenvalues_match_coefficients():
    # lambda(p) equals the p-th coefficient, since the series starts at q^1
    b = _b_series(1000)
    assert b.coeff(13) == 10
    assert b.coeff(5) == -6
    assert b.coeff(13) == eigenform_check(eta6_weight3_level16(), 13, 1000).eigenvalue


def test_character_collapses_to_minus_one():
    # (-4^6/p) = (-1/p) for odd p, since 4^6 is a square
    for p in (3, 5, 7, 11, 13, 17):
        assert legendre(-(4**6) % p, p) == legendre(-1, p)


def test_scaled_transfer_for_inert_primes():
    # b(p*n) = p^2 b(n/p) for p = 3 (mod 4), swept across the truncation
    b = _b_series(600)
    for p in (3, 7, 11):
        for m in range(0, 600 // p + 1):
            rhs = p * p * (b.coeff(m // p) if m % p == 0 else 0)
            assert b.coeff(p * m) == rhs, (p, m)


def test_eigenform_check_rejects_bad_quotient():
    with pytest.raises(ValueError):
        eigenform_check(EtaQuotient(1, {1: 1}), 5, 50)


def test_b_series_matches_oracle():
    b = _b_series(120)
    expected = [0] + euler_power(6, 119, scale=4)
    assert b.to_list() == expected
