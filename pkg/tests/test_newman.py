"""Coefficient recurrences: parameter validation, spot identities, sweeps."""

from fractions import Fraction

import pytest

from helpers import eta_vector_series, euler_power
from overcolor.newman import (
    fit_alpha_and_verify_newman_62,
    verify_newman_53,
    verify_newman_55,
    verify_newman_59,
)


# -- prime-shift recurrence for pure powers ---------------------------------

def test_53_spot_values_r18_p5():
    # delta = 18*4/24 = 3; at n=0 the subtracted term vanishes by convention
    c = euler_power(18, 60)
    delta = 3
    assert c[0 * 5 + delta] == c[delta] * c[0]
    # at n=1 the subtracted term vanishes since (1-3)/5 is not an integer
    assert c[1 * 5 + delta] == c[delta] * c[1]


@pytest.mark.parametrize("p", [5, 13])
def test_53_full_sweep_r18(p):
    report = verify_newman_53(18, p, 500)
    assert report.ok
    assert report.checked > 0
    assert report.grid["delta"] == 18 * (p - 1) // 24


def test_53_parameter_validation():
    with pytest.raises(ValueError):
        verify_newman_53(17, 5, 50)  # odd r
    with pytest.raises(ValueError):
        verify_newman_53(26, 5, 50)  # r > 24
    with pytest.raises(ValueError):
        verify_newman_53(18, 7, 50)  # 24 does not divide 18*6
    with pytest.raises(ValueError):
        verify_newman_53(18, 4, 50)  # not prime


# -- prime-square recurrence for pure powers --------------------------------

def test_55_spot_values_r6_p7():
    c = euler_power(6, 80)
    big_delta = 6 * 48 // 24  # 12
    assert big_delta == 12
    # n=1: coefficient at q^19 must vanish
    assert c[1 * 7 + big_delta] == 0
    # n=7: c(61) = 49 * c(1)
    assert c[7 * 7 + big_delta] == 49 * c[1]


@pytest.mark.parametrize("p", [7, 11])
def test_55_full_sweep_r6(p):
    report = verify_newman_55(6, p, 400)
    assert report.ok
    assert report.checked > 0


def test_55_parameter_validation():
    with pytest.raises(ValueError):
        verify_newman_55(12, 7, 50)  # r not in the admissible list
    with pytest.raises(ValueError):
        verify_newman_55(6, 5, 50)  # 24 does not divide 6*6
    with pytest.raises(ValueError):
        verify_newman_55(6, 3, 50)  # p < 5


# -- two-scale prime shift ---------------------------------------------------

def test_59_spot_values_c1_p3():
    c = eta_vector_series({1: 4, 2: 4}, 40)
    # delta = (4+8)(3-1)/24 = 1; gamma = 1; n=0 instance: c(1) = c(1)*c(0)
    assert c[1] == c[1] * c[0]
    # n=1, p=3: c(4) = c(1)*c(1) - 27*c(0)
    assert c[4] == c[1] * c[1] - 27 * c[0]


@pytest.mark.parametrize("p", [3, 5, 7])
def test_59_full_sweep_c1(p):
    report = verify_newman_59(4, 4, 2, p, 500)
    assert report.ok
    # the built-in pack carries no table warning
    assert not [w for w in report.witnesses if w.hypothesis == "table_membership"]
    beta = [w for w in report.witnesses if w.hypothesis == "beta"]
    assert beta and beta[0].value == eta_vector_series({1: 4, 2: 4}, p)[(p - 1) // 2]


def test_59_generic_pair_gets_warning():
    # (1,1,23) has integral t = 1; it runs, flagged as outside the built-ins
    report = verify_newman_59(1, 1, 23, 5, 150)
    warnings = [w for w in report.witnesses if w.hypothesis == "table_membership"]
    assert warnings and warnings[0].value == "unchecked"


def test_59_parameter_validation():
    with pytest.raises(ValueError):
        verify_newman_59(4, 4, 2, 2, 50)  # p equals the q scale
    with pytest.raises(ValueError):
        verify_newman_59(3, 4, 2, 5, 50)  # r+s odd
    with pytest.raises(ValueError):
        verify_newman_59(4, 4, 4, 5, 50)  # q not prime
    with pytest.raises(ValueError):
        verify_newman_59(2, 2, 2, 7, 50)  # delta not integral


# -- two-scale prime square with fitted constant -----------------------------

@pytest.mark.parametrize(
    "r,s,p,alpha_scaled",
    [
        (1, 10, 3, -60),
        (1, 10, 5, -2074),
        (3, 6, 3, -84),
        (3, 6, 5, -82),
    ],
)
def test_62_fit_and_sweep(r, s, p, alpha_scaled):
    fit, report = fit_alpha_and_verify_newman_62(r, s, 2, p, 300)
    assert report.ok
    assert fit.alpha_scaled == alpha_scaled
    assert fit.sign_convention == "literal"
    assert fit.alpha == Fraction(alpha_scaled, p ** (r + s - 2))
    # parity of the fitted constant always matches the closed form
    assert fit.kappa_parity_matches


def test_62_closed_form_match():
    # exact agreement with the closed form except the known sign-sensitive
    # point (r,s)=(1,10) at p=3, where only the parity is shared
    fit, _ = fit_alpha_and_verify_newman_62(1, 10, 2, 5, 300)
    assert fit.kappa_matches
    fit, _ = fit_alpha_and_verify_newman_62(3, 6, 2, 3, 300)
    assert fit.kappa_matches
    fit, _ = fit_alpha_and_verify_newman_62(1, 10, 2, 3, 300)
    assert not fit.kappa_matches
    assert fit.kappa_parity_matches
    # the divergence is exactly a flipped Legendre contribution
    c_delta = eta_vector_series({1: 1, 2: 10}, 7)[7]
    assert abs(fit.alpha_scaled - c_delta) == 3**4
    assert abs(fit.kappa_printed - c_delta) == 3**4


def test_62_parameter_validation():
    with pytest.raises(ValueError):
        fit_alpha_and_verify_newman_62(4, 4, 2, 5, 100)  # r+s even
    with pytest.raises(ValueError):
        fit_alpha_and_verify_newman_62(1, 10, 2, 2, 100)  # p equals q
    with pytest.raises(ValueError):
        fit_alpha_and_verify_newman_62(1, 2, 5, 3, 100)  # Delta not integral


def test_62_reports_witnesses():
    _, report = fit_alpha_and_verify_newman_62(3, 6, 2, 5, 200)
    names = {w.hypothesis for w in report.witnesses}
    assert {"alpha_scaled", "alpha", "sign_convention", "kappa_closed_form"} <= names
