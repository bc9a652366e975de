"""Euler-product powers and eta quotients against direct-product oracles."""

import threading

import pytest

from helpers import conv, euler_power, euler_product, overpartition_counts, two_color_partition_counts
from overcolor.eta import SeriesCache, apply_euler_factor, eta_power, eta_quotient, verify_binomial_reduction
from overcolor.series import EXACT, Series, mod_int, mod_pow2


def test_single_product_matches_direct_expansion():
    assert eta_power(1, 1, 12).to_list() == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]
    assert eta_power(1, 1, 60).to_list() == euler_product(60)
    assert eta_power(3, 1, 40).to_list() == euler_product(40, scale=3)


def test_zero_power_is_one():
    assert eta_power(1, 0, 9) == Series.one(EXACT, 9)


def test_negative_square_is_two_color_count():
    got = eta_power(1, -2, 4).to_list()
    assert got == [1, 2, 5, 10, 20]
    assert got == two_color_partition_counts(4)
    # cross-check: square of the partition-count series
    p = eta_power(1, -1, 4)
    assert p.mul(p).to_list() == got


@pytest.mark.parametrize("scale,m", [(1, 3), (2, 2), (3, -2), (5, 4)])
def test_inverse_pairs_multiply_to_one(scale, m):
    n = 120
    a = eta_power(scale, m, n)
    b = eta_power(scale, -m, n)
    assert a.mul(b) == Series.one(EXACT, n)


def test_support_on_scale_multiples():
    for scale in (2, 3, 4):
        series = eta_power(scale, 5, 90)
        for i, v in enumerate(series.to_list()):
            if i % scale:
                assert v == 0


def test_exponent_additivity():
    n = 80
    lhs = eta_power(1, 3, n).mul(eta_power(1, 4, n))
    assert lhs == eta_power(1, 7, n)
    lhs = eta_power(1, -2, n).mul(eta_power(1, 5, n))
    assert lhs == eta_power(1, 3, n)


@pytest.mark.parametrize("ring", [EXACT, mod_pow2(8), mod_pow2(64), mod_int(125)])
def test_sparse_path_equals_dense_pow(ring):
    n = 500
    base = eta_power(2, 1, n, ring)
    assert eta_power(2, 6, n, ring) == base.pow(6)
    assert eta_power(2, -3, n, ring) == base.pow(-3)


def test_quotient_overpartition_series():
    got = eta_quotient({1: -2, 2: 1}, 12)
    assert got.to_list() == overpartition_counts(12)


def test_quotient_empty_is_one():
    assert eta_quotient({}, 5) == Series.one(EXACT, 5)
    assert eta_quotient({1: 0, 2: 0}, 5) == Series.one(EXACT, 5)


def test_quotient_matches_independent_convolution():
    # expand both factors independently, then convolve
    n = 3
    expected = conv(euler_power(4, n), euler_power(4, n, scale=2), n)
    assert expected == [1, -4, -2, 24]
    assert eta_quotient({1: 4, 2: 4}, n).to_list() == expected
    n = 30
    expected = conv(euler_power(3, n), euler_power(-5, n, scale=2), n)
    assert eta_quotient({1: 3, 2: -5}, n).to_list() == expected


def test_quotient_scales_need_not_divide_a_level():
    got = eta_quotient({1: 2, 16: -1, 3: 1}, 40)
    expected = conv(
        conv(euler_power(2, 40), euler_power(-1, 40, scale=16), 40),
        euler_power(1, 40, scale=3),
        40,
    )
    assert got.to_list() == expected


def test_quotient_invalid_scale():
    with pytest.raises(ValueError):
        eta_quotient({0: 2}, 10)


@pytest.mark.parametrize(
    "p,k,m",
    [(2, 1, 1), (2, 3, 1), (3, 1, 2), (2, 2, 1), (3, 2, 1)],
)
def test_binomial_reduction_holds(p, k, m):
    report = verify_binomial_reduction(p, k, m, 200)
    assert report.ok
    assert report.checked == 201


def test_binomial_reduction_catches_wrong_modulus():
    # f_1^2 == f_2 holds mod 2 but not mod 4: the checker must notice.
    from overcolor.series import eq_mod

    lhs = eta_power(1, 2, 50)
    rhs = eta_power(2, 1, 50)
    assert eq_mod(lhs, rhs, 2).equal
    assert not eq_mod(lhs, rhs, 4).equal


def test_cache_truncation_reuse():
    cache = SeriesCache(max_entries=32)
    deep = eta_power(1, 5, 300, EXACT, cache)
    shallow = eta_power(1, 5, 120, EXACT, cache)
    assert shallow.to_list() == deep.to_list()[:121]
    # ladder reuse: higher power extends the cached rung
    higher = eta_power(1, 7, 120, EXACT, cache)
    assert higher.to_list() == euler_power(7, 120)


def test_cache_thread_safety_smoke():
    cache = SeriesCache(max_entries=64)
    errors = []

    def work(seed):
        try:
            for m in (1, -2, 3, seed % 5 + 1):
                series = eta_power(1, m, 150, EXACT, cache)
                assert series.to_list() == euler_power(m, 150)
        except Exception as exc:  # pragma: no cover - only on failure
            errors.append(exc)

    threads = [threading.Thread(target=work, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors


def test_apply_euler_factor_matches_conv():
    n = 64
    start = Series(EXACT, euler_power(2, n))
    stepped = apply_euler_factor(start, 3, -2)
    expected = conv(euler_power(2, n), euler_power(-2, n, scale=3), n)
    assert stepped.to_list() == expected
