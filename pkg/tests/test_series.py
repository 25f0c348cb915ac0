import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import exact_rvs, nondegenerate_rvs
from lattice_edgeworth.exceptions import SeriesDomainError, ValidationError
from lattice_edgeworth.lattice_rv import bernoulli, char_fn_deriv
from lattice_edgeworth.series import (
    TruncatedSeries,
    char_taylor,
    char_taylor_at,
    cumulant_series,
    cumulants_from_series,
    default_order,
    moment_series,
    series_exp,
    series_log,
    series_mul,
    series_pow,
    series_product,
)

complex_coeffs = st.lists(
    st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=1, max_size=8
)


def test_default_order():
    assert default_order(1) == 8
    assert default_order(3) == 12


def test_padding_and_truncation():
    s = TruncatedSeries([1, 2], order=4)
    assert s.coeffs == (1, 2, 0, 0, 0)
    assert s.exact
    assert s.truncate(1).coeffs == (1, 2)
    with pytest.raises(ValidationError):
        s.truncate(5)


def test_order_mismatch_rejected():
    with pytest.raises(ValidationError):
        TruncatedSeries([1, 2]) + TruncatedSeries([1, 2, 3])


@given(complex_coeffs, complex_coeffs)
def test_mul_matches_convolution(a, b):
    n = min(len(a), len(b)) - 1
    sa, sb = TruncatedSeries(a[: n + 1]), TruncatedSeries(b[: n + 1])
    ref = np.convolve(a[: n + 1], b[: n + 1])[: n + 1]
    assert np.allclose((sa * sb).to_array(), ref, atol=1e-12)


@given(complex_coeffs, st.integers(0, 5))
def test_pow_matches_repeated_product(a, n):
    s = TruncatedSeries(a)
    ref = series_product([s] * n, s.order)
    assert np.allclose(series_pow(s, n).to_array(), ref.to_array(), atol=1e-9)


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=9), min_size=2, max_size=7))
def test_exact_exp_log_round_trip(tail):
    s = TruncatedSeries([Fraction(0)] + tail[1:])
    assert series_log(series_exp(s)) == s
    one = TruncatedSeries([Fraction(1)] + tail[1:])
    assert series_exp(series_log(one)) == one


@given(complex_coeffs)
def test_complex_log_inverts_exp(a):
    s = TruncatedSeries(a)
    back = series_log(series_exp(s))
    # constant term is only determined modulo 2 pi i
    diff = back.to_array() - s.to_array()
    assert np.allclose(diff[1:], 0, atol=1e-8)
    assert abs(np.exp(diff[0]) - 1) < 1e-8


def test_log_domain_errors():
    with pytest.raises(SeriesDomainError):
        series_log(TruncatedSeries([0, 1]))
    with pytest.raises(SeriesDomainError):
        series_log(TruncatedSeries([Fraction(2), Fraction(1)]))
    with pytest.raises(SeriesDomainError):
        series_exp(TruncatedSeries([Fraction(1), Fraction(1)]))


def test_exp_of_linear_is_exponential_series():
    s = series_exp(TruncatedSeries([Fraction(0), Fraction(1)], order=6))
    assert s.coeffs == tuple(Fraction(1, math.factorial(q)) for q in range(7))


def test_empty_product_is_one():
    assert series_product([], 3).coeffs == (1, 0, 0, 0)


@pytest.mark.parametrize("p", [Fraction(1, 2), Fraction(1, 3), Fraction(1, 10)])
def test_bernoulli_cumulants(p):
    q = 1 - p
    expected = [0, 0, p * q, p * q * (1 - 2 * p), p * q * (1 - 6 * p * q)]
    k = cumulants_from_series(cumulant_series([bernoulli(p)], 4, exact=True), exact=True)
    assert k == expected
    kf = cumulants_from_series(cumulant_series([bernoulli(p)], 4))
    assert np.allclose(np.real(kf), [float(v) for v in expected], atol=1e-14)
    assert np.allclose(np.imag(kf), 0, atol=1e-14)


@given(st.lists(nondegenerate_rvs(), min_size=1, max_size=4))
def test_cumulants_are_additive_and_exact_matches_float(terms):
    exact = cumulants_from_series(cumulant_series(terms, 5, exact=True), exact=True)
    assert exact[2] == sum(rv.variance for rv in terms)
    fl = cumulants_from_series(cumulant_series(terms, 5))
    assert np.allclose(np.real(fl), [float(v) for v in exact], atol=1e-10)


@given(exact_rvs())
def test_moment_series_is_char_taylor_in_ih(rv):
    m = moment_series(rv, 5)
    c = char_taylor(rv, 0.0, 5, centered=True)
    for q in range(6):
        assert abs(complex(float(m[q])) * 1j ** q - c[q]) < 1e-12


def test_char_taylor_coefficients():
    rv = bernoulli(Fraction(1, 4))
    s = char_taylor(rv, 1.3, 4)
    for q in range(5):
        assert abs(s[q] - char_fn_deriv(rv, 1.3, q) / math.factorial(q)) < 1e-15
    at = char_taylor_at(rv, 1, 2, 4)
    ref = char_taylor(rv, math.pi, 4)
    assert np.allclose(at.to_array(), ref.to_array(), atol=1e-14)
