import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import exact_rvs
from lattice_edgeworth._cyclotomic import cyclotomic_poly, root_sum_vanishes
from lattice_edgeworth.exceptions import OrderExceededError, ValidationError
from lattice_edgeworth.lattice_rv import (
    IntegerRV,
    bernoulli,
    central_moment,
    char_fn,
    char_fn_deriv,
    char_fn_deriv_at,
    rademacher,
    residue_profile,
    root_of_unity,
    second_mass,
    uniform_on,
)


def test_construction_sorts_and_converts():
    rv = IntegerRV([3, -1], ["1/4", Fraction(3, 4)])
    assert rv.support == (-1, 3)
    assert rv.probs == (Fraction(3, 4), Fraction(1, 4))
    assert rv.bound == 3


@pytest.mark.parametrize(
    "support, probs, exact",
    [
        ([0, 1], [Fraction(1, 2), Fraction(1, 3)], True),
        ([0, 0], [Fraction(1, 2), Fraction(1, 2)], True),
        ([], [], True),
        ([0, 1], [0.5, 0.5], True),
        ([0, 1], [1.5, -0.5], False),
        ([0, 1], [0.5], False),
        ([0], [float("nan")], False),
    ],
)
def test_invalid_variables_rejected(support, probs, exact):
    with pytest.raises(ValidationError):
        IntegerRV(support, probs, exact=exact)


def test_moments_of_bernoulli():
    rv = bernoulli(Fraction(1, 3))
    assert rv.mean == Fraction(1, 3)
    assert rv.variance == Fraction(2, 9)
    assert central_moment(rv, 3) == Fraction(2, 9) * Fraction(1, 3)


@pytest.mark.parametrize("a, d, expected", [(0, 5, 1), (1, 2, -1), (1, 4, 1j), (3, 4, -1j), (7, 4, -1j)])
def test_root_of_unity_exact_quarter_turns(a, d, expected):
    assert root_of_unity(a, d) == expected


def test_char_fn_matches_direct_sum():
    rv = IntegerRV([-2, 0, 5], [Fraction(1, 5), Fraction(1, 2), Fraction(3, 10)])
    for t in np.linspace(-3, 3, 13):
        direct = 0.2 * cmath.exp(-2j * t) + 0.5 + 0.3 * cmath.exp(5j * t)
        assert abs(char_fn(rv, t) - direct) < 1e-15


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_char_fn_deriv_matches_finite_differences(ell):
    rv = IntegerRV([-1, 0, 2], [Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)])
    t, h = 0.7, 1e-3

    def f(s):
        return char_fn_deriv(rv, s, ell - 1)

    numeric = (f(t + h) - f(t - h)) / (2 * h)
    assert abs(char_fn_deriv(rv, t, ell) - numeric) < 1e-5


def test_order_cap():
    with pytest.raises(OrderExceededError):
        char_fn_deriv(rademacher(), 0.0, 17)
    with pytest.raises(OrderExceededError):
        char_fn_deriv_at(rademacher(), 1, 2, 5, max_order=4)


def test_uniform_residues_give_exact_zero():
    rv = uniform_on([6, 1, 2])
    for a in (1, 2):
        assert char_fn_deriv_at(rv, a, 3) == 0
        assert char_fn_deriv_at(rv, a, 3, 1) != 0


def test_bernoulli_vanishes_at_pi():
    assert char_fn_deriv_at(bernoulli(), 1, 2) == 0
    assert char_fn_deriv_at(rademacher(), 1, 2) == -1


@given(exact_rvs(), st.integers(1, 11), st.integers(2, 12), st.integers(0, 3), st.booleans())
def test_deriv_at_agrees_with_float_path(rv, l, m, ell, centered):
    t = 2 * math.pi * l / m
    a = char_fn_deriv_at(rv, l, m, ell, centered)
    b = char_fn_deriv(rv, t, ell, centered)
    assert abs(a - b) < 1e-9 * (1 + rv.bound) ** ell


@given(exact_rvs(), st.floats(-10, 10))
def test_char_fn_bounded_and_hermitian(rv, t):
    assert abs(char_fn(rv, t)) <= 1 + 1e-12
    assert abs(char_fn(rv, -t) - char_fn(rv, t).conjugate()) < 1e-12


def test_residue_profile_ties_and_second_mass():
    prof = residue_profile(uniform_on([0, 1, 2, 3]), 4)
    assert prof.most_likely == 0
    assert prof.second_mass == Fraction(1, 4)
    assert second_mass(rademacher(), 2) == 0
    assert second_mass(bernoulli(Fraction(1, 5)), 2) == Fraction(1, 5)


@given(exact_rvs(), st.integers(2, 8))
def test_residue_masses_sum_to_one(rv, h):
    prof = residue_profile(rv, h)
    assert sum(prof.masses) == 1
    assert prof.masses[prof.most_likely] >= prof.second_mass


@pytest.mark.parametrize("d", range(1, 25))
def test_cyclotomic_matches_sympy(d):
    sympy = pytest.importorskip("sympy")
    x = sympy.Symbol("x")
    ref = sympy.Poly(sympy.cyclotomic_poly(d, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_poly(d)) == [int(c) for c in ref]


@given(
    st.dictionaries(st.integers(0, 11), st.fractions(min_value=-2, max_value=2, max_denominator=7), max_size=6),
    st.integers(1, 11),
    st.integers(2, 12),
)
def test_root_sum_vanishes_agrees_with_numeric(weights, freq, modulus):
    weights = {a % modulus: w for a, w in weights.items()}
    numeric = sum(float(w) * cmath.exp(2j * math.pi * freq * a / modulus) for a, w in weights.items())
    if root_sum_vanishes(weights, freq, modulus):
        assert abs(numeric) < 1e-12
    else:
        assert abs(numeric) > 1e-12


def test_to_float_round_trip():
    rv = IntegerRV([0, 3], [Fraction(1, 3), Fraction(2, 3)])
    f = rv.to_float()
    assert not f.exact
    assert f.probs == pytest.approx((1 / 3, 2 / 3))
    assert abs(float(f.mean) - 2.0) < 1e-15
