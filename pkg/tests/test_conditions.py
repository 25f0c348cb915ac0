import io
import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import exact_rvs
from lattice_edgeworth.conditions import (
    fourier_mod_h,
    llt_diagnostic,
    not_most_likely_mass,
    order_r_diagnostic,
    prokhorov_diagnostic,
    quantitative_prokhorov,
    quantitative_prokhorov_report,
    roz0_bound,
    superstable_diagnostic,
    uniformity_diagnostic,
)
from lattice_edgeworth.exact_dist import iid_model, mod_marginal, sequence_model, sum_pmf, uniform_distance
from lattice_edgeworth.exceptions import ValidationError
from lattice_edgeworth.lattice_rv import bernoulli, rademacher
from lattice_edgeworth.models import ModelConfig, build_model
from lattice_edgeworth.resonance import resonant_set, threshold_R
from lattice_edgeworth.trig_expansion import phi_product_at

NS = [10, 20, 40]


def model(family, mode="double", **params):
    return build_model(ModelConfig(family, params, mode))


@pytest.fixture
def rad():
    return iid_model(rademacher())


@pytest.fixture
def bern():
    return iid_model(bernoulli(Fraction(1, 2)))


def test_llt_rademacher_stays_at_one(rad):
    assert all(v == pytest.approx(1.0) for _, v in llt_diagnostic(rad, NS).values)


def test_llt_fair_bernoulli_vanishes(bern):
    assert all(v == 0 for _, v in llt_diagnostic(bern, NS).values)


def test_llt_report_keeps_per_point_details(rad):
    rep = llt_diagnostic(rad, NS)
    assert set(rep.details[10]) == set(resonant_set(1))


def test_prokhorov_bernoulli_is_half_n(bern):
    rep = prokhorov_diagnostic(bern, NS, 2)
    assert rep.as_dict() == {N: pytest.approx(N / 2) for N in NS}


def test_prokhorov_rademacher_is_zero(rad):
    assert all(v == 0 for _, v in prokhorov_diagnostic(rad, NS, 2).values)


def test_prokhorov_square_family_stays_bounded():
    m = model("eg1_theta_over_n2", theta=0.3)
    rep = prokhorov_diagnostic(m, [100, 400, 1600], 2)
    bound = 0.3 * math.pi ** 2 / 6
    vals = [v for _, v in rep.values]
    assert all(v <= bound for v in vals)
    assert vals[-1] - vals[0] < 0.3 / 100


@pytest.mark.parametrize("h", [1, 3])
def test_prokhorov_rejects_moduli_out_of_range(rad, h):
    with pytest.raises(ValidationError):
        prokhorov_diagnostic(rad, NS, h)


def test_quantitative_prokhorov_bernoulli_holds(bern):
    q = quantitative_prokhorov(bern, 100, 1)
    assert q.M_N == 50
    assert q.minimizing_h == 2
    assert q.threshold == pytest.approx(threshold_R(1, 1) * math.log(25))
    assert q.holds


def test_quantitative_prokhorov_rademacher_fails(rad):
    assert not quantitative_prokhorov(rad, 100, 1).holds


def test_quantitative_prokhorov_logarithmic_family_fails():
    assert not quantitative_prokhorov(model("eg1_theta_over_n", theta=0.3), 500, 2).holds


def test_quantitative_prokhorov_report_tracks_crossings():
    # M_N = 1/2 from a single Bernoulli; R ln V_N overtakes it once V_N > e^(1/4)
    half = bernoulli(Fraction(1, 2))
    m = sequence_model(lambda n: half if n == 1 else rademacher(), 1)
    rep = quantitative_prokhorov_report(m, [2, 4, 8], 1)
    assert [v >= 0 for _, v in rep.values] == [True, False, False]
    assert rep.crossings == [4]


@pytest.mark.parametrize("name", ["rad", "bern"])
def test_order_one_matches_llt(name, request):
    m = request.getfixturevalue(name)
    assert order_r_diagnostic(m, NS, 1).values == pytest.approx(llt_diagnostic(m, NS).values)


def test_order_two_rademacher_grows_like_sigma(rad):
    rep = order_r_diagnostic(rad, NS, 2)
    assert rep.as_dict() == {N: pytest.approx(math.sqrt(N)) for N in NS}


def test_order_r_rejects_nonpositive_order(rad):
    with pytest.raises(ValidationError):
        order_r_diagnostic(rad, NS, 0)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_superstable_without_removal_is_scaled_llt(r):
    m = model("nonsym", gamma=1)
    sup = superstable_diagnostic(m, NS, r, 0).values
    llt = llt_diagnostic(m, NS).values
    for (N, s), (_, v) in zip(sup, llt):
        sigma = math.sqrt(sum(rv.variance for rv in m.terms(N)))
        assert s == pytest.approx(sigma ** (r - 1) * v)


def test_superstable_bernoulli_single_removal_still_zero(bern):
    assert all(v == 0 for _, v in superstable_diagnostic(bern, NS, 2, 1).values)


def test_superstable_rademacher_is_sigma_power(rad):
    rep = superstable_diagnostic(rad, NS, 3, 2)
    assert rep.as_dict() == {N: pytest.approx(N) for N in NS}


def test_superstable_removal_exposes_isolated_zero():
    # one fair Bernoulli among Rademachers: zero at pi until it is removed
    half = bernoulli(Fraction(1, 2))
    m = sequence_model(lambda n: half if n == 1 else rademacher(), 1)
    assert superstable_diagnostic(m, NS, 1, 0).as_dict() == {N: 0 for N in NS}
    assert superstable_diagnostic(m, NS, 1, 1).as_dict() == {N: pytest.approx(1) for N in NS}


def test_superstable_is_seed_independent_and_validates():
    m = model("nonsym", gamma=1)
    assert superstable_diagnostic(m, NS, 2, 2, seed=1).values == superstable_diagnostic(m, NS, 2, 2, seed=7).values
    with pytest.raises(ValidationError):
        superstable_diagnostic(m, NS, 2, -1)
    with pytest.raises(ValidationError):
        superstable_diagnostic(m, [3], 2, 5)


def test_uniformity_bernoulli_is_zero(bern):
    rep = uniformity_diagnostic(bern, NS, 2, 1)
    assert all(v == 0 for _, v in rep.values)
    assert all(rep.details[N] == 0 for N in NS)


def test_uniformity_rademacher_is_half(rad):
    assert uniformity_diagnostic(rad, NS, 2, 1).as_dict() == {N: 0.5 for N in NS}


def test_report_csv_and_summary(rad):
    rep = llt_diagnostic(rad, [5, 6])
    buf = io.StringIO()
    rep.write_csv(buf)
    assert buf.getvalue().splitlines()[0] == "N,value"
    assert len(buf.getvalue().splitlines()) == 3
    assert rep.summary().startswith("llt:")


def test_reports_reject_unsorted_ns(rad):
    with pytest.raises(ValidationError):
        llt_diagnostic(rad, [20, 10])


def test_not_most_likely_mass_by_hand():
    rv = bernoulli(Fraction(1, 5))
    miss, second = not_most_likely_mass(iid_model(rv), 10, 2)
    assert miss == second == 2


@given(rv=exact_rvs(K=2), N=st.integers(1, 6))
def test_rozanov_bound_dominates_characteristic_function(rv, N):
    m = iid_model(rv)
    assume(m.K >= 1)
    terms = m.terms(N)
    for p in resonant_set(m.K):
        assert abs(phi_product_at(terms, p)) <= roz0_bound(m, N, p.m) + 1e-12


@given(rv=exact_rvs(K=2), N=st.integers(1, 8), h=st.integers(2, 4))
def test_mod_h_distance_and_fourier_coefficients_bound_each_other(rv, N, h):
    m = iid_model(rv)
    assume(h <= 2 * m.K)
    dist = float(uniform_distance(mod_marginal(sum_pmf(m, N), h)))
    top = max(abs(v) for v in fourier_mod_h(m, N, h))
    assert dist <= (h - 1) / h * top + 1e-12
    assert top <= h * dist + 1e-12
