import numpy as np
import pytest
from sklearn.base import clone

from lattice_edgeworth.edgeworth import classical_density, edgeworth_data
from lattice_edgeworth.estimators import EdgeworthDensity
from lattice_edgeworth.exact_dist import iid_model, pmf_of_terms
from lattice_edgeworth.exceptions import ValidationError
from lattice_edgeworth.lattice_rv import rademacher

RAD_TABLE = {-1: 0.5, 1: 0.5}


def test_params_round_trip_and_clone():
    est = EdgeworthDensity(order=2, kind="classical")
    assert est.get_params() == {"order": 2, "kind": "classical"}
    twin = clone(est.set_params(order=3))
    assert twin.get_params() == {"order": 3, "kind": "classical"}
    assert not hasattr(twin, "terms_")


def test_fit_sets_learned_attributes():
    est = EdgeworthDensity().fit([RAD_TABLE] * 100)
    assert est.n_terms_ == 100
    assert est.sigma_ == pytest.approx(10.0)
    assert est.mean_ == pytest.approx(0.0)


def test_generalized_prediction_repairs_parity():
    terms = [rademacher()] * 100
    ks = np.arange(-30, 31)
    truth = pmf_of_terms(terms, exact=False)
    y = np.array([float(truth.prob(int(k))) for k in ks])
    gen = EdgeworthDensity(order=1).fit(terms)
    cls = EdgeworthDensity(order=1, kind="classical").fit(terms)
    assert gen.score(ks, y) > -5e-4
    assert cls.score(ks, y) < -0.03
    assert gen.predict(ks)[1::2] == pytest.approx(0.0, abs=1e-12)


def test_classical_matches_functional_api():
    terms = iid_model(rademacher()).terms(50)
    ks = np.arange(-5, 6)
    est = EdgeworthDensity(order=2, kind="classical").fit(terms)
    expected = classical_density(edgeworth_data(terms, 2), ks, 2)
    assert est.predict(ks) == pytest.approx(expected)


@pytest.mark.parametrize("kind", ["order1", "order2"])
def test_leading_order_kinds_predict(kind):
    terms = [{-1: 0.45, 0: 0.1, 1: 0.45}] * 80
    pred = EdgeworthDensity(kind=kind).fit(terms).predict([0, 1, 2])
    assert pred.shape == (3,)
    assert np.all(np.isfinite(pred))


def test_predict_before_fit():
    with pytest.raises(ValidationError):
        EdgeworthDensity().predict([0])


@pytest.mark.parametrize("params", [{"kind": "spline"}, {"order": 0}, {"order": 1.5}])
def test_bad_hyperparameters_fail_at_fit(params):
    with pytest.raises(ValidationError):
        EdgeworthDensity(**params).fit([RAD_TABLE] * 10)


@pytest.mark.parametrize("X", [[], [{0: 0.4}], ["a"]])
def test_bad_terms(X):
    with pytest.raises(ValidationError):
        EdgeworthDensity().fit(X)


def test_non_integer_points_rejected():
    est = EdgeworthDensity().fit([RAD_TABLE] * 10)
    with pytest.raises(ValidationError):
        est.predict([0.5])


def test_score_length_mismatch():
    est = EdgeworthDensity().fit([RAD_TABLE] * 10)
    with pytest.raises(ValidationError):
        est.score([0, 2], [0.1])
