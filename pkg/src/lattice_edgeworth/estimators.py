"""Scikit-learn style wrapper: fit on the terms of a sum, predict ``P(S = k)``."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .edgeworth import classical_density, edgeworth_data
from .exact_dist import SEQUENCE, Model
from .exceptions import ValidationError
from .trig_expansion import GeneralizedExpansion, order1_density, order2_density
from .validation import check_lattice_points, check_order, check_terms

KINDS = ("classical", "generalized", "order1", "order2")


class EdgeworthDensity(BaseEstimator):
    """Lattice density of a sum of independent bounded integer terms.

    ``fit`` takes the list of terms (``IntegerRV`` or ``{value: prob}``
    tables); ``predict`` returns the approximation of ``P(S = k)``.

    Parameters
    ----------
    order : int
        Expansion order ``r``.  Ignored by ``order1`` and ``order2``.
    kind : str
        ``classical``, ``generalized``, ``order1`` or ``order2``.
    """

    def __init__(self, order: int = 1, kind: str = "generalized"):
        self.order = order
        self.kind = kind

    def fit(self, X, y=None):
        r = check_order(self.order)
        if self.kind not in KINDS:
            raise ValidationError(f"kind must be one of {KINDS}, got {self.kind!r}")
        terms = check_terms(X)
        self.terms_ = terms
        self.n_terms_ = len(terms)
        K = max(rv.bound for rv in terms)
        self.model_ = Model(SEQUENCE, lambda N, n: terms[n - 1], K, name="fitted")
        if self.kind == "classical":
            self.edgeworth_ = edgeworth_data(terms, r)
            self.sigma_, self.mean_ = self.edgeworth_.sigma, self.edgeworth_.mean
        elif self.kind == "generalized":
            self.expansion_ = GeneralizedExpansion(self.model_, self.n_terms_, r)
            self.sigma_, self.mean_ = self.expansion_.sigma, self.expansion_.mean
        else:
            ed = edgeworth_data(terms, 2)
            self.sigma_, self.mean_ = ed.sigma, ed.mean
        return self

    def _check_fitted(self):
        if not hasattr(self, "terms_"):
            raise ValidationError("estimator is not fitted; call fit first")

    def predict(self, X) -> np.ndarray:
        self._check_fitted()
        k = check_lattice_points(X)
        if self.kind == "classical":
            return np.asarray(classical_density(self.edgeworth_, k, self.order), dtype=float)
        if self.kind == "generalized":
            return self.expansion_.density(k)
        if self.kind == "order1":
            return np.asarray(order1_density(self.model_, self.n_terms_, k), dtype=float)
        return np.asarray(order2_density(self.model_, self.n_terms_, k), dtype=float)

    def score(self, X, y) -> float:
        """Negative sup distance between ``predict(X)`` and the probabilities ``y``."""
        y = np.asarray(y, dtype=float).ravel()
        pred = self.predict(X)
        if pred.shape != y.shape:
            raise ValidationError("X and y differ in length")
        return -float(np.max(np.abs(pred - y)))
