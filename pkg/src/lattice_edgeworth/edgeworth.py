"""Classical Edgeworth expansion for sums of integer-valued terms.

The standardized log characteristic function is
``-t**2/2 + sum_{q>=3} lambda_q (it)**q / (q! sigma**(q-2))`` with
``lambda_q = kappa_q / sigma**2``.  Exponentiating in powers of ``1/sigma``
gives polynomials ``A_k`` in ``u = it``.  The inverse Fourier transform of
``(it)**q exp(-t**2/2)`` is ``He_q(x) g(x)``, which turns each ``A_k`` into
a Hermite combination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .exceptions import DegenerateVarianceError, ValidationError
from .lattice_rv import IntegerRV
from .series import cumulant_series, cumulants_from_series

MAX_HERMITE_DEGREE = 64
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class HermitePoly:
    """Probabilists' Hermite polynomial with exact integer coefficients (lowest degree first)."""

    degree: int
    coeffs: tuple[int, ...]

    def __call__(self, x):
        return npoly.polyval(x, np.array(self.coeffs, dtype=float))


@lru_cache(maxsize=None)
def hermite(q: int) -> HermitePoly:
    """``He_q`` from ``He_{q+1} = x He_q - q He_{q-1}``."""
    if q < 0 or q > MAX_HERMITE_DEGREE:
        raise ValidationError(f"Hermite degree must lie in 0..{MAX_HERMITE_DEGREE}")
    prev, cur = (1,), (0, 1)
    if q == 0:
        return HermitePoly(0, prev)
    for n in range(1, q):
        nxt = [0] * (n + 2)
        for i, c in enumerate(cur):
            nxt[i + 1] += c
        for i, c in enumerate(prev):
            nxt[i] -= n * c
        prev, cur = cur, tuple(nxt)
    return HermitePoly(q, cur)


def hermite_table(qmax: int, x) -> np.ndarray:
    """Rows ``He_0(x) .. He_qmax(x)`` evaluated by the recurrence."""
    x = np.asarray(x, dtype=float)
    out = np.empty((qmax + 1,) + x.shape)
    out[0] = 1.0
    if qmax >= 1:
        out[1] = x
    for n in range(1, qmax):
        out[n + 1] = x * out[n] - n * out[n - 1]
    return out


def gaussian(x):
    return INV_SQRT_2PI * np.exp(-0.5 * np.asarray(x, dtype=float) ** 2)


@dataclass(frozen=True)
class EdgeworthData:
    """Edgeworth polynomials of a (sub)sum.

    ``polys[k]`` holds the real coefficients of ``A_k`` as a polynomial in
    ``u = it`` (lowest degree first); ``polys[0]`` is the constant 1.
    """

    order: int
    polys: tuple
    sigma: float
    mean: float
    cumulants: tuple

    @property
    def gamma(self) -> float:
        """Third cumulant over variance."""
        return self.cumulants[3] / self.sigma ** 2

    def poly_in_t(self, k: int) -> np.ndarray:
        """Complex coefficients of ``A_k`` as a polynomial in ``t``."""
        c = self.polys[k]
        return np.array([c[q] * 1j ** q for q in range(len(c))])

    def layer_values(self, x, layers: int, shift: int = 0) -> np.ndarray:
        """``sum_q c_{w,q} He_{q+shift}(x)`` for ``w = 0 .. layers-1``."""
        x = np.asarray(x, dtype=float)
        qmax = max(len(self.polys[w]) for w in range(layers)) - 1 + shift
        H = hermite_table(qmax, x)
        out = np.zeros((layers,) + x.shape)
        for w in range(layers):
            for q, c in enumerate(self.polys[w]):
                if c != 0.0:
                    out[w] += c * H[q + shift]
        return out


def standardized_cumulants(terms: Sequence[IntegerRV], qmax: int) -> list[float]:
    """Cumulants ``kappa_0 .. kappa_qmax`` of the centered sum."""
    series = cumulant_series(terms, qmax, centered=True)
    return [float(np.real(k)) for k in cumulants_from_series(series)]


def _exp_in_eps(lambdas: Sequence[float], r: int) -> list[np.ndarray]:
    # exp(sum_j eps^j a_j(u)), a_j = lambda_{j+2} u^{j+2} / (j+2)!
    a = [np.zeros(1)]
    for j in range(1, r + 1):
        c = np.zeros(j + 3)
        c[j + 2] = lambdas[j + 2] / math.factorial(j + 2)
        a.append(c)
    b = [np.ones(1)]
    for n in range(1, r + 1):
        acc = np.zeros(1)
        for j in range(1, n + 1):
            acc = npoly.polyadd(acc, j * npoly.polymul(a[j], b[n - j]))
        b.append(acc / n)
    return b


def edgeworth_data(terms: Sequence[IntegerRV], r: int) -> EdgeworthData:
    """Edgeworth polynomials ``A_0 .. A_r`` for the sum of ``terms``."""
    if r < 1:
        raise ValidationError("order r must be at least 1")
    if not terms:
        raise DegenerateVarianceError("no terms")
    kappas = standardized_cumulants(terms, r + 2)
    var = kappas[2]
    if not var > 0:
        raise DegenerateVarianceError("sum has zero variance")
    sigma = math.sqrt(var)
    lambdas = [k / var for k in kappas]
    polys = _exp_in_eps(lambdas, r)
    mean = math.fsum(float(rv.mean) for rv in terms)
    return EdgeworthData(r, tuple(polys), sigma, mean, tuple(kappas))


def closed_form_A1(ed: EdgeworthData) -> np.ndarray:
    """``A_1(t) = -(i/6) gamma t**3`` as coefficients in ``t``."""
    out = np.zeros(4, dtype=complex)
    out[3] = -1j * ed.gamma / 6
    return out


def closed_form_A2(ed: EdgeworthData) -> np.ndarray:
    """``A_2(t) = kappa_4 / sigma**2 * t**4/24 - gamma**2 t**6 / 72`` in ``t``."""
    out = np.zeros(7, dtype=complex)
    out[4] = ed.cumulants[4] / ed.sigma ** 2 / 24
    out[6] = -ed.gamma ** 2 / 72
    return out


def standardize(ed: EdgeworthData, k) -> np.ndarray:
    return (np.asarray(k, dtype=float) - ed.mean) / ed.sigma


def classical_density(ed: EdgeworthData, k, r: int | None = None):
    """Order-``r`` lattice Edgeworth approximation of ``P(S = k)``.

    Evaluates ``g(x)/sigma * sum_{b<r} sigma**-b sum_q c_{b,q} He_q(x)`` at
    ``x = (k - mean)/sigma``.
    """
    r = ed.order if r is None else r
    if not 1 <= r <= ed.order + 1:
        raise ValidationError(f"order {r} not available (data built for r <= {ed.order + 1})")
    x = standardize(ed, k)
    layers = ed.layer_values(x, r)
    scale = ed.sigma ** -np.arange(r, dtype=float)
    total = np.tensordot(scale, layers, axes=1)
    out = total * gaussian(x) / ed.sigma
    return float(out) if np.ndim(out) == 0 else out


def symbolic_layers(ed: EdgeworthData, layers: int, shift: int = 0) -> list[np.ndarray]:
    """Coefficients in ``x`` of ``sum_q c_{w,q} He_{q+shift}(x)`` for each layer ``w``."""
    out = []
    for w in range(layers):
        acc = np.zeros(1)
        for q, c in enumerate(ed.polys[w]):
            if c != 0.0:
                acc = npoly.polyadd(acc, c * np.array(hermite(q + shift).coeffs, dtype=float))
        out.append(acc)
    return out
