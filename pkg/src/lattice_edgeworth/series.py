"""Truncated power series in one variable.

Coefficients are complex doubles on the expansion paths.  A series whose
coefficients are all ``Fraction`` (or ``int``) is *exact*: arithmetic stays
rational, which lets algebraic identities be checked to zero.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exceptions import SeriesDomainError, ValidationError
from .lattice_rv import IntegerRV, char_fn_deriv, char_fn_deriv_at, central_moment


def default_order(r: int) -> int:
    """Truncation order used for an order-``r`` expansion."""
    return 2 * r + 6


def _is_exact(values: Iterable) -> bool:
    return all(isinstance(c, (Fraction, int)) and not isinstance(c, bool) for c in values)


class TruncatedSeries:
    """Coefficients ``c_0 .. c_L`` of a power series truncated at degree ``L``."""

    __slots__ = ("_coeffs", "exact")

    def __init__(self, coeffs: Sequence, order: int | None = None):
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValidationError("series order must be nonnegative")
        coeffs = (coeffs + [0] * (order + 1))[: order + 1]
        self.exact = _is_exact(coeffs)
        if self.exact:
            self._coeffs = tuple(Fraction(c) for c in coeffs)
        else:
            self._coeffs = tuple(complex(c) for c in coeffs)

    @classmethod
    def constant(cls, value, order: int) -> "TruncatedSeries":
        return cls([value], order)

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    def __getitem__(self, q: int):
        return self._coeffs[q]

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def __repr__(self) -> str:
        return f"TruncatedSeries({list(self._coeffs)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncatedSeries) and self._coeffs == other._coeffs

    __hash__ = None

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValidationError("cannot raise the truncation order")
        return TruncatedSeries(self._coeffs[: order + 1], order)

    def _check(self, other: "TruncatedSeries") -> None:
        if self.order != other.order:
            raise ValidationError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries([a + b for a, b in zip(self, other)], self.order)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries([a - b for a, b in zip(self, other)], self.order)

    def scale(self, factor) -> "TruncatedSeries":
        return TruncatedSeries([factor * c for c in self], self.order)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_mul(self, other)

    def to_array(self) -> np.ndarray:
        return np.array([complex(c) for c in self._coeffs])


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the common order."""
    a._check(b)
    order = a.order
    if a.exact and b.exact:
        out = [
            sum((a[i] * b[q - i] for i in range(q + 1)), Fraction(0))
            for q in range(order + 1)
        ]
        return TruncatedSeries(out, order)
    prod = np.convolve(a.to_array(), b.to_array())[: order + 1]
    return TruncatedSeries(prod, order)


def series_product(factors: Sequence[TruncatedSeries], order: int) -> TruncatedSeries:
    """Product of many series; the empty product is the constant 1."""
    if not factors:
        return TruncatedSeries.constant(1, order)
    if not all(f.exact for f in factors):
        acc = np.zeros(order + 1, dtype=complex)
        acc[0] = 1.0
        for f in factors:
            if f.order != order:
                raise ValidationError(f"order mismatch: {f.order} vs {order}")
            acc = np.convolve(acc, f.to_array())[: order + 1]
        return TruncatedSeries(acc, order)
    acc = TruncatedSeries.constant(1, order)
    for f in factors:
        acc = series_mul(acc, f)
    return acc


def series_pow(a: TruncatedSeries, n: int) -> TruncatedSeries:
    """``a**n`` for a nonnegative integer ``n`` by repeated squaring."""
    if n < 0:
        raise ValidationError("negative power")
    result = TruncatedSeries.constant(1, a.order)
    base = a
    while n:
        if n & 1:
            result = series_mul(result, base)
        n >>= 1
        if n:
            base = series_mul(base, base)
    return result


def series_log(a: TruncatedSeries) -> TruncatedSeries:
    """Logarithm, normalised as ``log(c0) + log(1 + (a/c0 - 1))``.

    Exact series must have ``c0 == 1`` since ``log(c0)`` is otherwise not
    rational.
    """
    c0 = a[0]
    if c0 == 0:
        raise SeriesDomainError("log of a series with zero constant term")
    order = a.order
    if a.exact:
        if c0 != 1:
            raise SeriesDomainError("exact log needs constant term 1")
        lead = Fraction(0)
        u = list(a)
        zero = Fraction(0)
    else:
        lead = cmath.log(c0)
        u = [c / c0 for c in a]
        zero = 0j
    # b' = u'/u with u0 = 1
    b = [zero] * (order + 1)
    for n in range(1, order + 1):
        acc = n * u[n]
        for k in range(1, n):
            acc -= k * b[k] * u[n - k]
        b[n] = acc / n
    b[0] = lead
    return TruncatedSeries(b, order)


def series_exp(a: TruncatedSeries) -> TruncatedSeries:
    """Exponential; the constant term is exponentiated separately."""
    order = a.order
    if a.exact:
        if a[0] != 0:
            raise SeriesDomainError("exact exp needs constant term 0")
        lead = Fraction(1)
        zero = Fraction(0)
    else:
        lead = cmath.exp(a[0])
        zero = 0j
    # b' = a' b
    b = [zero] * (order + 1)
    b[0] = 1 if a.exact else 1 + 0j
    for n in range(1, order + 1):
        acc = zero
        for k in range(1, n + 1):
            acc += k * a[k] * b[n - k]
        b[n] = acc / n
    return TruncatedSeries([lead * c for c in b], order)


def char_taylor(rv: IntegerRV, t0: float, L: int, centered: bool = False) -> TruncatedSeries:
    """Expansion of ``h -> phi(t0 + h)``: coefficient q is ``phi^(q)(t0)/q!``."""
    return TruncatedSeries(
        [char_fn_deriv(rv, t0, q, centered, max_order=max(L, 0)) / math.factorial(q) for q in range(L + 1)],
        L,
    )


def char_taylor_at(rv: IntegerRV, numer: int, denom: int, L: int, centered: bool = False) -> TruncatedSeries:
    """As :func:`char_taylor` at ``t0 = 2*pi*numer/denom`` with exact-residue phases."""
    return TruncatedSeries(
        [
            char_fn_deriv_at(rv, numer, denom, q, centered, max_order=max(L, 0)) / math.factorial(q)
            for q in range(L + 1)
        ],
        L,
    )


def moment_series(rv: IntegerRV, L: int, centered: bool = True) -> TruncatedSeries:
    """Exact moment series ``sum_q E(X^q) s^q / q!`` in the variable ``s = i h``.

    This is :func:`char_taylor` at ``t0 = 0`` with the powers of ``i``
    absorbed into the variable, so that rational moments stay rational.
    """
    if not rv.exact:
        raise ValidationError("moment_series needs an exact-mode variable")
    if centered:
        coeffs = [central_moment(rv, q) / math.factorial(q) for q in range(L + 1)]
    else:
        coeffs = [
            sum((p * Fraction(v) ** q for v, p in rv.items()), Fraction(0)) / math.factorial(q)
            for q in range(L + 1)
        ]
    return TruncatedSeries(coeffs, L)


def cumulant_series(
    terms: Sequence[IntegerRV], L: int, centered: bool = True, exact: bool = False
) -> TruncatedSeries:
    """Sum of per-term log characteristic-function series at the origin.

    With ``exact=False`` coefficient q is ``kappa_q * i**q / q!`` (a series
    in ``h``).  With ``exact=True`` the variable is ``s = i h`` and
    coefficient q is the rational ``kappa_q / q!``.
    """
    if not terms:
        raise ValidationError("cumulant_series needs at least one term")
    if exact:
        acc = TruncatedSeries([Fraction(0)] * (L + 1), L)
        for rv in terms:
            acc = acc + series_log(moment_series(rv, L, centered))
        return acc
    acc = np.zeros(L + 1, dtype=complex)
    cache: dict[IntegerRV, np.ndarray] = {}
    for rv in terms:
        log_s = cache.get(rv)
        if log_s is None:
            log_s = series_log(char_taylor(rv, 0.0, L, centered)).to_array()
            cache[rv] = log_s
        acc += log_s
    return TruncatedSeries(acc, L)


def cumulants_from_series(series: TruncatedSeries, exact: bool = False) -> list:
    """Recover ``kappa_q`` from a :func:`cumulant_series` result."""
    out = []
    for q, c in enumerate(series):
        k = c * math.factorial(q)
        if not exact:
            k = k / (1j ** q)
        out.append(k)
    return out
