"""Exact vanishing test for rational combinations of roots of unity.

A sum ``sum_a w_a * exp(2*pi*i*a/d)`` with rational weights is zero exactly
when the d-th cyclotomic polynomial divides ``sum_a w_a x**a``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Mapping


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    # coefficient lists, lowest degree first; den is monic
    num = list(num)
    dn = len(den) - 1
    if len(num) - 1 < dn:
        return [0], num
    quot = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            quot[i - dn] = c
            for j in range(dn + 1):
                num[i - dn + j] -= c * den[j]
    rem = num[:dn] if dn else [0]
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_poly(d: int) -> tuple[int, ...]:
    """Integer coefficients of the d-th cyclotomic polynomial, lowest degree first."""
    if d < 1:
        raise ValueError("d must be positive")
    poly = [-1] + [0] * (d - 1) + [1]
    for e in range(1, d):
        if d % e == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_poly(e)))
            assert not any(rem)
    return tuple(int(c) for c in poly)


def root_sum_vanishes(weights: Mapping[int, Fraction], freq: int, modulus: int) -> bool:
    """Whether ``sum_a weights[a] * exp(2*pi*i*freq*a/modulus)`` is exactly zero."""
    g = gcd(freq % modulus, modulus) if freq % modulus else modulus
    order = modulus // g
    poly = [Fraction(0)] * order
    for a, w in weights.items():
        poly[(freq * a % modulus) // g] += Fraction(w)
    if order == 1:
        return poly[0] == 0
    _, rem = _poly_divmod(poly, list(cyclotomic_poly(order)))
    return not any(rem)
