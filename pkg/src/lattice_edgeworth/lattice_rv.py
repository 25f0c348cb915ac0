"""Bounded integer-valued random variables.

An :class:`IntegerRV` stores a finite support together with its weights,
either as exact :class:`~fractions.Fraction` values or as doubles.  All
methods are pure.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ._cyclotomic import root_sum_vanishes
from .exceptions import OrderExceededError, ValidationError

MAX_DERIV_ORDER = 16
FLOAT_SUM_TOL = 1e-12


def _to_exact(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise ValidationError(
        f"exact mode needs int, Fraction or str weights, got {type(value).__name__}"
    )


def root_of_unity(numer: int, denom: int) -> complex:
    """``exp(2*pi*i*numer/denom)`` with the exact values at quarter turns."""
    a = numer % denom
    if a == 0:
        return 1 + 0j
    if 2 * a == denom:
        return -1 + 0j
    if 4 * a == denom:
        return 1j
    if 4 * a == 3 * denom:
        return -1j
    return cmath.exp(2j * math.pi * a / denom)


@dataclass(frozen=True)
class IntegerRV:
    """A finitely supported distribution on the integers.

    Parameters
    ----------
    support : sequence of int
        Distinct support points.
    probs : sequence
        Matching weights.  In exact mode these are converted to ``Fraction``.
    exact : bool
        Numeric mode.  Exact weights must sum to exactly one.
    """

    support: tuple[int, ...]
    probs: tuple
    exact: bool = True

    def __init__(self, support: Iterable[int], probs: Iterable, exact: bool = True):
        support = tuple(int(v) for v in support)
        probs = tuple(probs)
        if len(support) != len(probs):
            raise ValidationError("support and probs differ in length")
        if not support:
            raise ValidationError("empty support")
        if len(set(support)) != len(support):
            raise ValidationError("support values must be distinct")
        if exact:
            probs = tuple(_to_exact(p) for p in probs)
            if any(p < 0 for p in probs):
                raise ValidationError("negative weight")
            if sum(probs) != 1:
                raise ValidationError(f"exact weights sum to {sum(probs)}, not 1")
        else:
            probs = tuple(float(p) for p in probs)
            if any(not math.isfinite(p) or p < 0 for p in probs):
                raise ValidationError("weights must be finite and nonnegative")
            if abs(math.fsum(probs) - 1.0) > FLOAT_SUM_TOL:
                raise ValidationError(f"float weights sum to {math.fsum(probs)!r}, not 1")
        if not any(p > 0 for p in probs):
            raise ValidationError("no positive weight")
        order = sorted(range(len(support)), key=support.__getitem__)
        object.__setattr__(self, "support", tuple(support[i] for i in order))
        object.__setattr__(self, "probs", tuple(probs[i] for i in order))
        object.__setattr__(self, "exact", bool(exact))

    @classmethod
    def from_dict(cls, table: Mapping[int, object], exact: bool = True) -> "IntegerRV":
        return cls(list(table), list(table.values()), exact=exact)

    @classmethod
    def point_mass(cls, value: int, exact: bool = True) -> "IntegerRV":
        return cls([value], [1], exact=exact)

    @property
    def bound(self) -> int:
        return max(abs(v) for v in self.support)

    def to_float(self) -> "IntegerRV":
        if not self.exact:
            return self
        return IntegerRV(self.support, [float(p) for p in self.probs], exact=False)

    def items(self):
        return zip(self.support, self.probs)

    @property
    def mean(self):
        if self.exact:
            return sum((p * v for v, p in self.items()), Fraction(0))
        return math.fsum(p * v for v, p in self.items())

    @property
    def variance(self):
        return central_moment(self, 2)

    # thin method aliases keep call sites short
    def char_fn(self, t: float) -> complex:
        return char_fn(self, t)

    def char_fn_deriv(self, t: float, ell: int, centered: bool = False) -> complex:
        return char_fn_deriv(self, t, ell, centered)

    def residue_profile(self, h: int) -> "ResidueProfile":
        return residue_profile(self, h)


@dataclass(frozen=True)
class ResidueProfile:
    modulus: int
    masses: tuple
    most_likely: int
    second_mass: object
    second_residue: int


def central_moment(rv: IntegerRV, q: int):
    """E((X - EX)**q); exact in exact mode."""
    if q < 0:
        raise ValidationError("moment order must be nonnegative")
    mu = rv.mean
    if rv.exact:
        return sum((p * (v - mu) ** q for v, p in rv.items()), Fraction(0))
    return math.fsum(p * (v - mu) ** q for v, p in rv.items())


def char_fn(rv: IntegerRV, t: float) -> complex:
    """Characteristic function ``E exp(itX)``."""
    return complex(sum(float(p) * cmath.exp(1j * t * v) for v, p in rv.items()))


def _check_order(ell: int, max_order: int) -> None:
    if ell < 0:
        raise ValidationError("derivative order must be nonnegative")
    if ell > max_order:
        raise OrderExceededError(f"derivative order {ell} exceeds maximum {max_order}")


def char_fn_deriv(
    rv: IntegerRV,
    t: float,
    ell: int,
    centered: bool = False,
    max_order: int = MAX_DERIV_ORDER,
) -> complex:
    """``E((iX)**ell exp(itX))``, or the same for ``X - EX`` when ``centered``."""
    _check_order(ell, max_order)
    shift = float(rv.mean) if centered else 0.0
    total = 0j
    for v, p in rv.items():
        x = v - shift
        total += float(p) * (1j * x) ** ell * cmath.exp(1j * t * x)
    return total


def char_fn_deriv_at(
    rv: IntegerRV,
    numer: int,
    denom: int,
    ell: int = 0,
    centered: bool = False,
    max_order: int = MAX_DERIV_ORDER,
) -> complex:
    """Derivative of the characteristic function at ``t = 2*pi*numer/denom``.

    Phases are taken from exact residues so that symmetric sums cancel
    exactly; in exact mode a value that vanishes algebraically is returned
    as an exact zero.
    """
    _check_order(ell, max_order)
    mu = rv.mean if centered else 0
    if rv.exact:
        weights: dict[int, Fraction] = {}
        for v, p in rv.items():
            r = v % denom
            weights[r] = weights.get(r, Fraction(0)) + p * (v - mu) ** ell
        if root_sum_vanishes(weights, numer, denom):
            return 0j
    total = 0j
    muf = float(mu)
    for v, p in rv.items():
        total += float(p) * (v - muf) ** ell * root_of_unity(numer * v, denom)
    total *= 1j ** ell
    if centered and mu:
        total *= cmath.exp(-2j * math.pi * numer / denom * muf)
    return total


def residue_masses(rv: IntegerRV, h: int) -> tuple:
    zero = Fraction(0) if rv.exact else 0.0
    masses = [zero] * h
    for v, p in rv.items():
        masses[v % h] += p
    return tuple(masses)


def residue_profile(rv: IntegerRV, h: int) -> ResidueProfile:
    """Residue statistics mod ``h``; ties go to the smallest residue."""
    if h < 2:
        raise ValidationError("modulus must be at least 2")
    masses = residue_masses(rv, h)
    ranked = sorted(range(h), key=lambda a: (-masses[a], a))
    top, second = ranked[0], ranked[1]
    return ResidueProfile(
        modulus=h,
        masses=masses,
        most_likely=top,
        second_mass=masses[second],
        second_residue=second,
    )


def second_mass(rv: IntegerRV, h: int):
    """The second-largest residue mass ``q(h)``."""
    return residue_profile(rv, h).second_mass


def bernoulli(p=Fraction(1, 2), exact: bool = True) -> IntegerRV:
    return IntegerRV([0, 1], [1 - p, p], exact=exact)


def rademacher(exact: bool = True) -> IntegerRV:
    half = Fraction(1, 2) if exact else 0.5
    return IntegerRV([-1, 1], [half, half], exact=exact)


def uniform_on(values: Sequence[int], exact: bool = True) -> IntegerRV:
    w = Fraction(1, len(values)) if exact else 1.0 / len(values)
    return IntegerRV(values, [w] * len(values), exact=exact)
