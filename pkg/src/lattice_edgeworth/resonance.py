"""Resonant frequencies ``2*pi*l/m`` with ``m <= 2K`` and the per-point split.

At each nonzero resonant point the terms are divided into *heavy* ones,
whose second-largest residue mass mod ``m`` exceeds ``1/(8K)``, and the
rest.  Points whose total residue mass ``M_N(m)`` is large compared with
``R(r, K) * ln V_N`` contribute negligibly and are marked as dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce

from .exact_dist import Model
from .exceptions import ValidationError
from .lattice_rv import second_mass


@dataclass(frozen=True, order=True)
class ResonantPoint:
    l: int
    m: int

    def __post_init__(self):
        if self.m < 1 or not 0 <= self.l < self.m or math.gcd(self.l, self.m) != 1:
            raise ValidationError(f"{self.l}/{self.m} is not a reduced fraction in [0, 1)")

    @property
    def angle(self) -> float:
        return 2 * math.pi * self.l / self.m

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.l, self.m)

    @property
    def is_zero(self) -> bool:
        return self.l == 0

    def conjugate(self) -> "ResonantPoint":
        return ResonantPoint((-self.l) % self.m, self.m)

    def __str__(self) -> str:
        return f"2pi*{self.l}/{self.m}"


@dataclass(frozen=True)
class ResonanceAnalysis:
    point: ResonantPoint
    bigM: float
    heavy_indices: tuple[int, ...]
    N0: int
    dropped: bool
    log_variance: float
    threshold: float


@lru_cache(maxsize=None)
def _resonant_fractions(K: int) -> tuple[Fraction, ...]:
    fracs = {Fraction(l, m) for m in range(1, 2 * K + 1) for l in range(m)}
    return tuple(sorted(fracs))


def resonant_set(K: int, include_zero: bool = False) -> list[ResonantPoint]:
    """All reduced ``2*pi*l/m`` with ``m <= 2K``, sorted by angle."""
    if K < 1:
        raise ValidationError("K must be at least 1")
    pts = [ResonantPoint(f.numerator, f.denominator) for f in _resonant_fractions(K)]
    return pts if include_zero else [p for p in pts if not p.is_zero]


def min_gap(K: int) -> float:
    """Smallest circular gap between distinct resonant points, zero included."""
    fr = _resonant_fractions(K)
    gaps = [b - a for a, b in zip(fr, fr[1:])] + [1 - fr[-1]]
    return 2 * math.pi * float(min(gaps))


def decay_constant(K: int) -> float:
    """``c0 = (1 - cos d) / (4K)`` with ``d`` the minimal gap."""
    return (1 - math.cos(min_gap(K))) / (4 * K)


def threshold_R(r: int, K: int) -> float:
    """``R(r, K) = (r + 1) / (2 c0)``."""
    if r < 1 or K < 1:
        raise ValidationError("r and K must be at least 1")
    return (r + 1) / (2 * decay_constant(K))


def interval_halfwidth(K: int) -> float:
    """Half-width of the arc assigned to each resonant point."""
    return min_gap(K) / 4


def heavy_threshold(K: int) -> Fraction:
    return Fraction(1, 8 * K)


def big_M(model: Model, N: int, m: int):
    """``M_N(m)``: the sum of second-largest residue masses mod ``m``."""
    if m < 2:
        raise ValidationError("m must be at least 2")
    return sum(second_mass(rv, m) for rv in model.terms(N))


def total_variance(terms) -> float:
    return math.fsum(float(rv.variance) for rv in terms)


def analyze_point(model: Model, N: int, point: ResonantPoint, r: int, terms=None) -> ResonanceAnalysis:
    """Heavy-term split and drop decision at one nonzero resonant point."""
    if point.is_zero:
        raise ValidationError("analyze_point needs a nonzero resonant point")
    if terms is None:
        terms = model.terms(N)
    eps = heavy_threshold(model.K)
    masses = [second_mass(rv, point.m) for rv in terms]
    heavy = tuple(n for n, q in enumerate(masses, start=1) if q > eps)
    bigM = float(sum(masses))
    var = total_variance(terms)
    log_v = math.log(var) if var > 0 else -math.inf
    threshold = threshold_R(r, model.K) * log_v
    return ResonanceAnalysis(
        point=point,
        bigM=bigM,
        heavy_indices=heavy,
        N0=len(heavy),
        dropped=bigM > threshold,
        log_variance=log_v,
        threshold=threshold,
    )


def lcm_denominators(points) -> int:
    """``J``: least common multiple of the denominators."""
    return reduce(math.lcm, (p.m for p in points), 1)
