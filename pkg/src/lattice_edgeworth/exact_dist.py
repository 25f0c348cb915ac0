"""Exact distributions of partial sums by iterated convolution.

This is the brute-force oracle every expansion is measured against.  Exact
mode convolves integer numerators over a common denominator, so the result
is an exact rational pmf; double mode uses :func:`numpy.convolve`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .exceptions import ValidationError
from .lattice_rv import IntegerRV

SEQUENCE = "sequence"
ARRAY = "array"


@dataclass(frozen=True)
class Model:
    """A generator of independent integer-valued terms.

    ``term(N, n)`` returns the n-th term (1-based) of row ``N``.  In sequence
    mode the row index is ignored and ``row_length(N) == N``.
    """

    kind: str
    term_rule: Callable[[int, int], IntegerRV]
    K: int
    row_rule: Callable[[int], int] | None = None
    name: str = "model"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in (SEQUENCE, ARRAY):
            raise ValidationError(f"unknown model kind {self.kind!r}")
        if self.K < 0:
            raise ValidationError("K must be nonnegative")

    def row_length(self, N: int) -> int:
        if N < 0:
            raise ValidationError("N must be nonnegative")
        if self.kind == SEQUENCE or self.row_rule is None:
            return N
        return int(self.row_rule(N))

    def term(self, N: int, n: int) -> IntegerRV:
        if not 1 <= n <= self.row_length(N):
            raise ValidationError(f"term index {n} outside 1..{self.row_length(N)}")
        rv = self.term_rule(N, n)
        if rv.bound > self.K:
            raise ValidationError(f"term {n} has |value| {rv.bound} > K = {self.K}")
        return rv

    def terms(self, N: int) -> list[IntegerRV]:
        return [self.term(N, n) for n in range(1, self.row_length(N) + 1)]


def iid_model(rv: IntegerRV, name: str = "iid") -> Model:
    return Model(SEQUENCE, lambda N, n: rv, rv.bound, name=name)


def sequence_model(rule: Callable[[int], IntegerRV], K: int, name: str = "sequence") -> Model:
    return Model(SEQUENCE, lambda N, n: rule(n), K, name=name)


@dataclass(frozen=True)
class Pmf:
    """Probabilities of ``offset, offset + 1, ...`` over a tight range."""

    offset: int
    probs: tuple
    exact: bool

    def __post_init__(self):
        if not self.probs:
            raise ValidationError("empty pmf")

    @property
    def mode(self) -> str:
        return "exact" if self.exact else "double"

    @property
    def support_range(self) -> range:
        return range(self.offset, self.offset + len(self.probs))

    def __len__(self) -> int:
        return len(self.probs)

    def prob(self, k: int):
        i = k - self.offset
        if 0 <= i < len(self.probs):
            return self.probs[i]
        return Fraction(0) if self.exact else 0.0

    def as_array(self) -> np.ndarray:
        return np.array([float(p) for p in self.probs])

    def to_dict(self) -> dict[int, object]:
        return {self.offset + i: p for i, p in enumerate(self.probs)}


def _trim(offset: int, values: list) -> tuple[int, list]:
    lo = 0
    hi = len(values)
    while lo < hi and values[lo] == 0:
        lo += 1
    while hi > lo and values[hi - 1] == 0:
        hi -= 1
    if lo == hi:
        raise ValidationError("pmf vanished (all weights zero)")
    return offset + lo, values[lo:hi]


def _dense(rv: IntegerRV) -> tuple[int, list]:
    lo, hi = rv.support[0], rv.support[-1]
    zero = Fraction(0) if rv.exact else 0.0
    dense = [zero] * (hi - lo + 1)
    for v, p in rv.items():
        dense[v - lo] = p
    return lo, dense


def _convolve_exact(terms: Sequence[IntegerRV]) -> tuple[int, list]:
    # integer numerators over a running common denominator
    offset = 0
    acc = [1]
    denom = 1
    for rv in terms:
        lo, dense = _dense(rv)
        d = math.lcm(*(p.denominator for p in dense))
        nums = [int(p * d) for p in dense]
        out = [0] * (len(acc) + len(nums) - 1)
        for i, a in enumerate(acc):
            if a:
                for j, b in enumerate(nums):
                    if b:
                        out[i + j] += a * b
        acc = out
        denom *= d
        offset += lo
        g = 0
        for a in acc:
            g = math.gcd(g, a)
            if g == 1:
                break
        g = math.gcd(g, denom)
        if g > 1:
            acc = [a // g for a in acc]
            denom //= g
    return offset, [Fraction(a, denom) for a in acc]


def _convolve_double(terms: Sequence[IntegerRV]) -> tuple[int, list]:
    offset = 0
    acc = np.ones(1)
    for rv in terms:
        lo, dense = _dense(rv.to_float())
        acc = np.convolve(acc, np.asarray(dense, dtype=float))
        offset += lo
    return offset, acc.tolist()


def pmf_of_terms(terms: Sequence[IntegerRV], exact: bool = True) -> Pmf:
    """Exact distribution of the sum of ``terms`` (point mass at 0 if empty)."""
    if exact:
        bad = [i for i, rv in enumerate(terms) if not rv.exact]
        if bad:
            raise ValidationError(
                f"exact mode requested but term(s) {bad[:5]} carry float weights"
            )
        offset, values = _convolve_exact(terms)
    else:
        offset, values = _convolve_double(terms)
    offset, values = _trim(offset, values)
    return Pmf(offset, tuple(values), exact)


def sum_pmf(model: Model, N: int, removed: Iterable[int] = (), exact: bool = True) -> Pmf:
    """Distribution of ``S_N`` with the terms at the 1-based indices ``removed`` left out."""
    L = model.row_length(N)
    removed = set(removed)
    bad = sorted(j for j in removed if not 1 <= j <= L)
    if bad:
        raise ValidationError(f"removed indices {bad} outside 1..{L}")
    terms = [model.term(N, n) for n in range(1, L + 1) if n not in removed]
    return pmf_of_terms(terms, exact=exact)


def pmf_stats(p: Pmf):
    """Mean and variance of a pmf (exact rationals in exact mode)."""
    if p.exact:
        mean = sum((q * k for k, q in zip(p.support_range, p.probs)), Fraction(0))
        var = sum((q * (k - mean) ** 2 for k, q in zip(p.support_range, p.probs)), Fraction(0))
        return mean, var
    ks = np.arange(p.offset, p.offset + len(p.probs), dtype=float)
    w = p.as_array()
    mean = float(np.dot(ks, w))
    var = float(np.dot((ks - mean) ** 2, w))
    return mean, var


def mod_marginal(p: Pmf, h: int) -> tuple:
    """Distribution of ``S mod h``."""
    if h < 2:
        raise ValidationError("modulus must be at least 2")
    zero = Fraction(0) if p.exact else 0.0
    out = [zero] * h
    for k, q in zip(p.support_range, p.probs):
        out[k % h] += q
    return tuple(out)


def uniform_distance(dist: Sequence) -> object:
    """``max_a |d(a) - 1/h|``; exact for rational input."""
    h = len(dist)
    if h == 0:
        raise ValidationError("empty distribution")
    if all(isinstance(d, Fraction) for d in dist):
        return max(abs(d - Fraction(1, h)) for d in dist)
    return max(abs(float(d) - 1.0 / h) for d in dist)


def format_prob(value) -> str:
    return f"{float(value):.17g}"


def write_pmf_csv(p: Pmf, stream) -> None:
    """Write ``k,prob`` rows with 17 significant digits."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["k", "prob"])
    for k, q in zip(p.support_range, p.probs):
        writer.writerow([k, format_prob(q)])
