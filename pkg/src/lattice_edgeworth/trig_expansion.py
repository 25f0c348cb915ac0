"""Generalized Edgeworth expansions with trigonometric corrections.

Near a nonzero resonant point ``t_j`` the characteristic function of the
sum factors as

    Phi_N(t_j + h) = Phi_head(t_j + h) * Phi_tail(t_j) * Phi_tail(h) * Psi(h)

where the head holds the heavy terms and ``Psi`` collects the smooth
ratios of the remaining ones.  Expanding ``Phi_head * Psi`` in ``h`` and the
tail by its own classical Edgeworth expansion gives the contribution of
``t_j`` to ``P(S_N = k)`` as Hermite functions with phase ``exp(-i t_j k)``.
"""

from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .edgeworth import (
    EdgeworthData,
    classical_density,
    edgeworth_data,
    gaussian,
    hermite_table,
    symbolic_layers,
)
from .exact_dist import Model
from .exceptions import (
    DegenerateVarianceError,
    HypothesisError,
    ValidationError,
    ZeroCharacteristicError,
)
from .lattice_rv import IntegerRV, char_fn, char_fn_deriv_at
from .resonance import (
    ResonanceAnalysis,
    ResonantPoint,
    analyze_point,
    interval_halfwidth,
    lcm_denominators,
    resonant_set,
    total_variance,
)
from .series import (
    TruncatedSeries,
    char_taylor,
    char_taylor_at,
    default_order,
    series_exp,
    series_log,
    series_pow,
    series_product,
)

# a resonant arc whose integrand never exceeds this (times its length) is skipped
NEGLIGIBLE = 1e-18
# double-mode stand-in for an exact zero of a single characteristic function
ZERO_TOL = 1e-12

EXPANSION = "expansion"
DROPPED = "dropped"
NEGLIGIBLE_ARC = "negligible"
QUADRATURE = "quadrature"


def a_coeff(rv: IntegerRV, point: ResonantPoint) -> complex:
    """``E(exp(i t X) Xbar) / E(exp(i t X))`` at a resonant point."""
    phi = char_fn_deriv_at(rv, point.l, point.m, 0)
    if phi == 0:
        raise ZeroCharacteristicError(f"characteristic function vanishes at {point}")
    # char_fn_deriv_at returns E((i Xbar)^l e^{itX}) with the centering phase
    num = char_fn_deriv_at(rv, point.l, point.m, 1, centered=True)
    shift = cmath.exp(1j * point.angle * float(rv.mean))
    return num * shift / (1j * phi)


def b_coeff(rv: IntegerRV, point: ResonantPoint) -> complex:
    """``a**2 - E(exp(i t X) Xbar**2) / E(exp(i t X))``."""
    phi = char_fn_deriv_at(rv, point.l, point.m, 0)
    if phi == 0:
        raise ZeroCharacteristicError(f"characteristic function vanishes at {point}")
    num = char_fn_deriv_at(rv, point.l, point.m, 2, centered=True)
    shift = cmath.exp(1j * point.angle * float(rv.mean))
    a = a_coeff(rv, point)
    return a * a + num * shift / phi


def log_psi_series(rv: IntegerRV, point: ResonantPoint, L: int) -> TruncatedSeries:
    """``log(phi(t_j + h) / phi(t_j))`` for one term; its h-coefficients are ``i a`` and ``b/2``."""
    s = char_taylor_at(rv, point.l, point.m, L, centered=True)
    return series_log(s.scale(1 / s[0]))


def _log_ratio_series(rv: IntegerRV, point: ResonantPoint, L: int) -> np.ndarray:
    # log of phi(t_j + h) / (phi(t_j) phi(h)); centering cancels in the ratio
    at = char_taylor_at(rv, point.l, point.m, L, centered=True)
    if at[0] == 0:
        raise ZeroCharacteristicError(f"non-heavy term vanishes at {point}")
    near = series_log(at.scale(1 / at[0]))
    zero = series_log(char_taylor(rv, 0.0, L, centered=True))
    return near.to_array() - zero.to_array()


def _grouped(terms: Sequence[IntegerRV]) -> Counter:
    return Counter(terms)


def phi_product_at(terms: Sequence[IntegerRV], point: ResonantPoint) -> complex:
    """``Phi(t_j)`` as the product of per-term values."""
    out = 1 + 0j
    for rv, count in _grouped(terms).items():
        v = char_fn_deriv_at(rv, point.l, point.m, 0)
        if v == 0:
            return 0j
        out *= v ** count
    return out


def char_product(terms: Sequence[IntegerRV], t) -> np.ndarray:
    """``Phi(t)`` on an array of frequencies."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.ones_like(t, dtype=complex)
    for rv, count in _grouped(terms).items():
        phase = np.exp(1j * np.outer(t, np.array(rv.support, dtype=float)))
        phi = phase @ np.array([float(p) for p in rv.probs])
        out *= phi ** count
    return out


def log_abs_char_product(terms: Sequence[IntegerRV], t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros_like(t)
    with np.errstate(divide="ignore"):
        for rv, count in _grouped(terms).items():
            phase = np.exp(1j * np.outer(t, np.array(rv.support, dtype=float)))
            phi = phase @ np.array([float(p) for p in rv.probs])
            out += count * np.log(np.abs(phi))
    return out


def head_series(terms: Sequence[IntegerRV], point: ResonantPoint, L: int) -> TruncatedSeries:
    """Taylor series of the heavy product at ``t_j``; coefficient l is ``Phi^(l)(t_j)/l!``."""
    return grouped_product_series(terms, point, L, centered=False)


def grouped_product_series(
    terms: Sequence[IntegerRV], point: ResonantPoint, L: int, centered: bool = False
) -> TruncatedSeries:
    """Taylor series at ``t_j`` of the product of the terms' characteristic functions."""
    factors = [
        series_pow(char_taylor_at(rv, point.l, point.m, L, centered), count)
        for rv, count in _grouped(terms).items()
    ]
    return series_product(factors, L)


def psi_series(terms: Sequence[IntegerRV], point: ResonantPoint, L: int) -> TruncatedSeries:
    """``Psi(h) = prod phi(t_j + h) / (phi(t_j) phi(h))`` over ``terms``."""
    acc = np.zeros(L + 1, dtype=complex)
    for rv, count in _grouped(terms).items():
        acc += count * _log_ratio_series(rv, point, L)
    return series_exp(TruncatedSeries(acc, L))


def _phase(point: ResonantPoint, k: np.ndarray) -> np.ndarray:
    # exp(-i t_j k) from the exact residue of l*k mod m
    residues = np.mod(-point.l * k.astype(np.int64), point.m)
    table = np.array([complex(cmath.exp(2j * math.pi * a / point.m)) for a in range(point.m)])
    for a, exact in ((0, 1), (point.m / 2, -1), (point.m / 4, 1j), (3 * point.m / 4, -1j)):
        if float(a).is_integer() and a < point.m:
            table[int(a)] = exact
    return table[residues]


@dataclass(frozen=True)
class ResonantTermData:
    """Everything needed to evaluate one resonant contribution at any ``k``."""

    point: ResonantPoint
    analysis: ResonanceAnalysis
    method: str
    order: int
    phi_tail: complex = 0j
    phi_head_derivs: tuple = ()
    psi_coeffs: tuple = ()
    tail_mean: float = 0.0
    tail_sigma: float = 0.0
    tail_edgeworth: EdgeworthData | None = None
    head_mean: float = 0.0
    head_phase: complex = 1 + 0j
    bound: float = 0.0
    _combined: tuple = field(default=(), repr=False)
    _terms: tuple = field(default=(), repr=False, compare=False)

    def combined_coeffs(self) -> tuple:
        """``D_s = sum_{u+l=s} Phibar_head^(l) C_u / l!`` for ``s < r`` (head centred)."""
        return self._combined

    @property
    def center(self) -> float:
        """Mean of the whole sum; the Hermite functions are centred here."""
        return self.tail_mean + self.head_mean

    def evaluate(self, k) -> np.ndarray:
        k = np.atleast_1d(np.asarray(k))
        if self.method in (DROPPED, NEGLIGIBLE_ARC):
            return np.zeros(k.shape, dtype=complex)
        if self.method == QUADRATURE:
            return _arc_quadrature(self._terms, self.point, k)
        ed = self.tail_edgeworth
        sig = self.tail_sigma
        x = (k.astype(float) - self.center) / sig
        total = np.zeros(k.shape, dtype=complex)
        r = self.order
        for s, d in enumerate(self._combined):
            if d == 0:
                continue
            layers = ed.layer_values(x, r - s, shift=s)
            scale = sig ** -np.arange(r - s, dtype=float)
            part = np.tensordot(scale, layers, axes=1)
            total += d * (-1j) ** s * sig ** (-s - 1) * part
        return _phase(self.point, k) * self.head_phase * self.phi_tail * total * gaussian(x)


def _arc_quadrature(terms, point: ResonantPoint, k: np.ndarray) -> np.ndarray:
    K = max(rv.bound for rv in terms) if terms else 1
    delta = interval_halfwidth(max(K, 1))
    width = max(int(np.max(np.abs(k))) if k.size else 0, 1) + K * len(terms)
    nodes, weights = np.polynomial.legendre.leggauss(int(width * delta) + 64)
    h = delta * nodes
    vals = char_product(terms, point.angle + h)
    phase = np.exp(-1j * np.outer(k.astype(float), h))
    integral = phase @ (weights * vals) * delta / (2 * math.pi)
    return _phase(point, k) * integral


def _arc_bound(terms, point: ResonantPoint, K: int) -> float:
    delta = interval_halfwidth(K)
    grid = point.angle + np.linspace(-delta, delta, 129)
    peak = float(np.max(log_abs_char_product(terms, grid)))
    return math.exp(peak) * delta / math.pi if peak > -700 else 0.0


def resonant_term_data(
    model: Model,
    N: int,
    analysis: ResonanceAnalysis,
    r: int,
    L: int | None = None,
    terms: Sequence[IntegerRV] | None = None,
) -> ResonantTermData:
    """Precompute the contribution of one nonzero resonant point."""
    if terms is None:
        terms = model.terms(N)
    L = default_order(r) if L is None else L
    point = analysis.point
    if analysis.dropped:
        return ResonantTermData(point, analysis, DROPPED, r)
    bound = _arc_bound(terms, point, model.K)
    if bound <= NEGLIGIBLE:
        return ResonantTermData(point, analysis, NEGLIGIBLE_ARC, r, bound=bound)
    heavy = set(analysis.heavy_indices)
    head = [rv for n, rv in enumerate(terms, start=1) if n in heavy]
    tail = [rv for n, rv in enumerate(terms, start=1) if n not in heavy]
    if not tail or total_variance(tail) <= 0:
        return ResonantTermData(point, analysis, QUADRATURE, r, bound=bound, _terms=tuple(terms))
    # centring the head keeps its mean out of the h-expansion; the phase
    # exp(i t_j E S_head) removed by the centring is restored separately
    hs = head_series(head, point, L)
    hs_bar = grouped_product_series(head, point, L, centered=True)
    head_mean = math.fsum(float(rv.mean) for rv in head)
    ps = psi_series(tail, point, L)
    combined = series_product([hs_bar, ps], L)
    ed = edgeworth_data(tail, r)
    derivs = tuple(hs[q] * math.factorial(q) for q in range(r))
    return ResonantTermData(
        point=point,
        analysis=analysis,
        method=EXPANSION,
        order=r,
        phi_tail=phi_product_at(tail, point),
        phi_head_derivs=derivs,
        psi_coeffs=tuple(ps[u] for u in range(r)),
        tail_mean=ed.mean,
        tail_sigma=ed.sigma,
        tail_edgeworth=ed,
        head_mean=head_mean,
        head_phase=cmath.exp(1j * point.angle * head_mean),
        bound=bound,
        _combined=tuple(combined[s] for s in range(r)),
    )


def resonant_term(model: Model, N: int, analysis: ResonanceAnalysis, r: int, k) -> complex | np.ndarray:
    """Contribution of one nonzero resonant point to ``P(S_N = k)``."""
    out = resonant_term_data(model, N, analysis, r).evaluate(k)
    return complex(out[0]) if np.ndim(k) == 0 else out


@dataclass(frozen=True)
class ExpansionEvaluation:
    k: int
    total: float
    zero_term: float
    resonant_terms: dict
    order: int
    imag_residue: float = 0.0


class GeneralizedExpansion:
    """Order-``r`` expansion of ``P(S_N = k)`` with all resonant corrections.

    Construction does the per-point work once; :meth:`density` and
    :meth:`evaluate` are cheap afterwards.
    """

    def __init__(self, model: Model, N: int, r: int, L: int | None = None):
        if r < 1:
            raise ValidationError("order r must be at least 1")
        self.model = model
        self.N = N
        self.r = r
        self.L = default_order(r) if L is None else L
        terms = model.terms(N)
        if total_variance(terms) <= 0:
            raise DegenerateVarianceError(f"V_N = 0 at N = {N}")
        self.terms = terms
        self.zero = edgeworth_data(terms, r)
        self.points = resonant_set(model.K)
        self.data = [
            resonant_term_data(model, N, analyze_point(model, N, p, r, terms), r, self.L, terms)
            for p in self.points
        ]

    @property
    def sigma(self) -> float:
        return self.zero.sigma

    @property
    def mean(self) -> float:
        return self.zero.mean

    @property
    def active(self) -> list[ResonantTermData]:
        return [d for d in self.data if d.method in (EXPANSION, QUADRATURE)]

    @property
    def period(self) -> int:
        """``J``: lcm of denominators of the contributing points."""
        return lcm_denominators(d.point for d in self.active)

    def point_values(self, k) -> dict:
        k = np.atleast_1d(np.asarray(k))
        return {d.point: d.evaluate(k) for d in self.active}

    def complex_sum(self, k) -> np.ndarray:
        k = np.atleast_1d(np.asarray(k))
        total = classical_density(self.zero, k, self.r).astype(complex)
        for d in self.active:
            total = total + d.evaluate(k)
        return total

    def density(self, k) -> np.ndarray:
        return np.real(self.complex_sum(k))

    def evaluate(self, k: int) -> ExpansionEvaluation:
        zero = float(classical_density(self.zero, k, self.r))
        parts = {d.point: complex(d.evaluate(k)[0]) for d in self.active}
        resonant = sum(parts.values(), 0j)
        return ExpansionEvaluation(
            k=int(k),
            total=zero + resonant.real,
            zero_term=zero,
            resonant_terms=parts,
            order=self.r,
            imag_residue=abs(resonant.imag),
        )

    def frozen_amplitudes(self, k0: int) -> dict:
        """Per-point amplitudes ``A_j = value_j(k0) exp(i t_j k0)``, zero point included."""
        k0 = np.atleast_1d(np.asarray(k0))
        out = {ResonantPoint(0, 1): complex(classical_density(self.zero, k0, self.r)[0])}
        for d in self.active:
            out[d.point] = complex(d.evaluate(k0)[0] / _phase(d.point, k0)[0])
        return out

    def symbolic_terms(self, recenter_degree: int | None = None) -> dict:
        """Per-point polynomials in ``k_N`` after dividing out ``g(k_N)``.

        Returns ``{point: coeffs}`` such that the expansion equals
        ``g(k_N) * sum_j exp(-i t_j k) * poly_j(k_N)``, with the zero point's
        polynomial from the classical expansion.  Tail-centred terms are
        moved to ``k_N`` by truncating the Taylor series of
        ``g(alpha x + beta) / g(x)`` at ``recenter_degree`` (default ``r``).
        """
        from numpy.polynomial import polynomial as npoly

        r = self.r
        d2 = r if recenter_degree is None else recenter_degree
        sig = self.sigma
        zero = np.zeros(1)
        for w, layer in enumerate(symbolic_layers(self.zero, r)):
            zero = npoly.polyadd(zero, layer * sig ** (-w - 1))
        out = {ResonantPoint(0, 1): zero.astype(complex)}
        for d in self.active:
            if d.method != EXPANSION:
                continue
            alpha = sig / d.tail_sigma
            beta = (self.mean - d.center) / d.tail_sigma
            # x_tail = alpha x + beta; g(x_tail)/g(x) = exp(expo(x))
            expo = np.array([-beta * beta / 2, -alpha * beta, -(alpha * alpha - 1) / 2])
            ratio = np.array([1.0])
            power = np.array([1.0])
            for j in range(1, d2 + 1):
                power = npoly.polymul(power, expo) / j
                ratio = npoly.polyadd(ratio, power)
            poly = np.zeros(1, dtype=complex)
            for s, coef in enumerate(d.combined_coeffs()):
                for w, layer in enumerate(symbolic_layers(d.tail_edgeworth, r - s, shift=s)):
                    # substitute x_tail = alpha x + beta into the layer polynomial
                    sub = np.zeros(1)
                    for q, c in enumerate(layer):
                        sub = npoly.polyadd(sub, c * npoly.polypow([beta, alpha], q))
                    factor = coef * (-1j) ** s * d.tail_sigma ** (-s - 1 - w)
                    poly = npoly.polyadd(poly, factor * sub)
            poly = npoly.polymul(poly, ratio) * d.phi_tail * d.head_phase
            out[d.point] = poly
        return out


def phase_matrix(points: Sequence[ResonantPoint], ks) -> np.ndarray:
    """``V[i, j] = exp(-i t_j k_i)`` with exact-residue phases."""
    ks = np.atleast_1d(np.asarray(ks))
    return np.column_stack([_phase(p, ks) for p in points]) if points else np.zeros((ks.size, 0))


def recover_amplitudes(points: Sequence[ResonantPoint], ks, samples) -> dict:
    """Least-squares solve of ``samples[i] = sum_j V[i, j] A_j`` for the ``A_j``.

    Distinct points on a common grid ``2 pi Z / J`` give independent columns
    once ``len(ks) >= len(points)`` consecutive integers are sampled.
    """
    points = list(points)
    V = phase_matrix(points, ks)
    if V.shape[0] < V.shape[1]:
        raise ValidationError(f"need at least {V.shape[1]} samples, got {V.shape[0]}")
    if np.linalg.matrix_rank(V) < V.shape[1]:
        raise ValidationError("phase matrix is rank deficient")
    coef, *_ = np.linalg.lstsq(V, np.asarray(samples, dtype=complex), rcond=None)
    return dict(zip(points, coef))


def generalized_density(model: Model, N: int, r: int, k) -> ExpansionEvaluation:
    """Generalized expansion of order ``r`` at a single lattice point."""
    return GeneralizedExpansion(model, N, r).evaluate(k)


def _resonant_phis(terms, K: int) -> list[tuple[ResonantPoint, complex]]:
    return [(p, phi_product_at(terms, p)) for p in resonant_set(K)]


def order1_density(model: Model, N: int, k) -> np.ndarray | float:
    """``(1 + sum_j exp(-i t_j k) Phi_N(t_j)) g(k_N) / sigma_N`` over all nonzero resonant points."""
    terms = model.terms(N)
    ed = edgeworth_data(terms, 1)
    kk = np.atleast_1d(np.asarray(k))
    x = (kk.astype(float) - ed.mean) / ed.sigma
    corr = np.ones(kk.shape, dtype=complex)
    for p, phi in _resonant_phis(terms, model.K):
        if phi != 0:
            corr += _phase(p, kk) * phi
    out = np.real(corr) * gaussian(x) / ed.sigma
    return float(out[0]) if np.ndim(k) == 0 else out


@dataclass(frozen=True)
class SecondOrderPoint:
    point: ResonantPoint
    dropped: bool
    phi_full: complex
    phi_tail: complex
    phi_head: complex
    phi_head_deriv: complex
    c1: complex
    head_mean: float
    tail_gamma: float

    def linear_coeff(self) -> complex:
        return self.phi_head * (-1j * self.c1 - self.head_mean) - 1j * self.phi_head_deriv

    def cubic_coeff(self) -> complex:
        return self.phi_head * self.tail_gamma / 6


def second_order_points(model: Model, N: int, terms=None) -> list[SecondOrderPoint]:
    """Per-point data of the closed second-order formula."""
    if terms is None:
        terms = model.terms(N)
    full = edgeworth_data(terms, 2)
    out = []
    for p in resonant_set(model.K):
        an = analyze_point(model, N, p, 2, terms)
        phi_full = phi_product_at(terms, p)
        heavy = set(an.heavy_indices)
        tail = [rv for n, rv in enumerate(terms, start=1) if n not in heavy]
        if an.dropped or not tail or total_variance(tail) <= 0:
            out.append(SecondOrderPoint(p, True, phi_full, phi_full, 1 + 0j, 0j, 0j, 0.0, full.gamma))
            continue
        head = [rv for n, rv in enumerate(terms, start=1) if n in heavy]
        hs = head_series(head, p, 1)
        tail_ed = edgeworth_data(tail, 1)
        c1 = 1j * sum(count * a_coeff(rv, p) for rv, count in _grouped(tail).items())
        out.append(
            SecondOrderPoint(
                point=p,
                dropped=False,
                phi_full=phi_full,
                phi_tail=phi_product_at(tail, p),
                phi_head=hs[0],
                phi_head_deriv=hs[1],
                c1=c1,
                head_mean=math.fsum(float(rv.mean) for rv in head),
                tail_gamma=tail_ed.gamma,
            )
        )
    return out


def second_line_resonant(model: Model, N: int, k, points=None) -> np.ndarray:
    """Resonant part of the ``sigma_N**-2`` line of the closed second-order formula."""
    terms = model.terms(N)
    full = edgeworth_data(terms, 2)
    points = second_order_points(model, N, terms) if points is None else points
    kk = np.atleast_1d(np.asarray(k))
    x = (kk.astype(float) - full.mean) / full.sigma
    h3 = x ** 3 - 3 * x
    acc = np.zeros(kk.shape, dtype=complex)
    for sp in points:
        poly = sp.linear_coeff() * x + sp.cubic_coeff() * h3
        acc += _phase(sp.point, kk) * sp.phi_tail * poly
    return acc


def order2_density(model: Model, N: int, k) -> np.ndarray | float:
    """Closed second-order expansion.

    ``(1 + sum_j e^{-it_j k} Phi_N(t_j)) g/sigma
    + g/sigma**2 * (gamma He_3(x)/6 + sum_j e^{-it_j k} Phi_tail(t_j) P_j(x))``
    with ``P_j(x) = (Phi_head (-i C_1 - E S_head) - i Phi_head') x + Phi_head gamma_j He_3(x)/6``.
    """
    terms = model.terms(N)
    full = edgeworth_data(terms, 2)
    kk = np.atleast_1d(np.asarray(k))
    x = (kk.astype(float) - full.mean) / full.sigma
    g = gaussian(x)
    first = np.asarray(order1_density(model, N, kk))
    second = full.gamma * (x ** 3 - 3 * x) / 6 + np.real(second_line_resonant(model, N, kk))
    out = first + g * second / full.sigma ** 2
    return float(out[0]) if np.ndim(k) == 0 else out


def check_first_correction_hypotheses(model: Model, N: int, terms=None) -> list[str]:
    """Reasons the closed first correction does not apply (empty if it does)."""
    if terms is None:
        terms = model.terms(N)
    problems = []
    for p in resonant_set(model.K):
        an = analyze_point(model, N, p, 1, terms)
        if an.N0 == 0:
            continue
        smallest = min(abs(char_fn_deriv_at(rv, p.l, p.m, 0)) for rv in set(terms))
        if smallest <= ZERO_TOL:
            problems.append(f"{p}: {an.N0} heavy terms and a term with phi(t) = 0")
    return problems


def leading_correction(model: Model, N: int, r: int, k) -> np.ndarray | float:
    """Classical order-``r`` density plus the first resonant correction.

    Adds ``sum_j e^{-i t_j k} Phi_N(t_j) (1/sigma + A_j k_N / sigma**2) g(k_N)``
    with ``A_j = sum_n a_n(t_j)``, the mean shift picked up near ``t_j``.
    """
    terms = model.terms(N)
    problems = check_first_correction_hypotheses(model, N, terms)
    if problems:
        raise HypothesisError("; ".join(problems))
    ed = edgeworth_data(terms, r)
    kk = np.atleast_1d(np.asarray(k))
    x = (kk.astype(float) - ed.mean) / ed.sigma
    base = np.asarray(classical_density(ed, kk, r), dtype=float)
    corr = np.zeros(kk.shape, dtype=complex)
    groups = _grouped(terms)
    for p in resonant_set(model.K):
        phi = phi_product_at(terms, p)
        if phi == 0:
            continue
        shift = sum(count * a_coeff(rv, p) for rv, count in groups.items())
        corr += _phase(p, kk) * phi * (1 / ed.sigma + shift * x / ed.sigma ** 2)
    out = base + np.real(corr) * gaussian(x)
    return float(out[0]) if np.ndim(k) == 0 else out
