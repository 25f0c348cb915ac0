"""Finite-N diagnostics for local limit theorems and Edgeworth expansions.

Each asymptotic condition is rendered as a sequence of values indexed by
``N``.  Nothing here decides whether a limit is zero; the reports carry a
textual hint saying how the sequence should be read.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .exact_dist import Model, format_prob, mod_marginal, sum_pmf, uniform_distance
from .exceptions import ValidationError
from .lattice_rv import char_fn_deriv_at, residue_profile
from .resonance import ResonantPoint, decay_constant, resonant_set, threshold_R, total_variance
from .trig_expansion import _grouped, grouped_product_series, phi_product_at

AUDIT_SAMPLE = 32
MAX_SBAR = 6


@dataclass
class DiagnosticReport:
    name: str
    values: list = field(default_factory=list)
    verdict_hint: str = ""
    crossings: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def add(self, N: int, value: float) -> None:
        if self.values and N <= self.values[-1][0]:
            raise ValidationError("N values must be strictly increasing")
        self.values.append((N, float(value)))

    def as_dict(self) -> dict[int, float]:
        return dict(self.values)

    def write_csv(self, stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["N", "value"])
        for N, v in self.values:
            writer.writerow([N, format_prob(v)])

    def summary(self) -> str:
        lines = [f"{self.name}: {self.verdict_hint}"]
        lines += [f"  N={N:<8d} {v:.6g}" for N, v in self.values]
        if self.crossings:
            lines.append(f"  crossings at N = {self.crossings}")
        return "\n".join(lines)


def _check_Ns(Ns: Sequence[int]) -> list[int]:
    Ns = [int(N) for N in Ns]
    if not Ns:
        raise ValidationError("empty N list")
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise ValidationError("N values must be strictly increasing")
    return Ns


def _check_h(model: Model, h: int) -> None:
    if not 2 <= h <= max(2, 2 * model.K):
        raise ValidationError(f"h must lie in 2..{2 * model.K}")


def llt_diagnostic(model: Model, Ns: Sequence[int]) -> DiagnosticReport:
    """``max_t |Phi_N(t)|`` over nonzero resonant points."""
    rep = DiagnosticReport("llt", verdict_hint="-> 0 required for the LLT")
    points = resonant_set(model.K)
    for N in _check_Ns(Ns):
        terms = model.terms(N)
        per_point = {p: abs(phi_product_at(terms, p)) for p in points}
        rep.add(N, max(per_point.values()))
        rep.details[N] = per_point
    return rep


def not_most_likely_mass(model: Model, N: int, h: int):
    """``sum_n P(X_n != m_n(h) mod h)`` and ``M_N(h)``."""
    miss = 0
    second = 0
    for rv, count in _grouped(model.terms(N)).items():
        prof = residue_profile(rv, h)
        miss += count * (1 - prof.masses[prof.most_likely])
        second += count * prof.second_mass
    return miss, second


def prokhorov_diagnostic(model: Model, Ns: Sequence[int], h: int) -> DiagnosticReport:
    """Partial sums of the Prokhorov series mod ``h`` (alongside ``M_N(h)``)."""
    _check_h(model, h)
    rep = DiagnosticReport(f"prokhorov(h={h})", verdict_hint="-> infinity required for the SLLT")
    for N in _check_Ns(Ns):
        miss, second = not_most_likely_mass(model, N, h)
        rep.add(N, float(miss))
        rep.details[N] = {"M_N": float(second)}
    return rep


@dataclass(frozen=True)
class QuantitativeProkhorov:
    N: int
    r: int
    M_N: float
    minimizing_h: int
    threshold: float
    holds: bool


def quantitative_prokhorov(model: Model, N: int, r: int) -> QuantitativeProkhorov:
    """Whether ``min_h sum_n P(X_n != m_n(h)) >= R(r, K) ln V_N``."""
    best = None
    for h in range(2, 2 * model.K + 1):
        miss, _ = not_most_likely_mass(model, N, h)
        if best is None or miss < best[0]:
            best = (miss, h)
    var = total_variance(model.terms(N))
    log_v = math.log(var) if var > 0 else -math.inf
    threshold = threshold_R(r, model.K) * log_v
    M = float(best[0])
    return QuantitativeProkhorov(N, r, M, best[1], threshold, M >= threshold)


def quantitative_prokhorov_report(model: Model, Ns: Sequence[int], r: int) -> DiagnosticReport:
    rep = DiagnosticReport(
        f"quantitative_prokhorov(r={r})",
        verdict_hint="value = M_N - R ln V_N; >= 0 is sufficient for an order-r expansion",
    )
    prev = None
    for N in _check_Ns(Ns):
        q = quantitative_prokhorov(model, N, r)
        rep.add(N, q.M_N - q.threshold)
        rep.details[N] = q
        if prev is not None and prev != q.holds:
            rep.crossings.append(N)
        prev = q.holds
    return rep


def centered_derivatives(terms, point: ResonantPoint, r: int) -> list[complex]:
    """``Phibar^(l)(t)`` for ``l < r`` from the product of centered Taylor series."""
    L = max(r - 1, 0)
    s = grouped_product_series(terms, point, L, centered=True)
    return [s[q] * math.factorial(q) for q in range(r)]


def order_r_diagnostic(model: Model, Ns: Sequence[int], r: int) -> DiagnosticReport:
    """``max_{t, l<r} sigma**(r-1-l) |Phibar^(l)(t)|``."""
    if r < 1:
        raise ValidationError("r must be at least 1")
    rep = DiagnosticReport(f"order_r(r={r})", verdict_hint=f"-> 0 required for an order-{r} expansion")
    points = resonant_set(model.K)
    for N in _check_Ns(Ns):
        terms = model.terms(N)
        sigma = math.sqrt(total_variance(terms))
        per_point = {}
        for p in points:
            derivs = centered_derivatives(terms, p, r)
            per_point[p] = max(sigma ** (r - 1 - l) * abs(d) for l, d in enumerate(derivs))
        rep.add(N, max(per_point.values()))
        rep.details[N] = per_point
    return rep


def superstable_diagnostic(
    model: Model, Ns: Sequence[int], r: int, sbar: int, seed: int = 0
) -> DiagnosticReport:
    """``max sigma**(r-1) |Phi_{N; removed}(t)|`` over removals of at most ``sbar`` terms.

    Candidates are the ``sbar`` indices of smallest ``|phi_n(t)|`` at every
    nonzero resonant point plus a seeded random audit sample.  Removing the
    smallest factors maximizes the modulus, so the maximum over the pool is
    the maximum over all tuples; the audit only re-checks that claim.
    """
    if not 0 <= sbar <= MAX_SBAR:
        raise ValidationError(f"sbar must lie in 0..{MAX_SBAR}")
    rep = DiagnosticReport(
        f"superstable(r={r}, sbar={sbar})",
        verdict_hint="-> 0 for every bounded removal is required for a superstable expansion; "
        "a pooled search can refute but not certify",
    )
    points = resonant_set(model.K)
    rng = random.Random(seed)
    for N in _check_Ns(Ns):
        L = model.row_length(N)
        if L < sbar:
            raise ValidationError(f"pool exhausted: row length {L} < sbar = {sbar}")
        terms = model.terms(N)
        sigma = math.sqrt(total_variance(terms))
        distinct = list(_grouped(terms))
        moduli = {}
        for p in points:
            cache = {rv: abs(char_fn_deriv_at(rv, p.l, p.m, 0)) for rv in distinct}
            moduli[p] = [cache[rv] for rv in terms]
        pool: set[int] = set()
        for p in points:
            order = sorted(range(L), key=lambda i: (moduli[p][i], i))
            pool.update(order[:sbar])
        audit = rng.sample(range(L), min(AUDIT_SAMPLE, L))
        pool.update(audit)
        best = 0.0
        per_point = {}
        for p in points:
            mods = moduli[p]
            zeros = {i for i, v in enumerate(mods) if v == 0}
            logs = {i: math.log(v) for i, v in enumerate(mods) if v > 0}
            total = math.fsum(logs.values())

            def removal(tup) -> float:
                if not zeros <= set(tup):
                    return 0.0
                kept = total - math.fsum(logs[i] for i in set(tup) if i in logs)
                return math.exp(kept) if kept > -745 else 0.0

            ranked = sorted(pool, key=lambda i: (mods[i], i))
            value = removal(ranked[:sbar])
            for _ in range(4):
                tup = rng.sample(audit, min(rng.randint(0, sbar), len(audit)))
                value = max(value, removal(tup))
            per_point[p] = sigma ** (r - 1) * value
            best = max(best, per_point[p])
        rep.add(N, best)
        rep.details[N] = {"per_point": per_point, "pool_size": len(pool)}
    return rep


def uniformity_diagnostic(
    model: Model, Ns: Sequence[int], h: int, r: int, exact: bool = True
) -> DiagnosticReport:
    """``sigma**(r-1) * max_a |P(S_N = a mod h) - 1/h|`` from the exact pmf."""
    _check_h(model, h)
    rep = DiagnosticReport(
        f"uniformity(h={h}, r={r})",
        verdict_hint=f"-> 0 (as o(sigma^{1 - r})) expected when the expansion holds",
    )
    for N in _check_Ns(Ns):
        terms = model.terms(N)
        sigma = math.sqrt(total_variance(terms))
        dist = uniform_distance(mod_marginal(sum_pmf(model, N, exact=exact), h))
        rep.add(N, sigma ** (r - 1) * float(dist))
        rep.details[N] = dist
    return rep


def fourier_mod_h(model: Model, N: int, h: int) -> list[complex]:
    """``Phi_N(2 pi b / h)`` for ``b = 1 .. h-1``."""
    terms = model.terms(N)
    out = []
    for b in range(1, h):
        g = math.gcd(b, h)
        out.append(phi_product_at(terms, ResonantPoint(b // g, h // g)))
    return out


def roz0_bound(model: Model, N: int, m: int) -> float:
    """``exp(-c0 M_N(m))``, an upper bound for ``|Phi_N(2 pi l/m)|``."""
    _, second = not_most_likely_mass(model, N, m)
    return math.exp(-decay_constant(model.K) * float(second))
