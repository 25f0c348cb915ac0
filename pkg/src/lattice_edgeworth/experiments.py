"""Error-decay tables, rate fits and the golden expectations of the builtin families."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Sequence

import numpy as np

from .conditions import order_r_diagnostic, superstable_diagnostic
from .edgeworth import classical_density, edgeworth_data
from .exact_dist import Model, format_prob, sum_pmf
from .exceptions import ResourceGuardError, ValidationError
from .models import ModelConfig, build_model
from .resonance import resonant_set, total_variance
from .trig_expansion import (
    GeneralizedExpansion,
    order1_density,
    order2_density,
    phi_product_at,
    second_line_resonant,
)

EXACT_CELL_CAP = 200_000
DOUBLE_CELL_CAP = 2_000_000


@dataclass(frozen=True)
class ErrorTableRow:
    N: int
    sigma: float
    r: int
    sup_err_classical: float
    sup_err_generalized: float
    phi_abs: dict = field(default_factory=dict)

    @property
    def scaled_classical(self) -> float:
        return self.sigma ** self.r * self.sup_err_classical

    @property
    def scaled_generalized(self) -> float:
        return self.sigma ** self.r * self.sup_err_generalized


def _check_Ns(Ns: Sequence[int]) -> list[int]:
    Ns = [int(N) for N in Ns]
    if not Ns:
        raise ValidationError("N list is empty")
    if any(N < 1 for N in Ns):
        raise ValidationError("N values must be positive")
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise ValidationError("N values must be strictly increasing")
    return Ns


def evaluation_range(terms) -> range:
    """Oracle support widened by ``ceil(3 sigma)`` on each side."""
    lo = sum(min(rv.support) for rv in terms)
    hi = sum(max(rv.support) for rv in terms)
    ext = math.ceil(3 * math.sqrt(total_variance(terms)))
    return range(lo - ext, hi + ext + 1)


def check_resource(model: Model, N: int, exact: bool, cap: int | None = None) -> int:
    """Cells of the evaluation range; raises when over the cap."""
    cap = (EXACT_CELL_CAP if exact else DOUBLE_CELL_CAP) if cap is None else cap
    # cheap upper bound first so huge rows never get materialised
    rough = model.row_length(N) * (2 * model.K + 1)
    if rough > 4 * cap:
        raise ResourceGuardError(f"N = {N}: about {rough} cells exceeds the cap of {cap}")
    cells = len(evaluation_range(model.terms(N)))
    if cells > cap:
        raise ResourceGuardError(f"N = {N}: {cells} cells exceeds the cap of {cap}")
    return cells


def sup_error(model: Model, N: int, approx: Callable, exact: bool = False) -> float:
    """``max_k |P(S_N = k) - approx(k)|`` over :func:`evaluation_range`."""
    terms = model.terms(N)
    ks = np.array(evaluation_range(terms))
    pmf = sum_pmf(model, N, exact=exact)
    oracle = np.zeros(ks.size)
    start = pmf.offset - ks[0]
    oracle[start : start + len(pmf)] = pmf.as_array()
    return float(np.max(np.abs(oracle - np.asarray(approx(ks), dtype=float))))


def _row(model: Model, N: int, r: int, exact: bool) -> ErrorTableRow:
    terms = model.terms(N)
    ks = np.array(evaluation_range(terms))
    pmf = sum_pmf(model, N, exact=exact)
    oracle = np.zeros(ks.size)
    start = pmf.offset - ks[0]
    oracle[start : start + len(pmf)] = pmf.as_array()
    gen = GeneralizedExpansion(model, N, r)
    classical = classical_density(gen.zero, ks, r)
    phis = {p: abs(phi_product_at(terms, p)) for p in resonant_set(model.K)}
    return ErrorTableRow(
        N=N,
        sigma=gen.sigma,
        r=r,
        sup_err_classical=float(np.max(np.abs(oracle - classical))),
        sup_err_generalized=float(np.max(np.abs(oracle - gen.density(ks)))),
        phi_abs=phis,
    )


def error_table(
    model: Model,
    r: int,
    Ns: Sequence[int],
    exact: bool = False,
    cap: int | None = None,
    workers: int = 1,
) -> list[ErrorTableRow]:
    """Sup errors of the classical and generalized expansions against the exact pmf."""
    if r < 1:
        raise ValidationError("r must be at least 1")
    Ns = _check_Ns(Ns)
    for N in Ns:
        check_resource(model, N, exact, cap)
    if workers <= 1:
        return [_row(model, N, r, exact) for N in Ns]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda N: _row(model, N, r, exact), Ns))


def resonance_table(model: Model, Ns: Sequence[int]) -> list[dict]:
    """``|Phi_N(t_j)|`` at every nonzero resonant point (no pmf needed)."""
    points = resonant_set(model.K)
    out = []
    for N in _check_Ns(Ns):
        terms = model.terms(N)
        row = {"N": N}
        row.update({str(p): abs(phi_product_at(terms, p)) for p in points})
        out.append(row)
    return out


def _column_value(row, column):
    if callable(column):
        return column(row)
    if isinstance(row, dict):
        return row[column]
    return getattr(row, column)


def rate_fit(rows, column) -> tuple[float, float, float]:
    """Least-squares fit of ``log(value) = slope * log(N) + intercept``.

    ``column`` is an attribute name, a dict key, or a callable on a row.
    Returns ``(slope, intercept, residual)`` with the RMS residual.
    """
    rows = list(rows)
    if len(rows) < 3:
        raise ValidationError("rate_fit needs at least 3 rows")
    Ns = np.array([float(_column_value(r, "N")) for r in rows])
    vals = np.array([float(_column_value(r, column)) for r in rows])
    if np.any(vals <= 0) or not np.all(np.isfinite(vals)):
        raise ValidationError("rate_fit needs positive finite values")
    A = np.column_stack([np.log(Ns), np.ones_like(Ns)])
    (slope, intercept), *_ = np.linalg.lstsq(A, np.log(vals), rcond=None)
    resid = np.log(vals) - A @ np.array([slope, intercept])
    return float(slope), float(intercept), float(np.sqrt(np.mean(resid ** 2)))


def table_header(points) -> list[str]:
    return [
        "N",
        "sigma",
        "sup_err_classical",
        "sup_err_generalized",
        "scaled_classical",
        "scaled_generalized",
    ] + [f"phi_abs[{p}]" for p in points]


def write_table_csv(rows: Sequence[ErrorTableRow], stream) -> None:
    points = sorted({p for row in rows for p in row.phi_abs})
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(table_header(points))
    for row in rows:
        writer.writerow(
            [row.N]
            + [
                format_prob(v)
                for v in (
                    row.sigma,
                    row.sup_err_classical,
                    row.sup_err_generalized,
                    row.scaled_classical,
                    row.scaled_generalized,
                )
            ]
            + [format_prob(row.phi_abs.get(p, 0.0)) for p in points]
        )


def load_golden() -> list[dict]:
    text = resources.files("lattice_edgeworth").joinpath("data/golden.json").read_text()
    return json.loads(text)["expectations"]


def _golden_series(entry: dict) -> list[float]:
    cfg = ModelConfig(entry["family"], dict(entry["params"]), entry.get("mode", "double"))
    model = build_model(cfg)
    Ns = entry["N"]
    measure = entry["measure"]
    r = entry.get("r", 1)
    if measure == "scaled_error_order1":
        return [
            total_variance(model.terms(N)) * sup_error(model, N, lambda k, N=N: order1_density(model, N, k))
            for N in Ns
        ]
    if measure == "scaled_error_order2":
        return [
            total_variance(model.terms(N)) ** 1.5
            * sup_error(model, N, lambda k, N=N: order2_density(model, N, k))
            for N in Ns
        ]
    if measure == "scaled_error_classical":
        out = []
        for N in Ns:
            ed = edgeworth_data(model.terms(N), r)
            out.append(ed.sigma ** r * sup_error(model, N, lambda k, ed=ed: classical_density(ed, k, r)))
        return out
    if measure == "scaled_error_generalized":
        out = []
        for N in Ns:
            gen = GeneralizedExpansion(model, N, r)
            out.append(gen.sigma ** r * sup_error(model, N, gen.density))
        return out
    if measure == "second_line_max":
        return [float(np.max(np.abs(second_line_resonant(model, N, np.arange(-N, N + 1))))) for N in Ns]
    if measure == "phi_scaled":
        power = entry["power"]
        return [max(abs(phi_product_at(model.terms(N), p)) for p in resonant_set(model.K)) * N ** power for N in Ns]
    if measure == "order_r":
        return [v for _, v in order_r_diagnostic(model, Ns, r).values]
    if measure == "superstable":
        rep = superstable_diagnostic(model, Ns, r, entry["sbar"])
        return [v / total_variance(model.terms(N)) ** 0.5 for N, v in rep.values]
    raise ValidationError(f"unknown golden measure {measure!r}")


def check_golden(entry: dict) -> tuple[bool, list[float]]:
    """Evaluate one golden expectation; returns ``(ok, observed values)``."""
    vals = _golden_series(entry)
    expect = entry["expect"]
    kind = expect["kind"]
    if kind == "at_most":
        ok = all(v <= expect["value"] for v in vals)
    elif kind == "at_least":
        ok = all(v >= expect["value"] for v in vals)
    elif kind == "equals":
        ok = all(abs(v - expect["value"]) <= expect.get("tol", 0.0) for v in vals)
    elif kind == "decreasing":
        factor = expect.get("factor", 1.0)
        ok = vals[-1] * factor <= vals[0] and all(b <= a for a, b in zip(vals, vals[1:]))
    elif kind == "within_ratio":
        lo, hi = min(vals), max(vals)
        ok = hi <= lo * (1 + expect["value"])
    else:
        raise ValidationError(f"unknown golden expectation {kind!r}")
    return ok, vals
