"""Builtin model families and their configuration.

A :class:`ModelConfig` names a family and its parameters; :func:`build_model`
validates them and returns a deterministic :class:`Model`.  Numeric
parameters are read as exact rationals (``0.3`` becomes ``3/10``), so the
same config drives both exact and double runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

import numpy as np

from .exact_dist import ARRAY, SEQUENCE, Model
from .exceptions import ValidationError
from .lattice_rv import IntegerRV, uniform_on

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

FAMILIES = {
    "iid": "iid terms with the given values and probabilities",
    "span": "iid terms on s + h*Z with step h > 1",
    "eg1_theta_over_n": "0 w.p. min(1, theta/n), +-1 otherwise",
    "eg1_theta_over_n2": "0 w.p. min(1, theta/n**2), +-1 otherwise",
    "nonsym": "values -1, 0, 3 with b_n = min(gamma/n, cap) on 0",
    "exuniform": "r copies uniform on {Lm, 1..m-1}, then uniform on {-m, 0, m}",
    "custom-table": "rows of value:probability tables, cycled",
    "array-row-rule": "row N has N terms, 0 w.p. min(1, theta/N), +-1 otherwise",
}

NUMERIC_MODES = ("exact", "double")
MAX_NONSYM_CAP = Fraction(1, 8)


def _rational(name: str, value) -> Fraction:
    if isinstance(value, bool):
        raise ValidationError(f"{name}: expected a number, got {value!r}")
    try:
        if isinstance(value, float):
            return Fraction(str(value))
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"{name}: expected a number, got {value!r}") from exc


def _positive(name: str, value) -> Fraction:
    q = _rational(name, value)
    if q <= 0:
        raise ValidationError(f"{name}: must be positive, got {q}")
    return q


def _integer(name: str, value, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)) and not (
        isinstance(value, float) and value.is_integer()
    ):
        raise ValidationError(f"{name}: expected an integer, got {value!r}")
    try:
        out = int(value)
    except ValueError as exc:
        raise ValidationError(f"{name}: expected an integer, got {value!r}") from exc
    if minimum is not None and out < minimum:
        raise ValidationError(f"{name}: must be at least {minimum}, got {out}")
    return out


def _table(name: str, table) -> dict[int, Fraction]:
    if not isinstance(table, Mapping) or not table:
        raise ValidationError(f"{name}: expected a nonempty value -> probability table")
    out = {}
    for key, p in table.items():
        v = _integer(f"{name} value", key)
        out[v] = out.get(v, Fraction(0)) + _rational(f"{name}[{key}]", p)
    return out


@dataclass(frozen=True)
class ModelConfig:
    family: str
    params: dict = field(default_factory=dict)
    numeric_mode: str = "exact"

    @property
    def exact(self) -> bool:
        return self.numeric_mode == "exact"


def _rv(table: Mapping[int, Fraction], exact: bool, name: str) -> IntegerRV:
    try:
        rv = IntegerRV.from_dict(table, exact=True)
    except ValidationError as exc:
        raise ValidationError(f"{name}: {exc}") from exc
    return rv if exact else rv.to_float()


def _eg1_term(p: Fraction, exact: bool) -> IntegerRV:
    table = {0: p, -1: (1 - p) / 2, 1: (1 - p) / 2}
    return _rv({v: q for v, q in table.items() if q}, exact, "eg1")


def _check_keys(cfg: ModelConfig, allowed: set[str], required: set[str]) -> None:
    keys = set(cfg.params)
    unknown = keys - allowed
    if unknown:
        raise ValidationError(f"{cfg.family}: unknown parameter(s) {sorted(unknown)}")
    missing = required - keys
    if missing:
        raise ValidationError(f"{cfg.family}: missing parameter(s) {sorted(missing)}")


def _build_iid(cfg, exact):
    _check_keys(cfg, {"values", "probs"}, {"values", "probs"})
    values, probs = cfg.params["values"], cfg.params["probs"]
    if not isinstance(values, (list, tuple)) or not isinstance(probs, (list, tuple)):
        raise ValidationError("iid: values and probs must be lists")
    if len(values) != len(probs):
        raise ValidationError("iid: values and probs differ in length")
    table: dict[int, Fraction] = {}
    for v, p in zip(values, probs):
        v = _integer("iid values", v)
        table[v] = table.get(v, Fraction(0)) + _rational("iid probs", p)
    rv = _rv(table, exact, "iid")
    return Model(SEQUENCE, lambda N, n: rv, rv.bound, name="iid", params=dict(cfg.params))


def _build_span(cfg, exact):
    _check_keys(cfg, {"shift", "step", "probs"}, {"step", "probs"})
    s = _integer("span shift", cfg.params.get("shift", 0))
    h = _integer("span step", cfg.params["step"], minimum=2)
    probs = cfg.params["probs"]
    if not isinstance(probs, (list, tuple)) or len(probs) < 2:
        raise ValidationError("span: probs must list at least two probabilities")
    table = {s + h * j: _rational("span probs", p) for j, p in enumerate(probs)}
    rv = _rv(table, exact, "span")
    return Model(SEQUENCE, lambda N, n: rv, rv.bound, name="span", params=dict(cfg.params))


def _build_eg1(cfg, exact, power):
    _check_keys(cfg, {"theta"}, {"theta"})
    theta = _positive("theta", cfg.params["theta"])

    def rule(N, n):
        return _eg1_term(min(Fraction(1), theta / n ** power), exact)

    return Model(SEQUENCE, rule, 1, name=cfg.family, params=dict(cfg.params))


def _build_nonsym(cfg, exact):
    _check_keys(cfg, {"gamma", "cap", "mean_zero"}, {"gamma"})
    gamma = _positive("gamma", cfg.params["gamma"])
    cap = _positive("cap", cfg.params.get("cap", Fraction(1, 10)))
    if cap >= MAX_NONSYM_CAP:
        raise ValidationError(f"nonsym: cap must be below 1/8 (b_n < 1/8), got {cap}")
    mean_zero = cfg.params.get("mean_zero", False)
    if not isinstance(mean_zero, bool):
        raise ValidationError("nonsym: mean_zero must be true or false")

    def rule(N, n):
        b = min(gamma / n, cap)
        if mean_zero:
            a, c = 3 * (1 - b) / 4, (1 - b) / 4
        else:
            a = c = (1 - b) / 2
        return _rv({-1: a, 0: b, 3: c}, exact, "nonsym")

    return Model(SEQUENCE, rule, 3, name="nonsym", params=dict(cfg.params))


def _build_exuniform(cfg, exact):
    _check_keys(cfg, {"m", "L", "r"}, {"m", "L", "r"})
    m = _integer("m", cfg.params["m"], minimum=2)
    L = _integer("L", cfg.params["L"], minimum=1)
    copies = _integer("r", cfg.params["r"], minimum=0)
    x1 = uniform_on([L * m] + list(range(1, m)), exact=True)
    x2 = uniform_on([-m, 0, m], exact=True)
    if not exact:
        x1, x2 = x1.to_float(), x2.to_float()

    def rule(N, n):
        return x1 if n <= copies else x2

    return Model(SEQUENCE, rule, max(L * m, m), name="exuniform", params=dict(cfg.params))


def _build_custom(cfg, exact):
    _check_keys(cfg, {"rows"}, {"rows"})
    rows = cfg.params["rows"]
    if not isinstance(rows, (list, tuple)) or not rows:
        raise ValidationError("custom-table: rows must be a nonempty list of tables")
    rvs = [_rv(_table(f"rows[{i}]", row), exact, f"rows[{i}]") for i, row in enumerate(rows)]
    K = max(rv.bound for rv in rvs)
    return Model(
        SEQUENCE, lambda N, n: rvs[(n - 1) % len(rvs)], K, name="custom-table", params=dict(cfg.params)
    )


def _build_array(cfg, exact):
    _check_keys(cfg, {"theta"}, {"theta"})
    theta = _positive("theta", cfg.params["theta"])

    def rule(N, n):
        return _eg1_term(min(Fraction(1), theta / N), exact)

    return Model(ARRAY, rule, 1, row_rule=lambda N: N, name="array-row-rule", params=dict(cfg.params))


_BUILDERS = {
    "iid": _build_iid,
    "span": _build_span,
    "eg1_theta_over_n": lambda cfg, exact: _build_eg1(cfg, exact, 1),
    "eg1_theta_over_n2": lambda cfg, exact: _build_eg1(cfg, exact, 2),
    "nonsym": _build_nonsym,
    "exuniform": _build_exuniform,
    "custom-table": _build_custom,
    "array-row-rule": _build_array,
}


def build_model(cfg: ModelConfig) -> Model:
    """Validate ``cfg`` and build its model."""
    if cfg.family not in _BUILDERS:
        raise ValidationError(f"family: unknown family {cfg.family!r}; choose from {sorted(FAMILIES)}")
    if cfg.numeric_mode not in NUMERIC_MODES:
        raise ValidationError(f"numeric_mode: must be one of {NUMERIC_MODES}")
    if not isinstance(cfg.params, Mapping):
        raise ValidationError("params: expected a table")
    return _BUILDERS[cfg.family](cfg, cfg.exact)


def model_from_mapping(data: Mapping[str, Any]) -> tuple[ModelConfig, dict]:
    """Split a parsed config into the model config and the ``[run]`` table."""
    model = data.get("model")
    if not isinstance(model, Mapping) or "family" not in model:
        raise ValidationError("config: a [model] table with a 'family' key is required")
    params = dict(model.get("params", {}))
    extra = {k: v for k, v in model.items() if k not in ("family", "params")}
    params.update(extra)
    run = dict(data.get("run", {}))
    mode = run.get("numeric_mode", run.get("mode", "exact"))
    return ModelConfig(str(model["family"]), params, str(mode)), run


def load_config(path) -> tuple[ModelConfig, dict]:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ValidationError(f"config: no such file {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ValidationError(f"config: {exc}") from exc
    return model_from_mapping(data)


def eg1_limit_constant(theta, cutoff: int = 10 ** 6) -> float:
    """``lim N**(2 theta) |Phi_N(pi)|`` for the theta/n family.

    Uses the partial product up to ``cutoff`` with the first-order
    correction ``1 + x(1 - x)/(2M)`` of ``prod (1 - x/n) M**x``.
    """
    x = 2 * float(theta)
    n = np.arange(1, cutoff + 1, dtype=float)
    factors = np.abs(2 * np.minimum(1.0, float(theta) / n) - 1)
    if np.any(factors == 0):
        return 0.0
    log_sum = math.fsum(np.log(factors))
    return math.exp(log_sum + x * math.log(cutoff)) * (1 + x * (1 - x) / (2 * cutoff))


def eg1_square_limit(theta, cutoff: int = 10 ** 6) -> float:
    """``U = prod_n (1 - 2 p_n)`` for the theta/n**2 family (signed)."""
    n = np.arange(1, cutoff + 1, dtype=float)
    return float(np.prod(1 - 2 * np.minimum(1.0, float(theta) / n ** 2)))
