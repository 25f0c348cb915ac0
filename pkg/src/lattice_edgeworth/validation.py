"""Input checks shared by the estimator and the command line."""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .exceptions import ValidationError
from .lattice_rv import IntegerRV


def check_order(r) -> int:
    if isinstance(r, bool) or not isinstance(r, (int, np.integer)) or r < 1:
        raise ValidationError(f"order must be a positive integer, got {r!r}")
    return int(r)


def parse_int_list(text: str) -> list[int]:
    """``"50,100,200"`` to ``[50, 100, 200]``."""
    try:
        values = [int(part) for part in str(text).split(",") if part.strip()]
    except ValueError as exc:
        raise ValidationError(f"expected a comma-separated list of integers, got {text!r}") from exc
    if not values:
        raise ValidationError("empty integer list")
    return values


def check_increasing(Ns: Sequence[int]) -> list[int]:
    Ns = [int(N) for N in Ns]
    if not Ns:
        raise ValidationError("N list is empty")
    if any(N < 1 for N in Ns):
        raise ValidationError("N values must be positive")
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise ValidationError("N values must be strictly increasing")
    return Ns


def check_lattice_points(k) -> np.ndarray:
    """Integer array of evaluation points (floats must be whole numbers)."""
    arr = np.asarray(k)
    if arr.dtype == object or arr.dtype.kind not in "iuf":
        raise ValidationError("lattice points must be numeric")
    if arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)) or np.any(arr != np.round(arr)):
            raise ValidationError("lattice points must be integers")
        arr = arr.astype(np.int64)
    return np.atleast_1d(arr.astype(np.int64)).ravel()


def check_terms(X: Iterable, exact: bool = False) -> list[IntegerRV]:
    """Accept integer random variables or ``{value: prob}`` tables."""
    out = []
    for i, item in enumerate(X):
        if isinstance(item, IntegerRV):
            rv = item
        elif isinstance(item, Mapping):
            try:
                rv = IntegerRV.from_dict(item, exact=exact)
            except ValidationError as exc:
                raise ValidationError(f"term {i}: {exc}") from exc
        else:
            raise ValidationError(f"term {i}: expected IntegerRV or a value -> probability table")
        out.append(rv)
    if not out:
        raise ValidationError("no terms given")
    return out
