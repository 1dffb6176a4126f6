"""Partial sums of model series and their summation by the epsilon table."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from .epsilon import ApproximantChoice, accelerate

__all__ = [
    "DEFAULT_TERMS",
    "SeriesKind",
    "SeriesSpec",
    "SweepRecord",
    "partial_sums",
    "sum_series",
    "error_sweep",
]

DEFAULT_TERMS = 25


class SeriesKind(enum.Enum):
    LOG_ONE_PLUS_X = "log1p"
    GEOMETRIC = "geometric"
    COEFFICIENTS = "coefficients"


@dataclass(frozen=True)
class SeriesSpec:
    """Which series to sum, at which argument, with how many terms.

    ``terms`` counts partial sums for the logarithm (``S_1 .. S_N``) and the
    highest power for the other kinds (``S_0 .. S_N``). For
    ``COEFFICIENTS`` the number of coefficients fixes the length and
    ``terms`` may be left at its default.
    """

    kind: SeriesKind
    x: float
    terms: int = DEFAULT_TERMS
    coefficients: Optional[Sequence[float]] = None

    def __post_init__(self):
        if self.terms < 1:
            raise ValueError(f"terms must be >= 1, got {self.terms}")
        has_coeffs = self.coefficients is not None
        if has_coeffs != (self.kind is SeriesKind.COEFFICIENTS):
            raise ValueError("coefficients are required for, and only for, the COEFFICIENTS kind")
        if has_coeffs and len(self.coefficients) == 0:
            raise ValueError("empty coefficient list")


class SweepRecord(NamedTuple):
    x: float
    value: float
    eps_emp: Optional[float]
    eps_real: float
    L: int
    M: int


def partial_sums(spec: SeriesSpec) -> List[float]:
    """Left-to-right double precision partial sums; no compensated summation."""
    x = spec.x
    out = []
    total = 0.0
    if spec.kind is SeriesKind.LOG_ONE_PLUS_X:
        for k in range(1, spec.terms + 1):
            total += (-1) ** (k + 1) * x**k / k
            out.append(total)
    elif spec.kind is SeriesKind.GEOMETRIC:
        for k in range(spec.terms + 1):
            total += x**k
            out.append(total)
    else:
        for k, c in enumerate(spec.coefficients):
            total += c * x**k
            out.append(total)
    return out


def sum_series(spec: SeriesSpec) -> ApproximantChoice:
    return accelerate(partial_sums(spec))


def error_sweep(x_min: float, x_max: float, step: float, terms: int = DEFAULT_TERMS) -> List[SweepRecord]:
    """Sum the ``ln(1+x)`` series over a grid and compare with ``math.log1p``.

    The grid is ``x_min + k*step`` up to ``x_max`` inclusive (within a
    half-step tolerance against accumulated rounding). ``x_min == x_max``
    gives a single point.
    """
    if not (math.isfinite(x_min) and math.isfinite(x_max) and math.isfinite(step)):
        raise ValueError("sweep bounds and step must be finite")
    if x_min > x_max:
        raise ValueError(f"x_min ({x_min}) exceeds x_max ({x_max})")
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")

    count = int(math.floor((x_max - x_min) / step + 0.5)) + 1
    grid = x_min + step * np.arange(count)
    records = []
    for x in grid:
        x = float(x)
        choice = sum_series(SeriesSpec(SeriesKind.LOG_ONE_PLUS_X, x, terms))
        eps_emp = None if choice.eta_min is None else float(choice.eta_min)
        records.append(
            SweepRecord(x, float(choice.value), eps_emp, abs(choice.value - math.log1p(x)), choice.l, choice.m)
        )
    return records
