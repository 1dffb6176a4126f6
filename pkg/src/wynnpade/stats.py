"""Log-log regression of empirical against real errors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

__all__ = ["RegressionSummary", "DegenerateSampleError", "loglog_regression", "pearson"]


class DegenerateSampleError(ValueError):
    pass


@dataclass(frozen=True)
class RegressionSummary:
    slope: float
    intercept: float
    correlation: float
    n: int

    def __str__(self) -> str:
        return (
            f"slope={self.slope!r} intercept={self.intercept!r} "
            f"r={self.correlation!r} n={self.n}"
        )


def pearson(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    da = a - a.mean()
    db = b - b.mean()
    denom = math.sqrt(float(np.dot(da, da)) * float(np.dot(db, db)))
    if denom == 0:
        raise DegenerateSampleError("degenerate sample")
    return float(np.clip(np.dot(da, db) / denom, -1.0, 1.0))


def loglog_regression(pairs: Iterable[Tuple[float, float]]) -> RegressionSummary:
    """Least-squares line ``log10(eps_emp) = slope*log10(eps_real) + intercept``.

    ``pairs`` holds ``(eps_real, eps_emp)``. Pairs with a non-positive or
    non-finite entry are dropped before fitting; ``n`` counts the survivors.

    Raises
    ------
    DegenerateSampleError
        With fewer than two usable pairs, or when the real errors are all equal.
    """
    real, emp = [], []
    for r, e in pairs:
        if r is None or e is None:
            continue
        r, e = float(r), float(e)
        if r > 0 and e > 0 and math.isfinite(r) and math.isfinite(e):
            real.append(math.log10(r))
            emp.append(math.log10(e))
    if len(real) < 2:
        raise DegenerateSampleError("degenerate sample")

    lx = np.array(real)
    ly = np.array(emp)
    dx = lx - lx.mean()
    sxx = float(np.dot(dx, dx))
    if sxx == 0:
        raise DegenerateSampleError("degenerate sample")
    slope = float(np.dot(dx, ly - ly.mean())) / sxx
    intercept = float(ly.mean() - slope * lx.mean())
    return RegressionSummary(slope, intercept, pearson(lx, ly), len(real))
