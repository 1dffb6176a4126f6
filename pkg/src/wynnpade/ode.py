"""Scalar ODE integration with an N-point Padé predictor on Hermite data.

Each new point is extrapolated from the last few accepted points, their
values and slopes entering as ``K = 1`` Taylor-shifted nodes. The slope at
the new point is then taken straight from the right-hand side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional, Tuple

from .aitken import Node, NodeSet
from .npade import RationalEvaluation, evaluate

__all__ = [
    "OdeProblem",
    "TracePoint",
    "OdeTrace",
    "OdeDivergenceError",
    "bootstrap",
    "step",
    "solve",
]

SEED_POINTS = 4


@dataclass(frozen=True)
class OdeProblem:
    """``dy/dx = rhs(x, y)`` on ``[x0, x_end]`` with fixed step and node window."""

    rhs: Callable[[float, float], float]
    x0: float
    y0: float
    x_end: float
    step: float
    window: int = 6
    eta_tol: float = 1e-6

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x0, self.y0, self.x_end, self.step)):
            raise ValueError("x0, y0, x_end and step must be finite")
        if not self.x_end > self.x0:
            raise ValueError(f"x_end ({self.x_end}) must exceed x0 ({self.x0})")
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.window < 2:
            raise ValueError(f"window must be >= 2, got {self.window}")
        if not self.eta_tol > 0:
            raise ValueError(f"eta_tol must be positive, got {self.eta_tol}")


class TracePoint(NamedTuple):
    x: float
    y: float
    dy: float
    eta_used: Optional[float] = None
    accepted_order: Optional[Tuple[int, int]] = None
    # set when |eta| stayed above eta_tol even after the window retry
    flagged: bool = False


@dataclass
class OdeTrace:
    points: List[TracePoint] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    @property
    def x(self) -> List[float]:
        return [p.x for p in self.points]

    @property
    def y(self) -> List[float]:
        return [p.y for p in self.points]

    @property
    def last(self) -> TracePoint:
        return self.points[-1]


class OdeDivergenceError(ArithmeticError):
    """Non-finite state; ``trace`` holds every point computed before the failure."""

    def __init__(self, message: str, trace: OdeTrace):
        super().__init__(message)
        self.trace = trace


def _slope(problem: OdeProblem, x: float, y: float, trace: OdeTrace) -> float:
    dy = problem.rhs(x, y)
    if not math.isfinite(dy):
        raise OdeDivergenceError(f"non-finite derivative at x={x!r}, y={y!r}", trace)
    return float(dy)


def _next_x(x_last: float, problem: OdeProblem) -> float:
    x_new = x_last + problem.step
    # absorb a sliver left over by rounding into the final step
    if x_new >= problem.x_end or problem.x_end - x_new < 1e-9 * problem.step:
        return problem.x_end
    return x_new


def bootstrap(problem: OdeProblem) -> OdeTrace:
    """Seed the trace with classical fourth-order Runge-Kutta steps."""
    trace = OdeTrace()
    f = problem.rhs
    x, y = float(problem.x0), float(problem.y0)
    trace.points.append(TracePoint(x, y, _slope(problem, x, y, trace)))
    for _ in range(min(problem.window, SEED_POINTS) - 1):
        if x >= problem.x_end:
            break
        x_new = _next_x(x, problem)
        h = x_new - x
        k1 = trace.last.dy
        k2 = f(x + h / 2, y + h * k1 / 2)
        k3 = f(x + h / 2, y + h * k2 / 2)
        k4 = f(x + h, y + h * k3)
        y = y + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
        x = x_new
        if not math.isfinite(y):
            raise OdeDivergenceError(f"non-finite seed value at x={x!r}", trace)
        trace.points.append(TracePoint(x, y, _slope(problem, x, y, trace)))
    return trace


def _predict(points: List[TracePoint], x_new: float) -> RationalEvaluation:
    nodes = NodeSet(tuple(Node(p.x, p.y, (p.dy,)) for p in points))
    return evaluate(nodes, x_new)


def step(trace: OdeTrace, problem: OdeProblem) -> OdeTrace:
    """Append one predicted point to ``trace`` (in place) and return it.

    If ``|eta_min|`` exceeds ``problem.eta_tol`` the prediction is redone once
    from the nearest ``max(2, window // 2)`` points; a second miss is kept but
    flagged.
    """
    if len(trace) < 2:
        raise ValueError("step needs a trace with at least two points")
    x_new = _next_x(trace.last.x, problem)

    result = _predict(trace.points[-problem.window:], x_new)
    flagged = False
    if result.eta_min is not None and result.eta_min > problem.eta_tol:
        retry = _predict(trace.points[-max(2, problem.window // 2):], x_new)
        if retry.eta_min is not None and retry.eta_min <= problem.eta_tol:
            result = retry
        else:
            flagged = True

    y_new = result.value
    if not math.isfinite(y_new):
        raise OdeDivergenceError(f"non-finite prediction at x={x_new!r}", trace)
    dy = _slope(problem, x_new, y_new, trace)
    trace.points.append(
        TracePoint(x_new, y_new, dy, result.eta_min, (result.l, result.m), flagged)
    )
    return trace


def solve(problem: OdeProblem) -> OdeTrace:
    """Bootstrap, then step until the trace lands exactly on ``x_end``."""
    trace = bootstrap(problem)
    while trace.last.x < problem.x_end:
        step(trace, problem)
    return trace
