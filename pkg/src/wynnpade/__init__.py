"""Robust N-point Padé approximation with the minimal-|eta| selection rule."""

from .aitken import AitkenSequence, Node, NodeSet, aitken_sequence, order_by_proximity, taylor_shift
from .epsilon import (
    ApproximantChoice,
    CellStatus,
    EtaTable,
    PadeCell,
    PadeTable,
    accelerate,
    build_table,
    eta_table,
    select_optimal,
    table_to_csv,
)
from .npade import NPadeRegressor, RationalEvaluation, evaluate, evaluate_sweep
from .ode import OdeDivergenceError, OdeProblem, OdeTrace, TracePoint, bootstrap, solve, step
from .series import SeriesKind, SeriesSpec, error_sweep, partial_sums, sum_series
from .stats import DegenerateSampleError, RegressionSummary, loglog_regression

__version__ = "0.1.0"
