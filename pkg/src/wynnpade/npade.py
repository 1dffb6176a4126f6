"""N-point Padé evaluation: Aitken polynomial sequence followed by Wynn acceleration."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from .aitken import NodeSet, aitken_sequence
from .epsilon import accelerate
from ._validation import check_derivatives, check_queries, check_training_data

__all__ = ["RationalEvaluation", "evaluate", "evaluate_sweep", "NPadeRegressor"]


@dataclass(frozen=True)
class RationalEvaluation:
    x: float
    value: float
    eta_min: Optional[float]
    l: int
    m: int
    used_nodes: int

    @property
    def eps_emp(self) -> Optional[float]:
        return self.eta_min


def evaluate(nodes: NodeSet, x: float) -> RationalEvaluation:
    """Rational interpolant of ``nodes`` evaluated at ``x``, with its empirical error.

    A query sitting exactly on a node returns the nodal value with
    ``eta_min = 0``. When the node set is too small for any eta estimate the
    plain polynomial interpolant is returned with ``eta_min = None``.
    """
    if len(nodes) == 0:
        raise ValueError("empty node set")
    x = float(x)
    for i, node in enumerate(nodes):
        if node.x == x:
            return RationalEvaluation(x, node.y, 0.0, 0, 0, len(nodes))

    seq = aitken_sequence(nodes, x)
    choice = accelerate(seq.values)
    eta = None if choice.eta_min is None else float(choice.eta_min)
    return RationalEvaluation(x, float(choice.value), eta, choice.l, choice.m, len(nodes))


def evaluate_sweep(nodes: NodeSet, queries: Sequence[float]) -> List[RationalEvaluation]:
    return [evaluate(nodes, q) for q in queries]


class NPadeRegressor(RegressorMixin, BaseEstimator):
    """Rational interpolation/extrapolation of tabulated 1-D data.

    Every prediction runs independently: the nodes are reordered by distance
    to the query, Aitken's scheme produces the polynomial interpolants of
    growing degree, and the Wynn epsilon table turns that sequence into Padé
    approximants. The one with the smallest ``|eta|`` is returned and ``|eta|``
    doubles as an error estimate.

    Parameters
    ----------
    max_nodes : int or None, default=None
        Use only the ``max_nodes`` nodes nearest to each query. ``None`` uses
        all of them.

    Attributes
    ----------
    nodes_ : NodeSet
        Training data, with derivatives when ``fit`` received them.
    n_features_in_ : int
        Always 1.

    Examples
    --------
    >>> import numpy as np
    >>> x = np.arange(4.0)
    >>> reg = NPadeRegressor().fit(x, 1 / (1 + x))
    >>> round(float(reg.predict([9.0])[0]), 12)
    0.1
    """

    def __init__(self, max_nodes: Optional[int] = None):
        self.max_nodes = max_nodes

    def fit(self, X, y, derivatives=None):
        """Store the nodes.

        ``derivatives`` is an optional ``(n_samples, K)`` array with the first
        ``K`` derivatives of the target at each abscissa.
        """
        x, y = check_training_data(X, y)
        d = check_derivatives(derivatives, x.size)
        if self.max_nodes is not None and self.max_nodes < 1:
            raise ValueError(f"max_nodes must be >= 1, got {self.max_nodes}")
        self.nodes_ = NodeSet.from_arrays(x, y, d)
        self.n_features_in_ = 1
        return self

    def _nodes_for(self, q: float) -> NodeSet:
        if self.max_nodes is None or self.max_nodes >= len(self.nodes_):
            return self.nodes_
        order = np.argsort(np.abs(self.nodes_.x - q), kind="stable")[: self.max_nodes]
        return NodeSet(tuple(self.nodes_.nodes[i] for i in sorted(order)))

    def evaluate(self, X) -> List[RationalEvaluation]:
        check_is_fitted(self, "nodes_")
        return [evaluate(self._nodes_for(q), q) for q in check_queries(X)]

    def predict(self, X, return_error: bool = False):
        """Predicted values; with ``return_error`` also the ``|eta_min|`` estimates.

        Missing estimates come back as NaN.
        """
        results = self.evaluate(X)
        values = np.array([r.value for r in results], dtype=float)
        if not return_error:
            return values
        errors = np.array(
            [np.nan if r.eta_min is None else r.eta_min for r in results], dtype=float
        )
        return values, errors
