"""Aitken's nested linear interpolation, evaluated crest by crest at one point."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

__all__ = [
    "Node",
    "NodeSet",
    "AitkenSequence",
    "order_by_proximity",
    "taylor_shift",
    "aitken_sequence",
]


@dataclass(frozen=True)
class Node:
    x: float
    y: float
    derivs: tuple = ()


@dataclass(frozen=True)
class NodeSet:
    """Interpolation nodes, each carrying the same number ``K`` of derivatives."""

    nodes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        nodes = tuple(
            n if isinstance(n, Node) else Node(float(n[0]), float(n[1]), tuple(n[2]) if len(n) > 2 else ())
            for n in self.nodes
        )
        object.__setattr__(self, "nodes", nodes)
        orders = {len(n.derivs) for n in nodes}
        if len(orders) > 1:
            raise ValueError(f"nodes carry mixed derivative orders {sorted(orders)}")
        for n in nodes:
            if not all(math.isfinite(v) for v in (n.x, n.y, *n.derivs)):
                raise ValueError(f"non-finite node data at x={n.x!r}")

    @classmethod
    def from_arrays(cls, x, y, derivs=None) -> "NodeSet":
        """Build from abscissas, ordinates and an optional ``(n, K)`` derivative array."""
        x = np.asarray(x, dtype=float).ravel()
        y = np.asarray(y, dtype=float).ravel()
        if x.shape != y.shape:
            raise ValueError(f"x and y lengths differ: {x.size} != {y.size}")
        if derivs is None:
            d = [()] * x.size
        else:
            arr = np.asarray(derivs, dtype=float)
            if arr.ndim == 1:
                arr = arr[:, None]
            if arr.shape[0] != x.size:
                raise ValueError("derivative rows must match the node count")
            d = [tuple(float(v) for v in row) for row in arr]
        return cls(tuple(Node(float(a), float(b), c) for a, b, c in zip(x, y, d)))

    @property
    def K(self) -> int:
        return len(self.nodes[0].derivs) if self.nodes else 0

    @property
    def x(self) -> np.ndarray:
        return np.array([n.x for n in self.nodes])

    @property
    def y(self) -> np.ndarray:
        return np.array([n.y for n in self.nodes])

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return NodeSet(self.nodes[item])
        return self.nodes[item]


@dataclass(frozen=True)
class AitkenSequence:
    query: float
    values: List[float]


def order_by_proximity(nodes: NodeSet, x: float) -> NodeSet:
    """Sort nodes by distance to ``x``; equal distances put the smaller abscissa first."""
    return NodeSet(tuple(sorted(nodes, key=lambda n: (abs(x - n.x), n.x))))


def taylor_shift(node, x: float) -> float:
    """Taylor polynomial of the node's data, expanded about ``node.x``, at ``x``.

    ``node`` is a :class:`Node` or an ``(x_i, y_i, derivs)`` triple.
    """
    if not isinstance(node, Node):
        node = Node(node[0], node[1], tuple(node[2]) if len(node) > 2 else ())
    h = x - node.x
    total = node.y
    term = 1.0
    for j, d in enumerate(node.derivs, start=1):
        term *= h / j
        total += term * d
    return total


def aitken_sequence(nodes: NodeSet, x: float) -> AitkenSequence:
    """Values at ``x`` of the interpolants on the 1, 2, ..., n+1 nearest nodes.

    Entry ``l`` interpolates the ``l + 1`` nodes closest to ``x``. With
    derivative data each nodal value is first replaced by its Taylor shift to
    ``x``.

    Raises
    ------
    ValueError
        For an empty node set or repeated abscissas.
    """
    if len(nodes) == 0:
        raise ValueError("empty node set")
    ordered = order_by_proximity(nodes, x)
    xs = ordered.x
    if np.unique(xs).size != xs.size:
        raise ValueError("coincident nodes")

    dx = xs - x
    if ordered.K:
        f = np.array([taylor_shift(n, x) for n in ordered])
    else:
        f = ordered.y.copy()

    n = f.size - 1
    if dx[0] == 0:
        # every interpolant through the nearest node takes its value at x exactly
        return AitkenSequence(float(x), [float(f[0])] * (n + 1))
    values = []
    for l in range(n):
        values.append(float(f[l]))
        # (dx_l f_k - dx_k f_l) / (dx_l - dx_k), arranged to keep equal values exact
        f[l + 1:] = f[l] + dx[l] * (f[l + 1:] - f[l]) / (dx[l] - dx[l + 1:])
    values.append(float(f[n]))
    return AitkenSequence(float(x), values)
