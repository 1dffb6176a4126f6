"""Padé table construction through the Wynn cross rule and minimal-|eta| selection.

Row ``m = 0`` of the table is the input sequence itself; every further row is
generated southwards from the compass stencil around a centre cell::

            N = r[l, m-1]
    W = r[l-1, m]   C = r[l, m]   E = r[l+1, m]
            S = r[l, m+1]

    S = C + 1 / (1/(E-C) + 1/(W-C) - 1/(N-C))

The same stencil yields the empirical error ``eta = 1 / (1/(E-C) + 1/(W-C))``.
The cell with the smallest ``|eta|`` names the approximant to trust.

The arithmetic only uses ``+ - * /`` and ``abs``, so complex sequences work
as well, although every driver in this package feeds real numbers.
"""

from __future__ import annotations

import cmath
import enum
import io
import sys
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

__all__ = [
    "MACHINE_EPSILON",
    "ZERO_DIFFERENCE_FACTOR",
    "CellStatus",
    "PadeCell",
    "PadeTable",
    "EtaTable",
    "ApproximantChoice",
    "build_table",
    "eta_table",
    "select_optimal",
    "accelerate",
    "table_to_csv",
]

MACHINE_EPSILON = sys.float_info.epsilon
# differences below ZERO_DIFFERENCE_FACTOR * eps * |C| count as exact zeros
ZERO_DIFFERENCE_FACTOR = 4.0


class CellStatus(enum.Enum):
    VALID = "valid"
    INFINITE = "infinite"
    INVALID = "invalid"
    CONVERGED = "converged"

    @property
    def usable(self) -> bool:
        """True for cells whose value may enter a stencil."""
        return self in _USABLE


_USABLE = frozenset({CellStatus.VALID, CellStatus.CONVERGED})


@dataclass(frozen=True)
class PadeCell:
    value: complex | float
    status: CellStatus = CellStatus.VALID


_INFINITE_CELL = PadeCell(float("inf"), CellStatus.INFINITE)


def _isfinite(z) -> bool:
    return cmath.isfinite(z)


def _is_zero_difference(diff, centre) -> bool:
    return abs(diff) <= ZERO_DIFFERENCE_FACTOR * MACHINE_EPSILON * abs(centre)


@dataclass
class PadeTable:
    """Triangular table ``r[l, m]`` for ``m <= l <= n - m``.

    ``rows[m][l - m]`` holds cell ``(l, m)``. The virtual row ``m = -1`` is
    not stored; :meth:`cell` answers it with an infinite cell.
    """

    n: int
    rows: List[List[PadeCell]] = field(default_factory=list)

    def __contains__(self, index: Tuple[int, int]) -> bool:
        l, m = index
        if m == -1:
            return 0 <= l <= self.n + 1
        return 0 <= m < len(self.rows) and m <= l <= self.n - m

    def cell(self, l: int, m: int) -> PadeCell:
        if m == -1:
            if 0 <= l <= self.n + 1:
                return _INFINITE_CELL
            raise KeyError((l, m))
        if (l, m) not in self:
            raise KeyError((l, m))
        return self.rows[m][l - m]

    def __getitem__(self, index: Tuple[int, int]) -> PadeCell:
        return self.cell(*index)

    def items(self) -> Iterator[Tuple[Tuple[int, int], PadeCell]]:
        """Stored cells, row-major by ``m`` then ``l``."""
        for m, row in enumerate(self.rows):
            for offset, c in enumerate(row):
                yield (m + offset, m), c

    @property
    def sequence(self) -> List:
        return [c.value for c in self.rows[0]]


@dataclass
class EtaTable:
    entries: Dict[Tuple[int, int], complex | float] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, index) -> bool:
        return index in self.entries

    def __getitem__(self, index):
        return self.entries[index]

    def get(self, index, default=None):
        return self.entries.get(index, default)


@dataclass(frozen=True)
class ApproximantChoice:
    value: complex | float
    eta_min: Optional[float]
    l: int
    m: int
    converged_exactly: bool = False


def _south(C: PadeCell, E: PadeCell, W: PadeCell, N: PadeCell) -> PadeCell:
    if C.status not in _USABLE or E.status not in _USABLE or W.status not in _USABLE:
        return PadeCell(float("nan"), CellStatus.INVALID)
    if N.status is CellStatus.INVALID:
        return PadeCell(float("nan"), CellStatus.INVALID)

    c = C.value
    de = E.value - c
    dw = W.value - c
    if _is_zero_difference(de, c) or _is_zero_difference(dw, c):
        return PadeCell(c, CellStatus.CONVERGED)

    total = 1.0 / de + 1.0 / dw
    if N.status is not CellStatus.INFINITE:
        dn = N.value - c
        if dn == 0:
            return PadeCell(float("nan"), CellStatus.INVALID)
        total -= 1.0 / dn
    if total == 0 or not _isfinite(total):
        return PadeCell(float("nan"), CellStatus.INVALID)
    value = c + 1.0 / total
    if not _isfinite(value):
        return PadeCell(float("nan"), CellStatus.INVALID)
    return PadeCell(value, CellStatus.VALID)


def build_table(sequence: Sequence) -> PadeTable:
    """Fill the Padé table of ``sequence`` row by row in the south direction.

    Parameters
    ----------
    sequence : sequence of float or complex
        Finite terms ``S_0 .. S_n``; they become row ``m = 0``.

    Returns
    -------
    PadeTable

    Raises
    ------
    ValueError
        If the sequence is empty or holds a non-finite term.
    """
    terms = list(sequence)
    if not terms:
        raise ValueError("empty sequence")
    for k, s in enumerate(terms):
        if not _isfinite(s):
            raise ValueError(f"non-finite sequence term at index {k}: {s!r}")

    n = len(terms) - 1
    table = PadeTable(n=n, rows=[[PadeCell(s) for s in terms]])
    m = 0
    while m + 1 <= n - (m + 1):
        row = table.rows[m]
        # row m starts at l = m, row m - 1 at l = m - 1
        north = table.rows[m - 1][1:] if m > 0 else None
        new_row = []
        for i in range(1, len(row) - 1):
            new_row.append(
                _south(row[i], row[i + 1], row[i - 1], north[i] if north is not None else _INFINITE_CELL)
            )
        table.rows.append(new_row)
        m += 1
    return table


def eta_table(table: PadeTable) -> EtaTable:
    """Empirical errors ``eta[l, m]`` for every cell with usable E and W neighbours.

    An exact (or sub-roundoff) zero in ``E - C`` or ``W - C`` records
    ``eta = 0``. Entries whose reciprocal sum vanishes or overflows are left
    out rather than stored as zeros.
    """
    etas = EtaTable()
    for m, row in enumerate(table.rows):
        for i in range(1, len(row) - 1):
            C, E, W = row[i], row[i + 1], row[i - 1]
            l = m + i
            if C.status not in _USABLE or E.status not in _USABLE or W.status not in _USABLE:
                continue
            c = C.value
            de = E.value - c
            dw = W.value - c
            if _is_zero_difference(de, c) or _is_zero_difference(dw, c):
                etas.entries[(l, m)] = 0.0
                continue
            total = 1.0 / de + 1.0 / dw
            if total == 0 or not _isfinite(total):
                continue
            eta = 1.0 / total
            if _isfinite(eta):
                etas.entries[(l, m)] = eta
    return etas


def select_optimal(table: PadeTable, etas: EtaTable) -> ApproximantChoice:
    """Pick the approximant governed by the smallest ``|eta|``.

    The reported value is the south cell produced from the winning stencil
    when it is usable, otherwise the centre cell. Equal ``|eta|`` prefers the
    smaller ``l + m``, then the smaller ``m``.
    """
    if not etas.entries:
        last = table.n
        return ApproximantChoice(table.cell(last, 0).value, None, last, 0)

    (l, m), eta = min(
        etas.entries.items(),
        key=lambda item: (abs(item[1]), item[0][0] + item[0][1], item[0][1]),
    )
    exact = eta == 0
    south = table.cell(l, m + 1) if (l, m + 1) in table else None
    if south is not None and south.status.usable:
        value, m_out = south.value, m + 1
    else:
        value, m_out = table.cell(l, m).value, m
    return ApproximantChoice(value, abs(eta), l, m_out, exact)


def accelerate(sequence: Sequence) -> ApproximantChoice:
    """Estimate the limit of ``sequence`` by the minimal-|eta| Padé approximant.

    >>> accelerate([1, 1.5, 1.75, 1.875, 1.9375]).value
    2.0
    """
    table = build_table(sequence)
    return select_optimal(table, eta_table(table))


def table_to_csv(table: PadeTable, etas: Optional[EtaTable] = None) -> str:
    """Dump every stored cell as CSV ``l,m,value,status,eta``."""
    if etas is None:
        etas = eta_table(table)
    out = io.StringIO()
    out.write("l,m,value,status,eta\n")
    for (l, m), c in table.items():
        eta = etas.get((l, m))
        out.write(
            f"{l},{m},{_fmt(c.value)},{c.status.value},"
            f"{'' if eta is None else _fmt(eta)}\n"
        )
    return out.getvalue()


def _fmt(v) -> str:
    if isinstance(v, complex):
        return repr(v)
    return repr(float(v))
