import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wynnpade.epsilon import (
    CellStatus,
    EtaTable,
    accelerate,
    build_table,
    eta_table,
    select_optimal,
    table_to_csv,
)

from oracles import log1p_partial_sums, shanks, wynn_rounding_bound


def shanks_condition(w, c, e, value):
    """Relative rounding sensitivity of a Shanks value to its three inputs."""
    eps = np.finfo(float).eps
    spread = abs(value - c) * abs(c) * (1 / abs(e - c) + 1 / abs(w - c))
    return 8 * eps * (spread + abs(c)) / max(abs(value), 1e-300)


def geometric_sums(x, n):
    return list(np.cumsum([x**k for k in range(n)]))


class TestBuildTable:
    def test_geometric_shanks_cell(self):
        seq = [1, 1.5, 1.75, 1.875]
        assert shanks(*seq[:3]) == 2.0
        assert build_table(seq).cell(1, 1).value == 2.0

    def test_exp_partial_sums(self):
        assert shanks(1, 2, 2.5) == 3.0
        assert build_table([1, 2, 2.5]).cell(1, 1).value == 3.0

    def test_constant_sequence_converges(self):
        cell = build_table([7, 7, 7]).cell(1, 1)
        assert cell.status is CellStatus.CONVERGED
        assert cell.value == 7

    def test_row_zero_is_input(self):
        seq = [0.3, -1.2, 4.0, 2.5, 2.25]
        table = build_table(seq)
        assert table.sequence == seq
        assert [table.cell(l, 0).value for l in range(5)] == seq

    @pytest.mark.parametrize("length", [1, 2, 3, 6, 11])
    def test_triangular_extent(self, length):
        table = build_table(list(np.linspace(0, 1, length) ** 2 + 1))
        n = length - 1
        expected = {(l, m) for m in range(n + 1) for l in range(m, n - m + 1)}
        assert {index for index, _ in table.items()} == expected
        for l, m in expected:
            assert (l, m) in table
        assert (0, 1) not in table
        assert (n, 1) not in table

    def test_virtual_north_row(self):
        table = build_table([1.0, 2.0])
        for l in range(3):
            assert table.cell(l, -1).status is CellStatus.INFINITE
        with pytest.raises(KeyError):
            table.cell(4, -1)

    def test_empty_sequence(self):
        with pytest.raises(ValueError, match="empty sequence"):
            build_table([])

    def test_non_finite_term(self):
        with pytest.raises(ValueError, match="non-finite"):
            build_table([1.0, float("nan"), 2.0])

    def test_arithmetic_sequence_is_invalid_and_propagates(self):
        # E + W = 2C makes the reciprocal sum vanish in every row-1 stencil
        table = build_table([0.0, 1.0, 2.0, 3.0, 4.0])
        assert all(table.cell(l, 1).status is CellStatus.INVALID for l in (1, 2, 3))
        assert table.cell(2, 2).status is CellStatus.INVALID

    def test_near_zero_difference_counts_as_converged(self):
        c = 1.0
        table = build_table([c, c + 2 * np.finfo(float).eps * c / 4, 1.5])
        assert table.cell(1, 1).status is CellStatus.CONVERGED

    def test_complex_sequence(self):
        z = 0.5j
        seq = list(np.cumsum([z**k for k in range(4)]))
        assert abs(build_table(seq).cell(1, 1).value - 1 / (1 - z)) < 1e-15


class TestEtaTable:
    def test_direct_arithmetic(self):
        expected = 1 / (1 / (1.75 - 1.5) + 1 / (1 - 1.5))
        assert expected == 0.5
        etas = eta_table(build_table([1, 1.5, 1.75]))
        assert etas[(1, 0)] == pytest.approx(0.5, rel=1e-15)

    def test_exact_convergence_records_zero(self):
        assert eta_table(build_table([7, 7, 7]))[(1, 0)] == 0

    def test_length_two_is_empty(self):
        assert len(eta_table(build_table([1.0, 2.0]))) == 0

    def test_boundary_cells_absent(self):
        etas = eta_table(build_table(geometric_sums(0.3, 7)))
        for l, m in etas.entries:
            assert m + 1 <= l <= 6 - m - 1

    def test_vanishing_denominator_omitted(self):
        assert eta_table(build_table([0.0, 1.0, 2.0])).entries == {}

    def test_entries_finite(self):
        etas = eta_table(build_table(log1p_partial_sums(3.0, 20)))
        assert etas.entries
        assert all(math.isfinite(v) for v in etas.entries.values())


class TestSelectOptimal:
    def test_geometric_converges_exactly(self):
        choice = accelerate(geometric_sums(0.5, 4))
        assert choice.value == 2.0

    def test_geometric_reaches_exact_cell(self):
        choice = accelerate(geometric_sums(0.5, 7))
        assert choice.value == 2.0
        assert choice.converged_exactly
        assert choice.eta_min == 0

    def test_single_term(self):
        choice = accelerate([42.0])
        assert choice.value == 42.0
        assert choice.eta_min is None
        assert (choice.l, choice.m) == (0, 0)

    def test_length_two_returns_last(self):
        choice = accelerate([1.0, 3.0])
        assert choice.value == 3.0
        assert choice.eta_min is None

    def test_log_series_outside_radius(self):
        choice = accelerate(log1p_partial_sums(5.0, 25))
        assert abs(choice.value - math.log(6)) <= 1e-3

    def test_choice_names_usable_cell(self):
        seq = log1p_partial_sums(4.0, 18)
        table = build_table(seq)
        choice = select_optimal(table, eta_table(table))
        assert table.cell(choice.l, choice.m).status.usable
        assert table.cell(choice.l, choice.m).value == choice.value

    def test_tie_break_prefers_low_order(self):
        # a constant sequence gives eta = 0 everywhere; the lowest cell wins
        choice = accelerate([3.0] * 7)
        assert (choice.l, choice.m) == (1, 1)
        assert choice.value == 3.0

    def test_smallest_abs_eta_wins(self):
        seq = log1p_partial_sums(2.0, 12)
        table = build_table(seq)
        etas = eta_table(table)
        choice = select_optimal(table, etas)
        assert choice.eta_min == min(abs(v) for v in etas.entries.values())

    def test_falls_back_to_centre_when_south_invalid(self):
        table = build_table([0.0, 1.0, 2.0])
        choice = select_optimal(table, EtaTable({(1, 0): 0.5}))
        assert table.cell(1, 1).status is CellStatus.INVALID
        assert (choice.l, choice.m) == (1, 0)
        assert choice.value == 1.0


class TestAccelerate:
    def test_geometric(self):
        assert accelerate([1, 1.5, 1.75, 1.875, 1.9375]).value == 2.0

    @pytest.mark.parametrize("c", [0.0, -3.5, 1e6])
    def test_constant(self, c):
        assert accelerate([c]).value == c

    def test_alternating_harmonic(self):
        assert abs(accelerate(log1p_partial_sums(1.0, 25)).value - math.log(2)) <= 1e-9


class TestProperties:
    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(-1, 1), min_size=3, max_size=12))
    def test_first_row_is_shanks(self, seq):
        table = build_table(seq)
        for l in range(1, len(seq) - 1):
            cell = table.cell(l, 1)
            ref = shanks(seq[l - 1], seq[l], seq[l + 1])
            if cell.status is not CellStatus.VALID or ref is None:
                continue
            if shanks_condition(seq[l - 1], seq[l], seq[l + 1], ref) > 1e-11:
                continue
            assert cell.value == pytest.approx(ref, rel=1e-10)

    @pytest.mark.parametrize("x", [0.1, 0.5, -0.7, 0.95])
    def test_geometric_exact_in_first_row(self, x):
        table = build_table(geometric_sums(x, 6))
        target = 1 / (1 - x)
        assert any(
            abs(table.cell(l, 1).value - target) <= 1e-12 * abs(target) for l in range(1, 5)
        )

    @pytest.mark.parametrize("c", [2.0, -7.25, 100.0])
    @pytest.mark.parametrize(
        "seq",
        [
            geometric_sums(0.5, 8),
            log1p_partial_sums(0.5, 12),
            log1p_partial_sums(2.0, 12),
            list(np.cumsum([1 / math.factorial(k) for k in range(8)])),
        ],
    )
    def test_translation_equivariance(self, seq, c):
        base = accelerate(seq).value
        shifted = accelerate([s + c for s in seq]).value
        assert shifted == pytest.approx(base + c, rel=1e-10)

    @pytest.mark.parametrize(
        "seq",
        [
            [1.0, 2.0, 2.0, 2.0, 3.0, 3.0],
            [0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            [5.0, 5.0, 6.0, 7.0, 7.0, 7.0, 8.0],
            [1.0, -1.0, 1.0, -1.0, 1.0],
        ],
    )
    def test_invalid_cells_never_selected(self, seq):
        table = build_table(seq)
        etas = eta_table(table)
        for l, m in etas.entries:
            for index in ((l, m), (l + 1, m), (l - 1, m)):
                assert table.cell(*index).status.usable
        choice = select_optimal(table, etas)
        assert table.cell(choice.l, choice.m).status.usable
        assert math.isfinite(choice.value)

    def test_wynn_identity_within_rounding(self):
        rng = np.random.default_rng(1234)
        checked = 0
        for _ in range(50):
            seq = np.cumsum(rng.uniform(-1, 1, 12) * 0.6 ** np.arange(12)).tolist()
            table = build_table(seq)
            for (l, m), eta in eta_table(table).entries.items():
                if m < 1 or (l, m + 1) not in table:
                    continue
                stencil = [table.cell(*i) for i in ((l, m), (l, m + 1), (l, m - 1), (l + 1, m), (l - 1, m))]
                if any(c.status is not CellStatus.VALID for c in stencil):
                    continue
                C, S, N, E, W = (c.value for c in stencil)
                lhs = 1 / (S - C) + 1 / (N - C)
                rhs = 1 / (E - C) + 1 / (W - C)
                bound = wynn_rounding_bound(C, S, N, E, W, eta)
                assert abs(lhs - rhs) * abs(eta) <= 2 * bound
                checked += 1
        assert checked > 100


class TestCsvDump:
    def test_header_and_order(self):
        table = build_table([1, 1.5, 1.75, 1.875])
        lines = table_to_csv(table).splitlines()
        assert lines[0] == "l,m,value,status,eta"
        keys = [tuple(int(v) for v in line.split(",")[:2]) for line in lines[1:]]
        assert keys == [(0, 0), (1, 0), (2, 0), (3, 0), (1, 1), (2, 1)]

    def test_round_trip_values(self):
        seq = log1p_partial_sums(3.0, 9)
        table = build_table(seq)
        rows = [line.split(",") for line in table_to_csv(table).splitlines()[1:]]
        etas = eta_table(table)
        for l, m, value, status, eta in rows:
            cell = table.cell(int(l), int(m))
            assert status == cell.status.value
            if cell.status is CellStatus.VALID:
                assert float(value) == cell.value
            if eta:
                assert float(eta) == etas[(int(l), int(m))]
