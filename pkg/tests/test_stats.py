"""Contingency counting, Loevinger indices, and threshold classification."""

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from galimp import (
    ClassificationThresholds,
    ContingencyTable,
    Orientation,
    Quadrant,
    Strength,
    UsageMatrix,
    ValidationError,
    classify,
    contingency,
    h_matrix,
    loevinger_h,
    pair_tables,
)
from galimp.stats import contingency_to_csv, format_h, h_matrix_to_csv, h_matrix_to_json
from golden_values import (
    H_PRINTED,
    LOG_DEVIATED_PAIR,
    PAIR_COUNTS,
    PRINT_DEVIATIONS,
    pair_counts_in_log_order,
)
from oracles import loevinger_fraction

TH = ClassificationThresholds(0.40, 0.60)

counts_st = st.integers(min_value=0, max_value=500)
tables_st = st.builds(ContingencyTable, counts_st, counts_st, counts_st, counts_st)


class TestContingency:
    def test_demo_log_first_block(self, demo_usage):
        t = contingency(demo_usage, "The number", "The Sign")
        assert t.counts() == (100, 30, 85, 553)
        assert t.n == 768

    def test_demo_log_sign_numbers(self, demo_usage):
        t = contingency(demo_usage, "The Sign", "The numbers")
        assert t.counts() == (49, 136, 100, 483)

    def test_demo_log_all_blocks(self, demo_usage):
        expected = pair_counts_in_log_order()
        tables = pair_tables(demo_usage)
        assert set(tables) == set(expected)
        for pair, counts in expected.items():
            assert tables[pair].counts() == counts, pair

    def test_empty_usage(self):
        usage = UsageMatrix((), ("a", "b"), (), 41)
        assert contingency(usage, "a", "b").counts() == (0, 0, 0, 41)

    def test_same_term_rejected(self, demo_usage):
        with pytest.raises(ValidationError):
            contingency(demo_usage, "The Sign", "The Sign")

    def test_unknown_term(self, demo_usage):
        from galimp import UnknownLabelError

        with pytest.raises(UnknownLabelError):
            contingency(demo_usage, "The Sign", "nope")


class TestLoevinger:
    def test_first_demo_block(self):
        q = loevinger_h(ContingencyTable(100, 30, 85, 553))
        assert round(q.h_exclusion, 2) == -2.19
        assert round(q.h_forward, 2) == 0.70
        assert round(q.h_backward, 2) == 0.45
        assert round(q.h_complement, 2) == -0.14

    def test_number_letters_block(self):
        q = loevinger_h(ContingencyTable(50, 80, 143, 495))
        assert (round(q.h_exclusion, 2), round(q.h_forward, 2),
                round(q.h_backward, 2), round(q.h_complement, 2)) == (-0.53, 0.18, 0.11, -0.04)

    def test_independence_gives_exact_zero(self):
        q = loevinger_h(ContingencyTable(10, 10, 10, 10))
        assert q.h_forward == 0.0

    def test_zero_error_cell_gives_one(self):
        q = loevinger_h(ContingencyTable(7, 0, 5, 9))
        assert q.h_forward == 1.0

    def test_zero_margin_undefined(self):
        q = loevinger_h(ContingencyTable(0, 0, 3, 5))
        assert q.h_forward is None and q.h_exclusion is None
        assert q.h_backward is not None
        assert loevinger_h(ContingencyTable(0, 0, 0, 0)) == loevinger_h(
            ContingencyTable(0, 0, 0, 0)
        )

    def test_published_grid_against_formula(self):
        """Printed two-decimal values match the formula except the known typos."""
        for pair, counts in PAIR_COUNTS.items():
            quad = loevinger_h(ContingencyTable(*counts))
            printed = dict(zip(
                (Quadrant.EXCLUSION, Quadrant.FORWARD, Quadrant.BACKWARD, Quadrant.COMPLEMENT),
                H_PRINTED[pair],
            ))
            for quadrant, printed_value in printed.items():
                value = quad.by_quadrant(quadrant)
                if (pair, quadrant) in PRINT_DEVIATIONS:
                    expected_printed, formula_2dp = PRINT_DEVIATIONS[(pair, quadrant)]
                    assert printed_value == expected_printed
                    assert round(value, 2) == formula_2dp
                else:
                    assert abs(round(value, 2) - printed_value) <= 0.01 + 1e-9, (
                        pair, quadrant, value, printed_value,
                    )

    def test_exhaustive_small_tables_match_rational_oracle(self):
        # Every table with n <= 20, against exact rational evaluation.
        for n11 in range(21):
            for n10 in range(21 - n11):
                for n01 in range(21 - n11 - n10):
                    for n00 in range(21 - n11 - n10 - n01):
                        t = ContingencyTable(n11, n10, n01, n00)
                        q = loevinger_h(t)
                        for quadrant in Quadrant:
                            exact = loevinger_fraction(t, quadrant)
                            value = q.by_quadrant(quadrant)
                            if exact is None:
                                assert value is None
                            else:
                                assert value == pytest.approx(float(exact), abs=1e-12)

    def test_negative_count_rejected(self):
        with pytest.raises(ValidationError):
            ContingencyTable(1, -1, 0, 0)


class TestLoevingerProperties:
    @given(tables_st)
    @settings(max_examples=300, deadline=None)
    def test_transpose_symmetry(self, t):
        q, qs = loevinger_h(t), loevinger_h(t.swapped())
        assert q.h_forward == qs.h_backward
        assert q.h_backward == qs.h_forward
        assert q.h_exclusion == qs.h_exclusion
        assert q.h_complement == qs.h_complement

    @given(tables_st, st.integers(min_value=2, max_value=50))
    @settings(max_examples=300, deadline=None)
    def test_count_scaling_exact(self, t, k):
        q, qk = loevinger_h(t), loevinger_h(t.scaled(k))
        for quadrant in Quadrant:
            assert q.by_quadrant(quadrant) == qk.by_quadrant(quadrant)

    @given(tables_st)
    @settings(max_examples=300, deadline=None)
    def test_bounds_and_unit_value(self, t):
        q = loevinger_h(t)
        cells = t.counts()
        from galimp.stats import QUADRANT_CELLS

        for quadrant in Quadrant:
            v = q.by_quadrant(quadrant)
            if v is None:
                continue
            assert v <= 1.0
            (r1, r2), (c1, c2), e = QUADRANT_CELLS[quadrant]
            assert (v == 1.0) == (cells[e] == 0)
            assert (v == 0.0) == (
                t.n * cells[e] == (cells[r1] + cells[r2]) * (cells[c1] + cells[c2])
            )

    @given(st.integers(1, 30), st.integers(1, 30), st.integers(1, 30), st.integers(1, 30))
    @settings(max_examples=200, deadline=None)
    def test_exact_independence_gives_zero(self, x, y, u, v):
        # Proportional rows: (xu, xv / yu, yv) factorizes, so every index is 0.
        q = loevinger_h(ContingencyTable(x * u, x * v, y * u, y * v))
        for quadrant in Quadrant:
            assert q.by_quadrant(quadrant) == 0.0

    @given(tables_st)
    @settings(max_examples=200, deadline=None)
    def test_forward_equals_backward_of_swapped(self, t):
        assert loevinger_h(t).h_forward == loevinger_h(t.swapped()).h_backward


class TestClassify:
    def test_q_implication(self):
        assert classify(0.70, TH).strength is Strength.Q_IMPLICATION

    def test_tendency(self):
        assert classify(0.45, TH).strength is Strength.TENDENCY

    def test_absence(self):
        assert classify(0.18, TH).strength is Strength.ABSENCE

    def test_boundary_quasi_is_q_implication(self):
        assert classify(0.60, TH).strength is Strength.Q_IMPLICATION

    def test_boundary_tend_is_tendency(self):
        assert classify(0.40, TH).strength is Strength.TENDENCY

    def test_undefined_is_absence(self):
        assert classify(None, TH).strength is Strength.ABSENCE

    def test_exclusion_labels(self):
        c = classify(0.85, TH, Orientation.EXCLUSION)
        assert c.label == "q-exclusion"
        assert classify(0.5, TH, Orientation.EXCLUSION).label == "tendency-to-exclusion"
        assert classify(0.1, TH, Orientation.EXCLUSION).label == "absence"

    def test_bad_thresholds(self):
        with pytest.raises(ValidationError):
            ClassificationThresholds(0.7, 0.6)


class TestHMatrix:
    def test_demo_log_has_fifteen_pairs(self, demo_usage):
        hm = h_matrix(demo_usage)
        assert len(hm) == 15

    def test_demo_log_matches_per_pair_computation(self, demo_usage):
        hm = h_matrix(demo_usage)
        for (a, b), quad in hm.items():
            assert quad == loevinger_h(contingency(demo_usage, a, b))

    def test_two_terms(self):
        usage = UsageMatrix(("u1",), ("a", "b"), ((True, False),), 3)
        assert len(h_matrix(usage)) == 1

    def test_never_co_used_perfect_exclusion(self):
        usage = UsageMatrix(
            ("u1", "u2"), ("a", "b"), ((True, False), (False, True)), 4
        )
        assert h_matrix(usage)[("a", "b")].h_exclusion == 1.0

    def test_single_term_rejected(self):
        usage = UsageMatrix(("u1",), ("a",), ((True,),), 2)
        with pytest.raises(ValidationError, match="2 terms"):
            h_matrix(usage)

    def test_cross_check_against_swapped_pair(self, demo_usage):
        a, b = "The Sign", "The letters"
        fwd = loevinger_h(contingency(demo_usage, a, b)).h_forward
        bwd = loevinger_h(contingency(demo_usage, b, a)).h_backward
        assert fwd == bwd


class TestReports:
    def test_format_h(self):
        assert format_h(0.696) == "0.70"
        assert format_h(None) == ""
        assert format_h(-0.0001) == "0.00"

    def test_block_csv_layout(self, demo_usage):
        tables = pair_tables(demo_usage)
        text = contingency_to_csv(demo_usage.terms, tables)
        lines = text.splitlines()
        # 1 header + 2 rows per non-final term
        assert len(lines) == 1 + 2 * (len(demo_usage.terms) - 1)
        assert lines[1].startswith("The number,100,30")
        assert lines[2].startswith(",85,553")

    def test_h_csv_mirrors_quadruple(self, demo_usage):
        quads = h_matrix(demo_usage)
        lines = h_matrix_to_csv(demo_usage.terms, quads).splitlines()
        assert lines[1].startswith("The number,-2.19,0.70")
        assert lines[2].startswith(",0.45,-0.14")

    def test_json_report_shape(self, demo_usage):
        tables = pair_tables(demo_usage)
        quads = h_matrix(demo_usage)
        data = h_matrix_to_json(demo_usage.terms, tables, quads, TH, demo_usage.population)
        assert data["population"] == 768
        assert len(data["pairs"]) == 15
        first = data["pairs"][0]
        assert first["a"] == "The number" and first["b"] == "The Sign"
        assert first["table"] == [100, 30, 85, 553]
        assert first["class"]["forward"] == "q-implication"
        assert first["class"]["exclusion"] == "absence"
