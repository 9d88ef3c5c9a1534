"""Tests for the summary table reproduction."""

import random
from fractions import Fraction

from src.services.table1 import (
    CSV_COLUMNS,
    RowVerdict,
    Table1Scale,
    auction_row,
    congestion_row,
    reproduce_table1,
    scheduling_identical_row,
    scheduling_unrelated_row,
    utility_row,
)


class TestRows:
    """Tests for individual rows with few samples."""

    def test_unrelated_scheduling(self):
        """Test the weighted unrelated-machines row."""
        row = scheduling_unrelated_row(random.Random(0), samples=3, family_size=3)
        assert row.verdict is RowVerdict.PASS
        assert row.observed == 4
        assert row.notes["counterexample_ratio"] == 2
        assert row.checks["within-claim"]

    def test_unrelated_bound_comes_from_certificates(self):
        """Test nothing is certified without samples."""
        row = scheduling_unrelated_row(random.Random(0), samples=0, family_size=3)
        assert row.observed == 0

    def test_identical_scheduling(self):
        """Test the identical-machines row."""
        row = scheduling_identical_row(random.Random(0), samples=3, family_size=4)
        assert row.verdict is RowVerdict.PASS
        assert row.observed == 2
        assert row.notes["selfish_mixed_lower_bound"] == Fraction(11, 8)

    def test_auctions(self):
        """Test the auction row reaches its claim exactly."""
        row = auction_row(random.Random(0), samples=3, family_size=0)
        assert row.verdict is RowVerdict.PASS
        assert row.observed == row.claimed == 2

    def test_utility_games(self):
        """Test the utility-game row."""
        row = utility_row(random.Random(0), samples=3, family_size=0)
        assert row.verdict is RowVerdict.PASS
        assert row.observed == 2

    def test_congestion_family_too_small(self):
        """Test a short chain misses the 5% tolerance."""
        row = congestion_row(random.Random(0), samples=2, family_size=20)
        assert row.checks["family-equilibrium"]
        assert not row.checks["family-within-tolerance"]
        assert row.verdict is RowVerdict.FAIL
        assert row.observed == Fraction(17 * 20 + 45, 3 * 20 + 34)

    def test_congestion_family_within_tolerance(self):
        """Test a long chain comes within 5% of 17/3."""
        row = congestion_row(random.Random(0), samples=2, family_size=200)
        assert row.verdict is RowVerdict.PASS


class TestReproduction:
    """Tests for the full table run."""

    def test_small_scale_passes(self):
        """Test every row passes at the small scale."""
        report = reproduce_table1(Table1Scale.SMALL, seed=0)
        assert report.passed
        assert [row.row for row in report.rows][0] == "R||sum w_j C_j"
        assert len(report.rows) == 5

    def test_csv(self):
        """Test the CSV header and one line per row."""
        report = reproduce_table1(Table1Scale.SMALL, seed=1, congestion_n=200, scheduling_m=3)
        lines = report.to_csv().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 6
        assert lines[-1].endswith(",PASS")
