import pytest

from zetalab import (
    ConfigError,
    EscapedStrip,
    EvalConfig,
    NonMonotonicError,
    ParseError,
    ScanWindow,
    WindowTooCoarse,
    crosscheck_zeros,
    functional_equation_residual,
    load_zero_table,
    reference_table_path,
    refine_zero,
    scan_zeros,
    zeta_hat_eta,
)
from zetalab.zeros import ZeroRecord

import oracles

ACCEL = EvalConfig()


class TestScanWindow:
    def test_validation(self):
        with pytest.raises(ConfigError):
            ScanWindow(-1.0, 10.0, 0.05)
        with pytest.raises(ConfigError):
            ScanWindow(10.0, 10.0, 0.05)
        with pytest.raises(ConfigError):
            ScanWindow(10.0, 10.2, 0.3)  # step >= width

    def test_too_coarse(self):
        with pytest.raises(WindowTooCoarse):
            scan_zeros(ScanWindow(10.0, 35.0, 0.6), ACCEL)

    def test_requires_acceleration(self):
        with pytest.raises(ConfigError):
            scan_zeros(ScanWindow(10.0, 20.0, 0.05), EvalConfig(accelerate=False))


@pytest.fixture(scope="module")
def five_records():
    return scan_zeros(ScanWindow(10.0, 35.0, 0.05), ACCEL)


class TestScan:
    def test_finds_the_first_five(self, five_records):
        assert len(five_records) == 5
        for record, expected in zip(five_records, oracles.ZERO_ORDINATES_FIRST10):
            assert abs(record.ordinate - expected) <= 1e-6
            assert record.refined
            assert record.residual_mag <= ACCEL.tolerance

    def test_indices_and_ordering(self, five_records):
        assert [r.index for r in five_records] == [1, 2, 3, 4, 5]
        ordinates = [r.ordinate for r in five_records]
        assert ordinates == sorted(ordinates)

    def test_refined_zeros_recheck_with_doubled_depth(self, five_records):
        deep = ACCEL.replace(accel_order=2 * ACCEL.accel_order)
        for record in five_records:
            rho = complex(0.5, record.ordinate)
            assert abs(zeta_hat_eta(rho, deep).value) <= 1e-8

    def test_reflected_point_also_vanishes(self, five_records):
        # 1 - rho is a zero whenever rho is
        for record in five_records:
            mirrored = complex(0.5, -record.ordinate)
            assert abs(zeta_hat_eta(mirrored, ACCEL).value) <= 1e-8

    def test_functional_equation_residual_at_zeros(self, five_records):
        for record in five_records:
            rho = complex(0.5, record.ordinate)
            assert functional_equation_residual(rho, ACCEL).residual <= 1e-8

    def test_empty_below_first_zero(self):
        assert scan_zeros(ScanWindow(0.0, 10.0, 0.05), ACCEL) == []

    def test_window_without_minimum_is_empty(self):
        assert scan_zeros(ScanWindow(19.0, 19.5, 0.05), ACCEL) == []

    def test_scan_is_deterministic(self, five_records):
        again = scan_zeros(ScanWindow(10.0, 35.0, 0.05), ACCEL)
        assert again == five_records


class TestRefine:
    def test_from_nearby_seed(self):
        record = refine_zero(14.1, ACCEL)
        assert abs(record.ordinate - oracles.ZERO_ORDINATES_FIRST10[0]) <= 1e-8
        assert record.refined
        assert record.residual_mag <= ACCEL.tolerance
        # agrees with the rotated-sign bisection oracle too
        assert abs(record.ordinate - oracles.ZERO1_BISECTION) <= 1e-8

    def test_seed_at_exact_zero_converges_immediately(self):
        record = refine_zero(oracles.ZERO_ORDINATES_FIRST10[1], ACCEL)
        assert abs(record.ordinate - oracles.ZERO_ORDINATES_FIRST10[1]) <= 1e-10

    def test_far_seed_escapes_strip(self):
        # empirical basin behavior: from t = 13.0 the Newton step overshoots
        # out of 0 < Re z < 1 rather than sliding to 14.1347
        with pytest.raises(EscapedStrip):
            refine_zero(13.0, ACCEL)


class TestZeroTable:
    def test_parses_plain_file(self, tmp_path):
        path = tmp_path / "table.txt"
        path.write_text("14.134725141734695\n21.022039638771555\n")
        assert load_zero_table(path) == [14.134725141734695, 21.022039638771555]

    def test_skips_comments_and_blanks(self, tmp_path):
        path = tmp_path / "table.txt"
        path.write_text("# header\n\n14.134725\n   \n# mid comment\n21.022040\n")
        assert load_zero_table(path) == [14.134725, 21.022040]

    def test_descending_values_rejected(self, tmp_path):
        path = tmp_path / "table.txt"
        path.write_text("21.0\n14.1\n")
        with pytest.raises(NonMonotonicError) as info:
            load_zero_table(path)
        assert info.value.line == 2

    def test_garbage_line_rejected(self, tmp_path):
        path = tmp_path / "table.txt"
        path.write_text("14.1\nnot-a-number\n")
        with pytest.raises(ParseError) as info:
            load_zero_table(path)
        assert info.value.line == 2

    def test_packaged_reference_table(self):
        table = load_zero_table(reference_table_path())
        assert len(table) == 29
        for got, expected in zip(table, oracles.ZERO_ORDINATES_FIRST10):
            assert abs(got - expected) <= 1e-12


class TestCrosscheck:
    @staticmethod
    def records(ordinates):
        return [
            ZeroRecord(index=i, ordinate=t, residual_mag=0.0, refined=True)
            for i, t in enumerate(ordinates, start=1)
        ]

    def test_identical_lists_match_fully(self):
        reference = oracles.ZERO_ORDINATES_FIRST10[:5]
        report = crosscheck_zeros(self.records(reference), reference, tol=1e-6)
        assert len(report.matched) == 5
        assert report.max_delta == 0.0
        assert not report.unmatched_found
        assert not report.unmatched_reference

    def test_small_shift_still_matches(self):
        reference = oracles.ZERO_ORDINATES_FIRST10[:5]
        shifted = [t + 1e-7 for t in reference]
        report = crosscheck_zeros(self.records(shifted), reference, tol=1e-6)
        assert len(report.matched) == 5
        assert report.max_delta == pytest.approx(1e-7, rel=1e-3)

    def test_missed_zero_reported_as_unmatched_reference(self):
        reference = oracles.ZERO_ORDINATES_FIRST10[:5]
        found = self.records(reference[:2] + reference[3:])  # drop the third
        report = crosscheck_zeros(found, reference, tol=1e-6,
                                  window=(10.0, 35.0))
        assert len(report.matched) == 4
        assert report.unmatched_reference == [reference[2]]
        assert not report.unmatched_found

    def test_spurious_zero_reported_as_unmatched_found(self):
        reference = oracles.ZERO_ORDINATES_FIRST10[:3]
        found = self.records(reference + [40.0])
        report = crosscheck_zeros(found, reference, tol=1e-6, window=(10.0, 45.0))
        assert [r.ordinate for r in report.unmatched_found] == [40.0]
