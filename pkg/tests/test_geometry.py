"""Exhaustive distance reports against the closed-form expressions."""

import math
from dataclasses import replace

import numpy as np
import pytest

from psnoma.constellation import (
    build_joint_constellation,
    build_pam,
    build_power_matrix,
)
from psnoma.errors import ParameterError, ShapeError
from psnoma.geometry import (
    compare_levels,
    compare_power_matrix_designs,
    da_min,
    joint_dmin,
    pair_table_csv,
)

SQ08 = math.sqrt(0.8)


def two_level_joint(p1=0.2, p2=0.2, mb=2):
    g = build_power_matrix([p1, p2], 2)
    return g, build_joint_constellation(g, build_pam(mb))


class TestJointDmin:
    def test_reference_two_level_matrix(self):
        _, joint = two_level_joint()
        report = joint_dmin(joint)
        assert report.d_min == pytest.approx(1.264911, abs=1e-6)
        i, j = report.arg_pair
        assert joint.level_index[i] != joint.level_index[j]
        assert not report.degenerate

    def test_single_level_baseline(self):
        g = build_power_matrix([0.2], 1)
        joint = build_joint_constellation(g, build_pam(2))
        assert joint_dmin(joint).d_min == pytest.approx(1.788854, abs=1e-6)

    def test_matches_closed_forms_for_two_levels(self):
        # the exhaustive search must agree with the three candidate expressions
        for p1, p2 in [(0.2, 0.2), (0.1, 0.4), (0.3, 0.45), (0.05, 0.25)]:
            g, joint = two_level_joint(p1, p2)
            d_b = 1.0  # binary alphabet half distance
            a1, a2 = np.abs(g.alpha_b)
            analytic = min(
                2 * d_b * a1,
                2 * d_b * a2,
                math.sqrt((d_b * a1) ** 2 + (d_b * a2) ** 2),
            )
            assert abs(joint_dmin(joint).d_min - analytic) < 1e-12

    def test_table_structure(self):
        _, joint = two_level_joint(0.1, 0.3, mb=4)
        report = joint_dmin(joint)
        table = report.table
        np.testing.assert_array_equal(table, table.T)
        assert np.all(np.diag(table) == 0.0)
        off = table + np.diag(np.full(table.shape[0], np.inf))
        assert report.d_min == off.min()
        np.testing.assert_allclose(report.per_point_min, off.min(axis=1))

    def test_duplicate_rows_flag_degenerate(self):
        g = build_power_matrix([0.2, 0.2], 2)
        # force identical rows to collapse the rotation
        forced = replace(g, alpha_b=np.array([g.alpha_b[0], g.alpha_b[0]]))
        joint = build_joint_constellation(forced, build_pam(2))
        report = joint_dmin(joint)
        assert report.degenerate
        assert report.d_min == 0.0

    def test_scaling_moves_every_distance(self):
        _, joint = two_level_joint(0.15, 0.35)
        base = joint_dmin(joint)
        scaled = replace(joint, points=3.0 * joint.points)
        report = joint_dmin(scaled)
        assert report.d_min == pytest.approx(3.0 * base.d_min, rel=1e-12)
        np.testing.assert_allclose(report.table, 3.0 * base.table, rtol=1e-12)

    def test_needs_two_points(self):
        g = build_power_matrix([0.2], 1)
        joint = build_joint_constellation(g, build_pam(2))
        lone = replace(
            joint,
            points=joint.points[:1],
            level_index=joint.level_index[:1],
            symbol_index=joint.symbol_index[:1],
            bit_codes=joint.bit_codes[:1],
        )
        with pytest.raises(ParameterError):
            joint_dmin(lone)


class TestDaMin:
    def test_equal_levels(self):
        g = build_power_matrix([0.2, 0.2], 2)
        assert da_min(g, build_pam(2)) == pytest.approx(0.894427, abs=1e-6)

    def test_minimum_rules(self):
        g = build_power_matrix([0.2, 0.1], 2)
        assert da_min(g, build_pam(2)) == pytest.approx(0.632456, abs=1e-6)

    def test_single_level(self):
        g = build_power_matrix([0.2], 1)
        assert da_min(g, build_pam(2)) == pytest.approx(2 * math.sqrt(0.2), abs=1e-9)


class TestCompareLevels:
    @pytest.mark.parametrize("p", [0.1, 0.2, 0.3])
    def test_two_levels_beat_more_levels(self, p):
        report = compare_levels(p, [2, 4, 8], build_pam(2))
        by_n = dict(report.d_min_by_n)
        assert by_n[2] > by_n[4] > by_n[8]
        assert report.two_is_optimal

    def test_single_entry(self):
        report = compare_levels(0.2, [2], build_pam(2))
        assert len(report.d_min_by_n) == 1
        assert report.two_is_optimal

    def test_without_two_reports_none(self):
        report = compare_levels(0.2, [4, 8], build_pam(2))
        assert report.two_is_optimal is None


class TestPowerMatrixDesignComparison:
    def test_equal_magnitude_wins_against_reference(self):
        sa, sb = build_pam(2), build_pam(2)
        case4 = build_power_matrix([0.1, 0.1], 2)
        benchmark = build_power_matrix([0.1, 0.4], 2)
        report = compare_power_matrix_designs(case4, benchmark, sa, sb)
        assert report.equal_magnitude.joint_d_min > report.alternative.joint_d_min
        assert report.equal_magnitude.da_min >= report.alternative.da_min

    def test_case3_also_beats_reference(self):
        sa, sb = build_pam(2), build_pam(2)
        case3 = build_power_matrix([0.2, 0.2], 2)
        benchmark = build_power_matrix([0.1, 0.4], 2)
        report = compare_power_matrix_designs(case3, benchmark, sa, sb)
        assert report.equal_magnitude.joint_d_min > report.alternative.joint_d_min

    def test_identical_inputs_equal_report(self):
        sa, sb = build_pam(2), build_pam(2)
        g = build_power_matrix([0.2, 0.2], 2)
        report = compare_power_matrix_designs(g, g, sa, sb)
        assert report.equal_magnitude == report.alternative

    def test_rejects_mismatched_levels(self):
        sa, sb = build_pam(2), build_pam(2)
        with pytest.raises(ShapeError):
            compare_power_matrix_designs(
                build_power_matrix([0.2, 0.2], 2),
                build_power_matrix([0.2], 1),
                sa,
                sb,
            )


class TestCsv:
    def test_pair_table_csv(self):
        _, joint = two_level_joint()
        report = joint_dmin(joint)
        text = pair_table_csv(report)
        lines = text.strip().splitlines()
        assert lines[0] == "i,j,distance"
        assert len(lines) == 1 + 4 * 3 // 2
        first = lines[1].split(",")
        assert first[0] == "0" and first[1] == "1"
        assert float(first[2]) == pytest.approx(2 * SQ08, abs=1e-9)
