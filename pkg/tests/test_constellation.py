"""Constellation construction: alphabets, power matrices, labels, bit mapping."""

import math

import numpy as np
import pytest

from psnoma.constellation import (
    build_joint_constellation,
    build_pam,
    build_power_matrix,
    build_super_constellation,
    demap_frame,
    map_bits,
)
from psnoma.errors import InvalidOrderError, PowerConstraintError, ShapeError

SQ02 = math.sqrt(0.2)
SQ08 = math.sqrt(0.8)


class TestPam:
    def test_binary_alphabet(self):
        pam = build_pam(2)
        assert pam.half_distance == 1.0
        np.testing.assert_allclose(pam.points, [-1.0, 1.0])

    def test_quaternary_alphabet(self):
        pam = build_pam(4)
        assert pam.half_distance == pytest.approx(0.447214, abs=1e-6)
        np.testing.assert_allclose(
            pam.points, [-1.341641, -0.447214, 0.447214, 1.341641], atol=1e-6
        )
        # mean power splits as (0.2 + 1.8) / 2
        assert np.mean(pam.points**2) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("order", [3, 0, 1, 6, -4])
    def test_rejects_bad_order(self, order):
        with pytest.raises(InvalidOrderError):
            build_pam(order)

    @pytest.mark.parametrize("order", [2, 4, 8, 16, 32])
    def test_unit_power_and_spacing(self, order):
        pam = build_pam(order)
        assert np.mean(np.abs(pam.points) ** 2) == pytest.approx(1.0, abs=1e-12)
        gaps = np.diff(pam.points)
        assert np.all(gaps > 0)
        np.testing.assert_allclose(gaps, 2.0 * pam.half_distance, rtol=1e-12)

    @pytest.mark.parametrize("order", [2, 4, 8, 16])
    def test_gray_adjacency(self, order):
        pam = build_pam(order)
        labels = pam.gray_labels
        diffs = labels[:-1] ^ labels[1:]
        # adjacent labels differ in exactly one bit
        assert all(int(d).bit_count() == 1 for d in diffs)
        assert len(set(labels.tolist())) == order


class TestPowerMatrix:
    def test_two_level_equal_split(self):
        g = build_power_matrix([0.2, 0.2], 2)
        np.testing.assert_allclose(g.alpha_a, [SQ02, 1j * SQ02], atol=1e-6)
        np.testing.assert_allclose(g.alpha_b, [SQ08, 1j * SQ08], atol=1e-6)

    def test_two_level_reference_rows(self):
        g = build_power_matrix([0.1, 0.4], 2)
        np.testing.assert_allclose(np.abs(g.alpha_a), [0.316228, 0.632456], atol=1e-6)
        np.testing.assert_allclose(np.angle(g.alpha_a), [0.0, np.pi / 2], atol=1e-12)

    def test_single_level_has_no_rotation(self):
        g = build_power_matrix([0.2], 1)
        assert g.alpha_a[0] == pytest.approx(SQ02)
        assert g.alpha_b[0] == pytest.approx(SQ08)
        assert g.alpha_a[0].imag == 0.0

    @pytest.mark.parametrize("bad", [0.0, 0.5, -0.1, 0.7])
    def test_rejects_out_of_range_power(self, bad):
        with pytest.raises(PowerConstraintError):
            build_power_matrix([0.2, bad], 2)

    def test_rejects_length_mismatch(self):
        with pytest.raises(ShapeError):
            build_power_matrix([0.2, 0.2, 0.2], 2)

    def test_rejects_non_power_of_two_levels(self):
        with pytest.raises(InvalidOrderError):
            build_power_matrix([0.2, 0.2, 0.2], 3)

    @pytest.mark.parametrize("p_values", [[0.2, 0.2], [0.1, 0.4], [0.05, 0.45, 0.3, 0.2]])
    def test_magnitudes_recover_allocation(self, p_values):
        n = len(p_values)
        g = build_power_matrix(p_values, n)
        np.testing.assert_allclose(np.abs(g.alpha_a) ** 2, p_values, atol=1e-12)
        np.testing.assert_allclose(
            np.abs(g.alpha_b) ** 2, 1.0 - np.asarray(p_values), atol=1e-12
        )
        np.testing.assert_allclose(
            np.angle(g.alpha_a), np.pi * np.arange(n) / n, atol=1e-12
        )
        np.testing.assert_allclose(
            np.angle(g.alpha_b), np.pi * np.arange(n) / n, atol=1e-12
        )

    def test_rotation_preserves_magnitude_at_equal_split(self):
        g = build_power_matrix([0.3] * 4, 4)
        assert np.ptp(np.abs(g.alpha_b)) < 1e-12


class TestJointConstellation:
    def test_two_level_binary_points(self):
        g = build_power_matrix([0.2, 0.2], 2)
        joint = build_joint_constellation(g, build_pam(2))
        expected = {-SQ08 + 0j, SQ08 + 0j, -1j * SQ08, 1j * SQ08}
        assert {complex(round(p.real, 9), round(p.imag, 9)) for p in joint.points} == {
            complex(round(p.real, 9), round(p.imag, 9)) for p in expected
        }

    def test_minimum_pairwise_distance(self):
        g = build_power_matrix([0.2, 0.2], 2)
        joint = build_joint_constellation(g, build_pam(2))
        pts = joint.points
        dists = np.abs(pts[:, None] - pts[None, :])
        d_min = dists[dists > 0].min()
        assert d_min == pytest.approx(1.264911, abs=1e-6)

    def test_degenerate_single_level(self):
        g = build_power_matrix([0.2], 1)
        joint = build_joint_constellation(g, build_pam(2))
        assert joint.size == 2
        np.testing.assert_allclose(sorted(joint.points.real), [-SQ08, SQ08], atol=1e-9)

    @pytest.mark.parametrize("n,mb", [(1, 2), (2, 2), (2, 4), (4, 2), (4, 8)])
    def test_cardinality_and_distinctness(self, n, mb):
        g = build_power_matrix([0.1 + 0.05 * i for i in range(n)], n)
        joint = build_joint_constellation(g, build_pam(mb))
        assert joint.size == n * mb
        assert len(set(joint.points.tolist())) == n * mb

    def test_label_round_trip(self):
        g = build_power_matrix([0.2, 0.3], 2)
        joint = build_joint_constellation(g, build_pam(4))
        for i in range(joint.size):
            level, symbol = joint.label_of(i)
            again = joint.index_of(level, symbol)
            assert again == i
            assert joint.points[again] == joint.points[i]

    def test_bit_codes_are_level_then_gray(self):
        g = build_power_matrix([0.2, 0.2], 2)
        sb = build_pam(4)
        joint = build_joint_constellation(g, sb)
        for i in range(joint.size):
            level, symbol = joint.label_of(i)
            assert joint.bit_codes[i] == (level << 2) | sb.gray_labels[symbol]


class TestSuperConstellation:
    def test_cardinality(self):
        g = build_power_matrix([0.2, 0.2], 2)
        sup = build_super_constellation(g, build_pam(2), build_pam(2))
        assert sup.size == 8

    def test_single_level_cardinality(self):
        g = build_power_matrix([0.2], 1)
        sup = build_super_constellation(g, build_pam(2), build_pam(2))
        assert sup.size == 4

    def test_matches_direct_enumeration(self):
        sa, sb = build_pam(2), build_pam(4)
        g = build_power_matrix([0.1, 0.3], 2)
        sup = build_super_constellation(g, sa, sb)
        direct = {
            complex(g.alpha_a[l] * sa.points[a] + g.alpha_b[l] * sb.points[b])
            for l in range(2)
            for b in range(4)
            for a in range(2)
        }
        assert direct == set(map(complex, sup.points))

    def test_first_level_corner_point(self):
        g = build_power_matrix([0.2, 0.2], 2)
        sup = build_super_constellation(g, build_pam(2), build_pam(2))
        # level 1, both symbols at +1
        sel = (sup.level_index == 0) & (sup.symbol_a_index == 1) & (sup.symbol_b_index == 1)
        assert sup.points[sel][0] == pytest.approx(1.341641, abs=1e-6)


class TestBitMapping:
    def setup_method(self):
        self.g = build_power_matrix([0.2, 0.2], 2)
        self.sa = build_pam(2)
        self.sb = build_pam(2)

    def test_all_zero_bits(self):
        frame = map_bits([0, 0, 0], self.g, self.sa, self.sb)
        assert frame.level == 1
        assert frame.symbol_b == -1.0
        assert frame.symbol_a == -1.0

    def test_leading_bit_is_level(self):
        frame = map_bits([1, 0, 0], self.g, self.sa, self.sb)
        assert frame.level == 2
        assert frame.symbol_b == -1.0
        assert frame.symbol_a == -1.0

    def test_round_trip_all_codewords(self):
        for value in range(8):
            bits = tuple((value >> (2 - k)) & 1 for k in range(3))
            frame = map_bits(bits, self.g, self.sa, self.sb)
            assert demap_frame(frame) == bits

    def test_round_trip_larger_alphabets(self):
        g = build_power_matrix([0.1, 0.2, 0.3, 0.4], 4)
        sa, sb = build_pam(4), build_pam(8)
        width = 2 + 3 + 2
        for value in range(2**width):
            bits = tuple((value >> (width - 1 - k)) & 1 for k in range(width))
            assert demap_frame(map_bits(bits, g, sa, sb)) == bits

    def test_rejects_wrong_bit_count(self):
        with pytest.raises(ShapeError):
            map_bits([0, 1], self.g, self.sa, self.sb)
        with pytest.raises(ShapeError):
            map_bits([0, 1, 2], self.g, self.sa, self.sb)
