"""Fading statistics, noise moments, and reproducibility contracts."""

import numpy as np
import pytest
from scipy import stats

from psnoma.channel import (
    LinkParams,
    derived_rng,
    draw_channel,
    draw_noise,
    make_rng,
    propagate,
)
from psnoma.errors import ParameterError


class TestLinkParams:
    def test_snr_is_reciprocal_noise(self):
        params = LinkParams(beta_a=10.0, beta_b=1.0, n0=0.01)
        assert params.snr == pytest.approx(100.0)

    def test_from_snr_db(self):
        params = LinkParams.from_snr_db(20.0, beta_a=10.0, beta_b=1.0)
        assert params.n0 == pytest.approx(0.01)

    def test_rejects_swapped_variances(self):
        with pytest.raises(ParameterError):
            LinkParams(beta_a=1.0, beta_b=10.0, n0=0.1)

    def test_rejects_nonpositive_noise(self):
        with pytest.raises(ParameterError):
            LinkParams(beta_a=10.0, beta_b=1.0, n0=0.0)


class TestChannelDraws:
    @pytest.mark.parametrize("beta,tol", [(1.0, 0.01), (10.0, 0.1)])
    def test_mean_power_matches_variance(self, beta, tol):
        h = draw_channel(beta, make_rng(1234), size=1_000_000)
        assert np.mean(np.abs(h) ** 2) == pytest.approx(beta, abs=tol)

    def test_power_is_exponential(self):
        h = draw_channel(2.5, make_rng(77), size=100_000)
        result = stats.kstest(np.abs(h) ** 2, "expon", args=(0, 2.5))
        assert result.pvalue > 0.01

    def test_components_are_balanced(self):
        h = draw_channel(4.0, make_rng(5), size=500_000)
        assert np.var(h.real) == pytest.approx(2.0, rel=0.01)
        assert np.var(h.imag) == pytest.approx(2.0, rel=0.01)
        assert abs(np.mean(h)) < 0.005

    def test_identical_seed_identical_stream(self):
        a = draw_channel(1.0, make_rng(99), size=1000)
        b = draw_channel(1.0, make_rng(99), size=1000)
        np.testing.assert_array_equal(a, b)

    def test_scalar_draw(self):
        h = draw_channel(1.0, make_rng(0))
        assert isinstance(h, complex)

    def test_rejects_nonpositive_variance(self):
        with pytest.raises(ParameterError):
            draw_channel(0.0, make_rng(0))


class TestPropagate:
    def test_noiseless_is_exact(self):
        rng = make_rng(3)
        # dyadic components make the product exact in floating point
        y = propagate(2.0 - 4.0j, 0.5 + 0.25j, 0.0, rng)
        assert y == 2.0 - 1.5j

    def test_zero_signal_gives_pure_noise(self):
        rng = make_rng(8)
        y = propagate(np.zeros(1_000_000), np.ones(1_000_000), 0.25, rng)
        assert np.var(y) == pytest.approx(0.25, rel=0.01)

    def test_noise_moment(self):
        rng = make_rng(21)
        n = 1_000_000
        s = np.full(n, 0.3 + 0.4j)
        h = draw_channel(1.0, rng, size=n)
        y = propagate(s, h, 0.1, rng)
        resid = y - h * s
        assert np.var(resid) == pytest.approx(0.1, rel=0.01)
        # each quadrature carries half the noise power
        assert np.var(resid.real) == pytest.approx(0.05, rel=0.02)
        assert np.var(resid.imag) == pytest.approx(0.05, rel=0.02)

    def test_rejects_negative_noise(self):
        with pytest.raises(ParameterError):
            propagate(1.0, 1.0, -0.1, make_rng(0))


class TestDerivedStreams:
    def test_same_key_same_stream(self):
        a = derived_rng(7, 1, 2).standard_normal(8)
        b = derived_rng(7, 1, 2).standard_normal(8)
        np.testing.assert_array_equal(a, b)

    def test_distinct_keys_differ(self):
        a = derived_rng(7, 1, 2).standard_normal(8)
        b = derived_rng(7, 1, 3).standard_normal(8)
        assert not np.array_equal(a, b)

    def test_noise_helper_variance(self):
        z = draw_noise(0.5, make_rng(4), size=400_000)
        assert np.var(z) == pytest.approx(0.5, rel=0.01)
