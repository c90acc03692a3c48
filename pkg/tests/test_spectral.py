"""Frequency-grid containers and band-aware quadrature."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from efq.spectral import (
    AmplitudeResponse,
    FrequencyGrid,
    amplitude_of_tf,
    band_integral,
    band_mean,
    constant_response,
    ct_frequency_map,
    is_almost_constant,
    l2_norm_sq,
    log_geometric_mean,
    oversample_response,
    power_cosine_moment,
)
from efq.transfer import ContinuousTF, RationalDiscreteTF


class TestFrequencyGrid:
    def test_spans_zero_to_pi(self):
        g = FrequencyGrid(256)
        assert g.omegas[0] == 0.0
        assert g.omegas[-1] == pytest.approx(math.pi, abs=0)
        assert g.spacing == pytest.approx(math.pi / 255)

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError):
            FrequencyGrid(16)


class TestAmplitudeResponse:
    def test_negative_values_rejected(self, grid):
        vals = np.ones(grid.n_points)
        vals[10] = -1e-3
        with pytest.raises(ValueError):
            AmplitudeResponse(grid, vals)

    def test_nonfinite_values_rejected(self, grid):
        vals = np.ones(grid.n_points)
        vals[0] = math.inf
        with pytest.raises(ValueError):
            AmplitudeResponse(grid, vals)

    def test_cutoff_requires_both_edges(self, grid):
        vals = np.ones(grid.n_points)
        with pytest.raises(ValueError):
            AmplitudeResponse(grid, vals, cutoff=1.0, edge_below=1.0)

    def test_values_are_copied_and_frozen(self, grid):
        vals = np.ones(grid.n_points)
        resp = AmplitudeResponse(grid, vals)
        vals[0] = 7.0
        assert resp.values[0] == 1.0
        with pytest.raises(ValueError):
            resp.values[0] = 2.0


class TestNorms:
    def test_constant_two_has_norm_four(self, grid):
        assert l2_norm_sq(constant_response(grid, 2.0)) == pytest.approx(4.0, abs=1e-12)

    def test_zero_response_has_zero_norm(self, grid):
        assert l2_norm_sq(constant_response(grid, 0.0)) == 0.0

    def test_cosine_shape_has_norm_two(self, cosine_response):
        # (1/pi) * integral of (2 + 2 cos w) over [0, pi] = 2, and the
        # trapezoid rule is exact for low-order cosine polynomials.
        assert l2_norm_sq(cosine_response) == pytest.approx(2.0, abs=1e-12)

    def test_norm_scales_quadratically(self, p_base):
        scaled = p_base.with_values(3.0 * p_base.values)
        assert l2_norm_sq(scaled) == pytest.approx(9.0 * l2_norm_sq(p_base), rel=1e-12)


class TestLogGeometricMean:
    def test_constant_e_gives_one(self, grid):
        resp = constant_response(grid, math.e)
        assert log_geometric_mean(resp) == pytest.approx(1.0, abs=1e-12)

    def test_constant_one_gives_zero(self, grid):
        assert log_geometric_mean(constant_response(grid, 1.0)) == pytest.approx(0.0, abs=1e-15)

    def test_zero_sample_rejected_with_location(self, grid):
        vals = np.ones(grid.n_points)
        vals[37] = 0.0
        with pytest.raises(ValueError, match="37"):
            log_geometric_mean(AmplitudeResponse(grid, vals))

    def test_shifted_cosine_closed_form(self, grid):
        # mean over [0, pi] of ln(b + a cos w) = ln((b + sqrt(b^2 - a^2)) / 2)
        for shift in (0.5, 1.0, 3.0):
            b = 2.0 + shift
            resp = AmplitudeResponse(grid, b + 2.0 * np.cos(grid.omegas))
            expected = math.log((b + math.sqrt(b * b - 4.0)) / 2.0)
            assert log_geometric_mean(resp) == pytest.approx(expected, abs=1e-8)


class TestBandIntegral:
    def test_full_band_matches_trapezoid(self, cosine_response):
        vals = cosine_response.values**2
        expected = np.trapezoid(vals, cosine_response.grid.omegas)
        got = band_integral(cosine_response, lambda om, v: v**2)
        assert got == pytest.approx(expected, rel=1e-14)

    def test_piecewise_linear_with_jump_is_exact(self, grid):
        # Linear ramp in-band, constant beyond an off-node cutoff: the
        # split rule integrates both pieces exactly.
        wc = 1.0
        om = grid.omegas
        vals = np.where(om <= wc, 1.0 + 0.5 * om, 0.2)
        resp = AmplitudeResponse(grid, vals, cutoff=wc, edge_below=1.5, edge_above=0.2)
        expected = (wc + 0.25 * wc**2) + 0.2 * (math.pi - wc)
        assert band_integral(resp, lambda om_, v: v) == pytest.approx(expected, abs=1e-12)

    def test_band_mean_is_integral_over_pi(self, p_base):
        assert band_mean(p_base, lambda om, v: v) == pytest.approx(
            band_integral(p_base, lambda om, v: v) / math.pi, rel=1e-15
        )


class TestCosineMoments:
    def test_cosine_shape_moments(self, cosine_response):
        # p^2 = 2 + 2 cos w has power moments [2, 1, 0, 0, ...].
        assert power_cosine_moment(cosine_response, 0) == pytest.approx(2.0, abs=1e-12)
        assert power_cosine_moment(cosine_response, 1) == pytest.approx(1.0, abs=1e-12)
        for lag in (2, 3, 5):
            assert power_cosine_moment(cosine_response, lag) == pytest.approx(0.0, abs=1e-12)


class TestAmplitudeOfTF:
    def test_identity_filter_is_flat(self, grid):
        resp = amplitude_of_tf(RationalDiscreteTF([1.0], [1.0]), grid)
        np.testing.assert_allclose(resp.values, 1.0, atol=1e-15)

    def test_differencer_magnitude(self, grid):
        resp = amplitude_of_tf(RationalDiscreteTF([1.0, -1.0], [1.0]), grid)
        expected = 2.0 * np.abs(np.sin(grid.omegas / 2.0))
        np.testing.assert_allclose(resp.values, expected, atol=1e-12)

    def test_cascade_is_pointwise_product(self, grid):
        a = RationalDiscreteTF([1.0, 0.4], [1.0, -0.3])
        b = RationalDiscreteTF([1.0, -0.8], [1.0, 0.25])
        cascade = RationalDiscreteTF(
            np.polymul(a.num, b.num).tolist(), np.polymul(a.den, b.den).tolist()
        )
        prod = amplitude_of_tf(a, grid).values * amplitude_of_tf(b, grid).values
        np.testing.assert_allclose(amplitude_of_tf(cascade, grid).values, prod, atol=1e-10)


class TestOversampling:
    def test_factor_one_is_identity(self, p_base):
        assert oversample_response(p_base, 1) is p_base

    def test_cutoff_and_stopband(self, p_base):
        p2 = oversample_response(p_base, 2)
        assert p2.cutoff == pytest.approx(math.pi / 2)
        om = p2.grid.omegas
        assert np.all(p2.values[om > p2.cutoff] == 0.0)
        assert p2.edge_above == 0.0
        assert p2.edge_below == pytest.approx(p_base.values[-1])

    def test_norm_scales_inversely(self, p_base):
        base = l2_norm_sq(p_base)
        for lam in (2, 3, 4):
            assert l2_norm_sq(oversample_response(p_base, lam)) == pytest.approx(
                base / lam, rel=1e-6
            )

    def test_already_bandlimited_rejected(self, p_base):
        p2 = oversample_response(p_base, 2)
        with pytest.raises(ValueError):
            oversample_response(p2, 2)


class TestCTFrequencyMap:
    def test_first_order_pole_at_unit_frequency(self, grid):
        plant = ContinuousTF([1.0], [1.0, 1.0], sample_period=1.0)
        resp = ct_frequency_map(plant, 1, grid)
        idx = int(np.searchsorted(grid.omegas, 1.0))
        got = np.interp(1.0, grid.omegas, resp.values)
        assert got == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-6)
        assert resp.values[idx] <= resp.values[0]

    def test_oversampled_map_is_zero_beyond_band_edge(self, plant, grid):
        resp = ct_frequency_map(plant, 2, grid)
        om = grid.omegas
        assert np.all(resp.values[om > math.pi / 2] == 0.0)
        in_band = om[om < math.pi / 2]
        expected = np.abs([plant.eval(1j * 2.0 * w / plant.sample_period) for w in in_band])
        np.testing.assert_allclose(resp.values[: len(in_band)], expected, rtol=1e-12)


class TestAlmostConstant:
    def test_constant_is_almost_constant(self, grid):
        assert is_almost_constant(constant_response(grid, 3.0))

    def test_cosine_shape_is_not(self, cosine_response):
        assert not is_almost_constant(cosine_response)

    def test_tiny_ripple_passes(self, grid):
        vals = 1.0 + 1e-12 * np.cos(grid.omegas)
        assert is_almost_constant(AmplitudeResponse(grid, vals))


@settings(max_examples=50, deadline=None)
@given(scale=st.floats(min_value=1e-3, max_value=1e3), seed=st.integers(0, 2**31 - 1))
def test_norm_scaling_property(scale, seed):
    grid = FrequencyGrid(128)
    rng = np.random.default_rng(seed)
    vals = rng.uniform(0.1, 2.0, grid.n_points)
    resp = AmplitudeResponse(grid, vals)
    scaled = resp.with_values(scale * vals)
    assert l2_norm_sq(scaled) == pytest.approx(scale**2 * l2_norm_sq(resp), rel=1e-10)


@settings(max_examples=50, deadline=None)
@given(cut_frac=st.floats(min_value=0.05, max_value=0.95), seed=st.integers(0, 2**31 - 1))
def test_band_integral_additive_in_segments(cut_frac, seed):
    # Integral of an in-band indicator plus its complement equals the
    # full-band integral, regardless of where the cutoff falls.
    grid = FrequencyGrid(256)
    rng = np.random.default_rng(seed)
    vals = rng.uniform(0.5, 1.5, grid.n_points)
    wc = cut_frac * math.pi
    full = band_integral(AmplitudeResponse(grid, vals), lambda om, v: v)
    lowered = np.where(grid.omegas <= wc, vals, 0.0)
    edge_below = float(np.interp(wc, grid.omegas, vals))
    low = band_integral(
        AmplitudeResponse(grid, lowered, cutoff=wc, edge_below=edge_below, edge_above=0.0),
        lambda om, v: v,
    )
    raised = np.where(grid.omegas <= wc, 0.0, vals)
    high = band_integral(
        AmplitudeResponse(grid, raised, cutoff=wc, edge_below=0.0, edge_above=edge_below),
        lambda om, v: v,
    )
    assert low + high == pytest.approx(full, rel=1e-9, abs=1e-12)
