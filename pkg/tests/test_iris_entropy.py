"""Ripple sampling, entropy math, and the stopping rule."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import CLEAN_SEEDS, rendered_suite
from vigileye.errors import CircleOutOfBounds, InvalidParameter, NoConvergence
from vigileye.iris_entropy import (
    IrisAnnulus,
    circle_samples,
    ripple_entropy,
    ripple_profile,
    segment,
)
from vigileye.pupil import PupilEstimate


def fake_pupil(cx, cy, radius):
    return PupilEstimate(cx=cx, cy=cy, radius=radius, corrected=True, raw_cx=cx, raw_cy=cy)


class TestCircleSamples:
    def test_constant_image(self):
        samples = circle_samples(np.full((64, 64), 0.6), (32, 32), 10.0, 64)
        assert np.allclose(samples, 0.6, atol=1e-12)

    def test_painted_cosine_reproduced(self):
        # paint cos(4*theta) about the center and sample one circle: the
        # samples must trace a 4-cycle cosine to bilinear accuracy
        size, radius, n = 160, 56.0, 64
        c = (size - 1) / 2.0
        yy, xx = np.indices((size, size), dtype=float)
        img = np.cos(4.0 * np.arctan2(yy - c, xx - c))
        samples = circle_samples(img, (c, c), radius, n)
        expected = np.cos(4.0 * (2.0 * np.pi * np.arange(n) / n))
        assert np.abs(samples - expected).max() < 1e-3

    def test_circle_must_fit(self):
        with pytest.raises(CircleOutOfBounds):
            circle_samples(np.zeros((32, 32)), (16, 16), 20.0, 64)

    def test_sample_count_must_be_power_of_two(self):
        with pytest.raises(InvalidParameter):
            circle_samples(np.zeros((32, 32)), (16, 16), 5.0, 48)


class TestRippleEntropy:
    def test_single_coefficient_gives_zero(self):
        # constant signal: all spectral mass at DC, a point distribution
        nfc, h = ripple_entropy(np.full(16, 2.5))
        assert h == 0.0
        assert nfc[0] == pytest.approx(1.0)
        assert np.all(nfc[1:] == 0.0)

    def test_four_equal_coefficients(self):
        # an impulse spreads into 4 equal magnitudes: h = -log(4)
        nfc, h = ripple_entropy(np.array([1.0, 0.0, 0.0, 0.0]))
        assert np.allclose(nfc, 0.5)
        assert h == pytest.approx(-math.log(4.0), abs=1e-9)

    def test_all_zero_samples_convention(self):
        nfc, h = ripple_entropy(np.zeros(8))
        assert h == 0.0
        assert np.all(nfc == 0.0)

    @settings(deadline=None, max_examples=40)
    @given(st.integers(0, 2**32 - 1), st.sampled_from([16, 32, 64]))
    def test_normalization(self, seed, n):
        samples = np.random.default_rng(seed).uniform(size=n)
        nfc, h = ripple_entropy(samples)
        assert np.sum(nfc**2) == pytest.approx(1.0, abs=1e-9)
        assert np.all(nfc >= 0.0) and np.all(nfc <= 1.0)
        assert h <= 0.0

    @settings(deadline=None, max_examples=40)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 63))
    def test_rotation_invariance(self, seed, shift):
        samples = np.random.default_rng(seed).uniform(size=64)
        _, h0 = ripple_entropy(samples)
        _, h1 = ripple_entropy(np.roll(samples, shift))
        assert abs(h0 - h1) < 1e-9


def test_ripple_profile_carries_all_fields():
    rng = np.random.default_rng(4)
    img = rng.uniform(size=(64, 64))
    prof = ripple_profile(img, (32, 32), 9.0, 64)
    assert prof.radius == 9.0
    assert prof.samples.shape == (64,)
    assert np.sum(prof.nfc**2) == pytest.approx(1.0, abs=1e-9)
    assert prof.h <= 0.0


class TestSegment:
    def test_recovers_synthetic_outer_radius(self):
        hits = 0
        total = 0
        for img, truth, est in rendered_suite(CLEAN_SEEDS[:30]):
            total += 1
            annulus = segment(img, est, e_max=0.15)
            if abs(annulus.outer_radius - truth.iris_radius) <= 2.0:
                hits += 1
        assert hits / total >= 0.90

    def test_trace_structure(self):
        for img, truth, est in rendered_suite(CLEAN_SEEDS[:3]):
            annulus = segment(img, est, e_max=0.15)
            radii = [r for r, _, _ in annulus.entropy_trace]
            assert np.allclose(np.diff(radii), 1.0)
            assert annulus.inner_radius < annulus.outer_radius
            assert all(h <= 0.0 for _, h, _ in annulus.entropy_trace)
            # every step but the last obeys the threshold
            for _, _, e in annulus.entropy_trace[1:-1]:
                assert abs(e) <= 0.15
            assert abs(annulus.entropy_trace[-1][2]) > 0.15

    def test_uniform_image_never_converges(self):
        with pytest.raises(NoConvergence) as excinfo:
            segment(np.full((96, 96), 0.5), fake_pupil(48, 48, 10.0), e_max=0.15)
        partial = excinfo.value.annulus
        assert isinstance(partial, IrisAnnulus)
        assert partial.boundary_limited
        assert partial.outer_radius > partial.inner_radius

    def test_zero_threshold_stops_immediately(self):
        img, _, est = next(iter(rendered_suite(CLEAN_SEEDS[:1])))
        annulus = segment(img, est, e_max=0.0)
        assert len(annulus.entropy_trace) == 2
        assert annulus.outer_radius == pytest.approx(est.radius + 2.0)

    def test_negative_threshold_rejected(self):
        with pytest.raises(InvalidParameter):
            segment(np.zeros((32, 32)), fake_pupil(16, 16, 5.0), e_max=-0.1)
