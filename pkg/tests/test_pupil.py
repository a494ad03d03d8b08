"""Pupil localization: accumulation oracle, summit ties, radius, correction."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import CLEAN_SEEDS, FLASH_SEEDS, disk_image, rendered_suite
from vigileye import synth
from vigileye.errors import DegenerateChord, InvalidTemplate, NoPupilMask
from vigileye.pupil import (
    PupilEstimate,
    accumulate,
    correct_center,
    detect_pupil,
    estimate_radius,
    fill_holes,
    find_summit,
    pupil_mask,
)


def brute_force_window_sum(img, template):
    """Exhaustive double loop; zero contribution outside the image."""
    rows, cols = img.shape
    r = template // 2
    out = np.zeros((rows, cols))
    for y in range(rows):
        for x in range(cols):
            acc = 0.0
            for dy in range(-r, r + 1):
                for dx in range(-r, r + 1):
                    yy, xx = y + dy, x + dx
                    if 0 <= yy < rows and 0 <= xx < cols:
                        acc += img[yy, xx]
            out[y, x] = acc
    return out


class TestAccumulate:
    def test_constant_interior_is_template_area(self):
        acc = accumulate(np.ones((40, 40)), 31)
        assert acc[20, 20] == 961.0

    def test_impulse_becomes_plateau(self):
        img = np.zeros((9, 9))
        img[4, 4] = 1.0
        acc = accumulate(img, 3)
        want = np.zeros((9, 9))
        want[3:6, 3:6] = 1.0
        assert np.array_equal(acc, want)

    def test_matches_brute_force_exactly(self):
        # dyadic intensities keep every partial sum exactly representable,
        # so the integral-image route and the double loop agree bit for bit
        rng = np.random.default_rng(77)
        img = rng.integers(0, 256, size=(16, 16)).astype(np.float64) / 256.0
        for template in (3, 5, 15):
            assert np.array_equal(accumulate(img, template), brute_force_window_sum(img, template))

    @settings(deadline=None, max_examples=15)
    @given(st.integers(0, 2**32 - 1), st.integers(8, 24), st.integers(8, 24), st.sampled_from([3, 5, 7]))
    def test_matches_brute_force_random(self, seed, rows, cols, template):
        img = np.random.default_rng(seed).integers(0, 256, size=(rows, cols)).astype(np.float64) / 256.0
        assert np.array_equal(accumulate(img, template), brute_force_window_sum(img, template))

    def test_rejects_even_or_oversized_template(self):
        with pytest.raises(InvalidTemplate):
            accumulate(np.ones((10, 10)), 4)
        with pytest.raises(InvalidTemplate):
            accumulate(np.ones((10, 10)), 11)


class TestFindSummit:
    def test_blob_center(self):
        img = np.zeros((31, 31))
        img[10:17, 12:19] = 1.0  # bright block centered at (15, 13)
        x, y = find_summit(accumulate(img, 7))
        assert abs(x - 15) <= 1 and abs(y - 13) <= 1

    def test_constant_map_ties_to_origin(self):
        assert find_summit(np.ones((6, 8))) == (0, 0)

    def test_tie_breaks_lowest_row_then_column(self):
        img = np.zeros((12, 12))
        img[3, 7] = 5.0
        img[9, 2] = 5.0
        assert find_summit(img) == (7, 3)
        img2 = np.zeros((12, 12))
        img2[3, 7] = 5.0
        img2[3, 2] = 5.0
        assert find_summit(img2) == (2, 3)

    @settings(deadline=None, max_examples=25)
    @given(st.integers(0, 2**32 - 1))
    def test_deterministic_under_transpose_consistency(self, seed):
        img = np.random.default_rng(seed).integers(0, 4, size=(9, 9)).astype(float)
        x, y = find_summit(img)
        peak = img[y, x]
        assert peak == img.max()
        flat_first = int(np.argmax(img))
        assert (y, x) == divmod(flat_first, 9)


class TestMaskAndRadius:
    def test_constant_image_has_empty_mask(self):
        assert not pupil_mask(np.full((20, 20), 0.5), fill=False).any()

    def test_fill_holes_closes_enclosed_pocket(self):
        mask = disk_image(30, 30, 15, 15, radius=8.0) > 0
        holed = mask.copy()
        holed[14:17, 14:17] = False
        assert np.array_equal(fill_holes(holed), mask)

    def test_clean_disk_radius(self):
        img = disk_image(80, 80, 40, 40, radius=12.0)
        assert estimate_radius(img, 40, 40) == pytest.approx(12.0, abs=1.0)

    def test_flash_spot_inside_disk_rejected_by_median(self):
        img = disk_image(80, 80, 40, 40, radius=12.0)
        yy, xx = np.indices(img.shape)
        img[np.hypot(xx - 43, yy - 41) <= 3.0] = 0.0  # dark hole where the flash saturated
        assert estimate_radius(img, 40, 40) == pytest.approx(12.0, abs=1.0)

    def test_seed_on_background_raises(self):
        img = disk_image(80, 80, 40, 40, radius=12.0)
        with pytest.raises(NoPupilMask):
            estimate_radius(img, 5, 5)


class TestCorrectCenter:
    def test_midpoint_formula_direct(self):
        # hit points at x 10/30 and y 5/25 must give (20, 15)
        mask = np.zeros((40, 40), dtype=bool)
        mask[5:26, 10:31] = True
        est = correct_center(mask, 18, 12, radius=10.0)
        assert (est.cx, est.cy) == (20.0, 15.0)
        assert est.corrected

    def test_perfect_disk_recovers_center_from_offset_guess(self):
        mask = disk_image(64, 64, 30, 28, radius=13.0) > 0
        est = correct_center(mask, 30 + 4, 28 - 3, radius=13.0)
        assert math.hypot(est.cx - 30, est.cy - 28) <= 1.0

    def test_fixed_point_at_true_center(self):
        mask = disk_image(64, 64, 30, 30, radius=12.0) > 0
        est = correct_center(mask, 30, 30, radius=12.0)
        assert (est.cx, est.cy) == (30.0, 30.0)

    def test_idempotent(self):
        mask = disk_image(64, 64, 33, 29, radius=11.0) > 0
        once = correct_center(mask, 36, 27, radius=11.0)
        twice = correct_center(mask, once.cx, once.cy, radius=11.0)
        assert (twice.cx, twice.cy) == (once.cx, once.cy)

    @settings(deadline=None, max_examples=20)
    @given(st.integers(-7, 7), st.integers(-7, 7))
    def test_disk_center_independent_of_guess(self, dx, dy):
        mask = disk_image(64, 64, 31, 32, radius=12.0) > 0
        est = correct_center(mask, 31 + dx, 32 + dy, radius=12.0)
        assert (est.cx, est.cy) == (31.0, 32.0)

    def test_mask_touching_border_degenerates(self):
        mask = np.ones((20, 20), dtype=bool)
        with pytest.raises(DegenerateChord):
            correct_center(mask, 10, 10, radius=5.0)


class TestDetectPupil:
    def test_clean_suite_center_accuracy(self):
        errors = []
        for img, truth, est in rendered_suite(CLEAN_SEEDS[:30]):
            assert est.error is None
            errors.append(math.hypot(est.cx - truth.cx, est.cy - truth.cy))
        hits = sum(1 for e in errors if e <= 2.0)
        assert hits / len(errors) >= 0.95

    def test_flash_suite_correction_helps(self):
        wins = 0
        cases = 0
        for img, truth, est in rendered_suite(FLASH_SEEDS, with_flash=True):
            raw_err = math.hypot(est.raw_cx - truth.cx, est.raw_cy - truth.cy)
            cor_err = math.hypot(est.cx - truth.cx, est.cy - truth.cy)
            cases += 1
            if cor_err <= raw_err:
                wins += 1
        assert wins / cases >= 0.90

    def test_blank_image_flags_radius_error(self):
        est = detect_pupil(np.full((64, 64), 0.42))
        assert isinstance(est, PupilEstimate)
        assert est.error == "NoPupilMask"
        assert not est.corrected
        assert (est.raw_cx, est.raw_cy) == (est.cx, est.cy)

    def test_no_correct_keeps_raw(self):
        img, _ = synth.render(synth.sample_spec(1))
        est = detect_pupil(img, correct=False)
        assert not est.corrected
        assert (est.cx, est.cy) == (est.raw_cx, est.raw_cy)
