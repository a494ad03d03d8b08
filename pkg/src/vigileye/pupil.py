"""Pupil localization on band-passed images and chord-midpoint center correction.

The detector rides on one observation: after the band-pass stage the pupil is
the brightest coherent blob.  A square template sums every pixel with its
neighborhood; the maximal accumulated value (the summit) marks the raw center.
Because a camera flash spot or rim noise can drag the summit off-center, the
center is then re-derived from the midpoints of the horizontal and vertical
chords of the binarized pupil region.
"""

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChord, InvalidParameter, InvalidTemplate, NoPupilMask
from .image import as_image
from .spectral import BandPassFilter, apply_filter, default_cutoff, make_band_pass

DEFAULT_TEMPLATE = 31
DEFAULT_PERCENTILE = 90.0

# E, SE, S, SW, W, NW, N, NE in screen coordinates (y grows downward)
_RAY_DIRS = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))


@dataclass(frozen=True)
class PupilEstimate:
    """Pupil center and radius, with correction provenance.

    ``error`` is set (and ``corrected`` left False) when the degenerate-input
    path was taken; a healthy estimate has ``error is None``.
    """

    cx: float
    cy: float
    radius: float
    corrected: bool
    raw_cx: float
    raw_cy: float
    error: str | None = None

    def to_dict(self) -> dict:
        d = {
            "cx": self.cx,
            "cy": self.cy,
            "radius": self.radius,
            "corrected": self.corrected,
            "raw_cx": self.raw_cx,
            "raw_cy": self.raw_cy,
        }
        if self.error is not None:
            d["error"] = self.error
        return d


def accumulate(img, template: int = DEFAULT_TEMPLATE) -> np.ndarray:
    """Sum intensities over an odd square window centered at every pixel.

    Out-of-image neighbors contribute zero, which biases summits away from the
    borders; that is the desired behavior for a centered eye crop.
    """
    a = as_image(img)
    t = int(template)
    if t < 1 or t % 2 == 0:
        raise InvalidTemplate(f"template must be odd and positive, got {t}")
    if t > min(a.shape):
        raise InvalidTemplate(f"template {t} exceeds image extent {a.shape}")
    r = t // 2
    padded = np.pad(a, r)
    sat = np.zeros((padded.shape[0] + 1, padded.shape[1] + 1))
    sat[1:, 1:] = padded.cumsum(axis=0).cumsum(axis=1)
    rows, cols = a.shape
    return (
        sat[t : t + rows, t : t + cols]
        - sat[0:rows, t : t + cols]
        - sat[t : t + rows, 0:cols]
        + sat[0:rows, 0:cols]
    )


def find_summit(acc) -> tuple[int, int]:
    """Coordinates (x, y) of the maximal accumulated value.

    Ties break to the lowest row, then lowest column; np.argmax scans in
    exactly that order.
    """
    a = as_image(acc)
    idx = int(np.argmax(a))
    y, x = divmod(idx, a.shape[1])
    return x, y


def fill_holes(mask) -> np.ndarray:
    """Close enclosed background pockets so chords cannot fall into them."""
    m = np.asarray(mask, dtype=bool)
    rows, cols = m.shape
    reach = np.zeros_like(m)
    queue = deque()
    for x in range(cols):
        for y in (0, rows - 1):
            if not m[y, x] and not reach[y, x]:
                reach[y, x] = True
                queue.append((y, x))
    for y in range(rows):
        for x in (0, cols - 1):
            if not m[y, x] and not reach[y, x]:
                reach[y, x] = True
                queue.append((y, x))
    while queue:
        y, x = queue.popleft()
        for ny, nx in ((y - 1, x), (y + 1, x), (y, x - 1), (y, x + 1)):
            if 0 <= ny < rows and 0 <= nx < cols and not m[ny, nx] and not reach[ny, nx]:
                reach[ny, nx] = True
                queue.append((ny, nx))
    return m | ~reach


def _dilate(mask: np.ndarray) -> np.ndarray:
    out = mask.copy()
    out[1:, :] |= mask[:-1, :]
    out[:-1, :] |= mask[1:, :]
    out[:, 1:] |= mask[:, :-1]
    out[:, :-1] |= mask[:, 1:]
    return out


def _erode(mask: np.ndarray) -> np.ndarray:
    return ~_dilate(~mask)


def close_gaps(mask, iterations: int = 2) -> np.ndarray:
    """Morphological closing; bridges flash-spot trenches a few pixels wide."""
    m = np.asarray(mask, dtype=bool)
    for _ in range(iterations):
        m = _dilate(m)
    for _ in range(iterations):
        m = _erode(m)
    return m


def pupil_mask(img, percentile: float = DEFAULT_PERCENTILE, fill: bool = True) -> np.ndarray:
    """Binarize the brightest decile of a band-passed image.

    The threshold comparison is strict, so a constant image produces an empty
    mask rather than an all-true one.  With ``fill`` the raw mask is closed
    and enclosed holes are plugged, so a saturated flash spot inside the pupil
    cannot carve the region in two.
    """
    a = as_image(img)
    if not 0.0 <= percentile <= 100.0:
        raise InvalidParameter(f"percentile must lie in [0, 100], got {percentile}")
    mask = a > np.percentile(a, percentile)
    return fill_holes(close_gaps(mask)) if fill else mask


def radius_from_mask(mask, cx, cy) -> float:
    """Median length of 8 rays walked from the seed out of the mask region.

    A ray's length is the distance to its first pixel outside the region, so
    the estimate brackets the disk from outside; growing ripples from it never
    re-enters the pupil.  The median rejects rays shortened or stretched by a
    flash spot.
    """
    m = np.asarray(mask, dtype=bool)
    rows, cols = m.shape
    x0, y0 = int(round(cx)), int(round(cy))
    if not (0 <= x0 < cols and 0 <= y0 < rows) or not m[y0, x0]:
        raise NoPupilMask(f"seed ({cx}, {cy}) is not inside the pupil mask")
    lengths = []
    for dx, dy in _RAY_DIRS:
        steps = 0
        while True:
            x, y = x0 + (steps + 1) * dx, y0 + (steps + 1) * dy
            if not (0 <= x < cols and 0 <= y < rows) or not m[y, x]:
                break
            steps += 1
        lengths.append((steps + 1.0) * math.hypot(dx, dy))
    radius = float(np.median(lengths))
    if radius <= math.sqrt(2.0):
        raise NoPupilMask("mask region around the seed is a single pixel")
    return radius


def estimate_radius(img, cx, cy, percentile: float = DEFAULT_PERCENTILE) -> float:
    """Pupil radius from the binarized image; robust to interior flash spots."""
    return radius_from_mask(pupil_mask(img, percentile), cx, cy)


def _walk_chord(mask, x0: int, y0: int, dx: int, dy: int) -> int:
    """Last in-mask coordinate along one axis direction from the seed."""
    rows, cols = mask.shape
    x, y = x0, y0
    while True:
        nx, ny = x + dx, y + dy
        if not (0 <= nx < cols and 0 <= ny < rows):
            raise DegenerateChord(
                f"chord from ({x0}, {y0}) toward ({dx}, {dy}) left the image while inside the mask"
            )
        if not mask[ny, nx]:
            return x if dx else y
        x, y = nx, ny


def correct_center(mask, cx, cy, radius) -> PupilEstimate:
    """Relocate the center to the midpoints of the two axis-aligned chords.

    The horizontal line hits the region boundary at P_left and P_right, the
    vertical one at P_up and P_down; the corrected center is
    (x_left + (x_right - x_left)/2, y_up + (y_down - y_up)/2).
    """
    m = fill_holes(np.asarray(mask, dtype=bool))
    rows, cols = m.shape
    x0, y0 = int(round(cx)), int(round(cy))
    if not (0 <= x0 < cols and 0 <= y0 < rows) or not m[y0, x0]:
        raise NoPupilMask(f"seed ({cx}, {cy}) is not inside the pupil mask")
    x_left = _walk_chord(m, x0, y0, -1, 0)
    x_right = _walk_chord(m, x0, y0, 1, 0)
    y_up = _walk_chord(m, x0, y0, 0, -1)
    y_down = _walk_chord(m, x0, y0, 0, 1)
    return PupilEstimate(
        cx=x_left + (x_right - x_left) / 2.0,
        cy=y_up + (y_down - y_up) / 2.0,
        radius=float(radius),
        corrected=True,
        raw_cx=float(cx),
        raw_cy=float(cy),
    )


def detect_pupil(
    img,
    filt: BandPassFilter | None = None,
    template: int = DEFAULT_TEMPLATE,
    percentile: float = DEFAULT_PERCENTILE,
    correct: bool = True,
) -> PupilEstimate:
    """Full pupil pipeline: filter, accumulate, summit, radius, correction.

    Degenerate inputs (no pupil-like region) still yield an estimate carrying
    the raw summit, with ``error`` naming the stage that gave up; malformed
    arguments raise as usual.
    """
    a = as_image(img)
    if filt is None:
        rows, cols = a.shape
        filt = make_band_pass(rows, cols, default_cutoff(rows, cols), 1.0)
    filtered = apply_filter(a, filt)
    acc = accumulate(filtered, template)
    raw_x, raw_y = find_summit(acc)
    mask = pupil_mask(filtered, percentile)
    try:
        radius = radius_from_mask(mask, raw_x, raw_y)
    except NoPupilMask:
        return PupilEstimate(
            cx=float(raw_x),
            cy=float(raw_y),
            radius=0.0,
            corrected=False,
            raw_cx=float(raw_x),
            raw_cy=float(raw_y),
            error="NoPupilMask",
        )
    if not correct:
        return PupilEstimate(
            cx=float(raw_x),
            cy=float(raw_y),
            radius=radius,
            corrected=False,
            raw_cx=float(raw_x),
            raw_cy=float(raw_y),
        )
    try:
        return correct_center(mask, raw_x, raw_y, radius)
    except DegenerateChord:
        return PupilEstimate(
            cx=float(raw_x),
            cy=float(raw_y),
            radius=radius,
            corrected=False,
            raw_cx=float(raw_x),
            raw_cy=float(raw_y),
            error="DegenerateChord",
        )
