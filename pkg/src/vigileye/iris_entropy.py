"""Iris segmentation by spectral entropy of concentric ripples.

Circles of radius r, r+1, r+2, ... are grown outward from the pupil boundary.
Each circle is resampled to ``n`` points, Fourier transformed, and summarized
by the entropy of its normalized coefficient magnitudes,

    NFC_k = |F_k| / sqrt(sum_j |F_j|^2),      h = sum_k NFC_k * ln(NFC_k),

with 0*ln(0) = 0.  NFC values lie in [0, 1], so h is never positive.  Inside a
coherently textured iris h drifts slowly; crossing onto the flat sclera makes
it jump.  Growth stops at the first step whose entropy difference exceeds
``e_max``; that circle is the outer iris boundary.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CircleOutOfBounds, InvalidParameter, NoConvergence
from .image import as_image

DEFAULT_SAMPLES = 256
DEFAULT_E_MAX = 0.15


@dataclass(frozen=True)
class RippleProfile:
    """One sampled circle with its spectral summary."""

    radius: float
    samples: np.ndarray
    nfc: np.ndarray
    h: float


@dataclass(frozen=True)
class IrisAnnulus:
    """Segmentation result; entropy_trace holds (radius, h, e) per circle."""

    center: tuple[float, float]
    inner_radius: float
    outer_radius: float
    entropy_trace: tuple
    boundary_limited: bool = False


def _bilinear(img: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    rows, cols = img.shape
    x0 = np.floor(xs).astype(int)
    y0 = np.floor(ys).astype(int)
    x1 = np.minimum(x0 + 1, cols - 1)
    y1 = np.minimum(y0 + 1, rows - 1)
    fx = xs - x0
    fy = ys - y0
    top = (1.0 - fx) * img[y0, x0] + fx * img[y0, x1]
    bottom = (1.0 - fx) * img[y1, x0] + fx * img[y1, x1]
    return (1.0 - fy) * top + fy * bottom


def circle_samples(img, center, radius, n: int = DEFAULT_SAMPLES) -> np.ndarray:
    """Sample ``n`` equally spaced points on a circle, bilinear sub-pixel.

    ``n`` must be a power of two (radix-2 transform downstream).
    """
    a = as_image(img)
    if n < 1 or n & (n - 1):
        raise InvalidParameter(f"sample count must be a power of two, got {n}")
    cx, cy = float(center[0]), float(center[1])
    r = float(radius)
    if r <= 0:
        raise InvalidParameter(f"radius must be positive, got {r}")
    rows, cols = a.shape
    if cx - r < 0 or cx + r > cols - 1 or cy - r < 0 or cy + r > rows - 1:
        raise CircleOutOfBounds(
            f"circle at ({cx}, {cy}) radius {r} exceeds image {rows}x{cols}"
        )
    theta = 2.0 * np.pi * np.arange(n) / n
    return _bilinear(a, cx + r * np.cos(theta), cy + r * np.sin(theta))


def ripple_entropy(samples) -> tuple[np.ndarray, float]:
    """Normalized Fourier magnitudes and their entropy for one circle.

    An all-zero spectrum has no distribution to measure; its entropy is
    pinned to 0 by convention.
    """
    s = np.asarray(samples, dtype=np.float64)
    if s.ndim != 1 or s.size == 0:
        raise InvalidParameter("samples must be a non-empty 1-D sequence")
    mags = np.abs(np.fft.fft(s))
    total = float(np.sqrt(np.sum(mags**2)))
    if total == 0.0:
        return np.zeros_like(mags), 0.0
    nfc = mags / total
    nonzero = nfc > 0
    h = float(np.sum(nfc[nonzero] * np.log(nfc[nonzero])))
    return nfc, h


def ripple_profile(img, center, radius, n: int = DEFAULT_SAMPLES) -> RippleProfile:
    samples = circle_samples(img, center, radius, n)
    nfc, h = ripple_entropy(samples)
    return RippleProfile(radius=float(radius), samples=samples, nfc=nfc, h=h)


def _max_radius(rows: int, cols: int, cx: float, cy: float) -> float:
    return min(cx, cy, cols - 1 - cx, rows - 1 - cy)


def segment(img, pupil, e_max: float = DEFAULT_E_MAX, n: int = DEFAULT_SAMPLES) -> IrisAnnulus:
    """Grow ripples from the pupil boundary until the entropy step exceeds e_max.

    The comparison uses |e|: entropy may step either way at a texture
    boundary.  If the circles hit the image border without a violation,
    ``NoConvergence`` is raised carrying the boundary-limited annulus.
    """
    a = as_image(img)
    if e_max < 0:
        raise InvalidParameter(f"e_max must be non-negative, got {e_max}")
    cx, cy = float(pupil.cx), float(pupil.cy)
    inner = float(pupil.radius)
    rows, cols = a.shape
    limit = _max_radius(rows, cols, cx, cy)
    radius = inner + 1.0
    if radius > limit:
        raise CircleOutOfBounds(
            f"first ripple at radius {radius} already exceeds the image"
        )
    trace: list[tuple[float, float, float]] = []
    prev_h = None
    while radius <= limit:
        _, h = ripple_entropy(circle_samples(a, (cx, cy), radius, n))
        e = 0.0 if prev_h is None else h - prev_h
        trace.append((radius, h, e))
        if prev_h is not None and abs(e) > e_max:
            return IrisAnnulus(
                center=(cx, cy),
                inner_radius=inner,
                outer_radius=radius,
                entropy_trace=tuple(trace),
            )
        prev_h = h
        radius += 1.0
    partial = IrisAnnulus(
        center=(cx, cy),
        inner_radius=inner,
        outer_radius=trace[-1][0],
        entropy_trace=tuple(trace),
        boundary_limited=True,
    )
    raise NoConvergence(
        f"no entropy jump above {e_max} before the image boundary", annulus=partial
    )


def annulus_mask(annulus: IrisAnnulus, rows: int, cols: int) -> np.ndarray:
    """Binary mask of the segmented ring, pupil disk excluded."""
    yy, xx = np.indices((rows, cols), dtype=np.float64)
    dist = np.hypot(xx - annulus.center[0], yy - annulus.center[1])
    return (dist > annulus.inner_radius) & (dist <= annulus.outer_radius)
