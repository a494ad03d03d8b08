"""Gabor filter bank, per-pixel feature stack, PCA, and two-means iris masking.

The bank holds 16 complex kernels: 4 orientations in 45-degree steps crossed
with 4 wavelengths growing geometrically from 2/sqrt(3) to the image diagonal
sqrt(rows^2 + cols^2).  Every pixel is described by its 16 response magnitudes
plus its X and Y coordinates -- an 18-deep feature stack that is z-scored per
layer, reduced by PCA, and split by seeded two-means clustering into iris and
not-iris.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCovariance, EmptyCluster, InvalidParameter
from .image import as_image

ORIENTATIONS_DEG = (0.0, 45.0, 90.0, 135.0)
N_WAVELENGTHS = 4
FEATURE_DEPTH = len(ORIENTATIONS_DEG) * N_WAVELENGTHS + 2

DEFAULT_GAMMA = 0.5       # spatial aspect ratio of the Gaussian envelope
DEFAULT_BANDWIDTH = 1.0   # octaves
DEFAULT_COMPONENTS = 3
SEED_RING_WIDTH = 3.0     # pixels just outside the pupil, iris-seed region
SEED_BORDER_BAND = 2      # pixels at the frame edge, background-seed region
SMOOTH_WINDOW = 9         # majority-vote window cleaning the label image
PUPIL_BRACKET_MARGIN = 1.5  # radius estimates bracket the disk from outside
_KMEANS_MAX_ITER = 100


@dataclass(frozen=True)
class GaborBank:
    wavelengths: np.ndarray
    orientations: tuple
    kernels: tuple
    gamma: float
    bandwidth: float


@dataclass(frozen=True)
class FeatureStack:
    """Per-pixel feature vectors, shape (rows, cols, 18)."""

    values: np.ndarray
    normalized: bool

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def depth(self) -> int:
        return self.values.shape[2]


@dataclass(frozen=True)
class PcaModel:
    """Principal component coefficients, one component per column."""

    coefficients: np.ndarray
    component_variances: np.ndarray


def wavelength_schedule(rows: int, cols: int) -> np.ndarray:
    """Four wavelengths, geometric from 2/sqrt(3) to the image diagonal."""
    if rows < 1 or cols < 1:
        raise InvalidParameter("image extents must be positive")
    lo = 2.0 / math.sqrt(3.0)
    hi = math.sqrt(rows**2 + cols**2)
    ratio = (hi / lo) ** (1.0 / (N_WAVELENGTHS - 1))
    sched = lo * ratio ** np.arange(N_WAVELENGTHS)
    sched[-1] = hi  # pin the endpoint exactly
    return sched


def sigma_from_bandwidth(wavelength: float, bandwidth: float) -> float:
    """Envelope std from the half-response spatial-frequency bandwidth."""
    k = (1.0 / math.pi) * math.sqrt(math.log(2.0) / 2.0)
    return wavelength * k * (2.0**bandwidth + 1.0) / (2.0**bandwidth - 1.0)


def gabor_kernel(
    wavelength: float,
    orientation_deg: float,
    gamma: float = DEFAULT_GAMMA,
    bandwidth: float = DEFAULT_BANDWIDTH,
    max_halfwidth: int | None = None,
) -> np.ndarray:
    """Complex Gabor kernel: Gaussian envelope times a sinusoid carrier.

    The grid is truncated at 3 standard deviations along each principal axis
    of the (rotated) envelope; ``max_halfwidth`` additionally clips enormous
    kernels to a caller-imposed extent.
    """
    if wavelength <= 0 or gamma <= 0 or bandwidth <= 0:
        raise InvalidParameter(
            f"wavelength, gamma, bandwidth must be positive, got "
            f"{wavelength}, {gamma}, {bandwidth}"
        )
    sigma = sigma_from_bandwidth(wavelength, bandwidth)
    theta = math.radians(orientation_deg)
    c, s = math.cos(theta), math.sin(theta)
    sx = sigma
    sy = sigma / gamma
    hx = max(1, math.ceil(3.0 * math.hypot(sx * c, sy * s)))
    hy = max(1, math.ceil(3.0 * math.hypot(sx * s, sy * c)))
    if max_halfwidth is not None:
        hx = min(hx, int(max_halfwidth))
        hy = min(hy, int(max_halfwidth))
    y, x = np.mgrid[-hy : hy + 1, -hx : hx + 1].astype(np.float64)
    xp = x * c + y * s
    yp = -x * s + y * c
    envelope = np.exp(-(xp**2 + (gamma * yp) ** 2) / (2.0 * sigma**2))
    return envelope * np.exp(2j * np.pi * xp / wavelength)


def build_bank(
    rows: int,
    cols: int,
    gamma: float = DEFAULT_GAMMA,
    bandwidth: float = DEFAULT_BANDWIDTH,
) -> GaborBank:
    """Bank of 16 kernels, wavelength-major order, clipped to the image extent."""
    sched = wavelength_schedule(rows, cols)
    clip = max(rows, cols)
    kernels = tuple(
        gabor_kernel(w, o, gamma, bandwidth, max_halfwidth=clip)
        for w in sched
        for o in ORIENTATIONS_DEG
    )
    return GaborBank(
        wavelengths=sched,
        orientations=ORIENTATIONS_DEG,
        kernels=kernels,
        gamma=gamma,
        bandwidth=bandwidth,
    )


def _fft_conv_same(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Linear convolution with zero-padded borders, cropped to image size."""
    rows, cols = img.shape
    kr, kc = kernel.shape
    fr, fc = rows + kr - 1, cols + kc - 1
    prod = np.fft.fft2(img, (fr, fc)) * np.fft.fft2(kernel, (fr, fc))
    full = np.fft.ifft2(prod)
    r0, c0 = kr // 2, kc // 2
    return full[r0 : r0 + rows, c0 : c0 + cols]


def gabor_features(img, bank: GaborBank) -> FeatureStack:
    """Magnitude responses of every kernel plus X and Y coordinate layers.

    Each magnitude layer is divided by its kernel's L2 norm so responses are
    comparable across the bank (kernel supports differ by orders of
    magnitude); downstream z-scoring is invariant to this per-layer scale.
    """
    a = as_image(img)
    rows, cols = a.shape
    layers = [
        np.abs(_fft_conv_same(a, k)) / np.linalg.norm(k) for k in bank.kernels
    ]
    xx, yy = np.meshgrid(
        np.arange(cols, dtype=np.float64), np.arange(rows, dtype=np.float64)
    )
    layers.append(xx)
    layers.append(yy)
    return FeatureStack(values=np.stack(layers, axis=-1), normalized=False)


def normalize(stack: FeatureStack) -> FeatureStack:
    """Z-score every layer over all pixels; flat layers collapse to zero.

    Flatness is judged against the layer's own scale: a layer whose spread is
    pure rounding noise must not be amplified into unit variance.
    """
    v = stack.values
    flat = v.reshape(-1, v.shape[-1])
    mean = flat.mean(axis=0)
    std = flat.std(axis=0)
    dead = std <= 1e-12 * (1.0 + np.abs(mean))
    safe = np.where(dead, 1.0, std)
    out = (flat - mean) / safe
    out[:, dead] = 0.0
    return FeatureStack(values=out.reshape(v.shape), normalized=True)


def fit_pca(stack: FeatureStack) -> PcaModel:
    """Eigendecomposition of the layer covariance; columns sorted by variance.

    Sign convention: the largest-magnitude entry of each column is positive,
    which makes the decomposition unique for distinct eigenvalues.
    """
    v = stack.values
    depth = v.shape[-1]
    flat = v.reshape(-1, depth)
    if flat.shape[0] < depth:
        raise InvalidParameter(
            f"need at least {depth} pixels to fit PCA, got {flat.shape[0]}"
        )
    centered = flat - flat.mean(axis=0)
    cov = centered.T @ centered / flat.shape[0]
    if not np.any(cov):
        raise DegenerateCovariance("feature covariance is identically zero")
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1]
    evals = evals[order]
    evecs = evecs[:, order]
    for j in range(evecs.shape[1]):
        col = evecs[:, j]
        if col[np.argmax(np.abs(col))] < 0:
            evecs[:, j] = -col
    return PcaModel(
        coefficients=evecs, component_variances=np.clip(evals, 0.0, None)
    )


def project(stack: FeatureStack, model: PcaModel, components: int) -> np.ndarray:
    """Pixel features projected onto the leading components, (npixels, c)."""
    if not 1 <= components <= model.coefficients.shape[1]:
        raise InvalidParameter(f"component count {components} out of range")
    flat = stack.values.reshape(-1, stack.values.shape[-1])
    return flat @ model.coefficients[:, :components]


def _box_majority(mask: np.ndarray, window: int) -> np.ndarray:
    """Majority vote over a square window; cleans pixelwise label noise."""
    m = mask.astype(np.float64)
    r = window // 2
    padded = np.pad(m, r)
    sat = np.zeros((padded.shape[0] + 1, padded.shape[1] + 1))
    sat[1:, 1:] = padded.cumsum(axis=0).cumsum(axis=1)
    rows, cols = m.shape
    votes = (
        sat[window : window + rows, window : window + cols]
        - sat[0:rows, window : window + cols]
        - sat[window : window + rows, 0:cols]
        + sat[0:rows, 0:cols]
    )
    return votes > (window * window) / 2.0


def classify_iris(
    stack: FeatureStack,
    model: PcaModel,
    pupil,
    components: int = DEFAULT_COMPONENTS,
    ring_width: float = SEED_RING_WIDTH,
    border_band: int = SEED_BORDER_BAND,
    smooth_window: int = SMOOTH_WINDOW,
) -> np.ndarray:
    """Two-means split in PCA space; the cluster owning the ring just outside
    the pupil is labeled iris.  The returned mask excludes the pupil disk.

    Seeding is deterministic: one centroid starts at the mean of the ring, the
    other at the mean of the image border band, so identical inputs give
    identical masks with no RNG involved.  Pupil pixels are assigned labels
    but never update a centroid; their extreme feature vectors would drag the
    iris cluster otherwise.
    """
    rows, cols = stack.rows, stack.cols
    proj = project(stack, model, components)
    yy, xx = np.indices((rows, cols), dtype=np.float64)
    dist = np.hypot(xx - pupil.cx, yy - pupil.cy)
    outside = (dist > pupil.radius).ravel()
    ring = ((dist > pupil.radius) & (dist <= pupil.radius + ring_width)).ravel()
    border = np.zeros((rows, cols), dtype=bool)
    border[:border_band, :] = True
    border[-border_band:, :] = True
    border[:, :border_band] = True
    border[:, -border_band:] = True
    border = border.ravel()
    if not ring.any() or not border.any():
        raise EmptyCluster("seed regions are empty")

    centroids = np.vstack([proj[ring].mean(axis=0), proj[border].mean(axis=0)])
    labels = np.zeros(proj.shape[0], dtype=np.int8)
    for _ in range(_KMEANS_MAX_ITER):
        d0 = np.sum((proj - centroids[0]) ** 2, axis=1)
        d1 = np.sum((proj - centroids[1]) ** 2, axis=1)
        new_labels = (d1 < d0).astype(np.int8)
        in0 = (new_labels == 0) & outside
        in1 = (new_labels == 1) & outside
        if not in0.any() or not in1.any():
            raise EmptyCluster("a cluster lost all its pixels")
        centroids = np.vstack([proj[in0].mean(axis=0), proj[in1].mean(axis=0)])
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels

    ring_votes = labels[ring]
    iris_label = 1 if ring_votes.mean() > 0.5 else 0
    mask = (labels == iris_label).reshape(rows, cols)
    # the radius estimate brackets the pupil from outside; the disk proper
    # ends about a pixel and a half inside it
    cut = max(pupil.radius - PUPIL_BRACKET_MARGIN, 1.0)
    mask |= dist <= cut  # keep the inner boundary out of the majority vote
    if smooth_window and smooth_window > 1:
        mask = _box_majority(mask, smooth_window)
    return mask & (dist > cut)


def mask_iou(a, b) -> float:
    """Intersection over union of two binary masks."""
    aa = np.asarray(a, dtype=bool)
    bb = np.asarray(b, dtype=bool)
    union = np.logical_or(aa, bb).sum()
    if union == 0:
        return 0.0
    return float(np.logical_and(aa, bb).sum() / union)
