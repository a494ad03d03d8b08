"""Shared fixtures-in-code for the synthetic evaluation suites."""

import math

import numpy as np

from vigileye import gabor_pca, iris_entropy, pupil, synth

CLEAN_SEEDS = tuple(range(50))
FLASH_SEEDS = tuple(range(100, 130))
ORDERING_SEEDS = tuple(range(300, 330))


def truth_mask(truth, rows, cols):
    annulus = iris_entropy.IrisAnnulus(
        center=(truth.cx, truth.cy),
        inner_radius=truth.pupil_radius,
        outer_radius=truth.iris_radius,
        entropy_trace=(),
    )
    return iris_entropy.annulus_mask(annulus, rows, cols)


def run_gabor(img, est, components=3):
    bank = gabor_pca.build_bank(*img.shape)
    stack = gabor_pca.normalize(gabor_pca.gabor_features(img, bank))
    model = gabor_pca.fit_pca(stack)
    return gabor_pca.classify_iris(stack, model, est, components=components)


def gabor_iou_for(img, truth, est):
    mask = run_gabor(img, est)
    return gabor_pca.mask_iou(mask, truth_mask(truth, *img.shape))


def rendered_suite(seeds, with_flash=False):
    for seed in seeds:
        img, truth = synth.render(synth.sample_spec(seed, with_flash=with_flash))
        yield img, truth, pupil.detect_pupil(img)


def disk_image(rows=80, cols=80, cx=40, cy=40, radius=12.0, value=1.0):
    yy, xx = np.indices((rows, cols), dtype=float)
    img = np.zeros((rows, cols))
    img[np.hypot(xx - cx, yy - cy) <= radius] = value
    return img


def jacobi_oracle(matrix, sweeps=100, tol=1e-12):
    """Cyclic Jacobi eigensolver for symmetric matrices; independent of LAPACK."""
    a = matrix.copy()
    n = a.shape[0]
    vectors = np.eye(n)
    for _ in range(sweeps):
        off = math.sqrt(max(np.sum(a**2) - np.sum(np.diag(a) ** 2), 0.0))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                phi = 0.5 * math.atan2(2.0 * a[p, q], a[q, q] - a[p, p])
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = math.cos(phi)
                rot[p, q] = math.sin(phi)
                rot[q, p] = -math.sin(phi)
                a = rot.T @ a @ rot
                vectors = vectors @ rot
    return np.diag(a).copy(), vectors
