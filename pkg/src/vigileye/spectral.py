"""Frequency-domain machinery: 2-D DFT wrappers and the pupil band-pass filter.

Conventions (fixed, relied on by tests):

* forward transform is unnormalized, inverse carries the 1/(rows*cols) factor,
  so the DC coefficient of a constant image c is rows*cols*c;
* spectra are stored centered, DC at index (rows//2, cols//2);
* frequency distance D is measured in integer bin offsets from that centered
  DC bin.

The filter gain grid realizes the second derivative of a Gaussian,

    H(u, v) = (1/sigma^2) * (D^2/D0^2 - 2) * exp(-D^2 / (2*D0^2)),

a band-pass shape with gain -2/sigma^2 at DC, a zero crossing on the circle
D = sqrt(2)*D0, and a positive lobe peaking at D = 2*D0.  Applied to an eye
image it flips the dark pupil disk into the brightest region of the result.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ImaginaryResidue, InvalidParameter
from .image import as_image


@dataclass(frozen=True)
class Spectrum:
    """Complex frequency rectangle aligned with a source image."""

    coeffs: np.ndarray
    centered: bool = True

    @property
    def rows(self) -> int:
        return self.coeffs.shape[0]

    @property
    def cols(self) -> int:
        return self.coeffs.shape[1]


@dataclass(frozen=True)
class BandPassFilter:
    """Real gain grid of the second-derivative-of-Gaussian band-pass."""

    d0: float
    sigma: float
    gains: np.ndarray

    @property
    def rows(self) -> int:
        return self.gains.shape[0]

    @property
    def cols(self) -> int:
        return self.gains.shape[1]


def default_cutoff(rows: int, cols: int) -> float:
    """Default band radius when the caller does not pre-select one."""
    return min(rows, cols) / 8.0


def bin_offsets(rows: int, cols: int):
    """Integer frequency offsets (u', v') from the centered DC bin."""
    u = np.arange(rows, dtype=np.float64) - rows // 2
    v = np.arange(cols, dtype=np.float64) - cols // 2
    return u, v


def forward_dft(img) -> Spectrum:
    """Unnormalized 2-D DFT of an image, DC shifted to the grid center."""
    a = as_image(img)
    return Spectrum(np.fft.fftshift(np.fft.fft2(a)), centered=True)


def inverse_dft(spec: Spectrum, check_residue: bool = True, tol: float = 1e-6) -> np.ndarray:
    """Inverse 2-D DFT, returning the real plane.

    With ``check_residue`` the caller asserts the spectrum is conjugate
    symmetric; a larger imaginary leftover then raises ``ImaginaryResidue``.
    The output is intentionally not clamped: band-passed images are signed.
    """
    coeffs = spec.coeffs
    if coeffs.ndim != 2 or coeffs.size == 0:
        raise InvalidParameter("spectrum must be a non-empty 2-D grid")
    if spec.centered:
        coeffs = np.fft.ifftshift(coeffs)
    out = np.fft.ifft2(coeffs)
    if check_residue:
        residue = float(np.max(np.abs(out.imag)))
        if residue > tol:
            raise ImaginaryResidue(
                f"imaginary residue {residue:.3e} exceeds {tol:.1e} on a spectrum claimed symmetric"
            )
    return np.ascontiguousarray(out.real)


def make_band_pass(rows: int, cols: int, d0: float, sigma: float) -> BandPassFilter:
    """Build the gain grid; zero-gain circle sits at D = sqrt(2)*d0."""
    if rows < 1 or cols < 1:
        raise InvalidParameter("filter extents must be positive")
    if d0 <= 0 or sigma <= 0:
        raise InvalidParameter(f"d0 and sigma must be positive, got d0={d0}, sigma={sigma}")
    u, v = bin_offsets(rows, cols)
    d2 = u[:, None] ** 2 + v[None, :] ** 2
    gains = (1.0 / sigma**2) * (d2 / d0**2 - 2.0) * np.exp(-d2 / (2.0 * d0**2))
    return BandPassFilter(d0=float(d0), sigma=float(sigma), gains=gains)


def rescale_unit(arr) -> np.ndarray:
    """Affine map min->0, max->1; a flat input maps to all 0.5."""
    a = as_image(arr)
    lo = float(a.min())
    hi = float(a.max())
    if hi == lo:
        return np.full_like(a, 0.5)
    return (a - lo) / (hi - lo)


def apply_filter(img, filt: BandPassFilter, rescale: bool = True) -> np.ndarray:
    """Multiply the image spectrum by the filter gains and transform back.

    Multiplication in the frequency rectangle is circular convolution in
    space; callers needing linear convolution must pre-pad.  The rescaled
    output makes pupil pixels the highest intensities of the frame.
    """
    a = as_image(img)
    if a.shape != filt.gains.shape:
        raise DimensionMismatch(
            f"image {a.shape} does not match filter grid {filt.gains.shape}"
        )
    spec = forward_dft(a)
    filtered = inverse_dft(Spectrum(spec.coeffs * filt.gains, centered=True))
    return rescale_unit(filtered) if rescale else filtered
