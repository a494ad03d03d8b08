"""Eye-image analysis for driver vigilance.

Pipeline stages: band-pass pupil enhancement (`spectral`), pupil center
detection and chord correction (`pupil`), two independent iris segmentation
routes (`iris_entropy`, `gabor_pca`), a fuzzy vigilance engine (`fuzzy`), and
a ground-truthed synthetic eye generator (`synth`).  `vigileye.cli` wires them
into a command line.
"""

from .config import PipelineConfig, load_config
from .fuzzy import VigilanceReading, infer, measure_blink_stream
from .gabor_pca import build_bank, classify_iris, fit_pca, gabor_features, normalize
from .image import load_image, read_pgm, write_pgm
from .iris_entropy import IrisAnnulus, segment
from .pupil import PupilEstimate, detect_pupil
from .spectral import BandPassFilter, Spectrum, apply_filter, forward_dft, inverse_dft, make_band_pass
from .synth import EyeSpec, FlashSpot, render

__all__ = [
    "BandPassFilter",
    "EyeSpec",
    "FlashSpot",
    "IrisAnnulus",
    "PipelineConfig",
    "PupilEstimate",
    "Spectrum",
    "VigilanceReading",
    "apply_filter",
    "build_bank",
    "classify_iris",
    "detect_pupil",
    "fit_pca",
    "forward_dft",
    "gabor_features",
    "infer",
    "inverse_dft",
    "load_config",
    "load_image",
    "make_band_pass",
    "measure_blink_stream",
    "normalize",
    "read_pgm",
    "render",
    "segment",
    "write_pgm",
]

__version__ = "0.1.0"
