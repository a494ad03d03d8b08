"""Exception hierarchy for the eye-analysis pipeline.

``AlgorithmFailure`` marks conditions where the inputs were well-formed but
the method itself could not produce a usable result (the CLI maps these to
exit code 3); every other ``PipelineError`` is an input or usage problem
(exit code 2).
"""


class PipelineError(Exception):
    """Base class for all pipeline errors."""


class InvalidParameter(PipelineError):
    """A numeric parameter is outside its legal range."""


class DimensionMismatch(PipelineError):
    """Grid extents of two operands disagree."""


class ImaginaryResidue(PipelineError):
    """Inverse transform of a supposedly symmetric spectrum was not real."""


class InvalidTemplate(PipelineError):
    """Accumulation template is even-sized or larger than the image."""


class ImageFormatError(PipelineError):
    """Image file is unreadable, truncated, or not 8-bit grayscale."""


class InvalidInput(PipelineError):
    """Fuzzy engine input is negative or non-finite."""


class NonMonotonicTimestamps(PipelineError):
    """Blink stream timestamps are not strictly increasing."""


class InvalidSpec(PipelineError):
    """Synthetic eye description violates its geometric constraints."""


class AlgorithmFailure(PipelineError):
    """A method failed on well-formed input."""


class NoPupilMask(AlgorithmFailure):
    """Seed pixel does not sit inside the binarized pupil region."""


class DegenerateChord(AlgorithmFailure):
    """A correction chord reached the image border while still inside the mask."""


class CircleOutOfBounds(AlgorithmFailure):
    """Sampling circle does not fit inside the image."""


class NoConvergence(AlgorithmFailure):
    """Ripple growth hit the image boundary without an entropy jump.

    Carries the boundary-limited annulus computed so far in ``annulus``.
    """

    def __init__(self, message, annulus=None):
        super().__init__(message)
        self.annulus = annulus


class DegenerateCovariance(AlgorithmFailure):
    """Feature covariance has rank zero; no principal directions exist."""


class EmptyCluster(AlgorithmFailure):
    """Two-means clustering collapsed; pixels are not separable."""
