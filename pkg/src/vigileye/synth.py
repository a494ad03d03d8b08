"""Ground-truthed synthetic eye images.

Each rendering is three concentric zones: a dark pupil disk, an iris annulus
carrying a separable sinusoidal texture a*sin(k_theta*theta)*sin(k_r*r), and a
bright flat sclera.  Optional corruptions model camera artifacts: a saturated
flash spot and uniform noise in a band around the pupil rim.  Rendering is a
pure function of (spec, seed); bit-exact reproducibility is promised within
one implementation, statistical reproducibility across implementations via the
recorded RNG algorithm identifier.
"""

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidSpec

RNG_ALGORITHM = "pcg64"  # numpy default_rng

RIM_BAND_HALF_WIDTH = 2.0  # pixels around the pupil boundary hit by rim noise


@dataclass(frozen=True)
class FlashSpot:
    cx: float
    cy: float
    radius: float
    level: float = 1.0


@dataclass(frozen=True)
class EyeSpec:
    rows: int = 96
    cols: int = 96
    cx: float = 48.0
    cy: float = 48.0
    pupil_radius: float = 12.0
    iris_radius: float = 40.0
    pupil_level: float = 0.05
    sclera_level: float = 0.9
    texture_amplitude: float = 0.2
    texture_angular_freq: float = 14.0
    texture_radial_freq: float = 0.045
    flash: FlashSpot | None = None
    rim_noise: float = 0.0
    seed: int = 0


@dataclass(frozen=True)
class GroundTruth:
    cx: float
    cy: float
    pupil_radius: float
    iris_radius: float
    seed: int
    rng: str = RNG_ALGORITHM


def _validate(spec: EyeSpec) -> None:
    if spec.rows < 1 or spec.cols < 1:
        raise InvalidSpec("image extents must be positive")
    border = min(spec.cx, spec.cy, spec.cols - 1 - spec.cx, spec.rows - 1 - spec.cy)
    if not 0 < spec.pupil_radius < spec.iris_radius < border:
        raise InvalidSpec(
            f"need 0 < pupil_radius < iris_radius < {border:.1f} (distance to border), "
            f"got {spec.pupil_radius} and {spec.iris_radius}"
        )
    for name in ("pupil_level", "sclera_level"):
        v = getattr(spec, name)
        if not 0.0 <= v <= 1.0:
            raise InvalidSpec(f"{name} must lie in [0, 1], got {v}")
    if spec.rim_noise < 0:
        raise InvalidSpec("rim_noise amplitude must be non-negative")
    if spec.flash is not None and not 0.0 <= spec.flash.level <= 1.0:
        raise InvalidSpec("flash level must lie in [0, 1]")


def render(spec: EyeSpec):
    """Render an eye image and its exact geometric ground truth."""
    _validate(spec)
    rng = np.random.default_rng(spec.seed)
    yy, xx = np.indices((spec.rows, spec.cols), dtype=np.float64)
    dx = xx - spec.cx
    dy = yy - spec.cy
    dist = np.hypot(dx, dy)
    theta = np.arctan2(dy, dx)

    img = np.full((spec.rows, spec.cols), spec.sclera_level)
    iris_zone = (dist > spec.pupil_radius) & (dist <= spec.iris_radius)
    texture = (
        spec.texture_amplitude
        * np.sin(spec.texture_angular_freq * theta[iris_zone])
        * np.sin(spec.texture_radial_freq * dist[iris_zone])
    )
    img[iris_zone] = 0.5 + texture
    img[dist <= spec.pupil_radius] = spec.pupil_level

    if spec.flash is not None:
        f = spec.flash
        spot = np.hypot(xx - f.cx, yy - f.cy) <= f.radius
        img[spot] = f.level
    if spec.rim_noise > 0:
        band = np.abs(dist - spec.pupil_radius) <= RIM_BAND_HALF_WIDTH
        img[band] += rng.uniform(-spec.rim_noise, spec.rim_noise, size=int(band.sum()))

    np.clip(img, 0.0, 1.0, out=img)
    truth = GroundTruth(
        cx=spec.cx,
        cy=spec.cy,
        pupil_radius=spec.pupil_radius,
        iris_radius=spec.iris_radius,
        seed=spec.seed,
    )
    return img, truth


def spec_to_dict(spec: EyeSpec) -> dict:
    d = asdict(spec)
    if spec.flash is None:
        del d["flash"]
    return d


def spec_from_dict(d: dict) -> EyeSpec:
    d = dict(d)
    flash = d.pop("flash", None)
    if flash is not None:
        flash = FlashSpot(**flash)
    try:
        return EyeSpec(flash=flash, **d)
    except TypeError as exc:
        raise InvalidSpec(f"unknown field in eye spec: {exc}") from exc


def load_manifest(path) -> list[EyeSpec]:
    """Read a JSON-lines manifest, one EyeSpec per line."""
    specs = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            specs.append(spec_from_dict(json.loads(line)))
        except (json.JSONDecodeError, TypeError) as exc:
            raise InvalidSpec(f"{path}:{lineno}: bad manifest line: {exc}") from exc
    return specs


def save_manifest(path, specs) -> None:
    lines = [json.dumps(spec_to_dict(s)) for s in specs]
    Path(path).write_text("\n".join(lines) + "\n")


def truth_to_dict(truth: GroundTruth) -> dict:
    return asdict(truth)


def sample_spec(seed: int, with_flash: bool = False, rim_noise: float = 0.0) -> EyeSpec:
    """Deterministic randomized eye geometry for evaluation suites.

    One seed fixes everything: center jitter, pupil and iris radii, zone
    intensities, and (with ``with_flash``) a saturated spot on the iris a few
    pixels outside the pupil, the camera-flash artifact that displaces the
    raw summit.
    """
    r = np.random.default_rng(seed)
    rows = cols = 96
    cx = int(r.integers(42, 55))
    cy = int(r.integers(42, 55))
    pupil_radius = int(r.integers(9, 15))
    border = min(cx, cy, cols - 1 - cx, rows - 1 - cy)
    iris_radius = int(r.integers(max(pupil_radius + 18, 30), min(43, border - 1)))
    flash = None
    if with_flash:
        angle = r.uniform(0.0, 2.0 * np.pi)
        d = pupil_radius + r.uniform(4.0, 8.0)
        flash = FlashSpot(
            cx=cx + d * np.cos(angle), cy=cy + d * np.sin(angle), radius=3.0, level=1.0
        )
    return EyeSpec(
        rows=rows,
        cols=cols,
        cx=cx,
        cy=cy,
        pupil_radius=pupil_radius,
        iris_radius=iris_radius,
        pupil_level=float(r.uniform(0.02, 0.1)),
        sclera_level=float(r.uniform(0.8, 0.95)),
        flash=flash,
        rim_noise=rim_noise,
        seed=seed,
    )
