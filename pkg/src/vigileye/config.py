"""Pipeline configuration: one knob for every parameter the method leaves open.

The file format is plain ``section.key=value`` text, '#' comments allowed.
Every knob appears exactly once and has a working default; a fully-defaulted
config runs the whole pipeline end to end on the synthetic suite.
"""

from dataclasses import dataclass, replace
from pathlib import Path

from .errors import InvalidParameter


@dataclass(frozen=True)
class PipelineConfig:
    d0: float | None = None     # band radius; None means min(rows, cols)/8
    sigma: float = 1.0
    template: int = 31
    percentile: float = 90.0
    e_max: float = 0.15
    samples: int = 256
    gamma: float = 0.5
    bandwidth: float = 1.0
    components: int = 3
    fuzzy_config: str | None = None


_KEYS = {
    "filter.d0": ("d0", float),
    "filter.sigma": ("sigma", float),
    "pupil.template": ("template", int),
    "pupil.percentile": ("percentile", float),
    "entropy.e_max": ("e_max", float),
    "entropy.samples": ("samples", int),
    "gabor.gamma": ("gamma", float),
    "gabor.bandwidth": ("bandwidth", float),
    "gabor.components": ("components", int),
    "fuzzy.config": ("fuzzy_config", str),
}


def load_config(path) -> PipelineConfig:
    cfg = PipelineConfig()
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameter(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise InvalidParameter(f"{path}:{lineno}: unknown key {key!r}")
        field, cast = _KEYS[key]
        try:
            cfg = replace(cfg, **{field: cast(value)})
        except ValueError:
            raise InvalidParameter(f"{path}:{lineno}: bad value {value!r} for {key}") from None
    return cfg


def resolved_d0(cfg: PipelineConfig, rows: int, cols: int) -> float:
    return cfg.d0 if cfg.d0 is not None else min(rows, cols) / 8.0
