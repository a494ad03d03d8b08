"""Mamdani fuzzy engine mapping blink statistics to an unconsciousness level.

Inputs are f, the glance frequency in closed-to-open transitions per minute,
and T, the current closed-eye interval in seconds.  f carries two trapezoidal
sets (Normal, High), T four (VeryShort, Short, Long, VeryLong), and the output
five over [0, 100].  Six rules cover the (f-set, T-set) grid:

        f \\ T   VeryShort     Short     Long
        Normal  Vigilant      RatherSleepy  Sleepy
        High    RatherSleepy  Sleepy    RatherUnconscious

One special case sits outside the rule table: when T reaches the VeryLong
plateau, or f is exactly zero, the driver is declared completely unconscious
(level 100) and the alert flag is set.  A plain "Low" set for f would be
redundant; a near-zero glance rate coincides with a very long closed interval.

Inference operators are min (AND), max (aggregation), centroid defuzzification
on a uniform grid over the output domain.  Inputs beyond the modeled f range
saturate at the top of the last set instead of activating nothing.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidInput, InvalidParameter, NonMonotonicTimestamps

OUTPUT_DOMAIN = (0.0, 100.0)
DEFUZZ_RESOLUTION = 1001

F_LABELS = ("Normal", "High")
T_LABELS = ("VeryShort", "Short", "Long", "VeryLong")
# severity order, least to most severe
OUTPUT_LABELS = ("Vigilant", "RatherSleepy", "Sleepy", "RatherUnconscious", "Unconscious")

RULE_TABLE = (
    ("Normal", "VeryShort", "Vigilant"),
    ("Normal", "Short", "RatherSleepy"),
    ("Normal", "Long", "Sleepy"),
    ("High", "VeryShort", "RatherSleepy"),
    ("High", "Short", "Sleepy"),
    ("High", "Long", "RatherUnconscious"),
)

DEFAULT_WINDOW_S = 60.0


@dataclass(frozen=True)
class TrapezoidalSet:
    """Trapezoid (a, b, c, d): 0 outside [a, d], 1 on [b, c], linear ramps."""

    label: str
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not self.a <= self.b <= self.c <= self.d:
            raise InvalidParameter(
                f"{self.label}: breakpoints must satisfy a <= b <= c <= d, "
                f"got ({self.a}, {self.b}, {self.c}, {self.d})"
            )


@dataclass(frozen=True)
class RuleBase:
    """Six table rules plus the implicit unconsciousness override."""

    rules: tuple = RULE_TABLE


@dataclass(frozen=True)
class FuzzySets:
    f: dict
    t: dict
    out: dict


@dataclass(frozen=True)
class VigilanceReading:
    f: float
    T: float
    level: float
    label: str
    alert: bool

    def to_dict(self) -> dict:
        return {
            "f": self.f,
            "T": self.T,
            "level": self.level,
            "label": self.label,
            "alert": self.alert,
        }


def membership(trap: TrapezoidalSet, x: float) -> float:
    """Piecewise-linear trapezoid evaluation."""
    if not math.isfinite(x):
        raise InvalidInput(f"membership argument must be finite, got {x}")
    if x < trap.a or x > trap.d:
        return 0.0
    if trap.b <= x <= trap.c:
        return 1.0
    if x < trap.b:
        return (x - trap.a) / (trap.b - trap.a)
    if math.isinf(trap.d):
        return 1.0
    return (trap.d - x) / (trap.d - trap.c)


def default_sets() -> FuzzySets:
    """Engineering defaults; every breakpoint is configurable via file."""
    inf = math.inf
    f_sets = {
        "Normal": TrapezoidalSet("Normal", 0.0, 0.0, 20.0, 30.0),
        "High": TrapezoidalSet("High", 20.0, 30.0, 120.0, 120.0),
    }
    # Long's plateau runs to the VeryLong plateau edge: the rule table has no
    # VeryLong column, so letting Long decay before the unconsciousness
    # override takes over would thin the aggregate and bend the surface back
    t_sets = {
        "VeryShort": TrapezoidalSet("VeryShort", 0.0, 0.0, 0.3, 0.5),
        "Short": TrapezoidalSet("Short", 0.3, 0.5, 1.5, 2.5),
        "Long": TrapezoidalSet("Long", 1.5, 2.5, 7.0, 9.0),
        "VeryLong": TrapezoidalSet("VeryLong", 5.0, 7.0, inf, inf),
    }
    out_sets = {
        "Vigilant": TrapezoidalSet("Vigilant", 0.0, 0.0, 15.0, 25.0),
        "RatherSleepy": TrapezoidalSet("RatherSleepy", 15.0, 25.0, 35.0, 45.0),
        "Sleepy": TrapezoidalSet("Sleepy", 35.0, 45.0, 55.0, 65.0),
        "RatherUnconscious": TrapezoidalSet("RatherUnconscious", 55.0, 65.0, 75.0, 85.0),
        "Unconscious": TrapezoidalSet("Unconscious", 75.0, 85.0, 100.0, 100.0),
    }
    return FuzzySets(f=f_sets, t=t_sets, out=out_sets)


_VARIABLE_LABELS = {"f": F_LABELS, "T": T_LABELS, "output": OUTPUT_LABELS}


def load_sets(path) -> FuzzySets:
    """Read set overrides from a text file: ``variable label a b c d`` per line.

    Unlisted sets keep their defaults; ``inf`` is accepted for open shoulders.
    """
    sets = default_sets()
    table = {"f": dict(sets.f), "T": dict(sets.t), "output": dict(sets.out)}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 6:
            raise InvalidInput(f"{path}:{lineno}: expected 'variable label a b c d'")
        variable, label = parts[0], parts[1]
        if variable not in table:
            raise InvalidInput(f"{path}:{lineno}: unknown variable {variable!r}")
        if label not in _VARIABLE_LABELS[variable]:
            raise InvalidInput(f"{path}:{lineno}: unknown label {label!r} for {variable}")
        try:
            a, b, c, d = (float(p) for p in parts[2:])
        except ValueError:
            raise InvalidInput(f"{path}:{lineno}: breakpoints must be numbers") from None
        table[variable][label] = TrapezoidalSet(label, a, b, c, d)
    return FuzzySets(f=table["f"], t=table["T"], out=table["output"])


def _f_saturation(sets: FuzzySets) -> float:
    finite = [s.d for s in sets.f.values() if math.isfinite(s.d)]
    return max(finite) if finite else math.inf


def infer(
    f: float,
    T: float,
    sets: FuzzySets | None = None,
    rules: RuleBase | None = None,
    resolution: int = DEFUZZ_RESOLUTION,
) -> VigilanceReading:
    """Run the rule base on one (f, T) pair and defuzzify.

    The unconsciousness override fires on full VeryLong membership (plateau,
    not the graded transition region) or on f exactly zero, and pins the
    level to 100.
    """
    if not (math.isfinite(f) and math.isfinite(T)) or f < 0 or T < 0:
        raise InvalidInput(f"f and T must be finite and non-negative, got f={f}, T={T}")
    if sets is None:
        sets = default_sets()
    if rules is None:
        rules = RuleBase()

    if membership(sets.t["VeryLong"], T) == 1.0 or f == 0.0:
        return VigilanceReading(f=f, T=T, level=100.0, label="Unconscious", alert=True)

    f_eff = min(f, _f_saturation(sets))
    activations: dict[str, float] = {}
    for f_label, t_label, out_label in rules.rules:
        act = min(membership(sets.f[f_label], f_eff), membership(sets.t[t_label], T))
        if act > activations.get(out_label, 0.0):
            activations[out_label] = act

    xs = np.linspace(*OUTPUT_DOMAIN, resolution)
    aggregate = np.zeros_like(xs)
    for out_label, act in activations.items():
        if act <= 0.0:
            continue
        trap = sets.out[out_label]
        mu = np.array([membership(trap, x) for x in xs])
        np.maximum(aggregate, np.minimum(mu, act), out=aggregate)

    total = float(aggregate.sum())
    if total == 0.0:
        level = 0.5 * (OUTPUT_DOMAIN[0] + OUTPUT_DOMAIN[1])  # nothing fired
    else:
        level = float((xs * aggregate).sum() / total)

    label = OUTPUT_LABELS[0]
    best = -1.0
    for out_label in OUTPUT_LABELS:  # ties resolve toward the more severe label
        act = activations.get(out_label, 0.0)
        if act >= best and act > 0.0:
            best = act
            label = out_label
    return VigilanceReading(f=f, T=T, level=level, label=label, alert=False)


def control_surface(f_grid, t_grid, sets: FuzzySets | None = None) -> np.ndarray:
    """Defuzzified level at every (f, T) grid point; rows follow f_grid."""
    f_values = np.asarray(f_grid, dtype=np.float64)
    t_values = np.asarray(t_grid, dtype=np.float64)
    if f_values.size == 0 or t_values.size == 0:
        raise InvalidInput("surface grids must be non-empty")
    out = np.empty((f_values.size, t_values.size))
    for i, fv in enumerate(f_values):
        for j, tv in enumerate(t_values):
            out[i, j] = infer(float(fv), float(tv), sets).level
    return out


def measure_blink_stream(events, window_s: float = DEFAULT_WINDOW_S) -> tuple[float, float]:
    """Reduce a sampled (timestamp, eye_open) stream to the (f, T) pair.

    f counts closed-to-open transitions per minute over the trailing window
    (shortened to the observed span when the stream is younger than the
    window); T is the age of the current closed run, 0 when the eye is open.
    The last sample's timestamp is taken as "now".
    """
    events = list(events)
    if not events:
        return 0.0, 0.0
    times = [float(t) for t, _ in events]
    states = [bool(s) for _, s in events]
    for prev, cur in zip(times, times[1:]):
        if cur <= prev:
            raise NonMonotonicTimestamps(f"timestamps must strictly increase ({prev} -> {cur})")
    now = times[-1]
    span = min(window_s, now - times[0])

    f = 0.0
    if span > 0:
        count = 0
        for i in range(1, len(events)):
            if states[i] and not states[i - 1] and times[i] >= now - span:
                count += 1
        f = count * 60.0 / span

    T = 0.0
    if not states[-1]:
        start = now
        for i in range(len(events) - 1, -1, -1):
            if states[i]:
                break
            start = times[i]
        T = now - start
    return f, T


def read_blink_stream(path) -> list[tuple[float, bool]]:
    """Parse a stream file: one ``timestamp open`` pair per line, open as 0/1."""
    events = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2 or parts[1] not in ("0", "1"):
            raise InvalidInput(f"{path}:{lineno}: expected 'timestamp 0|1'")
        try:
            t = float(parts[0])
        except ValueError:
            raise InvalidInput(f"{path}:{lineno}: bad timestamp {parts[0]!r}") from None
        events.append((t, parts[1] == "1"))
    return events
