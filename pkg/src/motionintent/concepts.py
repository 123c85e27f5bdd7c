"""Per-frame intentionality inference from energy and acceleration signals.

Four physics-grounded rules map a center-of-mass trajectory to a per-frame
label in {+1 intentional, -1 non-intentional, 0 unknown}:

  rule 1  energy gain: a frame that adds mechanical energy to the system is
          self-propelled, hence intentional.
  rule 2  gravity test: a frame with constant downward acceleration c * g
          (0 < c, covering free fall and frictionless slopes) and no energy
          gain is external-force motion (EFM), hence non-intentional.
  rule 3  causal carry-over: an EFM interval launched by an energy gain
          immediately before it (a jump's free-fall phase) is intentional.
  rule 4  intentionality inertia: unknown frames inherit the label of the
          frame that precedes them; a leading unknown run takes the prior.

Preconditions: a single agent, gravity (and its slope decomposition) as the
only external force, and total mechanical energy computable from the center
of mass alone. Outside these the labels are undefined; see the README.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .energy import (
    DEFAULT_GRAVITY,
    DEFAULT_MEDIAN_WINDOW,
    ENERGY_EPS_FLOOR,
    ENERGY_EPS_MAD_FACTOR,
    EnergyProfile,
    energy_rate,
    robust_energy_threshold,
)
from .errors import OverlapViolation
from .kinematics import (
    ScalarSeries,
    Trajectory,
    median_filter,
    vertical_acceleration,
)

INTENTIONAL = 1
NON_INTENTIONAL = -1
UNKNOWN = 0

VARIANTS = ("c1", "c12", "c123", "c124", "full")
PRIORS = ("intentional", "non-intentional", "unknown")

_PRIOR_VALUE = {"intentional": 1, "non-intentional": -1, "unknown": 0}


@dataclass(frozen=True)
class IntentSignal:
    """Per-frame label series over {+1, -1, 0}, frame-aligned to a source."""

    labels: np.ndarray
    dt: float
    offset: int = 0

    def __post_init__(self):
        arr = np.array(self.labels, dtype=np.int8)
        if arr.ndim != 1:
            raise ValueError(f"labels must be 1-D, got shape {arr.shape}")
        if not np.isin(arr, (-1, 0, 1)).all():
            raise ValueError("labels must be in {+1, -1, 0}")
        if not (float(self.dt) > 0.0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if int(self.offset) < 0:
            raise ValueError(f"offset must be >= 0, got {self.offset}")
        arr.setflags(write=False)
        object.__setattr__(self, "labels", arr)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "offset", int(self.offset))

    def __len__(self) -> int:
        return len(self.labels)

    def count(self, value: int) -> int:
        return int(np.count_nonzero(self.labels == value))


@dataclass(frozen=True)
class IntervalSet:
    """Ordered, disjoint, inclusive [start, end] frame intervals."""

    intervals: tuple

    def __post_init__(self):
        ivs = tuple((int(a), int(b)) for a, b in self.intervals)
        prev_end = None
        for a, b in ivs:
            if a > b:
                raise ValueError(f"interval [{a}, {b}] has start > end")
            if a < 0:
                raise ValueError(f"interval [{a}, {b}] has negative start")
            if prev_end is not None and a <= prev_end:
                raise ValueError("intervals must be sorted and disjoint")
            prev_end = b
        object.__setattr__(self, "intervals", ivs)

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def to_lists(self) -> list:
        return [[a, b] for a, b in self.intervals]


@dataclass(frozen=True)
class ConceptConfig:
    """Tunable parameters of the inference rules.

    eps_energy: threshold for "energy was added"; None resolves to
        max(eps_energy_floor, eps_energy_mad_factor * MAD(rate)) per signal.
    eps_accel: max deviation of vertical acceleration from its window mean
        for the constancy test, length/s^2.
    c_min, c_max: accepted range of the gravity fraction, a_y in
        [-c_max*g, -c_min*g]. c_min > 0 excludes uniform motion; c_max
        rejects super-gravity (yanked-downward) accelerations.
    constancy_window: centered window (frames) for the gravity test.
    lookback: frames before an EFM interval searched for an energy gain in
        the causal rule. The windowed gravity test delays EFM onset by
        about constancy_window // 2 frames past the gain spike, so the
        default covers that lag; set 1 for strict single-frame causality.
    efm_min_len: minimum EFM run length (frames) kept as an interval.
    prior: label assumed for a leading unknown run under rule 4.
    variant: which rules run ("c1", "c12", "c123", "c124", "full").
    """

    eps_energy: Optional[float] = None
    eps_energy_floor: float = ENERGY_EPS_FLOOR
    eps_energy_mad_factor: float = ENERGY_EPS_MAD_FACTOR
    eps_accel: float = 0.5
    c_min: float = 0.05
    c_max: float = 1.5
    constancy_window: int = 5
    lookback: int = 5
    efm_min_len: int = 3
    prior: str = "intentional"
    variant: str = "full"

    def __post_init__(self):
        if self.eps_energy is not None and not (self.eps_energy > 0):
            raise ValueError(f"eps_energy must be positive, got {self.eps_energy}")
        if not (self.eps_accel > 0):
            raise ValueError(f"eps_accel must be positive, got {self.eps_accel}")
        if not (0 < self.c_min < self.c_max):
            raise ValueError(
                f"need 0 < c_min < c_max, got c_min={self.c_min} c_max={self.c_max}"
            )
        if self.constancy_window < 1:
            raise ValueError("constancy_window must be >= 1")
        if self.lookback < 1:
            raise ValueError("lookback must be >= 1")
        if self.efm_min_len < 1:
            raise ValueError("efm_min_len must be >= 1")
        if self.prior not in PRIORS:
            raise ValueError(f"prior must be one of {PRIORS}, got {self.prior!r}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")


def resolve_energy_threshold(
    rate: ScalarSeries,
    cfg: ConceptConfig,
    scale_source: Optional[ScalarSeries] = None,
) -> float:
    """The effective energy-gain threshold for a given rate signal.

    ``scale_source`` supplies the series whose robust scale calibrates the
    threshold; the pipeline passes the unfiltered rate, whose noise the
    median filter has not yet flattened into sparse steps.
    """
    if cfg.eps_energy is not None:
        return float(cfg.eps_energy)
    return robust_energy_threshold(
        scale_source if scale_source is not None else rate,
        floor=cfg.eps_energy_floor,
        mad_factor=cfg.eps_energy_mad_factor,
    )


def mark_energy_gain(
    rate: ScalarSeries,
    cfg: ConceptConfig,
    eps: Optional[float] = None,
) -> IntentSignal:
    """Rule 1: +1 where the energy rate exceeds the threshold, else unknown."""
    if eps is None:
        eps = resolve_energy_threshold(rate, cfg)
    labels = np.where(rate.values > eps, INTENTIONAL, UNKNOWN)
    return IntentSignal(labels, rate.dt, rate.offset)


def detect_efm(
    a_y: ScalarSeries,
    energy_gain: IntentSignal,
    g: float,
    cfg: ConceptConfig,
) -> IntentSignal:
    """Rule 2 gravity test: -1 where the motion is driven by gravity alone.

    A frame qualifies when, over the centered constancy window (clipped at
    the edges): no frame shows an energy gain, the window mean of a_y lies
    in [-c_max*g, -c_min*g], and no sample deviates from the window mean by
    more than eps_accel.
    """
    if len(a_y) != len(energy_gain) or a_y.offset != energy_gain.offset:
        raise ValueError("acceleration and energy-gain signals are not aligned")
    if g <= 0:
        raise ValueError(f"g must be positive, got {g}")
    n = len(a_y)
    vals = a_y.values
    gain = energy_gain.labels
    left = (cfg.constancy_window - 1) // 2
    right = cfg.constancy_window // 2
    lo_mean = -cfg.c_max * g
    hi_mean = -cfg.c_min * g
    labels = np.zeros(n, dtype=np.int8)
    for i in range(n):
        lo = max(0, i - left)
        hi = min(n, i + right + 1)
        if np.any(gain[lo:hi] != UNKNOWN):
            continue
        window = vals[lo:hi]
        mean = window.mean()
        if not (lo_mean <= mean <= hi_mean):
            continue
        if np.max(np.abs(window - mean)) > cfg.eps_accel:
            continue
        labels[i] = NON_INTENTIONAL
    return IntentSignal(labels, a_y.dt, a_y.offset)


def merge_labels(efm: IntentSignal, energy_gain: IntentSignal) -> IntentSignal:
    """Rule 2 combination: elementwise sum of the gravity and energy labels.

    The supports are disjoint by construction; an overlap is asserted at
    runtime because it can only come from a detector bug.
    """
    if len(efm) != len(energy_gain) or efm.offset != energy_gain.offset:
        raise ValueError("signals are not aligned")
    both = (efm.labels != UNKNOWN) & (energy_gain.labels != UNKNOWN)
    if both.any():
        frame = int(np.argmax(both)) + efm.offset
        raise OverlapViolation(
            f"energy-gain and gravity labels overlap at frame {frame}"
        )
    return IntentSignal(efm.labels + energy_gain.labels, efm.dt, efm.offset)


def extract_intervals(signal: IntentSignal, value: int, min_len: int = 1) -> IntervalSet:
    """Maximal runs of ``value`` with length >= min_len, in frame order."""
    if min_len < 1:
        raise ValueError("min_len must be >= 1")
    mask = signal.labels == value
    if not mask.any():
        return IntervalSet(())
    padded = np.concatenate(([False], mask, [False])).astype(np.int8)
    edges = np.diff(padded)
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1) - 1
    runs = [(int(a), int(b)) for a, b in zip(starts, ends) if b - a + 1 >= min_len]
    return IntervalSet(tuple(runs))


def relabel_caused_efm(
    merged: IntentSignal,
    energy_gain: IntentSignal,
    efm_intervals: IntervalSet,
    cfg: ConceptConfig,
) -> IntentSignal:
    """Rule 3: EFM intervals launched by an energy gain become intentional.

    For each interval starting at frame a, any +1 in the preceding
    [a - lookback, a - 1] frames marks the whole interval +1. An interval
    starting at frame 0 has no predecessor and is left unchanged.
    """
    labels = merged.labels.copy()
    gain = energy_gain.labels
    for a, b in efm_intervals:
        if a == 0:
            continue
        lo = max(0, a - cfg.lookback)
        if np.any(gain[lo:a] == INTENTIONAL):
            labels[a : b + 1] = INTENTIONAL
    return IntentSignal(labels, merged.dt, merged.offset)


def carry_intentionality(
    signal: IntentSignal,
    unknown_intervals: IntervalSet,
    cfg: ConceptConfig,
) -> IntentSignal:
    """Rule 4: each unknown run inherits the label of the frame before it.

    A run starting at frame 0 takes the configured prior; with an unknown
    prior it stays unlabeled.
    """
    labels = signal.labels.copy()
    for a, b in unknown_intervals:
        fill = _PRIOR_VALUE[cfg.prior] if a == 0 else int(labels[a - 1])
        labels[a : b + 1] = fill
    return IntentSignal(labels, signal.dt, signal.offset)


def smooth_labels(signal: IntentSignal, window: int = 30) -> IntentSignal:
    """Median-filter the label series. Presentation only; never feed back
    into aggregation unless explicitly requested."""
    as_floats = ScalarSeries(signal.labels.astype(float), signal.dt, signal.offset)
    out = median_filter(as_floats, window)
    return IntentSignal(np.rint(out.values).astype(np.int8), signal.dt, signal.offset)


@dataclass(frozen=True)
class PipelineResult:
    """Everything the inference pipeline produced for one trajectory."""

    signal: IntentSignal
    profile: EnergyProfile
    a_y: ScalarSeries
    eps_energy: float
    efm_intervals: IntervalSet
    unknown_intervals: IntervalSet
    stages: dict = field(default_factory=dict)


def run_pipeline(
    traj: Trajectory,
    cfg: ConceptConfig = ConceptConfig(),
    g: float = DEFAULT_GRAVITY,
    median_window: int = DEFAULT_MEDIAN_WINDOW,
) -> PipelineResult:
    """Run the rule pipeline for the configured variant.

    Signals are trimmed to the common valid range (two frames shorter than
    the trajectory, offset 0). The "c124" variant applies rule 4 directly
    to the rule-2 output; "full" runs all four rules in order.
    """
    profile = energy_rate(traj, g=g, window=median_window)
    a_y = vertical_acceleration(traj)
    rate = profile.rate
    eps = resolve_energy_threshold(rate, cfg, scale_source=profile.rate_raw)
    gain = mark_energy_gain(rate, cfg, eps=eps)
    stages = {"c1": gain}

    if cfg.variant == "c1":
        return PipelineResult(
            signal=gain,
            profile=profile,
            a_y=a_y,
            eps_energy=eps,
            efm_intervals=IntervalSet(()),
            unknown_intervals=extract_intervals(gain, UNKNOWN),
            stages=stages,
        )

    efm = detect_efm(a_y, gain, g, cfg)
    merged = merge_labels(efm, gain)
    efm_intervals = extract_intervals(merged, NON_INTENTIONAL, cfg.efm_min_len)
    stages["c12"] = merged

    if cfg.variant == "c12":
        final = merged
    elif cfg.variant == "c123":
        final = relabel_caused_efm(merged, gain, efm_intervals, cfg)
        stages["c123"] = final
    elif cfg.variant == "c124":
        unknown = extract_intervals(merged, UNKNOWN)
        final = carry_intentionality(merged, unknown, cfg)
        stages["c124"] = final
    else:  # full
        relabeled = relabel_caused_efm(merged, gain, efm_intervals, cfg)
        stages["c123"] = relabeled
        unknown = extract_intervals(relabeled, UNKNOWN)
        final = carry_intentionality(relabeled, unknown, cfg)
        stages["full"] = final

    if cfg.variant in ("c124", "full"):
        unknown_intervals = unknown
    else:
        unknown_intervals = extract_intervals(final, UNKNOWN)

    return PipelineResult(
        signal=final,
        profile=profile,
        a_y=a_y,
        eps_energy=eps,
        efm_intervals=efm_intervals,
        unknown_intervals=unknown_intervals,
        stages=stages,
    )


def infer(
    traj: Trajectory,
    cfg: ConceptConfig = ConceptConfig(),
    g: float = DEFAULT_GRAVITY,
    median_window: int = DEFAULT_MEDIAN_WINDOW,
) -> IntentSignal:
    """Per-frame intentionality labels for a trajectory."""
    return run_pipeline(traj, cfg, g=g, median_window=median_window).signal


def variant_config(cfg: ConceptConfig, variant: str) -> ConceptConfig:
    """A copy of ``cfg`` running a different subset of the rules."""
    return replace(cfg, variant=variant)
