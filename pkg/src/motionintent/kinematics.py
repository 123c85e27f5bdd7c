"""Uniform time-series primitives: trajectories, derivatives, median filtering.

All signals are uniformly sampled at ``dt`` seconds per frame. Derivatives
use first-order forward differences, attributed to the earlier frame, so a
differentiated series keeps the frame offset of its source and loses one
sample at the end. Signals derived from the same trajectory therefore align
by frame index over their common valid range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SeriesTooShort


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled 3D center-of-mass path.

    positions: (N, 3) array of (x, y, z) in scene length units. The y axis
        is vertical and points up.
    dt: seconds per frame (1 / fps), constant across the sequence.
    frame0_time: timestamp of the first frame in seconds.
    """

    positions: np.ndarray
    dt: float
    frame0_time: float = 0.0

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise ValueError(f"positions must have shape (N, 3), got {pos.shape}")
        if len(pos) < 3:
            raise SeriesTooShort(
                f"a trajectory needs at least 3 frames, got {len(pos)}"
            )
        if not (float(self.dt) > 0.0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not np.isfinite(pos).all():
            raise ValueError("positions contain NaN or Inf")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "frame0_time", float(self.frame0_time))

    def __len__(self) -> int:
        return len(self.positions)

    @property
    def x(self) -> np.ndarray:
        return self.positions[:, 0]

    @property
    def y(self) -> np.ndarray:
        """Vertical coordinate, positive up."""
        return self.positions[:, 1]

    @property
    def z(self) -> np.ndarray:
        return self.positions[:, 2]

    @property
    def times(self) -> np.ndarray:
        return self.frame0_time + self.dt * np.arange(len(self))

    def translated(self, offset) -> "Trajectory":
        """Return a copy shifted by a constant 3-vector."""
        return Trajectory(self.positions + np.asarray(offset, dtype=float),
                          self.dt, self.frame0_time)


@dataclass(frozen=True)
class ScalarSeries:
    """A scalar signal aligned to a source trajectory by frame offset.

    values: the samples.
    dt: seconds per frame, inherited from the source.
    offset: index of the first valid frame relative to the source trajectory.
    """

    values: np.ndarray
    dt: float
    offset: int = 0

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1:
            raise ValueError(f"values must be 1-D, got shape {vals.shape}")
        if not np.isfinite(vals).all():
            raise ValueError("series contains NaN or Inf")
        if not (float(self.dt) > 0.0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if int(self.offset) < 0:
            raise ValueError(f"offset must be >= 0, got {self.offset}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "offset", int(self.offset))

    def __len__(self) -> int:
        return len(self.values)


def finite_difference(s: ScalarSeries) -> ScalarSeries:
    """First-order forward difference, attributed to the earlier frame.

    out[i] = (s[i+1] - s[i]) / dt, so the result is one sample shorter and
    keeps the source offset.
    """
    if len(s) < 2:
        raise SeriesTooShort(f"finite difference needs >= 2 samples, got {len(s)}")
    return ScalarSeries(np.diff(s.values) / s.dt, s.dt, s.offset)


def _lower_median(window: np.ndarray) -> float:
    # Lower median of the sorted window; deterministic for even sizes.
    return float(np.sort(window)[(len(window) - 1) // 2])


def median_filter(s: ScalarSeries, window: int = 30) -> ScalarSeries:
    """Running median over a centered window, shrinking at the edges.

    Interior frames use the window [i - (window-1)//2, i + window//2];
    even window sizes take the lower median of the sorted window. Where
    that window would cross a series bound it shrinks symmetrically
    (radius min(half, i, n-1-i)) so it stays centered, which keeps the
    filter idempotent on monotone series for odd windows. Length and
    offset are preserved.
    """
    window = int(window)
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    vals = s.values
    n = len(vals)
    if window == 1 or n == 1:
        return s
    left = (window - 1) // 2
    right = window // 2
    out = np.empty(n)
    for i in range(n):
        if i >= left and i + right < n:
            lo, hi = i - left, i + right + 1
        else:
            radius = min(left, i, n - 1 - i)
            lo, hi = i - radius, i + radius + 1
        out[i] = _lower_median(vals[lo:hi])
    return ScalarSeries(out, s.dt, s.offset)


def vertical_acceleration(traj: Trajectory) -> ScalarSeries:
    """Second derivative of the vertical coordinate by repeated differencing.

    Exact (up to float error) for any quadratic y(t), which makes constant
    gravitational acceleration recoverable without bias.
    """
    y = ScalarSeries(traj.y, traj.dt, 0)
    return finite_difference(finite_difference(y))
