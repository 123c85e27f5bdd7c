"""Mechanical-energy bookkeeping for a unit-mass point agent.

Kinetic energy comes from forward-difference velocities, so K[i] physically
samples the motion at the interval midpoint t_i + dt/2. To keep the total
energy of purely gravitational motion constant (instead of drifting by
g^2 * dt / 2 per second), the total-energy builder samples the potential on
the same midpoint grid. The standalone ``potential_energy`` keeps the plain
per-frame form V[i] = g * (y[i] - y[0]).

Rotational and elastic terms are ignored; the agent is a unit point mass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SeriesTooShort
from .kinematics import ScalarSeries, Trajectory, finite_difference, median_filter

DEFAULT_GRAVITY = 9.81
DEFAULT_MEDIAN_WINDOW = 30

# Energy-rate threshold defaults: absolute floor plus a multiple of the
# median absolute deviation, so the test adapts to the signal's noise scale.
ENERGY_EPS_FLOOR = 1e-3
ENERGY_EPS_MAD_FACTOR = 3.0


@dataclass(frozen=True)
class EnergyProfile:
    """Per-frame energy decomposition of a trajectory.

    kinetic, potential and total are sampled on the velocity (midpoint)
    grid and have length N-1; ``rate`` is the derivative of the median
    filtered total and has length N-2. ``rate_raw`` differentiates the
    unfiltered total and is the right signal for noise-scale estimates:
    the median filter flattens smooth noise into sparse steps, which makes
    the filtered rate mostly zero and its MAD useless as a scale. All
    series carry offset 0.
    """

    kinetic: ScalarSeries
    potential: ScalarSeries
    total: ScalarSeries
    total_filtered: ScalarSeries
    rate: ScalarSeries
    rate_raw: ScalarSeries
    g: float
    y0: float


def kinetic_energy(traj: Trajectory) -> ScalarSeries:
    """K[i] = 0.5 * ||v[i]||^2 with forward-difference velocities, unit mass."""
    if len(traj) < 2:
        raise SeriesTooShort("kinetic energy needs >= 2 frames")
    v = np.diff(traj.positions, axis=0) / traj.dt
    return ScalarSeries(0.5 * np.einsum("ij,ij->i", v, v), traj.dt, 0)


def potential_energy(traj: Trajectory, g: float = DEFAULT_GRAVITY) -> ScalarSeries:
    """V[i] = g * (y[i] - y[0]), unit mass, relative to the first frame."""
    if g <= 0:
        raise ValueError(f"g must be positive, got {g}")
    y = traj.y
    return ScalarSeries(g * (y - y[0]), traj.dt, 0)


def _midpoint_potential(traj: Trajectory, g: float) -> ScalarSeries:
    # Potential on the same half-step grid as the forward-difference
    # velocities; for quadratic y(t) this makes K + V exactly constant.
    y = traj.y
    y_mid = 0.5 * (y[:-1] + y[1:])
    return ScalarSeries(g * (y_mid - y_mid[0]), traj.dt, 0)


def energy_rate(
    traj: Trajectory,
    g: float = DEFAULT_GRAVITY,
    window: int = DEFAULT_MEDIAN_WINDOW,
) -> EnergyProfile:
    """Total mechanical energy and its median-filtered time derivative.

    Builds K and V, filters E = K + V with a centered median window to
    remove outliers, and differentiates the filtered series.
    """
    if len(traj) < 3:
        raise SeriesTooShort("energy rate needs >= 3 frames")
    if g <= 0:
        raise ValueError(f"g must be positive, got {g}")
    kinetic = kinetic_energy(traj)
    potential = _midpoint_potential(traj, g)
    total = ScalarSeries(kinetic.values + potential.values, traj.dt, 0)
    filtered = median_filter(total, window)
    rate = finite_difference(filtered)
    return EnergyProfile(
        kinetic=kinetic,
        potential=potential,
        total=total,
        total_filtered=filtered,
        rate=rate,
        rate_raw=finite_difference(total),
        g=float(g),
        y0=float(traj.y[0]),
    )


def robust_energy_threshold(
    rate: ScalarSeries,
    floor: float = ENERGY_EPS_FLOOR,
    mad_factor: float = ENERGY_EPS_MAD_FACTOR,
) -> float:
    """Positive threshold for "energy was added": max(floor, k * MAD(rate)).

    The median absolute deviation makes the threshold insensitive to the
    unit system and to a noise floor in the rate estimate, while the
    absolute floor keeps it strictly positive on noiseless input.
    """
    vals = rate.values
    mad = float(np.median(np.abs(vals - np.median(vals))))
    return max(float(floor), float(mad_factor) * mad)
