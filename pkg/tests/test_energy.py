import numpy as np
import pytest

from motionintent import (
    SeriesTooShort,
    Trajectory,
    energy_rate,
    kinetic_energy,
    potential_energy,
    robust_energy_threshold,
)

G = 9.81
DT = 1 / 60


def traj_from_xyz(x, y, z, dt=DT):
    return Trajectory(np.column_stack([x, y, z]), dt)


def stationary(n=100, at=(1.0, 2.0, 3.0)):
    pos = np.tile(np.asarray(at, dtype=float), (n, 1))
    return Trajectory(pos, DT)


def free_fall(n=120, y0=10.0, g=G, dt=DT):
    t = dt * np.arange(n)
    return traj_from_xyz(np.zeros(n), y0 - 0.5 * g * t**2, np.zeros(n), dt)


class TestKineticEnergy:
    def test_stationary_is_zero(self):
        assert np.array_equal(kinetic_energy(stationary()).values, np.zeros(99))

    def test_constant_velocity(self):
        # |v| = 5 at unit mass: K = 0.5 * (3^2 + 4^2) = 12.5.
        t = DT * np.arange(50)
        traj = traj_from_xyz(3.0 * t, 4.0 * t, np.zeros(50))
        assert np.allclose(kinetic_energy(traj).values, 12.5)

    def test_free_fall_tracks_analytic_speed(self):
        # Forward-difference speed samples v at t + dt/2, so the relative
        # error of K against 0.5*(g*t)^2 is (1 + dt/(2t))^2 - 1, roughly
        # dt/t: 3.4% at frame 30 and below 2% past frame 50.
        traj = free_fall(n=121)
        k = kinetic_energy(traj)
        t = DT * np.arange(30, 120)
        analytic = 0.5 * (G * t) ** 2
        rel = np.abs(k.values[30:120] - analytic) / analytic
        assert rel.max() <= 1.05 * (DT / t).max()
        assert rel[21:].max() < 0.02

    def test_too_short(self):
        with pytest.raises(SeriesTooShort):
            kinetic_energy(stationary(1))


class TestPotentialEnergy:
    def test_level_walk_is_zero(self):
        t = np.arange(40.0)
        traj = traj_from_xyz(t, np.full(40, 1.3), np.zeros(40), dt=0.1)
        assert np.array_equal(potential_energy(traj, G).values, np.zeros(40))

    def test_two_unit_rise(self):
        y = np.linspace(0.0, 2.0, 60)
        traj = traj_from_xyz(np.zeros(60), y, np.zeros(60), dt=0.1)
        v = potential_energy(traj, G)
        assert v.values[0] == 0.0
        assert np.isclose(v.values[-1], 19.62)

    def test_free_fall_matches_negative_kinetic(self):
        # Conservation: V(t) = -K(t) for a drop from rest, analytically.
        traj = free_fall(n=100)
        t = DT * np.arange(100)
        v = potential_energy(traj, G)
        assert np.allclose(v.values, -0.5 * (G * t) ** 2, rtol=1e-12, atol=1e-9)

    def test_rejects_nonpositive_g(self):
        with pytest.raises(ValueError):
            potential_energy(stationary(), g=0.0)


class TestEnergyRate:
    def test_ballistic_arc_conserves_energy(self):
        t = DT * np.arange(240)
        x = 2.0 * t
        y = 1.0 + 5.0 * t - 0.5 * G * t**2
        profile = energy_rate(traj_from_xyz(x, y, np.zeros(240)), g=G)
        eps = robust_energy_threshold(profile.rate)
        assert np.abs(profile.rate.values).max() < eps

    def test_stationary_rate_is_zero(self):
        profile = energy_rate(stationary(150), g=G)
        assert np.array_equal(profile.rate.values, np.zeros(148))

    def test_impulse_jump_injects_half_v_squared(self):
        # Stand, then launch upward at 4 length/s: the rate spike must
        # integrate to the injected energy 0.5 * 4^2 = 8.
        n_stand = 60
        v = 4.0
        t_flight = DT * np.arange(1, 41)
        y = np.concatenate([np.zeros(n_stand), v * t_flight - 0.5 * G * t_flight**2])
        n = len(y)
        profile = energy_rate(traj_from_xyz(np.zeros(n), y, np.zeros(n)), g=G)
        injected = np.sum(profile.rate.values) * DT
        assert np.isclose(injected, 8.0, rtol=0.02)

    def test_total_is_kinetic_plus_potential(self):
        profile = energy_rate(free_fall(), g=G)
        assert np.array_equal(
            profile.total.values, profile.kinetic.values + profile.potential.values
        )
        assert profile.potential.values[0] == 0.0

    def test_translation_invariance(self):
        rng = np.random.default_rng(3)
        pos = np.cumsum(rng.normal(0, 0.01, (100, 3)), axis=0)
        base = energy_rate(Trajectory(pos, DT), g=G)
        moved = energy_rate(Trajectory(pos + [17.0, -4.0, 9.0], DT), g=G)
        assert np.allclose(base.rate.values, moved.rate.values, rtol=1e-9, atol=1e-9)

    def test_rotation_about_vertical_axis(self):
        rng = np.random.default_rng(4)
        pos = np.cumsum(rng.normal(0, 0.01, (100, 3)), axis=0)
        theta = 0.7
        rot = np.array(
            [
                [np.cos(theta), 0.0, np.sin(theta)],
                [0.0, 1.0, 0.0],
                [-np.sin(theta), 0.0, np.cos(theta)],
            ]
        )
        base = energy_rate(Trajectory(pos, DT), g=G)
        rotated = energy_rate(Trajectory(pos @ rot.T, DT), g=G)
        assert np.allclose(base.rate.values, rotated.rate.values, rtol=1e-9, atol=1e-8)

    def test_vertical_shift_changes_nothing_but_reference(self):
        rng = np.random.default_rng(5)
        pos = np.cumsum(rng.normal(0, 0.01, (80, 3)), axis=0)
        shifted = pos.copy()
        shifted[:, 1] += 123.0
        base = energy_rate(Trajectory(pos, DT), g=G)
        moved = energy_rate(Trajectory(shifted, DT), g=G)
        assert np.allclose(base.rate.values, moved.rate.values, rtol=1e-9, atol=1e-7)
        assert np.allclose(base.potential.values, moved.potential.values, atol=1e-7)


class TestRobustThreshold:
    def test_floor_applies_on_clean_signals(self):
        profile = energy_rate(stationary(100), g=G)
        assert robust_energy_threshold(profile.rate) == 1e-3

    def test_scales_with_noise(self):
        rng = np.random.default_rng(6)
        from motionintent import ScalarSeries

        noisy = ScalarSeries(rng.normal(0, 2.0, 500), DT)
        eps = robust_energy_threshold(noisy)
        assert 2.0 < eps < 10.0
