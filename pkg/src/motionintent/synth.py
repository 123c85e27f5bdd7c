"""Deterministic generator of ground-truth-labeled synthetic motion.

Scenarios fall into two families. Physics kinds (projectile, bounce,
incline, and the fall phases of walk_trip / fall_and_rest) follow gravity
exactly: positions are sampled from the closed-form constant-acceleration
solution, so between contact events the sampled motion conserves mechanical
energy to float precision. Scripted kinds (walk, standing, jump launches)
model an agent that moves by its own choice.

Ground-truth labels are assigned by construction, never by the inference
pipeline: physics-only frames are -1, scripted frames and the ballistic
phases they cause are +1. Each scenario also carries a video-level label.

Bounces reflect the vertical velocity with a restitution factor at the
exact sub-step impact time, so post-contact energy scales by restitution
squared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .concepts import IntentSignal
from .errors import InvalidScenario
from .kinematics import Trajectory
from .skeleton import SkeletonSequence, WeightTable

KINDS = (
    "projectile",
    "bounce",
    "incline",
    "jump_sequence",
    "walk",
    "walk_trip",
    "fall_and_rest",
)

#: Video-level class of each kind. walk_trip counts as non-intentional:
#: the trip dominates the video under the frame-threshold decision rule.
KIND_VIDEO_LABEL = {
    "projectile": "non-intentional",
    "bounce": "non-intentional",
    "incline": "non-intentional",
    "walk_trip": "non-intentional",
    "fall_and_rest": "non-intentional",
    "jump_sequence": "intentional",
    "walk": "intentional",
}

INTENTIONAL_KINDS = tuple(k for k in KINDS if KIND_VIDEO_LABEL[k] == "intentional")
NON_INTENTIONAL_KINDS = tuple(
    k for k in KINDS if KIND_VIDEO_LABEL[k] == "non-intentional"
)

_DEFAULT_PARAMS = {
    "projectile": {
        "frames": 120.0, "p0y": 1.0, "v0x": 2.0, "v0y": 5.0, "v0z": 0.0,
    },
    "bounce": {
        "frames": 360.0, "height": 2.0, "v0x": 1.5, "v0z": 0.0, "restitution": 0.7,
    },
    "incline": {
        "frames": 180.0, "theta_deg": 30.0, "azimuth_deg": 0.0, "v_init": 0.0,
    },
    "jump_sequence": {
        "stand_frames": 60.0, "v_jump": 4.0, "rest_frames": 60.0,
        "n_jumps": 1.0, "inter_stand_frames": 30.0,
    },
    "walk": {
        "frames": 240.0, "speed": 1.2, "azimuth_deg": 0.0,
    },
    "walk_trip": {
        "walk_frames": 120.0, "speed": 1.2, "azimuth_deg": 0.0,
        "fall_frames": 30.0, "rest_frames": 60.0,
    },
    "fall_and_rest": {
        "height": 0.8, "v0x": 0.5, "rest_frames": 90.0,
    },
}


@dataclass(frozen=True)
class Scenario:
    """A synthetic motion script plus sampling and noise settings."""

    kind: str
    params: dict = field(default_factory=dict)
    g: float = 9.81
    dt: float = 1.0 / 60.0
    seed: int = 0
    noise_sigma: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidScenario(f"unknown kind {self.kind!r}, expected one of {KINDS}")
        if not (self.g > 0):
            raise InvalidScenario(f"g must be positive, got {self.g}")
        if not (self.dt > 0):
            raise InvalidScenario(f"dt must be positive, got {self.dt}")
        if self.noise_sigma < 0:
            raise InvalidScenario(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        defaults = _DEFAULT_PARAMS[self.kind]
        params = dict(defaults)
        for key, value in self.params.items():
            if key not in defaults:
                raise InvalidScenario(
                    f"kind {self.kind!r} has no parameter {key!r} "
                    f"(expected from {sorted(defaults)})"
                )
            params[key] = float(value)
        _validate_params(self.kind, params)
        object.__setattr__(self, "params", params)


def _validate_params(kind: str, p: dict) -> None:
    def positive(name):
        if p[name] <= 0:
            raise InvalidScenario(f"{kind}: {name} must be positive, got {p[name]}")

    if kind == "projectile":
        positive("frames")
    elif kind == "bounce":
        positive("frames")
        positive("height")
        if not (0.0 <= p["restitution"] < 1.0):
            raise InvalidScenario(
                f"bounce: restitution must be in [0, 1), got {p['restitution']}"
            )
    elif kind == "incline":
        positive("frames")
        if not (0.0 < p["theta_deg"] < 90.0):
            raise InvalidScenario(
                f"incline: theta_deg must be in (0, 90), got {p['theta_deg']}"
            )
        if p["v_init"] < 0:
            raise InvalidScenario("incline: v_init must be >= 0")
    elif kind == "jump_sequence":
        positive("stand_frames")
        positive("v_jump")
        positive("rest_frames")
        if p["n_jumps"] < 1 or p["n_jumps"] != int(p["n_jumps"]):
            raise InvalidScenario("jump_sequence: n_jumps must be a positive integer")
    elif kind == "walk":
        positive("frames")
        positive("speed")
    elif kind == "walk_trip":
        positive("walk_frames")
        positive("speed")
        positive("fall_frames")
        positive("rest_frames")
    elif kind == "fall_and_rest":
        positive("height")
        positive("rest_frames")
        if p["v0x"] < 0:
            raise InvalidScenario("fall_and_rest: v0x must be >= 0")


def _const_accel_path(p0, v0, accel, n, dt):
    """Positions at t = dt..n*dt from the closed-form quadratic solution."""
    t = dt * np.arange(1, n + 1)[:, None]
    return p0[None, :] + v0[None, :] * t + 0.5 * accel[None, :] * t * t


def _hold(p0, n):
    return np.repeat(p0[None, :], n, axis=0)


class _Builder:
    """Accumulates positions and construction-time labels phase by phase."""

    def __init__(self, p0):
        self.positions = [np.asarray(p0, dtype=float)]
        self.labels = []

    @property
    def current(self):
        return self.positions[-1]

    def extend(self, pts, label):
        for row in np.atleast_2d(pts):
            self.positions.append(np.asarray(row, dtype=float))
            self.labels.append(label)

    def finish(self, dt, label0):
        pos = np.stack(self.positions)
        labels = np.concatenate(([label0], np.asarray(self.labels, dtype=np.int8)))
        return pos, labels


def _gen_projectile(scn: Scenario):
    p = scn.params
    n = int(p["frames"])
    p0 = np.array([0.0, p["p0y"], 0.0])
    v0 = np.array([p["v0x"], p["v0y"], p["v0z"]])
    accel = np.array([0.0, -scn.g, 0.0])
    b = _Builder(p0)
    b.extend(_const_accel_path(p0, v0, accel, n - 1, scn.dt), -1)
    return b.finish(scn.dt, -1)


def _gen_incline(scn: Scenario):
    p = scn.params
    n = int(p["frames"])
    theta = math.radians(p["theta_deg"])
    phi = math.radians(p["azimuth_deg"])
    # Downhill unit vector and the gravity component along the slope.
    downhill = np.array(
        [math.cos(theta) * math.cos(phi), -math.sin(theta), math.cos(theta) * math.sin(phi)]
    )
    accel = scn.g * math.sin(theta) * downhill
    p0 = np.array([0.0, 3.0, 0.0])
    v0 = p["v_init"] * downhill
    b = _Builder(p0)
    b.extend(_const_accel_path(p0, v0, accel, n - 1, scn.dt), -1)
    return b.finish(scn.dt, -1)


def _impact_time(y, vy, g, ground, horizon):
    """Earliest tau in (0, horizon] with y + vy*tau - g*tau^2/2 == ground."""
    a = -0.5 * g
    b = vy
    c = y - ground
    disc = b * b - 4 * a * c
    if disc < 0:
        return None
    root = math.sqrt(disc)
    candidates = sorted(((-b + root) / (2 * a), (-b - root) / (2 * a)))
    for tau in candidates:
        if 1e-12 < tau <= horizon:
            return tau
    return None


def _gen_bounce(scn: Scenario):
    p = scn.params
    n = int(p["frames"])
    e = p["restitution"]
    pos = np.array([0.0, p["height"], 0.0])
    vel = np.array([p["v0x"], 0.0, p["v0z"]])
    b = _Builder(pos)
    rolling = False
    # Vertical speed below which a bounce degenerates to rolling contact.
    v_stop = scn.g * scn.dt
    for _ in range(n - 1):
        if rolling:
            pos = pos + vel * scn.dt
            pos[1] = 0.0
            b.extend(pos, -1)
            continue
        remaining = scn.dt
        x, y, z = pos
        vx, vy, vz = vel
        for _ in range(64):
            tau = _impact_time(y, vy, scn.g, 0.0, remaining)
            if tau is None:
                x += vx * remaining
                z += vz * remaining
                y += vy * remaining - 0.5 * scn.g * remaining * remaining
                vy -= scn.g * remaining
                break
            x += vx * tau
            z += vz * tau
            y = 0.0
            vy = -e * (vy - scn.g * tau)
            remaining -= tau
            if vy < v_stop:
                vy = 0.0
                rolling = True
                x += vx * remaining
                z += vz * remaining
                break
        pos = np.array([x, y, z])
        vel = np.array([vx, vy, vz])
        b.extend(pos, -1)
    return b.finish(scn.dt, -1)


def _ballistic_until_ground(b: _Builder, v0, g, dt, ground, label):
    """Append the exact flight parabola, then the landing frame at ground level."""
    p0 = b.current.copy()
    j = 1
    while True:
        t = j * dt
        y = p0[1] + v0[1] * t - 0.5 * g * t * t
        if y <= ground:
            break
        pt = p0 + v0 * t
        pt[1] = y
        b.extend(pt, label)
        j += 1
    t = j * dt
    landing = p0 + v0 * t
    landing[1] = ground
    b.extend(landing, label)


def _gen_jump_sequence(scn: Scenario):
    p = scn.params
    b = _Builder(np.zeros(3))
    b.extend(_hold(b.current, int(p["stand_frames"]) - 1), 1)
    n_jumps = int(p["n_jumps"])
    for k in range(n_jumps):
        v0 = np.array([0.0, p["v_jump"], 0.0])
        _ballistic_until_ground(b, v0, scn.g, scn.dt, 0.0, 1)
        if k < n_jumps - 1:
            b.extend(_hold(b.current, int(p["inter_stand_frames"])), 1)
    b.extend(_hold(b.current, int(p["rest_frames"])), 1)
    return b.finish(scn.dt, 1)


def _gen_walk(scn: Scenario):
    p = scn.params
    n = int(p["frames"])
    phi = math.radians(p["azimuth_deg"])
    vel = p["speed"] * np.array([math.cos(phi), 0.0, math.sin(phi)])
    p0 = np.zeros(3)
    b = _Builder(p0)
    b.extend(_const_accel_path(p0, vel, np.zeros(3), n - 1, scn.dt), 1)
    return b.finish(scn.dt, 1)


def _gen_walk_trip(scn: Scenario):
    p = scn.params
    phi = math.radians(p["azimuth_deg"])
    vel = p["speed"] * np.array([math.cos(phi), 0.0, math.sin(phi)])
    p0 = np.zeros(3)
    b = _Builder(p0)
    walk_n = int(p["walk_frames"])
    b.extend(_const_accel_path(p0, vel, np.zeros(3), walk_n - 1, scn.dt), 1)
    # The trip: horizontal velocity carries over, vertical motion goes
    # ballistic for a fixed number of frames, then the agent lies still.
    fall_n = int(p["fall_frames"])
    accel = np.array([0.0, -scn.g, 0.0])
    b.extend(_const_accel_path(b.current, vel, accel, fall_n, scn.dt), -1)
    b.extend(_hold(b.current, int(p["rest_frames"])), -1)
    return b.finish(scn.dt, 1)


def _gen_fall_and_rest(scn: Scenario):
    p = scn.params
    p0 = np.array([0.0, p["height"], 0.0])
    v0 = np.array([p["v0x"], 0.0, 0.0])
    b = _Builder(p0)
    _ballistic_until_ground(b, v0, scn.g, scn.dt, 0.0, -1)
    b.extend(_hold(b.current, int(p["rest_frames"])), -1)
    return b.finish(scn.dt, -1)


_GENERATORS = {
    "projectile": _gen_projectile,
    "bounce": _gen_bounce,
    "incline": _gen_incline,
    "jump_sequence": _gen_jump_sequence,
    "walk": _gen_walk,
    "walk_trip": _gen_walk_trip,
    "fall_and_rest": _gen_fall_and_rest,
}


def generate(scn: Scenario):
    """Sample a scenario: (Trajectory, per-frame ground-truth IntentSignal).

    Labels come from the construction script alone, so they are valid as an
    independent oracle for the inference pipeline. Position noise, when
    requested, is additive i.i.d. Gaussian and does not change the labels.
    """
    positions, labels = _GENERATORS[scn.kind](scn)
    if len(positions) < 3:
        raise InvalidScenario(f"{scn.kind}: scenario produced fewer than 3 frames")
    if scn.noise_sigma > 0:
        rng = np.random.default_rng(np.random.SeedSequence((scn.seed, 0xA01)))
        positions = positions + rng.normal(0.0, scn.noise_sigma, positions.shape)
    traj = Trajectory(positions, scn.dt)
    truth = IntentSignal(labels, scn.dt, 0)
    return traj, truth


def video_label(scn: Scenario) -> str:
    """Video-level ground truth of a scenario."""
    return KIND_VIDEO_LABEL[scn.kind]


# Standing-pose joint offsets for the bundled templates, in scene units.
# Any constant bias is removed at build time, so only the shape matters.
_TEMPLATE_POSES = {
    "mocap21": {
        "hips": (0.0, 1.00, 0.0), "spine": (0.0, 1.15, 0.0),
        "chest": (0.0, 1.35, 0.0), "neck": (0.0, 1.50, 0.0),
        "head": (0.0, 1.65, 0.0),
        "left_hip": (-0.10, 0.95, 0.0), "left_knee": (-0.10, 0.50, 0.0),
        "left_ankle": (-0.10, 0.10, 0.0), "left_toe": (-0.10, 0.02, 0.15),
        "right_hip": (0.10, 0.95, 0.0), "right_knee": (0.10, 0.50, 0.0),
        "right_ankle": (0.10, 0.10, 0.0), "right_toe": (0.10, 0.02, 0.15),
        "left_shoulder": (-0.20, 1.45, 0.0), "left_elbow": (-0.25, 1.15, 0.0),
        "left_wrist": (-0.30, 0.90, 0.0), "left_hand": (-0.32, 0.80, 0.0),
        "right_shoulder": (0.20, 1.45, 0.0), "right_elbow": (0.25, 1.15, 0.0),
        "right_wrist": (0.30, 0.90, 0.0), "right_hand": (0.32, 0.80, 0.0),
    },
    "pose25": {
        "nose": (0.0, 1.70, 0.08), "neck": (0.0, 1.50, 0.0),
        "mid_hip": (0.0, 1.00, 0.0),
        "right_eye": (0.03, 1.73, 0.07), "left_eye": (-0.03, 1.73, 0.07),
        "right_ear": (0.07, 1.70, 0.0), "left_ear": (-0.07, 1.70, 0.0),
        "right_shoulder": (0.20, 1.45, 0.0), "right_elbow": (0.25, 1.15, 0.0),
        "right_wrist": (0.30, 0.90, 0.0),
        "left_shoulder": (-0.20, 1.45, 0.0), "left_elbow": (-0.25, 1.15, 0.0),
        "left_wrist": (-0.30, 0.90, 0.0),
        "right_hip": (0.10, 0.95, 0.0), "right_knee": (0.10, 0.50, 0.0),
        "right_ankle": (0.10, 0.10, 0.0),
        "left_hip": (-0.10, 0.95, 0.0), "left_knee": (-0.10, 0.50, 0.0),
        "left_ankle": (-0.10, 0.10, 0.0),
        "left_big_toe": (-0.10, 0.02, 0.15), "left_small_toe": (-0.14, 0.02, 0.13),
        "left_heel": (-0.10, 0.02, -0.05),
        "right_big_toe": (0.10, 0.02, 0.15), "right_small_toe": (0.14, 0.02, 0.13),
        "right_heel": (0.10, 0.02, -0.05),
    },
}


def _weighted_mean(points, table: WeightTable, names):
    """Part-weighted mean of one frame of joints (all visible)."""
    total = np.zeros(3)
    for part, weight in table.part_weight.items():
        members = [i for i, n in enumerate(names) if table.part_of[n] == part]
        total += weight * points[members].mean(axis=0)
    return total


def generate_skeleton(
    scn: Scenario,
    template: str = "mocap21",
    limb_amplitude: float = 0.02,
):
    """Rigid skeleton carried along the scenario's center-of-mass path.

    Joints are template offsets plus seeded sinusoidal limb motion. Both
    the offsets and the per-frame limb displacements have their part
    weighted mean removed, so the true center of mass is preserved by
    construction and only occlusion can bias its estimate.
    """
    if template not in _TEMPLATE_POSES:
        raise InvalidScenario(
            f"unknown template {template!r}, expected one of {tuple(_TEMPLATE_POSES)}"
        )
    traj, truth = generate(scn)
    table = WeightTable.preset(template)
    names = tuple(_TEMPLATE_POSES[template])
    offsets = np.array([_TEMPLATE_POSES[template][n] for n in names])
    offsets = offsets - _weighted_mean(offsets, table, names)

    n_frames = len(traj)
    frames = traj.positions[:, None, :] + offsets[None, :, :]
    if limb_amplitude > 0:
        rng = np.random.default_rng(np.random.SeedSequence((scn.seed, 0xB02)))
        t = traj.dt * np.arange(n_frames)
        amp = limb_amplitude * rng.uniform(0.3, 1.0, size=(len(names), 3))
        freq = rng.uniform(0.6, 1.8, size=(len(names), 3))
        phase = rng.uniform(0.0, 2.0 * math.pi, size=(len(names), 3))
        wobble = amp[None] * np.sin(
            2.0 * math.pi * freq[None] * t[:, None, None] + phase[None]
        )
        # Remove the part-weighted mean per frame; subtracting a constant
        # from every joint shifts the weighted mean by exactly that constant.
        part_weight_per_joint = np.zeros(len(names))
        for part, weight in table.part_weight.items():
            members = np.array([table.part_of[n] == part for n in names])
            part_weight_per_joint[members] = weight / members.sum()
        mean = np.einsum("j,fjc->fc", part_weight_per_joint, wobble)
        frames = frames + wobble - mean[:, None, :]
    seq = SkeletonSequence(names, frames, scn.dt)
    return seq, truth


def build_benchmark(n_per_kind: int = 10, seed: int = 0, noise_sigma: float = 0.0):
    """Scenario list for the benchmark corpus: (name, Scenario, video label).

    Produces n_per_kind * len(KINDS) sequences with exactly half intentional
    video labels (the intentional class gets the extra one when the total is
    odd). Kinds rotate round-robin within each class so coverage stays even,
    and every sequence gets its own derived seed and randomized parameters.
    """
    if n_per_kind < 1:
        raise InvalidScenario(f"n_per_kind must be >= 1, got {n_per_kind}")
    total = n_per_kind * len(KINDS)
    n_intentional = (total + 1) // 2
    root = np.random.SeedSequence(seed)
    children = root.spawn(total)
    entries = []
    idx_int = idx_non = 0
    for i in range(total):
        rng = np.random.default_rng(children[i])
        child_seed = int(children[i].generate_state(1)[0])
        if i % 2 == 0 and idx_int < n_intentional:
            kind = INTENTIONAL_KINDS[idx_int % len(INTENTIONAL_KINDS)]
            idx_int += 1
        else:
            kind = NON_INTENTIONAL_KINDS[idx_non % len(NON_INTENTIONAL_KINDS)]
            idx_non += 1
        params = _random_params(kind, rng)
        scn = Scenario(
            kind=kind,
            params=params,
            seed=child_seed,
            noise_sigma=noise_sigma,
        )
        name = f"seq_{i:03d}_{kind}"
        entries.append((name, scn, KIND_VIDEO_LABEL[kind]))
    return entries


def _random_params(kind: str, rng) -> dict:
    if kind == "projectile":
        return {
            "frames": float(rng.integers(100, 200)),
            "p0y": rng.uniform(0.5, 2.0),
            "v0x": rng.uniform(-3.0, 3.0),
            "v0y": rng.uniform(2.0, 6.0),
            "v0z": rng.uniform(-3.0, 3.0),
        }
    if kind == "bounce":
        return {
            "frames": float(rng.integers(240, 420)),
            "height": rng.uniform(1.5, 3.0),
            "v0x": rng.uniform(0.5, 2.0),
            "v0z": rng.uniform(-0.5, 0.5),
            "restitution": rng.uniform(0.5, 0.85),
        }
    if kind == "incline":
        return {
            "frames": float(rng.integers(120, 240)),
            "theta_deg": rng.uniform(15.0, 60.0),
            "azimuth_deg": rng.uniform(0.0, 360.0),
            "v_init": rng.uniform(0.0, 0.5),
        }
    if kind == "jump_sequence":
        return {
            "stand_frames": float(rng.integers(50, 80)),
            "v_jump": rng.uniform(3.8, 5.0),
            "rest_frames": float(rng.integers(50, 80)),
        }
    if kind == "walk":
        return {
            "frames": float(rng.integers(180, 360)),
            "speed": rng.uniform(0.8, 1.8),
            "azimuth_deg": rng.uniform(0.0, 360.0),
        }
    if kind == "walk_trip":
        return {
            "walk_frames": float(rng.integers(100, 160)),
            "speed": rng.uniform(0.8, 1.8),
            "azimuth_deg": rng.uniform(0.0, 360.0),
            "fall_frames": float(rng.integers(20, 35)),
            "rest_frames": float(rng.integers(50, 90)),
        }
    if kind == "fall_and_rest":
        return {
            "height": rng.uniform(0.4, 1.2),
            "v0x": rng.uniform(0.2, 1.0),
            "rest_frames": float(rng.integers(60, 120)),
        }
    raise InvalidScenario(f"unknown kind {kind!r}")


def benchmark_suite(
    n_per_kind: int,
    seed: int,
    out_dir,
    skeleton: bool = False,
    template: str = "mocap21",
    noise_sigma: float = 0.0,
):
    """Write the benchmark corpus to ``out_dir`` and return its manifest.

    The same seed always produces a byte-identical directory tree.
    """
    from . import formats

    entries = build_benchmark(n_per_kind, seed, noise_sigma=noise_sigma)
    manifest = formats.write_corpus(
        entries, out_dir, skeleton=skeleton, template=template,
        seed=seed, n_per_kind=n_per_kind,
    )
    return manifest
