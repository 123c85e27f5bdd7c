"""Skeleton-to-center-of-mass conversion and keypoint occlusion simulation.

The center of mass of a human agent is estimated in two stages: each body
part (legs, torso, arms) contributes the unweighted centroid of its visible
joints, and the agent's center of mass is the part-weight average of those
centroids. Part weights follow standard anthropometric segment-mass tables
and live in small JSON files so they can be swapped without code changes.

Occluded joints are dropped from their part centroid; nothing is smoothed
or imputed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import DegenerateFrame, SchemaError, UnknownJoint
from .kinematics import Trajectory

PARTS = ("legs", "torso", "arms")
OCCLUSION_MODES = ("all_samples", "per_agent", "per_frame")

#: Bundled weight tables: 21-joint motion-capture template and 25-joint
#: pose-estimation template.
PRESETS = {
    "mocap21": "weights_mocap21.json",
    "pose25": "weights_pose25.json",
}
DEFAULT_PRESET = "mocap21"


@dataclass(frozen=True)
class WeightTable:
    """Joint-to-part map plus part weights that sum to one."""

    part_of: dict
    part_weight: dict

    def __post_init__(self):
        weights = {str(k): float(v) for k, v in self.part_weight.items()}
        part_of = {str(j): str(p) for j, p in self.part_of.items()}
        for part in weights:
            if part not in PARTS:
                raise SchemaError(f"unknown body part {part!r}, expected one of {PARTS}")
        for joint, part in part_of.items():
            if part not in weights:
                raise SchemaError(f"joint {joint!r} mapped to unweighted part {part!r}")
        if any(w <= 0 for w in weights.values()):
            raise SchemaError("part weights must be positive")
        total = sum(weights.values())
        if abs(total - 1.0) > 1e-9:
            raise SchemaError(f"part weights must sum to 1.0, got {total!r}")
        object.__setattr__(self, "part_of", part_of)
        object.__setattr__(self, "part_weight", weights)

    @property
    def joint_names(self) -> tuple:
        return tuple(self.part_of)

    @classmethod
    def from_dict(cls, data: dict) -> "WeightTable":
        if not isinstance(data, dict) or "parts" not in data or "part_weights" not in data:
            raise SchemaError("weight table needs 'parts' and 'part_weights' keys")
        part_of = {}
        for part, joints in data["parts"].items():
            if not isinstance(joints, list):
                raise SchemaError(f"parts[{part!r}] must be a list of joint names")
            for joint in joints:
                if joint in part_of:
                    raise SchemaError(f"joint {joint!r} assigned to more than one part")
                part_of[joint] = part
        return cls(part_of=part_of, part_weight=dict(data["part_weights"]))

    @classmethod
    def load(cls, path) -> "WeightTable":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"weight table {path}: invalid JSON ({exc})") from exc
        return cls.from_dict(data)

    @classmethod
    def preset(cls, name: str = DEFAULT_PRESET) -> "WeightTable":
        if name not in PRESETS:
            raise SchemaError(f"unknown preset {name!r}, expected one of {tuple(PRESETS)}")
        ref = resources.files("motionintent.data").joinpath(PRESETS[name])
        return cls.from_dict(json.loads(ref.read_text(encoding="utf-8")))


@dataclass(frozen=True)
class SkeletonSequence:
    """Per-frame named 3D joints with visibility flags.

    frames: (F, J, 3) float array aligned to joint_names.
    visibility: (F, J) boolean array; None means all joints visible.
    """

    joint_names: tuple
    frames: np.ndarray
    dt: float
    visibility: np.ndarray = None

    def __post_init__(self):
        names = tuple(str(n) for n in self.joint_names)
        if len(set(names)) != len(names):
            raise SchemaError("duplicate joint names")
        frames = np.array(self.frames, dtype=float)
        if frames.ndim != 3 or frames.shape[2] != 3:
            raise SchemaError(f"frames must have shape (F, J, 3), got {frames.shape}")
        if frames.shape[1] != len(names):
            raise SchemaError(
                f"every frame must have {len(names)} joints, got {frames.shape[1]}"
            )
        if not np.isfinite(frames).all():
            raise SchemaError("joint coordinates contain NaN or Inf")
        if not (float(self.dt) > 0.0):
            raise SchemaError(f"dt must be positive, got {self.dt}")
        if self.visibility is None:
            vis = np.ones(frames.shape[:2], dtype=bool)
        else:
            vis = np.array(self.visibility, dtype=bool)
            if vis.shape != frames.shape[:2]:
                raise SchemaError(
                    f"visibility must have shape {frames.shape[:2]}, got {vis.shape}"
                )
        frames.setflags(write=False)
        vis.setflags(write=False)
        object.__setattr__(self, "joint_names", names)
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "visibility", vis)

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def n_joints(self) -> int:
        return len(self.joint_names)


def center_of_mass(seq: SkeletonSequence, w: WeightTable) -> Trajectory:
    """Part-weighted center of mass of every frame.

    Each part contributes the unweighted mean of its visible joints. A part
    with no visible joints in some frame makes that frame degenerate and
    raises; unknown joint names fail up front.
    """
    for name in seq.joint_names:
        if name not in w.part_of:
            raise UnknownJoint(f"joint {name!r} is not in the weight table")
    part_cols = {
        part: np.array([w.part_of[n] == part for n in seq.joint_names])
        for part in w.part_weight
    }
    com = np.zeros((len(seq), 3))
    for part, cols in part_cols.items():
        vis = seq.visibility[:, cols]
        counts = vis.sum(axis=1)
        if np.any(counts == 0):
            raise DegenerateFrame(int(np.argmax(counts == 0)), part)
        pts = seq.frames[:, cols, :]
        centroid = (pts * vis[:, :, None]).sum(axis=1) / counts[:, None]
        com += w.part_weight[part] * centroid
    return Trajectory(com, seq.dt)


def occlude(seq: SkeletonSequence, mode: str, seed: int) -> SkeletonSequence:
    """Mark one joint invisible, per the requested occlusion mode.

    all_samples / per_agent draw a single joint from a generator seeded
    with ``seed`` (the batch harness reuses one seed for all sequences in
    the first mode and spawns per-sequence seeds in the second); per_frame
    draws one joint independently for every frame. Coordinates are never
    modified, only visibility flips.
    """
    if mode not in OCCLUSION_MODES:
        raise ValueError(f"mode must be one of {OCCLUSION_MODES}, got {mode!r}")
    if seq.n_joints < 2:
        raise ValueError("occlusion needs at least 2 joints")
    rng = np.random.default_rng(seed)
    vis = seq.visibility.copy()
    if mode == "per_frame":
        picks = rng.integers(0, seq.n_joints, size=len(seq))
        vis[np.arange(len(seq)), picks] = False
    else:
        joint = int(rng.integers(0, seq.n_joints))
        vis[:, joint] = False
    return SkeletonSequence(seq.joint_names, seq.frames, seq.dt, vis)


def occlude_batch(seqs, mode: str, seed: int):
    """Occlude a batch of sequences with the documented seeding policy.

    all_samples: one draw shared by every sequence; per_agent / per_frame:
    one spawned seed per sequence so draws are independent but reproducible.
    """
    if mode == "all_samples":
        return [occlude(s, mode, seed) for s in seqs]
    child_seeds = np.random.SeedSequence(seed).spawn(len(seqs))
    return [
        occlude(s, mode, int(child.generate_state(1)[0]))
        for s, child in zip(seqs, child_seeds)
    ]
