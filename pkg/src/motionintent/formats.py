"""File formats: trajectory CSV, skeleton/truth/result JSON, corpus layout.

All writers emit floats through ``repr`` (via the json module or directly),
which round-trips every finite double bit-for-bit, and fix key order, so
identical inputs produce identical bytes.

Formats:
  trajectory CSV   header ``t,x,y,z``; strictly increasing, uniformly
                   spaced t; ``#`` starts a comment line; UTF-8.
  skeleton JSON    {"fps": number, "joints": [...], "frames": [[[x,y,z]
                   per joint] per frame], "visibility": optional
                   [[bool per joint] per frame]}.
  truth JSON       {"video_label": "intentional"|"non-intentional",
                   "frame_labels": optional [-1|0|1 per frame]}.
  result JSON      {"frame_labels": [...], "intervals": {"efm": [...],
                   "unknown": [...]}, "video": {...}, "diagnostics":
                   {"E": [...], "dE": [...], "a_y": [...], ...}}.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import SchemaError, SeriesTooShort
from .kinematics import Trajectory
from .skeleton import SkeletonSequence

TRAJECTORY_HEADER = ("t", "x", "y", "z")
_REL_DT_TOL = 1e-6


def write_trajectory_csv(traj: Trajectory, path, comments=()) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(TRAJECTORY_HEADER) + "\n")
        times = traj.times
        for i in range(len(traj)):
            x, y, z = (float(v) for v in traj.positions[i])
            fh.write(f"{float(times[i])!r},{x!r},{y!r},{z!r}\n")


def read_trajectory_csv(path) -> Trajectory:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.reader(line for line in fh if not line.lstrip().startswith("#"))
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            rows.append([cell.strip() for cell in row])
    if not rows:
        raise SchemaError(f"{path}: empty trajectory file")
    if tuple(rows[0]) != TRAJECTORY_HEADER:
        raise SchemaError(
            f"{path}: expected header {','.join(TRAJECTORY_HEADER)!r}, "
            f"got {','.join(rows[0])!r}"
        )
    body = rows[1:]
    if len(body) < 3:
        # Schema-valid but unusably short: degenerate data, not a format bug.
        raise SeriesTooShort(f"{path}: trajectory has {len(body)} frames, need >= 3")
    try:
        data = np.array([[float(cell) for cell in row] for row in body])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric value ({exc})") from exc
    if data.shape[1] != 4:
        raise SchemaError(f"{path}: every row needs 4 columns, got {data.shape[1]}")
    if not np.isfinite(data).all():
        raise SchemaError(f"{path}: values must be finite")
    t = data[:, 0]
    diffs = np.diff(t)
    if np.any(diffs <= 0):
        raise SchemaError(f"{path}: t must be strictly increasing")
    dt = float(t[1] - t[0])
    if np.any(np.abs(diffs - dt) > _REL_DT_TOL * max(dt, 1e-12)):
        raise SchemaError(f"{path}: t must be uniformly spaced")
    return Trajectory(data[:, 1:], dt, frame0_time=float(t[0]))


def _require(data: dict, key: str, context: str):
    if key not in data:
        raise SchemaError(f"{context}: missing key {key!r}")
    return data[key]


def _load_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON ({exc})") from exc


def write_skeleton_json(seq: SkeletonSequence, path) -> None:
    payload = {
        "fps": 1.0 / seq.dt,
        "joints": list(seq.joint_names),
        "frames": seq.frames.tolist(),
    }
    if not seq.visibility.all():
        payload["visibility"] = seq.visibility.tolist()
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def read_skeleton_json(path) -> SkeletonSequence:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: top level must be an object")
    fps = _require(data, "fps", str(path))
    if not isinstance(fps, (int, float)) or not fps > 0:
        raise SchemaError(f"{path}: fps must be a positive number, got {fps!r}")
    joints = _require(data, "joints", str(path))
    frames = _require(data, "frames", str(path))
    if not isinstance(joints, list) or not all(isinstance(j, str) for j in joints):
        raise SchemaError(f"{path}: joints must be a list of strings")
    try:
        arr = np.array(frames, dtype=float)
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"{path}: frames must be numeric ({exc})") from exc
    if arr.ndim != 3 or arr.shape[1] != len(joints) or arr.shape[2] != 3:
        raise SchemaError(
            f"{path}: frames must have shape (F, {len(joints)}, 3), got {arr.shape}"
        )
    visibility = None
    if "visibility" in data:
        vis = np.array(data["visibility"])
        if vis.shape != arr.shape[:2]:
            raise SchemaError(
                f"{path}: visibility must have shape {arr.shape[:2]}, got {vis.shape}"
            )
        visibility = vis.astype(bool)
    try:
        return SkeletonSequence(tuple(joints), arr, 1.0 / float(fps), visibility)
    except SchemaError as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def write_truth_json(path, video_label: str, frame_labels=None) -> None:
    payload = {"video_label": video_label}
    if frame_labels is not None:
        payload["frame_labels"] = [int(v) for v in frame_labels]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def read_truth_json(path) -> dict:
    data = _load_json(path)
    label = _require(data, "video_label", str(path))
    if label not in ("intentional", "non-intentional"):
        raise SchemaError(
            f"{path}: video_label must be 'intentional' or 'non-intentional', "
            f"got {label!r}"
        )
    out = {"video_label": label, "frame_labels": None}
    if data.get("frame_labels") is not None:
        labels = data["frame_labels"]
        if not isinstance(labels, list) or any(v not in (-1, 0, 1) for v in labels):
            raise SchemaError(f"{path}: frame_labels must be a list over -1|0|1")
        out["frame_labels"] = [int(v) for v in labels]
    return out


def result_payload(result, decision, dt: float, smoothed=None) -> dict:
    """Assemble the result document for one inferred sequence."""
    payload = {
        "frame_labels": [int(v) for v in result.signal.labels],
        "offset": result.signal.offset,
        "dt": dt,
        "intervals": {
            "efm": result.efm_intervals.to_lists(),
            "unknown": result.unknown_intervals.to_lists(),
        },
        "video": {
            "label": decision.label,
            "score": decision.score,
            "mode": decision.mode,
        },
        "diagnostics": {
            "E": result.profile.total.values.tolist(),
            "E_filtered": result.profile.total_filtered.values.tolist(),
            "dE": result.profile.rate.values.tolist(),
            "a_y": result.a_y.values.tolist(),
            "eps_energy": result.eps_energy,
        },
    }
    if smoothed is not None:
        payload["frame_labels_smoothed"] = [int(v) for v in smoothed.labels]
    return payload


def write_result_json(payload: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_result_json(path) -> dict:
    return _load_json(path)


# ---------------------------------------------------------------------------
# Corpus layout: one data file plus one truth file per sequence, and a
# manifest for bookkeeping. Sequences are discovered by scanning, sorted
# lexicographically, so evaluation order never depends on the manifest.

@dataclass(frozen=True)
class CorpusEntry:
    name: str
    data_path: str
    truth_path: str


def write_corpus(entries, out_dir, skeleton=False, template="mocap21",
                 seed=None, n_per_kind=None) -> dict:
    """Write (name, Scenario, video_label) entries as a corpus directory."""
    from .synth import generate, generate_skeleton

    os.makedirs(out_dir, exist_ok=True)
    manifest = {
        "seed": seed,
        "n_per_kind": n_per_kind,
        "skeleton": bool(skeleton),
        "entries": [],
    }
    for name, scn, label in entries:
        truth_name = f"{name}.truth.json"
        if skeleton:
            data_name = f"{name}.skeleton.json"
            seq, truth = generate_skeleton(scn, template=template)
            write_skeleton_json(seq, os.path.join(out_dir, data_name))
        else:
            data_name = f"{name}.csv"
            traj, truth = generate(scn)
            write_trajectory_csv(traj, os.path.join(out_dir, data_name))
        write_truth_json(
            os.path.join(out_dir, truth_name), label, truth.labels
        )
        manifest["entries"].append(
            {"name": name, "kind": scn.kind, "video_label": label,
             "data": data_name, "truth": truth_name}
        )
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return manifest


def load_corpus(corpus_dir):
    """Discover corpus entries by scanning, in lexicographic order."""
    if not os.path.isdir(corpus_dir):
        raise SchemaError(f"{corpus_dir}: not a directory")
    entries = []
    for fname in sorted(os.listdir(corpus_dir)):
        base = None
        if fname.endswith(".skeleton.json"):
            base = fname[: -len(".skeleton.json")]
        elif fname.endswith(".csv"):
            base = fname[: -len(".csv")]
        if base is None:
            continue
        truth_name = f"{base}.truth.json"
        truth_path = os.path.join(corpus_dir, truth_name)
        if not os.path.exists(truth_path):
            raise SchemaError(f"{corpus_dir}: {fname} has no matching {truth_name}")
        entries.append(
            CorpusEntry(
                name=base,
                data_path=os.path.join(corpus_dir, fname),
                truth_path=truth_path,
            )
        )
    if not entries:
        raise SchemaError(f"{corpus_dir}: no sequences found")
    return entries
