"""Collapse per-frame labels to a video-level decision and score batches.

Two decision rules are supported. The signed-sum rule suits abstract
agents whose videos are purely one class: the video is intentional when
the frame sum is positive (a tie counts as non-intentional). The threshold
rule suits human agents, where a non-intentional event usually interrupts
otherwise intentional motion: the video is non-intentional when strictly
more than ``min_frames`` frames are labeled -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .concepts import NON_INTENTIONAL, UNKNOWN, IntentSignal
from .errors import LengthMismatch, UnlabeledFrames

INTENTIONAL_LABEL = "intentional"
NON_INTENTIONAL_LABEL = "non-intentional"
VIDEO_LABELS = (INTENTIONAL_LABEL, NON_INTENTIONAL_LABEL)

DEFAULT_FRAME_THRESHOLD = 40


@dataclass(frozen=True)
class VideoDecision:
    """One video-level decision.

    score is the signed frame sum (mode "sum") or the count of
    non-intentional frames (mode "threshold").
    """

    label: str
    score: int
    mode: str


def _check_labeled(signal: IntentSignal, allow_unlabeled: bool) -> None:
    if not allow_unlabeled and signal.count(UNKNOWN) > 0:
        raise UnlabeledFrames(
            f"{signal.count(UNKNOWN)} unknown frames; run the full pipeline with a "
            "non-unknown prior, or pass allow_unlabeled=True"
        )


def decide_sum(
    signals: Sequence[IntentSignal],
    allow_unlabeled: bool = False,
) -> VideoDecision:
    """Signed frame sum over all agents; intentional iff the sum is positive.

    ``allow_unlabeled`` admits signals with unknown frames (they contribute
    zero), which the ablation variants need.
    """
    total = 0
    for signal in signals:
        _check_labeled(signal, allow_unlabeled)
        total += int(signal.labels.sum())
    label = INTENTIONAL_LABEL if total > 0 else NON_INTENTIONAL_LABEL
    return VideoDecision(label=label, score=total, mode="sum")


def decide_threshold(
    signal: IntentSignal,
    min_frames: int = DEFAULT_FRAME_THRESHOLD,
    allow_unlabeled: bool = False,
) -> VideoDecision:
    """Non-intentional iff strictly more than ``min_frames`` frames are -1."""
    if min_frames < 1:
        raise ValueError(f"min_frames must be positive, got {min_frames}")
    _check_labeled(signal, allow_unlabeled)
    count = signal.count(NON_INTENTIONAL)
    label = NON_INTENTIONAL_LABEL if count > min_frames else INTENTIONAL_LABEL
    return VideoDecision(label=label, score=count, mode="threshold")


def threshold_frames_from_seconds(seconds: float, dt: float) -> int:
    """Convert a threshold given in seconds to frames at the sequence rate."""
    if seconds <= 0 or dt <= 0:
        raise ValueError("seconds and dt must be positive")
    return max(1, int(round(seconds / dt)))


@dataclass(frozen=True)
class BatchMetrics:
    """Accuracy and confusion counts for one batch of predictions."""

    n: int
    accuracy: float
    true_intentional: int
    true_non_intentional: int
    false_intentional: int
    false_non_intentional: int

    @property
    def per_class_accuracy(self) -> dict:
        out = {}
        n_int = self.true_intentional + self.false_non_intentional
        n_non = self.true_non_intentional + self.false_intentional
        out[INTENTIONAL_LABEL] = (
            self.true_intentional / n_int if n_int else float("nan")
        )
        out[NON_INTENTIONAL_LABEL] = (
            self.true_non_intentional / n_non if n_non else float("nan")
        )
        return out

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "accuracy": self.accuracy,
            "confusion": {
                "true_intentional": self.true_intentional,
                "true_non_intentional": self.true_non_intentional,
                "false_intentional": self.false_intentional,
                "false_non_intentional": self.false_non_intentional,
            },
            "per_class_accuracy": self.per_class_accuracy,
        }


def score_batch(
    predictions: Sequence[VideoDecision],
    truth: Sequence[str],
) -> BatchMetrics:
    """Accuracy and confusion counts of predictions against true labels."""
    if len(predictions) != len(truth):
        raise LengthMismatch(
            f"{len(predictions)} predictions vs {len(truth)} truth labels"
        )
    for label in truth:
        if label not in VIDEO_LABELS:
            raise ValueError(f"truth label must be one of {VIDEO_LABELS}, got {label!r}")
    ti = tn = fi = fn = 0
    for pred, true in zip(predictions, truth):
        if true == INTENTIONAL_LABEL:
            if pred.label == INTENTIONAL_LABEL:
                ti += 1
            else:
                fn += 1
        else:
            if pred.label == NON_INTENTIONAL_LABEL:
                tn += 1
            else:
                fi += 1
    n = len(truth)
    accuracy = (ti + tn) / n if n else float("nan")
    return BatchMetrics(
        n=n,
        accuracy=accuracy,
        true_intentional=ti,
        true_non_intentional=tn,
        false_intentional=fi,
        false_non_intentional=fn,
    )
