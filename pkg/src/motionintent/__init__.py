"""Unsupervised intentionality labeling of 3D center-of-mass motion.

The pipeline classifies each frame of a trajectory as intentional (+1),
non-intentional (-1), or unknown (0) from four physics-grounded rules:
energy gain implies self-propelled motion, constant downward acceleration
with no energy gain implies motion under gravity, gravity phases launched
by an energy gain inherit intentionality, and unclassified frames inherit
the label that precedes them.
"""

from .aggregate import (
    BatchMetrics,
    VideoDecision,
    decide_sum,
    decide_threshold,
    score_batch,
)
from .concepts import (
    INTENTIONAL,
    NON_INTENTIONAL,
    UNKNOWN,
    ConceptConfig,
    IntentSignal,
    IntervalSet,
    PipelineResult,
    carry_intentionality,
    detect_efm,
    extract_intervals,
    infer,
    mark_energy_gain,
    merge_labels,
    relabel_caused_efm,
    resolve_energy_threshold,
    run_pipeline,
    smooth_labels,
)
from .config import RunConfig
from .energy import (
    EnergyProfile,
    energy_rate,
    kinetic_energy,
    potential_energy,
    robust_energy_threshold,
)
from .errors import (
    DegenerateFrame,
    InvalidScenario,
    LengthMismatch,
    MotionIntentError,
    OverlapViolation,
    SchemaError,
    SeriesTooShort,
    UnknownJoint,
    UnlabeledFrames,
)
from .kinematics import (
    ScalarSeries,
    Trajectory,
    finite_difference,
    median_filter,
    vertical_acceleration,
)
from .skeleton import (
    SkeletonSequence,
    WeightTable,
    center_of_mass,
    occlude,
    occlude_batch,
)
from .synth import Scenario, benchmark_suite, build_benchmark, generate, generate_skeleton

__version__ = "0.1.0"

__all__ = [
    "BatchMetrics",
    "ConceptConfig",
    "DegenerateFrame",
    "EnergyProfile",
    "INTENTIONAL",
    "IntentSignal",
    "IntervalSet",
    "InvalidScenario",
    "LengthMismatch",
    "MotionIntentError",
    "NON_INTENTIONAL",
    "OverlapViolation",
    "PipelineResult",
    "RunConfig",
    "ScalarSeries",
    "Scenario",
    "SchemaError",
    "SeriesTooShort",
    "SkeletonSequence",
    "Trajectory",
    "UNKNOWN",
    "UnknownJoint",
    "UnlabeledFrames",
    "VideoDecision",
    "WeightTable",
    "benchmark_suite",
    "build_benchmark",
    "carry_intentionality",
    "center_of_mass",
    "decide_sum",
    "decide_threshold",
    "detect_efm",
    "energy_rate",
    "extract_intervals",
    "finite_difference",
    "generate",
    "generate_skeleton",
    "infer",
    "kinetic_energy",
    "mark_energy_gain",
    "median_filter",
    "merge_labels",
    "occlude",
    "occlude_batch",
    "potential_energy",
    "relabel_caused_efm",
    "resolve_energy_threshold",
    "robust_energy_threshold",
    "run_pipeline",
    "score_batch",
    "smooth_labels",
    "vertical_acceleration",
]
