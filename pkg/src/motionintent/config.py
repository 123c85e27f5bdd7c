"""Run configuration: defaults, config-file loading, flag overrides.

Precedence is defaults < config file < command-line flags. Config files
are JSON objects whose keys are the RunConfig field names.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Optional

from .concepts import PRIORS, VARIANTS, ConceptConfig
from .errors import SchemaError

AGGREGATION_MODES = ("sum", "threshold")
OCCLUSION_FLAGS = ("none", "all", "agent", "frame")

#: CLI occlusion flag -> skeleton module mode name.
OCCLUSION_MODE_OF_FLAG = {
    "all": "all_samples",
    "agent": "per_agent",
    "frame": "per_frame",
}


@dataclass
class RunConfig:
    """Every knob of the pipeline and the CLI, with documented defaults."""

    variant: str = "full"
    prior: str = "intentional"
    g: float = 9.81
    median_window: int = 30
    eps_energy: Optional[float] = None
    eps_energy_floor: float = 1e-3
    eps_energy_mad_factor: float = 3.0
    eps_accel: float = 0.5
    c_min: float = 0.05
    c_max: float = 1.5
    constancy_window: int = 5
    lookback: int = 5
    efm_min_len: int = 3
    agg: str = "threshold"
    agg_threshold: int = 40
    agg_threshold_seconds: Optional[float] = None
    weights: Optional[str] = None
    occlude: str = "none"
    seed: int = 0
    smooth_labels: int = 0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise SchemaError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.prior not in PRIORS:
            raise SchemaError(f"prior must be one of {PRIORS}, got {self.prior!r}")
        if self.agg not in AGGREGATION_MODES:
            raise SchemaError(
                f"agg must be one of {AGGREGATION_MODES}, got {self.agg!r}"
            )
        if self.occlude not in OCCLUSION_FLAGS:
            raise SchemaError(
                f"occlude must be one of {OCCLUSION_FLAGS}, got {self.occlude!r}"
            )
        if self.median_window < 1:
            raise SchemaError("median_window must be >= 1")
        if self.agg_threshold < 1:
            raise SchemaError("agg_threshold must be >= 1")
        if self.smooth_labels < 0:
            raise SchemaError("smooth_labels must be >= 0")

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise SchemaError(f"{path}: config must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise SchemaError(f"{path}: unknown config keys {sorted(unknown)}")
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"{path}: {exc}") from exc

    def with_overrides(self, **kwargs) -> "RunConfig":
        """A copy with every non-None keyword replacing the current value."""
        updates = {k: v for k, v in kwargs.items() if v is not None}
        return dataclasses.replace(self, **updates)

    def concept_config(self) -> ConceptConfig:
        try:
            return ConceptConfig(
                eps_energy=self.eps_energy,
                eps_energy_floor=self.eps_energy_floor,
                eps_energy_mad_factor=self.eps_energy_mad_factor,
                eps_accel=self.eps_accel,
                c_min=self.c_min,
                c_max=self.c_max,
                constancy_window=self.constancy_window,
                lookback=self.lookback,
                efm_min_len=self.efm_min_len,
                prior=self.prior,
                variant=self.variant,
            )
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc

    def threshold_frames(self, dt: float) -> int:
        """The frame threshold, honoring agg_threshold_seconds when set."""
        if self.agg_threshold_seconds is not None:
            from .aggregate import threshold_frames_from_seconds

            return threshold_frames_from_seconds(self.agg_threshold_seconds, dt)
        return self.agg_threshold

    def allow_unlabeled(self) -> bool:
        """Whether video decisions must tolerate unknown frames."""
        return self.variant in ("c1", "c12", "c123") or self.prior == "unknown"
