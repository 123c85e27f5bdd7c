"""Exception types shared across the package."""


class MotionIntentError(Exception):
    """Base class for all package-specific errors."""


class SeriesTooShort(MotionIntentError):
    """A time series is too short for the requested operation."""


class OverlapViolation(MotionIntentError):
    """Energy-gain and external-force labels overlap at the same frame.

    The gravity test only fires where the energy-gain label is zero, so an
    overlap indicates a bug in the detector rather than bad input.
    """


class UnlabeledFrames(MotionIntentError):
    """A video-level decision was requested on a signal with unknown frames."""


class LengthMismatch(MotionIntentError):
    """Paired sequences (predictions and truth) differ in length."""


class DegenerateFrame(MotionIntentError):
    """A skeleton frame has a body part with no visible joints."""

    def __init__(self, frame_index: int, part: str = ""):
        self.frame_index = frame_index
        self.part = part
        detail = f" (part '{part}')" if part else ""
        super().__init__(f"frame {frame_index} has no visible joints{detail}")


class UnknownJoint(MotionIntentError):
    """A sequence names a joint that the weight table does not map."""


class InvalidScenario(MotionIntentError):
    """A synthetic scenario specification is invalid."""


class SchemaError(MotionIntentError):
    """An input file does not conform to its documented format."""
