"""Exception hierarchy shared across the package."""


class LeaklocError(Exception):
    """Base class for all domain errors raised by this package."""


class ModelError(LeaklocError):
    """Invalid network model: bad field values, dangling pipes, disconnected junctions."""


class ParseError(LeaklocError):
    """Malformed INP input. Carries a line number when one is known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedFeatureError(ParseError):
    """Input uses a hydraulic feature this solver does not model (pumps, valves, tanks...)."""


class SolverError(LeaklocError):
    """Hydraulic solve failed. ``residual`` holds the last flow-change norm when available."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class MeasurementError(LeaklocError):
    """A requested sensor reading is not available from the measurement source."""


class ExperimentError(LeaklocError):
    """Experiment configuration or execution error at the harness level."""
