"""Exception types shared across the package."""


class TwoRuinError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(TwoRuinError):
    """Invalid experiment configuration.

    Carries the field path (dotted) and, when known, the line in the
    config file, so the CLI can print a precise diagnostic.
    """

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        parts = []
        if line is not None:
            parts.append(f"line {line}")
        if field:
            parts.append(field)
        prefix = ": ".join(parts)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class NumericalError(TwoRuinError):
    """A quadrature or closed-form evaluation failed its accuracy contract."""


class UnsupportedMethodError(TwoRuinError):
    """An exact method was requested for a model it does not cover."""


class ClassificationError(TwoRuinError):
    """Claim law falls in neither heavy-tailed limit-law basin."""


class TooRareError(TwoRuinError):
    """Conditional sampling aborted because ruin is too rare at this scale."""


class ResourceCapError(TwoRuinError):
    """Simulation exceeded an event budget; carries completed work so far."""

    def __init__(self, message, completed_paths=0, total_events=0):
        self.completed_paths = completed_paths
        self.total_events = total_events
        super().__init__(message)
