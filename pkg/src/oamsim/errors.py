"""Exception types shared across the package."""


class OamSimError(Exception):
    """Base class for all package-specific errors."""


class InvalidSpecError(OamSimError, ValueError):
    """A geometry / wave / scenario specification violates its invariants."""


class SingularFieldError(OamSimError):
    """Field requested at (or too close to) a source point."""


class AliasingError(OamSimError):
    """Requested mode range cannot be resolved by the available samples/elements."""


class UndefinedPhaseError(OamSimError):
    """Phase extraction attempted on samples with magnitude below the floor."""


class DegenerateModeError(OamSimError):
    """A co-mode (diagonal) channel entry is zero; crosstalk is undefined."""


class UnsupportedModelError(OamSimError):
    """Operation requires a vectorial radiator model (scalar sources carry no H)."""


class FitNotFoundError(OamSimError):
    """No dipole length in the search range met the error tolerance."""

    def __init__(self, message, best_h=None, best_mse=None):
        super().__init__(message)
        self.best_h = best_h
        self.best_mse = best_mse


class SweepExhaustedError(OamSimError):
    """Element-count sweep hit its cap without meeting the detection criterion."""


class ConfigError(OamSimError, ValueError):
    """Scenario configuration failed to parse or validate.

    Carries optional line/field context for CLI diagnostics.
    """

    def __init__(self, message, line=None, field=None):
        parts = []
        if line is not None:
            parts.append(f"line {line}")
        if field is not None:
            parts.append(f"field '{field}'")
        prefix = ", ".join(parts)
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.line = line
        self.field = field
