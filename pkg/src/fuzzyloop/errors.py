"""Exception types shared across the package."""


class FuzzyloopError(Exception):
    """Base class for all package-specific errors."""


class PiPowerMismatchError(FuzzyloopError):
    """Addition or comparison of symbolic scalars with different pi powers."""


class DegreeOverflowError(FuzzyloopError):
    """Polynomial degree exceeds the configured harmonic truncation."""


class SpanOverflowError(FuzzyloopError):
    """Fourier span of a loop operation exceeds the configured cap."""


class KindMismatchError(FuzzyloopError):
    """Loop or cocycle kinds are incompatible."""


class LevelMismatchError(FuzzyloopError):
    """Operators or loops live at different quantization levels."""


class TwistViolationError(FuzzyloopError):
    """A loop violates the antipodal twist constraint."""


class RealityViolationError(FuzzyloopError):
    """A loop violates the reality constraint."""


class NotNormalizableError(FuzzyloopError):
    """Operator is neither Gram-Hermitian nor i times Gram-Hermitian."""


class CacheIntegrityError(FuzzyloopError):
    """A cache file on disk failed its checksum."""


class ConfigError(FuzzyloopError):
    """Invalid run configuration."""
