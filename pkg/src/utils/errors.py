"""Custom exceptions for the NV holonomy simulator."""


class NVHoloError(Exception):
    """Base exception for all simulator errors."""
    pass


class ValidationError(NVHoloError):
    """Raised when an input fails a precondition (bad shape, bad range, etc.)."""
    pass


class ConfigurationError(NVHoloError):
    """Raised when a scenario file or setting is malformed or missing."""
    pass


class NonHermitianError(ValidationError):
    """Raised when a generator is not Hermitian within tolerance."""
    pass


class NonUnitaryError(ValidationError):
    """Raised when an operator expected to be unitary is not."""
    pass


class DimensionMismatchError(ValidationError):
    """Raised when a state and a model disagree on dimension."""
    pass


class DegenerateStateError(NVHoloError):
    """Raised when a dark or bright state is undefined (vanishing normalization)."""
    pass


class PathClosureError(NVHoloError):
    """Raised when a Bloch-sphere path does not return to the pole."""
    pass


class FrameDiscontinuityError(NVHoloError):
    """Raised when adjacent dark frames overlap poorly (undersampled grid)."""
    pass


class SelectionRuleError(ConfigurationError):
    """Raised when a dipole table breaks the allowed-coupling pattern."""
    pass


class PhysicsCheckError(NVHoloError):
    """Raised when a run completes but a physical acceptance check fails."""
    pass
