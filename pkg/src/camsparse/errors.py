"""Exception types shared across the package."""


class CamSparseError(Exception):
    """Base class for all camsparse errors."""


class ValidationError(CamSparseError):
    """A structure violates its invariants or an argument is out of range."""


class DimensionError(CamSparseError):
    """Operand shapes are incompatible (including an index width too small
    for the vector length)."""


class MatrixMarketError(CamSparseError):
    """Malformed Matrix Market input.  Carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CamCapacityError(CamSparseError):
    """More entries than the array height; the caller must tile the load."""


class CamCorruptionError(CamSparseError):
    """More than one CAM row matched a key: the stored-index uniqueness
    invariant no longer holds."""


class ConfigError(CamSparseError):
    """Bad configuration value or malformed key=value config file."""


class OracleMismatchError(CamSparseError):
    """Simulated result disagrees with the brute-force oracle."""
