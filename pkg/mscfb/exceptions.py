"""Error types raised across mscfb.

Each concrete error sits under one of three categories so the CLI can turn it into an exit
code, and each category also derives from the matching built-in so plain ``except ValueError``
callers keep working.
"""


class MsCfbError(Exception):
    """Base for every error raised by this package"""


class DataError(MsCfbError, ValueError):
    """Input data or file contents are unusable"""


class ConfigurationError(MsCfbError, ValueError):
    """A parameter or protocol choice is invalid"""


class NumericalError(MsCfbError, ArithmeticError):
    """A numerical precondition failed or a solve broke down"""


# data / format
class BadMagicError(DataError):
    pass


class UnsupportedMaxvalError(DataError):
    pass


class TruncatedDataError(DataError):
    pass


class MalformedHeaderError(DataError):
    pass


class DimensionMismatchError(DataError):
    pass


class NonDivisibleGeometryError(DataError):
    pass


class InvalidGeometryError(DataError):
    pass


class SpecMismatchError(DataError):
    pass


class UnknownClassError(DataError, KeyError):
    def __str__(self) -> str:
        # KeyError would otherwise repr() the message
        return str(self.args[0]) if self.args else ""


class EmptyClassError(DataError):
    pass


class NoImpostorsError(DataError):
    pass


class EmptyGalleryError(DataError):
    pass


class MalformedRowError(DataError):
    pass


class DuplicatePathError(DataError):
    pass


class InsufficientSamplesError(DataError):
    def __init__(self, subject: str, available: int, t: int):
        super().__init__(
            f"Subject '{subject}' has {available} image(s); more than t={t} are required"
        )
        self.subject = subject


class ModelFormatError(DataError):
    pass


class ReservedColumnError(DataError):
    pass


# configuration
class AlphaOutOfRangeError(ConfigurationError):
    pass


class NonPositiveAlphaError(ConfigurationError):
    pass


class NegativeBetaError(ConfigurationError):
    pass


class UnseenSubjectsRequireNNError(ConfigurationError):
    pass


# numerical
class NotSymmetricError(NumericalError):
    pass


class NotPositiveDefiniteError(NumericalError):
    pass


class SolverFailureError(NumericalError):
    pass


class ZeroVectorError(NumericalError):
    pass


# io
class IoFailureError(MsCfbError, OSError):
    pass
