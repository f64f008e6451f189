"""Exception types raised across the package."""


class OJSError(ValueError):
    """Base class for all errors raised by this package."""


class AntennaRegimeViolation(OJSError):
    pass


class DefensibleDimensionViolation(OJSError):
    pass


class RankDeficient(OJSError):
    pass


class DimensionMismatch(OJSError):
    pass


class FullSpace(OJSError):
    pass


class NotHermitian(OJSError):
    pass


class KTooLarge(OJSError):
    pass


class NonpositiveDelta(OJSError):
    pass


class DegenerateWindow(OJSError):
    pass


class SingularJammingGram(OJSError):
    pass


class EmptySamples(OJSError):
    pass


class PoolTooLarge(OJSError):
    pass


class ConfigError(OJSError):
    pass
