"""Exception types shared across the package."""


class ZerocertError(Exception):
    """Base class for all package errors."""


class InputShapeError(ZerocertError, ValueError):
    """A vector or matrix argument has the wrong shape."""


class InvalidConfigurationError(ZerocertError, ValueError):
    """A construction or run parameter is out of its valid range."""


class InvalidMethodError(ZerocertError, ValueError):
    """A certificate method was requested on a problem that does not support it."""


class InvalidParameterError(ZerocertError, ValueError):
    """A transform parameter is outside the family's admissible set."""


class SingularRatioError(ZerocertError, ZeroDivisionError):
    """A condition ratio was evaluated where its denominator vanishes."""


class ConfigError(ZerocertError, ValueError):
    """A run configuration file failed to parse or validate.

    The message names the offending key with a dotted path, e.g. ``ball.radius``.
    """
