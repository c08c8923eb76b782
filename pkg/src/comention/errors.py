"""Exception hierarchy; each class maps onto one CLI exit code."""


class ComentionError(Exception):
    exit_code = 2


class ConfigError(ComentionError):
    """Invalid or incomplete configuration, detected before any work is done."""

    exit_code = 1


class DataError(ComentionError):
    """Input data violates a contract (malformed files, too few authors, ...)."""

    exit_code = 2


class NumericalError(ComentionError):
    """Eigen-solver failure or a singular rotation transform."""

    exit_code = 3
