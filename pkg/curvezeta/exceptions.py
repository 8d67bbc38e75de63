class CurveZetaError(ValueError):
    """Base error. `exit_code` is what the command line returns when it surfaces."""

    exit_code: int = 1


class InputError(CurveZetaError):
    exit_code = 1


class SemigroupError(InputError):
    pass


class RingError(InputError):
    pass


class OracleError(InputError):
    pass


class PrecisionError(CurveZetaError):
    """The working truncation cannot certify the requested value."""

    exit_code = 3


class DivisibilityError(CurveZetaError):
    exit_code = 1
