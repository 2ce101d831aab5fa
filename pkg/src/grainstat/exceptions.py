"""Exception types raised by grainstat."""


class ParameterError(ValueError):
    """An argument lies outside the domain where a result is defined."""


class ValidityDomainError(ParameterError):
    """Noise density too large for the threshold approximation to be trusted."""


class PNMParseError(ValueError):
    """Malformed or unsupported PBM/PGM data."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
