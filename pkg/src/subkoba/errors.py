"""Exception types shared across modules."""


class SubkobaError(Exception):
    """Base class for all library errors."""


class UnsupportedType(SubkobaError):
    pass


class InvalidRealForm(SubkobaError):
    pass


class InvalidGradingElement(SubkobaError):
    pass


class DomainError(SubkobaError, ValueError):
    pass


class NotNegative(SubkobaError):
    """Curvature is not bounded above by a negative constant.

    ``witness`` holds a direction (complex coordinates in the frame) where
    the bound fails.
    """

    def __init__(self, message, witness=None, value=None):
        super().__init__(message)
        self.witness = witness
        self.value = value


class FlowEscape(SubkobaError):
    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


class DegenerateFrame(SubkobaError):
    pass


class NoConnection(SubkobaError):
    pass


class DiscEscape(SubkobaError):
    pass


class InvalidCertificate(SubkobaError):
    pass


class InvalidIdeal(SubkobaError):
    pass


class UnboundedEntry(SubkobaError):
    pass


class FixtureError(SubkobaError):
    """Malformed fixture or config; ``location`` names the offending field."""

    def __init__(self, message, location=None):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location
