"""Exception types shared across the package."""


class PolyCoalgError(Exception):
    """Base class for every error raised by this package."""


class SignatureError(PolyCoalgError, ValueError):
    pass


class ParseError(PolyCoalgError, ValueError):
    """A text file does not follow its grammar."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class AutomatonError(PolyCoalgError, ValueError):
    """An automaton violates one of its structural invariants."""


class SignatureMismatch(PolyCoalgError, ValueError):
    pass


class PreconditionError(PolyCoalgError, ValueError):
    pass


class BoundExceeded(PolyCoalgError, RuntimeError):
    pass


class NonStabilizationError(PolyCoalgError, RuntimeError):
    """Fixpoint iteration did not settle; the operator is not monotone."""
