"""Exception hierarchy for the toolkit.

Every error raised by the library derives from WrtopoError so callers
(CLI, HTTP service) can map failures to exit codes / status codes.
"""


class WrtopoError(Exception):
    """Base class for all toolkit errors."""

    code = "error"


class DimensionTooLarge(WrtopoError):
    """Requested build exceeds the configured size bound."""

    code = "size-bound"


# --- execution validation -------------------------------------------------

class ExecutionError(WrtopoError):
    code = "execution"


class MissingOperation(ExecutionError):
    pass


class DuplicateOperation(ExecutionError):
    pass


class WriteAfterRead(ExecutionError):
    pass


class ForeignOperation(ExecutionError):
    pass


class NotAParticipant(ExecutionError):
    pass


class TooShort(ExecutionError):
    pass


class IncompleteScript(ExecutionError):
    pass


class UnrealizableProfile(ExecutionError):
    """No write order of the participants is consistent with the views."""


# --- simplicial complexes -------------------------------------------------

class ComplexError(WrtopoError):
    code = "complex"


class NonChromaticSimplex(ComplexError):
    pass


class NotInComplex(ComplexError):
    pass


class NotFree(ComplexError):
    pass


class NotGFree(ComplexError):
    pass


class ComplexNotInvariant(ComplexError):
    pass


class VoidComplex(ComplexError):
    pass


# --- trace replay ---------------------------------------------------------

class TraceError(WrtopoError):
    code = "trace"


class StepNotFree(TraceError):
    pass


class WrongResidual(TraceError):
    pass


class OrbitOverlap(TraceError):
    pass


# --- protocol complexes ---------------------------------------------------

class ProtocolError(WrtopoError):
    code = "protocol"


class NotAProtocolSimplex(ProtocolError):
    pass


class AlreadyInNextLevel(ProtocolError):
    pass
