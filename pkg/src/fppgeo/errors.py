"""Exception types shared across the package."""


class FppgeoError(Exception):
    """Base class for all library errors."""


class GraphInvariantError(FppgeoError, ValueError):
    """Adjacency structure violates a graph invariant."""


class SizeCapError(FppgeoError, ValueError):
    """A generator would exceed the configured vertex cap."""


class DomainError(FppgeoError, ValueError):
    """An argument is outside the operation's domain."""


class PreconditionError(FppgeoError, ValueError):
    """A declared operation precondition does not hold."""


class ProvenanceError(FppgeoError, ValueError):
    """Weights and graph do not share a fingerprint."""


class ConfigError(FppgeoError, ValueError):
    """Malformed spec string, config file, or parameter set."""


class DiagnosticError(FppgeoError, RuntimeError):
    """A numeric procedure could not certify its own answer."""


class EndpointCapError(PreconditionError):
    """Deletion radius would remove a segment endpoint."""


class MiddleThirdEmpty(FppgeoError):
    """Signal: the middle third of a segment is empty at this scale.

    Callers treat the recurrence check as vacuously satisfied.
    """
