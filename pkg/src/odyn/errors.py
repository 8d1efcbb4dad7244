"""Exception types shared across the engine.

Every anticipated failure raises a named subclass of OdynError so callers
(and the CLI) can map error classes to exit codes without string matching.
"""


class OdynError(Exception):
    """Base class for all engine errors."""


class EmptyGraph(OdynError):
    """Operation needs at least one usable node or edge."""


class InvalidProbability(OdynError):
    """A probability parameter fell outside [0, 1]."""


class NotStronglyConnected(OdynError):
    """Predicate or solver requires a strongly connected graph."""


class NotRowStochastic(OdynError):
    """Weights must sum to one along every row."""


class ZeroDegree(OdynError):
    """A node with zero weighted degree reached a normalized quantity."""


class OutOfRangeSimilarity(OdynError):
    """Similarity values must lie in [0, 1]."""


class KernelNotNormalized(OdynError):
    """Hypergraph kernel rows must sum to one."""


class StepLimitExceeded(OdynError):
    """Integrator ran out of its step budget."""


class NonFiniteState(OdynError):
    """State left the representable range (blow-up)."""

    def __init__(self, message, last_time=None):
        super().__init__(message)
        self.last_time = last_time


class InsufficientData(OdynError):
    """Not enough samples for a meaningful fit."""


class PreconditionFailed(OdynError):
    """A structural precondition does not hold; message names the check."""


class NoConvergence(OdynError):
    """Iterative solver hit its iteration cap before the tolerance."""


class TooLarge(OdynError):
    """Problem size exceeds the dense-path limit."""


class NotSPD(OdynError):
    """Operator is not symmetric positive semidefinite."""


class EmptyMask(OdynError):
    """A required index mask is empty."""


class CsvFormatError(OdynError):
    """Malformed CSV input; carries the offending line number."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line
