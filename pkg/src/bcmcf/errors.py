class InvalidInstance(ValueError):
    """The instance violates a model constraint (self-loop, negative fee, ...)."""


class BasisCorruption(RuntimeError):
    """A basis invariant broke; this always means an implementation bug."""


class InvariantViolation(RuntimeError):
    """A runtime monitor (objective, potential function, pivot cap) failed."""


class OracleRefusal(ValueError):
    """The instance is too large (or malformed) for exhaustive enumeration."""
