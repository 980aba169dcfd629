"""Exception types shared across the package."""


class PinchlinkError(Exception):
    """Base class for all package errors."""


class ValidationError(PinchlinkError):
    """Input data violates a structural invariant."""


class DegenerateFillingError(ValidationError):
    """Dehn filling along slope (+-1, 0); the result has an S^1 x S^2
    summand and leaves the tree-plumbing class."""


class ReducibleGermError(PinchlinkError):
    """An operation whose hypotheses require an irreducible germ was
    given a disconnected exterior."""


class InternalInvariantError(PinchlinkError):
    """A cross-checked internal invariant failed; indicates a bug."""
