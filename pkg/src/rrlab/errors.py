"""Exception hierarchy shared across the workbench.

Two top-level branches matter to callers: `ValidationError` covers bad
inputs and broken structural preconditions (CLI exit code 2), while
`ContractViolation` covers user-supplied callables breaking their
mathematical contracts (CLI exit code 3).
"""


class RrlabError(Exception):
    """Base class for all workbench errors."""


class ValidationError(RrlabError):
    """Input data or a structural precondition is invalid."""


class DimensionError(ValidationError):
    """Points of differing dimension mixed in one structure."""


class EmptyDomainError(ValidationError):
    """An operation that needs a nonempty domain received an empty one."""


class DomainError(ValidationError):
    """A point or sub-domain is not contained where it must be."""


class CommitteeError(ValidationError):
    """Malformed committee: empty, wrong arity, or member not adjacent."""


class CapExceededError(ValidationError):
    """Exhaustive committee enumeration would exceed the tuple budget."""


class NotCappedError(ValidationError):
    """Domain's top layer does not coincide with the cube's top layer."""


class LogBoundError(ValidationError):
    """Diagonal displacements of the base family violate the log bound."""


class SolverInputError(ValidationError):
    """Solver refused its input (size cap, missing regularity flag, ...)."""


class ContractViolation(RrlabError):
    """A selection rule returned a value outside its committee's labels."""


class RhoViolation(ContractViolation):
    """A base-value family returned a value below the point's minimum."""
