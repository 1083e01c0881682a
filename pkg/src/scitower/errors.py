"""Exception types shared across the package."""


class SciTowerError(Exception):
    """Base class for all errors raised by scitower."""


class EmptySet(SciTowerError, ValueError):
    """A metric operation received a set with no points."""


class DomainViolation(SciTowerError, ValueError):
    """A point or map value left the domain [0, 1)."""


class NyquistViolation(SciTowerError, ValueError):
    """The dictionary is too large for the requested quadrature level."""


class ResourceLimit(SciTowerError):
    """A request exceeded a fixed resource guard."""


class BranchExplosion(ResourceLimit):
    """Nondeterministic path exploration exceeded its path budget."""


class FactorizationImpossible(SciTowerError):
    """Two inputs share an evaluation row but have distinct solutions.

    ``witness`` holds the offending index pair ``(a, b)``.
    """

    def __init__(self, witness, message=None):
        self.witness = tuple(witness)
        super().__init__(message or f"inputs {self.witness[0]} and {self.witness[1]} "
                                    "have equal evaluations but different solutions")


class NotFactorable(FactorizationImpossible):
    """The chosen query columns do not determine the solution map."""
