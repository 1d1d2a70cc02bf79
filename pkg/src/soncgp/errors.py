"""Exception hierarchy.

The CLI maps these onto exit codes: parse errors exit 2, violations of the
simplex assumptions exit 3, solver failures exit 4.
"""


class SoncError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SoncError, ValueError):
    """Malformed polynomial text. ``position`` is the 0-based offset."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class AssumptionError(SoncError, ValueError):
    """The polynomial does not satisfy the simplex Newton polytope assumptions."""


class NotASimplex(AssumptionError):
    pass


class OddVertex(AssumptionError):
    pass


class NonpositiveVertexCoefficient(AssumptionError):
    pass


class PointOutsideSimplex(AssumptionError):
    pass


class NotSupported(AssumptionError):
    pass


class ComplexityLimit(AssumptionError):
    pass


class StructureMismatch(SoncError, ValueError):
    """Coefficient map keyed by the wrong (exponent, vertex) index set."""


class NonpositiveMu(SoncError, ValueError):
    pass


class SolverError(SoncError):
    """The geometric program could not be solved to optimality."""


class InfeasibleSolution(SolverError):
    """A GP point fails the nonnegativity conditions it is supposed to certify."""


class InnerInfeasible(SolverError):
    pass
