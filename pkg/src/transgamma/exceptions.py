"""Exception types raised by the evaluators and generators."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of the operation."""


class ValidityError(ValueError):
    """Argument inside the domain but outside the range where the expansion is usable."""


class DegenerateExpansionError(ValueError):
    """Outer expansion requested where its terms never decrease."""


class FrontierError(IndexError):
    """Series-table entry requested beyond the generated frontier."""


class ConvergenceError(RuntimeError):
    """Reference algorithm failed to converge within its iteration cap."""
