"""Exception types shared across the package."""


class SepCycleError(Exception):
    pass


class DegenerateInput(SepCycleError, ValueError):
    pass


class DegenerateGeometry(SepCycleError):
    pass


class NotAGraph(SepCycleError, ValueError):
    pass


class Infeasible(SepCycleError):
    """No separating cycle exists. ``witness`` is an odd cycle (vertex list) when known."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InfeasibleColoring(SepCycleError, ValueError):
    pass


class TooLarge(SepCycleError, ValueError):
    pass


class NoCandidate(SepCycleError):
    pass


class ParseError(SepCycleError, ValueError):
    pass


class ValidationError(SepCycleError, ValueError):
    pass
