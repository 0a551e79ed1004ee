"""Exception hierarchy shared by every planarflow module."""


class PlanarFlowError(Exception):
    """Base class for all errors raised by planarflow."""


class MalformedRotation(PlanarFlowError):
    """A rotation list is missing a dart, repeats one, or lists a foreign dart."""


class EulerViolation(PlanarFlowError):
    """Face tracing gives V - E + F != 2 on some planar component."""


class NegativeLength(PlanarFlowError):
    pass


class ConservationViolation(PlanarFlowError):
    pass


class InfeasibleInput(PlanarFlowError):
    """An operation that requires a feasible flow received an infeasible one."""


class NegativeScalar(PlanarFlowError):
    pass


class UnboundedFlow(PlanarFlowError):
    """A source reaches a sink along darts of infinite capacity."""


class Infeasible(PlanarFlowError):
    """A flow of the requested value (or with the requested supplies) does not exist."""


class ExtensionFailure(PlanarFlowError):
    """The demand network of a vertex cycle could not be saturated."""


class NonIntegralValue(PlanarFlowError):
    pass


class NoCycle(PlanarFlowError):
    """Internal: the fractional residual graph has arcs but no cycle."""


class NotAcyclic(PlanarFlowError):
    pass


class PathNotFound(PlanarFlowError):
    pass


class StageFailure(PlanarFlowError):
    """Stage 1 of an improvement phase could not remove an excess.

    The scaling solver reads this as "the guessed value is too large".
    """


class DegenerateDerivative(PlanarFlowError):
    pass


class FixupShortfall(PlanarFlowError):
    pass


class WrongTerminalCount(PlanarFlowError):
    pass


class NoSaddle(PlanarFlowError):
    pass


class InvariantViolation(PlanarFlowError):
    """A runtime-checked invariant failed. Always a bug signal."""


class ValidationError(PlanarFlowError):
    pass


class ParamError(PlanarFlowError):
    pass


class ParseError(PlanarFlowError):
    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
