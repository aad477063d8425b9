"""Exception hierarchy for the intermittent package."""


class IntermittentError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(IntermittentError, ValueError):
    """Matrix or vector shapes are inconsistent."""


class DomainError(IntermittentError, ValueError):
    """An input lies outside the domain of an operation (NaN, Inf, bad parameter)."""


class NumericalError(IntermittentError, ArithmeticError):
    """A numerical routine failed to meet its accuracy contract.

    ``residual`` holds the achieved residual when one is available.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ModelError(IntermittentError, ValueError):
    """A state-space model or scenario violates its structural invariants."""


class DesignError(IntermittentError):
    """Controller or observer design is infeasible."""


class SearchError(IntermittentError):
    """The critical-interval search could not bracket a unit-circle crossing."""


class AmplitudeError(IntermittentError):
    """The event functional does not see the critical mode (e0 == 0)."""


class ConditioningError(IntermittentError):
    """An eigenvector basis is too ill-conditioned to invert."""


class MeasurementError(IntermittentError):
    """A simulation trace does not contain enough events to measure a cycle."""


class DivergenceError(IntermittentError):
    """A simulation left the bounded region.

    Attributes
    ----------
    time : float
        Simulation time at which the divergence guard fired.
    trace : SimulationTrace or None
        The trace recorded up to (and including) the offending sample.
    """

    def __init__(self, message, time, trace=None):
        super().__init__(message)
        self.time = time
        self.trace = trace


class ScenarioError(IntermittentError, ValueError):
    """A scenario or model file failed to parse or validate."""
