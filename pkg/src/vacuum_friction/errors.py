"""Exception hierarchy shared by the numerical modules and the CLI."""


class VacuumFrictionError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(VacuumFrictionError):
    """Invalid user input; the CLI maps it to exit code 2."""


class DomainError(ConfigError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class FormatError(ConfigError):
    """Malformed permittivity table."""


class ValidationError(ConfigError):
    """Well-formed input that violates a physical invariant."""


class NumericalError(VacuumFrictionError):
    """Numerical failure; the CLI maps it to exit code 3."""


class SingularityError(NumericalError, ZeroDivisionError):
    """Evaluation exactly at a pole of a response function."""


class RangeError(NumericalError, ValueError):
    """Query outside the range where a model is defined."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not reach its tolerance.

    ``partial`` holds the best estimate available when the budget ran out.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BracketError(NumericalError):
    """No sign change found while bracketing a root."""


class NoEquilibriumError(NumericalError):
    """The particle does not absorb, so no thermal balance exists."""


class MonotonicityError(NumericalError):
    """Sampled absorbed power is not monotone in the particle temperature."""


class RegimeError(NumericalError):
    """A probe that assumes the linear-torque regime found it violated."""


class IntegrationError(NumericalError):
    """The spin-down ODE integrator failed.

    ``partial`` holds the trajectory integrated up to the failure.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
