"""Exception types shared across the package."""


class KinprojError(Exception):
    """Base class for all package errors."""


class NonPhysicalState(KinprojError):
    """Density-like quantity is non-positive where a model must divide by it."""


class DivisionByZeroVelocity(KinprojError):
    """Maxwellian of the form u + F(u)/v requested at v = 0."""


class InvalidSigma(KinprojError):
    """Gauss-Hermite velocity pair requested with sigma <= 0."""


class ShapeMismatch(KinprojError):
    """Array shape does not match the velocity set or grid it is used with."""


class UnsupportedOrder(KinprojError):
    """Spatial scheme order outside the implemented range."""


class NonFiniteError(KinprojError):
    """NaN/inf detected in the solution (explicit stiff integration blew up)."""

    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"non-finite values after outer step {step}")


class UnknownProblem(KinprojError):
    """Benchmark problem name not recognized."""


class WrongModel(KinprojError):
    """Reference solution requested for a model it does not describe."""


class NoConvergence(KinprojError):
    """Iteration failed to reach the requested tolerance."""


class SubcharacteristicViolation(KinprojError):
    """Discrete velocities do not dominate the characteristic speeds."""


class MomentConditionError(KinprojError):
    """Maxwellian moments do not reproduce (u, F(u)) for the chosen velocities."""


class ConfigError(KinprojError):
    """Base class for run-configuration problems (exit code 2)."""


class ParseError(ConfigError):
    """Config text could not be parsed."""


class ValidationError(ConfigError):
    """Config parsed but violates one or more constraints."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid config: " + "; ".join(self.violations))
