"""Exception hierarchy shared by every module of the package."""


class CnoidalError(Exception):
    """Base class for all errors raised by :mod:`cnoidal`."""


class DomainError(CnoidalError, ValueError):
    """An input lies outside the region where a formula is defined."""


class NumericalError(CnoidalError, ArithmeticError):
    """A closed form would divide by a (numerically) vanishing quantity."""


class StencilError(CnoidalError, ValueError):
    """Invalid finite-difference step."""


class ConstraintError(CnoidalError, ValueError):
    """A solution family's inequality precondition does not hold."""


class DegenerateError(CnoidalError, ValueError):
    """A check is undefined for the given (degenerate) solution."""


class StabilityError(CnoidalError, RuntimeError):
    """Numerical blow-up detected during time integration."""


class ConfigError(CnoidalError, ValueError):
    """Malformed solver or command-line configuration."""
