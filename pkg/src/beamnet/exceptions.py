"""Exception and warning types raised by beamnet."""


class BeamnetError(Exception):
    """Base class for all library errors."""


class DomainError(BeamnetError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class NoRoot(BeamnetError, ValueError):
    """A numeric solve has no admissible solution."""


class WrongPattern(BeamnetError, TypeError):
    """An operation was called with a pattern kind it does not support."""


class QuadratureNotConverged(BeamnetError, ArithmeticError):
    """Coarse and fine quadrature rules disagree beyond tolerance."""


class BracketError(BeamnetError, ArithmeticError):
    """An optimum sits on the edge of the search bracket."""


class ConfigError(BeamnetError, ValueError):
    """Invalid simulation or experiment configuration."""


class NonConcaveWarning(UserWarning):
    """The error cdf is not concave, so optimality guarantees do not apply."""
