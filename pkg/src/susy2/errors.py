"""Exception types shared across the package."""


class Susy2Error(Exception):
    """Base class for all package errors."""


class PoleError(Susy2Error):
    """Argument too close to a pole of the function being evaluated."""


class ConvergenceError(Susy2Error):
    """Series did not converge within the term budget."""


class DegenerateEnergy(Susy2Error):
    """Factorization energy has zero imaginary part."""


class SingularTransform(Susy2Error):
    """The normalized Wronskian has a node; no regular partner exists.

    Carries the grid location of the offending point in ``x`` when known.
    """

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class GridMismatch(Susy2Error):
    """Operands sampled on different grids."""


class DegenerateDenominator(Susy2Error):
    """Im(beta1) vanished somewhere, breaking the finite-difference formula."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class BlowUpError(Susy2Error):
    """Numerical integration overflowed."""


class NodeError(Susy2Error):
    """A seed solution has (or numerically has) a node."""


class ZeroState(Susy2Error):
    """First-order intertwiner annihilated the state."""


class BracketError(Susy2Error):
    """Energy bracket contains fewer bound states than requested."""


class SeedResidualError(Susy2Error):
    """Constructed seed fails its Schrodinger-equation residual bound."""


class ConditioningWarning(UserWarning):
    """Transformation parameters give a poorly conditioned Wronskian."""
