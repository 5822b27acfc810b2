"""Exception hierarchy.

``NumericsError`` is the root for every failure that the CLI maps to exit
status 2; usage problems stay ordinary ``ValueError``/click errors (exit 1).
"""


class NumericsError(Exception):
    """Base class for numeric failures (insufficient cutoff, overflow, ...)."""


class CutoffExhaustedError(NumericsError):
    """Tail tolerance unreachable within the policy's max_cutoff."""


class ZeroNormError(NumericsError):
    """A state with (numerically) zero norm cannot be normalized."""


class SingularParameterError(NumericsError):
    """Parameter combination where the closed form is undefined (r=0, n>=1)."""


class NonfiniteTermError(NumericsError):
    """A series term overflowed even in log space."""


class DegenerateNormalizationError(NumericsError):
    """Origin value too small to normalize a field by."""


class InsufficientCutoffError(NumericsError):
    """Imaginary residue / negativity beyond tolerance signals truncation failure."""


class NoCrossingError(NumericsError):
    """A scan found no half-magnitude or threshold crossing in range."""


class GridMismatchError(ValueError):
    """Two fields live on different grids."""
