"""Exception hierarchy shared by all moran modules."""


class MoranError(Exception):
    """Base class for every error raised by this package."""


class ParseError(MoranError):
    """Malformed system document, candidate file, or digit file."""


class HorizonError(MoranError):
    """A level index beyond the reach of a finite-prefix system."""


class NotSpectralError(MoranError):
    """The divisibility condition N_j | b_j fails at some level j >= 2."""

    def __init__(self, level: int):
        super().__init__(f"N_{level} does not divide b_{level}")
        self.level = level


class BudgetError(MoranError):
    """A configurable resource bound (vertex budget, period bound) was hit."""


class PrecisionError(MoranError):
    """Requested tolerance lies below the floating-point rounding floor."""


class InvariantError(MoranError):
    """A certified internal invariant was violated; indicates a bug."""
