"""Exception hierarchy shared by every pcakit module."""


class PcaError(Exception):
    """Base class for all pcakit errors."""


class ShapeError(PcaError, ValueError):
    pass


class NonFiniteError(PcaError, ValueError):
    pass


class SymmetryError(PcaError, ValueError):
    pass


class RangeError(PcaError, ValueError):
    """A component count or index lies outside its admissible range."""


class InsufficientSamplesError(PcaError, ValueError):
    pass


class ArgumentError(PcaError, ValueError):
    pass


class ParseError(PcaError, ValueError):
    """Malformed CSV input. ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class FormatError(PcaError, ValueError):
    """Malformed PGM input."""


class ConvergenceError(PcaError, ArithmeticError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class UndefinedRatioError(PcaError, ArithmeticError):
    pass


class VerticalLineError(PcaError, ArithmeticError):
    pass
