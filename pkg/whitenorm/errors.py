"""

    Exceptions raised by whitenorm.

    Everything derives from WhitenormError so a caller can catch the whole family.
    Errors about bad values also derive from ValueError.
    Messages read "<module>.<function>: <problem>".

"""


class WhitenormError(Exception):
    """Base class for every error raised on purpose by this package."""


class SymmetryError(WhitenormError, ValueError):
    pass


class ConvergenceError(WhitenormError):
    def __init__(self, message, residual=None, sweeps=None):
        super().__init__(message)
        self.residual = residual
        self.sweeps = sweeps


class NotPositiveDefiniteError(WhitenormError, ValueError):
    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class DegenerateSpectrumError(WhitenormError):
    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap


class InsufficientBatchError(WhitenormError, ValueError):
    pass


class InvalidInputError(WhitenormError, ValueError):
    pass


class ShapeError(WhitenormError, ValueError):
    pass


class InvalidGroupError(WhitenormError, ValueError):
    pass


class StaleCacheError(WhitenormError):
    pass


class LabelError(WhitenormError, ValueError):
    pass


class InvalidCovarianceError(WhitenormError, ValueError):
    pass


class InvalidDatasetError(WhitenormError, ValueError):
    pass


class IdxFormatError(WhitenormError, ValueError):
    pass


class EmptyEpochError(WhitenormError, ValueError):
    pass


class DivergedError(WhitenormError):
    def __init__(self, message, loss=None, iteration=None):
        super().__init__(message)
        self.loss = loss
        self.iteration = iteration


class FisherCapError(WhitenormError, ValueError):
    pass


class AxisSwapConstructionError(WhitenormError, AssertionError):
    pass


class ConfigError(WhitenormError, ValueError):
    def __init__(self, message, problems=None):
        super().__init__(message)
        self.problems = list(problems) if problems else []
