class AlgebraError(ValueError):
    """Base class for failures of the exact symbolic layer."""


class CyclicSubstitutionError(AlgebraError):
    pass


class CurvatureIndexError(AlgebraError):
    pass


class UnreducedTensorError(AlgebraError):
    """Raised when a curvature contraction leaves a free tensor behind."""


class RestrictionError(AlgebraError):
    pass


class PiPlusUndefinedError(AlgebraError):
    pass


class IntegrationError(AlgebraError):
    pass


class DenominatorError(AlgebraError):
    """Raised when two rational functions cannot share a denominator."""


class TextFormatError(AlgebraError):
    pass
