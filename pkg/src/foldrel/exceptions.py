class FoldrelError(Exception):
    """Base class for all errors raised by foldrel."""


class InconsistentSystem(FoldrelError):
    """The target dimension is not in the span of the basis."""

    def __init__(self, message, residual_rows=()):
        super().__init__(message)
        self.residual_rows = tuple(residual_rows)


class NonLengthVariable(FoldrelError):
    pass


class SingularRadius(FoldrelError, ValueError):
    pass


class EvanescentMode(FoldrelError):
    pass


class NoConvergence(FoldrelError):
    pass


class BracketFailure(FoldrelError):
    pass


class EigensolverFailure(FoldrelError):
    pass


class UnresolvableWidth(FoldrelError, ValueError):
    pass


class AliasFrequency(FoldrelError, ValueError):
    pass


class SingularPotentialNode(FoldrelError):
    pass


class ZeroNorm(FoldrelError):
    pass


class InsufficientSamples(FoldrelError):
    pass


class WrapAmbiguity(FoldrelError):
    pass
