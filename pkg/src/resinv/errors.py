"""Exception hierarchy.

Everything raised on purpose by this package derives from ``ResinvError``.
Selection-type failures share the ``SelectionFailed`` base so callers (and
the CLI exit-code mapping) can treat them uniformly.
"""


class ResinvError(Exception):
    pass


class DimensionMismatch(ResinvError, ValueError):
    pass


class DependentColumns(ResinvError, ValueError):
    pass


class SelectionFailed(ResinvError):
    pass


class CertificationFailed(SelectionFailed):
    pass


class SearchFailed(SelectionFailed):
    pass


class RefinementFailed(SelectionFailed):
    pass


class TooLarge(ResinvError, ValueError):
    pass


class OutOfDomain(ResinvError, ValueError):
    pass


class RefinementLimit(ResinvError):
    pass


class NotAProjection(ResinvError, ValueError):
    pass


class RankMismatch(ResinvError, ValueError):
    pass


class RankChanged(ResinvError):
    def __init__(self, message, t_pair=None):
        super().__init__(message)
        self.t_pair = t_pair


class NoOverlap(ResinvError, ValueError):
    pass


class SpanMismatch(ResinvError, ValueError):
    pass


class StretchViolation(ResinvError):
    def __init__(self, message, t=None, value=None):
        super().__init__(message)
        self.t = t
        self.value = value
