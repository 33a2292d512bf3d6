"""Exception types shared across the package."""


class CuspedLabError(Exception):
    pass


class PresentationError(CuspedLabError):
    """Malformed presentation, or a word uses generators outside it."""


class UnsupportedPeripheralError(CuspedLabError):
    """Peripheral subgroup has no decidable membership test in this build."""


class BudgetExceededError(CuspedLabError):
    def __init__(self, projected: int, budget: int):
        super().__init__(f"projected vertex count {projected} exceeds budget {budget}")
        self.projected = projected
        self.budget = budget


class InvalidDepthError(CuspedLabError):
    pass


class InvalidMetricError(CuspedLabError):
    pass


class TruncationError(CuspedLabError):
    """A quantity cannot be computed inside the truncated space."""


class SamplingStarvedError(CuspedLabError):
    def __init__(self, requested: int, achieved: int, what: str = "samples"):
        super().__init__(f"could only draw {achieved} of {requested} {what}")
        self.requested = requested
        self.achieved = achieved


class DegeneratePairError(CuspedLabError):
    pass


class UndefinedTupleError(CuspedLabError):
    """Cross-ratio tuple with a=c or b=d, outside the degenerate conventions."""


class InvalidProxyError(CuspedLabError):
    pass


class ShortImageError(CuspedLabError):
    """Image word too short to reach the target sphere."""


class CorrespondenceError(CuspedLabError):
    """A peripheral coset has no matched coset under the generator map."""


class CoverageGapError(CuspedLabError):
    """No boundary tuple found near a vertex during reconstruction."""


class ExtensionError(CuspedLabError):
    """A proxy cannot be extended to the larger-scale space."""


class InternalInvariantError(CuspedLabError):
    pass
