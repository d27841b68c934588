"""Exception types. Each carries a short machine-readable ``code``."""


class LoopGroupError(Exception):
    code = "DOMAIN_ERROR"

    def __init__(self, detail="", **info):
        super().__init__(detail)
        self.detail = detail
        self.info = info


class WindowError(LoopGroupError):
    """An entry outside the exactly known window was requested."""
    code = "OUTSIDE_WINDOW"


class TruncationError(LoopGroupError):
    code = "INCOMPATIBLE_TRUNCATION"


class NotTNNError(LoopGroupError):
    code = "NOT_TNN"


class InadmissibleError(LoopGroupError):
    """A commutation map hit a zero denominator."""
    code = "INADMISSIBLE"


class BudgetError(LoopGroupError):
    code = "BUDGET_EXCEEDED"


class EstimationError(LoopGroupError):
    code = "ESTIMATION_FAILED"


class ShapeError(LoopGroupError):
    code = "INVALID_SHAPE"


class NetworkError(LoopGroupError):
    code = "INVALID_NETWORK"
