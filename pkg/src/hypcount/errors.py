"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so each class carries a short
machine-readable ``code``.
"""


class HypcountError(Exception):
    code = "ERROR"
    exit_status = 3


class NumericalError(HypcountError):
    code = "NUMERICAL"


class PrecisionOverflow(NumericalError):
    code = "PRECISION_OVERFLOW"


class NotHyperbolic(NumericalError):
    code = "NOT_HYPERBOLIC"


class DegenerateError(NumericalError):
    code = "DEGENERATE"


class PoleError(NumericalError):
    code = "POLE"


class ConvergenceError(NumericalError):
    code = "NON_CONVERGENCE"


class BranchGapError(NumericalError):
    code = "BRANCH_GAP"


class RouteDisagreement(NumericalError):
    code = "ROUTE_DISAGREEMENT"


class NonStabilizedError(HypcountError):
    """Ball enumeration (or a count built on it) did not stabilize."""

    code = "NON_STABILIZED"
    exit_status = 4

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BudgetExceeded(HypcountError):
    code = "BUDGET_EXCEEDED"


class ExhaustedError(HypcountError):
    code = "EXHAUSTED"


class SchemaError(HypcountError):
    code = "SCHEMA"
    exit_status = 2
