"""Exception types shared across the toolkit."""


class InvalidInput(ValueError):
    """Raised when an argument violates a precondition (non-finite, bad shape, ...)."""


class SingularMatrix(ArithmeticError):
    """Raised when an operation needs an inverse but the matrix is numerically singular."""


class InvalidPlan(ValueError):
    """Raised for malformed tail-replacement plans (bad cut index, weights, lengths)."""


class EmptyCloud(ValueError):
    """Raised when every member of a matrix set was skipped and no point cloud remains."""


class BudgetExceeded(RuntimeError):
    """Raised when a filtration would require more simplices than the configured budget."""
