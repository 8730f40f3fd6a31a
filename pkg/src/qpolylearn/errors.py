"""Exception types shared across the package."""


class DimensionMismatch(ValueError):
    """A point, state vector, or register count has the wrong length."""


class ContextMismatch(ValueError):
    """Operands belong to different field contexts (or variable counts)."""


class InvalidDegree(ValueError):
    """A degree argument is outside the polynomial's degree range."""


class MemoryLimitExceeded(RuntimeError):
    """A state vector or lookup table would exceed the configured cap."""


class BudgetExceeded(RuntimeError):
    """An exhaustive verifier was asked to scan beyond its stated budget."""


class PromiseViolated(RuntimeError):
    """The final measurement was not deterministic: the oracle broke the
    affine (or degree) promise the algorithm relies on."""


class InconsistentCoefficients(RuntimeError):
    """Redundant determinations of the same coefficient disagree."""
