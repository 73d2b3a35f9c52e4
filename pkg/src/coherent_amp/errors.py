"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes, so every module raises one of the
classes below rather than a bare ``RuntimeError``.
"""


class CoherentAmpError(Exception):
    """Base class for all package errors."""


class InvalidInputError(CoherentAmpError, ValueError):
    """Parameters outside an operation's domain."""


class DimensionMismatchError(InvalidInputError):
    pass


class DimensionOverflowError(CoherentAmpError):
    """Required Fock cutoff exceeds the configured cap."""

    def __init__(self, label, required, max_dim):
        self.label = label
        self.required = required
        self.max_dim = max_dim
        super().__init__(
            f"label {label} needs Fock dimension {required} > max_dim={max_dim}"
        )


class NumericalError(CoherentAmpError):
    """A numeric routine could not produce a trustworthy result."""


class NotPSDError(NumericalError):
    def __init__(self, min_eigenvalue, clip):
        self.min_eigenvalue = min_eigenvalue
        self.clip = clip
        super().__init__(
            f"matrix is not PSD: min eigenvalue {min_eigenvalue:.3e} < -{clip:.3e}"
        )


class ConditioningError(NumericalError):
    def __init__(self, condition_number, limit):
        self.condition_number = condition_number
        self.limit = limit
        super().__init__(
            f"Gram matrix condition number {condition_number:.3e} exceeds {limit:.1e}"
        )


class CompletionError(NumericalError):
    """Kraus operators overshoot the identity; upstream Pi was not feasible."""


class BisectionError(NumericalError):
    def __init__(self, p):
        self.p = p
        super().__init__(f"feasibility search inconclusive at p={p:.12g}")
