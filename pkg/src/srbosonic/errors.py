"""Exception types shared across the package.

The split mirrors how callers need to react: bad inputs (``DomainError``),
a threshold that admits no finite optimal noise level
(``NoCriticalPointError``), a numerical routine that failed to converge
(``SolverError``), and a Fock-space cutoff that is too small for the
requested accuracy (``CutoffError``).
"""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class NoCriticalPointError(DomainError):
    """No finite critical noise variance exists for the given threshold."""


class SolverError(RuntimeError):
    """A root or optimum could not be bracketed or refined to tolerance."""


class CutoffError(RuntimeError):
    """A truncated Fock-space computation failed its accuracy contract."""
