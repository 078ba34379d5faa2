"""Exception hierarchy.

Exit-code mapping used by the CLI: DomainError -> 1, usage errors -> 2,
ProofInvariantError -> 3.
"""


class AntiRainbowError(Exception):
    """Base class for all library errors."""


class DomainError(AntiRainbowError):
    """Input outside the operation's contract (bad graph, density too high, ...)."""


class ParseError(DomainError):
    """Malformed edge-list or JSON input."""


class DensityError(DomainError):
    """A density precondition (m < (k+1)/2 or m < 15/7) fails.

    Carries the violating vertex set (in the labels of the offending graph)
    so callers can report which subgraph is too dense.
    """

    def __init__(self, message, witness=None, density=None):
        super().__init__(message)
        self.witness = witness
        self.density = density


class GuardExceededError(DomainError):
    """An explicit search guard (edge count, node budget or time budget) was hit.

    Never a silent wrong answer: the caller must widen the guard or shrink
    the input.
    """


class ClassificationError(DomainError):
    """K(v) matches none of the allowed configurations.

    Signals a violated precondition of the structural classification; the
    message names the failing invariant.
    """


class ProofInvariantError(AntiRainbowError):
    """An invariant the underlying proof guarantees failed at runtime.

    On valid inputs this must never happen; when it does it is a finding
    (either an implementation bug or a genuine gap) and carries full context.
    """

    def __init__(self, message, context=None):
        super().__init__(message)
        self.context = context or {}
