"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: ``Refusal`` -> 2, ``VerificationError`` -> 1.
"""


class DomainError(ValueError):
    """Input outside the domain of an operation.

    ``certificate`` optionally carries a witness (a vector, a pairing value,
    a non-coprime factor pair, ...) explaining the failure.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class Refusal(DomainError):
    """Request is well-formed but unsupported or infeasible (budgets, ramified primes)."""


class VerificationError(AssertionError):
    """An identity that must hold by construction failed; always a bug."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate
