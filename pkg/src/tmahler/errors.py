"""Error types shared across the package.

Every domain error carries a stable machine-readable ``code`` so the CLI
can emit structured error envelopes with distinct codes per failure kind.
"""

from __future__ import annotations


class DomainError(Exception):
    """Base class for all domain-level failures (bad input, wrong regime)."""

    code = "DomainError"


class InvalidInput(DomainError):
    code = "InvalidInput"


class FactorizationOverflow(DomainError):
    code = "FactorizationOverflow"


class NotPrime(DomainError):
    code = "NotPrime"


class DivisibilityViolation(DomainError):
    code = "DivisibilityViolation"


class NotSquarefree(DomainError):
    code = "NotSquarefree"


class InvalidT(DomainError):
    code = "InvalidT"


class TOutOfRange(DomainError):
    code = "TOutOfRange"


class TooLarge(DomainError):
    code = "TooLarge"


class WrongRegime(DomainError):
    code = "WrongRegime"


class ProductMismatch(DomainError):
    code = "ProductMismatch"
