"""Exception hierarchy.

Every mathematical precondition failure derives from :class:`LacunaryError`;
the CLI maps those to exit status 1 and everything else (bad input files,
unparseable expressions) to exit status 2.
"""


class LacunaryError(Exception):
    """Base class for math-precondition failures."""

    code = "error"

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self)}


class ResourceLimitError(LacunaryError):
    code = "resource_limit"


class ClosureViolation(LacunaryError):
    code = "closure_violation"


class NotInSemigroup(LacunaryError):
    code = "not_in_semigroup"


class BackendMismatch(LacunaryError):
    code = "backend_mismatch"


class SupportViolation(LacunaryError):
    code = "support_violation"


class NonUnitConstantTerm(LacunaryError):
    code = "non_unit_constant_term"


class DomainError(LacunaryError):
    code = "domain_error"


class NoFactorization(LacunaryError):
    code = "no_factorization"


class AmbiguousFactorization(LacunaryError):
    code = "ambiguous_factorization"


class TruncationOverflow(LacunaryError):
    code = "truncation_overflow"


class BasisMismatch(LacunaryError):
    code = "basis_mismatch"


class InsufficientTruncation(LacunaryError):
    code = "insufficient_truncation"


class GeneratorsNotDistinct(LacunaryError):
    code = "generators_not_distinct"


class LengthMismatch(LacunaryError):
    code = "length_mismatch"


class SpecParseError(ValueError):
    """Malformed semigroup expression or JSON payload (a config error, not math)."""
