"""
LoopWorks Errors
================

Exception hierarchy shared by every engine module.

Each exception carries a machine-readable ``reason`` string and the process
exit code the CLI reports for it:

    2 - invalid input (bad table, wrong kind of subset, unsupported order)
    3 - resource cap hit (subloop count, queue, brute-force bounds)
    4 - internal consistency failure (a construction failed its own oracle)
"""

from typing import Optional


# =============================================================================
# EXCEPTIONS
# =============================================================================

class LoopError(Exception):
    """Base class for all LoopWorks errors."""
    reason: str = "loop_error"
    exit_code: int = 2


class ConfigError(LoopError):
    """Raised when a cap or thread count is not a positive integer."""
    reason = "invalid_config"


class TableSyntaxError(LoopError):
    """Raised when `.tbl` text is malformed."""
    reason = "syntax_error"


class NotLatin(LoopError):
    """Raised when a row or column of a table is not a permutation."""
    reason = "not_latin"


class NoIdentity(LoopError):
    """Raised when a Latin square has no two-sided identity."""
    reason = "no_identity"


class NotASubloop(LoopError):
    """Raised when a subset is expected to be a subloop but is not."""
    reason = "not_a_subloop"


class NotNormal(LoopError):
    """Raised when a subloop is expected to be normal but is not."""
    reason = "not_normal"


class NotAGroup(LoopError):
    """Raised when a construction requires an associative input."""
    reason = "not_a_group"


class NotPowerAssociative(LoopError):
    """Raised when an exponent is requested for a loop without cyclic 1-generated subloops."""
    reason = "not_power_associative"


class NotMoufang(LoopError):
    reason = "not_moufang"


class NucleusNotNormal(LoopError):
    reason = "nucleus_not_normal"


class UnsupportedOrder(LoopError):
    """Raised for field orders outside the supported set."""
    reason = "unsupported_order"


class InvalidCertificate(LoopError):
    """
    Raised when a certificate fails re-verification.

    Attributes:
        path: Slash-separated node path of the failing node (e.g. "root/quot/sub")
    """
    reason = "invalid_certificate"

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class CapacityError(LoopError):
    """
    Raised when a configured resource cap is exceeded.

    Never a silent truncation: the cap and the count reached are reported.
    """
    reason = "capacity_exceeded"
    exit_code = 3

    def __init__(self, what: str, cap: int, count: int):
        super().__init__(f"{what} cap exceeded: {count} > {cap}")
        self.what = what
        self.cap = cap
        self.count = count


class OracleBoundExceeded(LoopError):
    """Raised when the brute-force subloop oracle is asked for a table that is too large."""
    reason = "oracle_bound_exceeded"
    exit_code = 3


class BoundExceeded(LoopError):
    """Raised when census or isomorphism search is asked beyond its order bound."""
    reason = "bound_exceeded"
    exit_code = 3


class OracleFailure(LoopError):
    """Raised when a constructed table fails one of its post-construction checks."""
    reason = "oracle_failure"
    exit_code = 4


class SearchExhausted(LoopError):
    reason = "search_exhausted"
    exit_code = 4


def exit_code_for(error: Optional[BaseException]) -> int:
    """Map an exception to the CLI exit code contract."""
    if error is None:
        return 0
    if isinstance(error, LoopError):
        return error.exit_code
    return 2
