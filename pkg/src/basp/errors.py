"""Exception hierarchy shared by every module."""


class BaspError(Exception):
    """Base class; `code` is a stable machine-readable tag."""

    code = "ERROR"


class InvalidBoundsError(BaspError, ValueError):
    code = "INVALID_BOUNDS"


class DuplicateArcError(BaspError, ValueError):
    code = "DUPLICATE_ARC"


class NotAPathError(BaspError, ValueError):
    code = "NOT_A_PATH"


class StartAboveCapError(BaspError, ValueError):
    code = "START_ABOVE_CAP"


class EndAboveCapError(BaspError, ValueError):
    code = "END_ABOVE_CAP"


class DomainMismatchError(BaspError, ValueError):
    code = "DOMAIN_MISMATCH"


class UnboundedError(BaspError, ValueError):
    code = "UNBOUNDED"


class NoPathError(BaspError):
    code = "NO_PATH"


class SaturationViolation(BaspError):
    """A state whose word has exactly k nodes was visited but is not saturating."""

    code = "SATURATION_VIOLATION"

    def __init__(self, word, k):
        super().__init__(f"non-saturating state {list(word)} visited with k={k}")
        self.word = tuple(word)
        self.k = k


class KLimitExceeded(BaspError):
    code = "K_LIMIT_EXCEEDED"


class SearchTimeout(BaspError):
    code = "TIMEOUT"


class BudgetExceeded(BaspError):
    code = "BUDGET_EXCEEDED"


class NotUnitInstance(BaspError, ValueError):
    code = "NOT_UNIT_INSTANCE"


class DegenerateInstance(BaspError, ValueError):
    code = "DEGENERATE_INSTANCE"


class ParseError(BaspError, ValueError):
    code = "PARSE_ERROR"


class SchemaError(BaspError, ValueError):
    code = "SCHEMA_ERROR"

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
