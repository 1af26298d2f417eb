"""Exception hierarchy.

Every error carries a short machine-readable ``kind`` (e.g. ``"ZeroVector"``)
and the CLI exit code it maps to.
"""


class TorfolError(Exception):
    kind = "Error"
    exit_code = 1

    def __init__(self, message="", kind=None):
        if kind is not None:
            self.kind = kind
        super().__init__(f"{self.kind}: {message}" if message else self.kind)


class ZeroVectorError(TorfolError, ValueError):
    kind = "ZeroVector"


class NotSimplicialError(TorfolError, ValueError):
    kind = "NotSimplicial"
    exit_code = 2


class DimensionError(TorfolError, ValueError):
    kind = "DimensionMismatch"


class ConeHasLinealityError(TorfolError, ValueError):
    kind = "ConeHasLineality"


class UnboundedError(TorfolError, ValueError):
    """Raised for unbounded polytopes; ``direction`` is a recession ray."""

    kind = "Unbounded"

    def __init__(self, message="", direction=None):
        self.direction = direction
        super().__init__(message)


class FanError(TorfolError, ValueError):
    """Invalid fan or invalid surgery request."""


class FanValidationError(FanError):
    kind = "InvalidFan"

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class UnsupportedError(TorfolError):
    """Input is outside the supported class (non-complete, non-simplicial, ...)."""

    exit_code = 2


class FlipCapExceeded(TorfolError):
    kind = "FlipCapExceeded"
    exit_code = 3


class ConsistencyError(TorfolError):
    """An internal check or a claimed theorem was violated by a computation."""

    kind = "ConsistencyFailure"
    exit_code = 4


class ParseError(TorfolError, ValueError):
    kind = "ParseError"

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
