"""Error taxonomy shared across the package.

Two families matter to callers: validation problems (bad inputs, rejected
configs) and numerical problems (divergence, poles, non-convergence).  The CLI
maps them to exit codes 2 and 3 respectively.
"""

from __future__ import annotations


class JpasimError(Exception):
    """Base class for all package-raised errors."""

    exit_code = 1

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.message = message
        # arbitrary key/value detail, serialized into the CLI's JSON error block
        self.context = context

    def to_dict(self) -> dict:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "context": {k: _jsonable(v) for k, v in self.context.items()},
        }


class ValidationError(JpasimError):
    """Inputs violate a documented precondition or schema."""

    exit_code = 2


class NumericalError(JpasimError):
    """A solver or integrator failed in a detectable numerical way."""

    exit_code = 3


class DivergenceError(NumericalError):
    """Trajectory or iteration left the representable/trusted region."""


class PoleError(NumericalError):
    """Gain denominator vanished: operating point at/past oscillation threshold."""


class ConvergenceError(NumericalError):
    """Iterative scheme exhausted its budget; last iterate attached in context."""


def _jsonable(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    try:
        return float(v) if hasattr(v, "__float__") and not isinstance(v, (int, bool)) else v
    except (TypeError, ValueError):
        return repr(v)
