"""Python access to the trafficsym core."""

from ._core import (
    DomainError,
    NumericalError,
    ParseError,
    UsageError,
    __version__,
    adjoint_apply,
    amplitude,
    classify,
    commutator,
    evaluate,
    killing_form,
    run_cli,
    verify,
)

__all__ = [
    "DomainError",
    "NumericalError",
    "ParseError",
    "UsageError",
    "__version__",
    "adjoint_apply",
    "amplitude",
    "classify",
    "commutator",
    "evaluate",
    "killing_form",
    "run_cli",
    "verify",
]
