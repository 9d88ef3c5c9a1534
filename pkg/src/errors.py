"""Exception hierarchy for game analysis.

Verification outcomes are returned as ``Verdict`` values; exceptions are
reserved for inputs that cannot be analysed at all.
"""

from typing import Any, Optional


class GameAnalysisError(Exception):
    """Base class for every error raised by the analysis toolkit."""


class ParameterError(GameAnalysisError, ValueError):
    """An instance or model parameter is outside its allowed range."""


class EvaluationError(GameAnalysisError):
    """A profile cannot be evaluated (bad index or missing default)."""


class BudgetExceededError(GameAnalysisError):
    """Exhaustive enumeration would visit more profiles than allowed."""

    def __init__(self, profiles: int, budget: int):
        self.profiles = profiles
        self.budget = budget
        super().__init__(f"{profiles} profiles exceed the enumeration budget of {budget}")


class UnsupportedInstanceError(GameAnalysisError):
    """The operation is not defined for this kind of instance."""


class PreconditionError(GameAnalysisError):
    """A structural precondition of a reduction does not hold.

    Attributes:
        condition: Name of the failing condition
        witness: First counterexample found, if any
    """

    def __init__(self, condition: str, witness: Optional[Any] = None, message: str = ""):
        self.condition = condition
        self.witness = witness
        text = message or f"precondition '{condition}' does not hold"
        if witness is not None:
            text = f"{text} (witness: {witness})"
        super().__init__(text)


class CertificateError(GameAnalysisError):
    """A certificate that should hold failed exhaustive verification."""

    def __init__(self, message: str, witness: Optional[Any] = None):
        self.witness = witness
        super().__init__(message if witness is None else f"{message} (witness: {witness})")


class InputFormatError(GameAnalysisError, ValueError):
    """A JSON document does not match the expected instance format."""
