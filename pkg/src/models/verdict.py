"""Outcome of an exhaustive check."""

from dataclasses import dataclass
from typing import Any, Optional


@dataclass(frozen=True)
class Verdict:
    """Whether a property holds, with the first counterexample otherwise.

    Attributes:
        holds: True if the property holds everywhere it was checked
        witness: First violating object in enumeration order
        condition: Name of the violated condition, for multi-part checks
        detail: Free-form explanation
    """
    holds: bool
    witness: Optional[Any] = None
    condition: Optional[str] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.holds

    @classmethod
    def ok(cls, detail: str = "") -> "Verdict":
        return cls(True, detail=detail)

    @classmethod
    def fail(cls, witness: Any = None, condition: Optional[str] = None, detail: str = "") -> "Verdict":
        return cls(False, witness=witness, condition=condition, detail=detail)
