"""Exact rational numbers in JSON documents."""

from fractions import Fraction
from typing import Annotated, Any, Optional, Sequence

from pydantic import PlainSerializer, PlainValidator, WithJsonSchema


def parse_rational(value: Any) -> Fraction:
    """Accept "p/q" and decimal strings, ints and Fractions; never floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a rational number: {value!r}") from None
    raise ValueError(f"expected an integer or a 'p/q' string, got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    return str(value)


Rational = Annotated[
    Fraction,
    PlainValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]


def format_optional(value: Optional[Fraction]) -> Optional[str]:
    return None if value is None else format_rational(value)


def jsonable(value: Any) -> Any:
    """Turn tuples, Fractions and enums in analysis results into JSON values."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [jsonable(v) for v in items]
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


def as_profile(values: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(v) for v in values)
