"""Exact minimization of the upper envelope of lines.

The robust-PoA optimizer reduces its two-variable program to minimizing
max_k (c_k + m_k x) over a half-line; the optimum sits on a vertex of the
envelope or on the boundary.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional


@dataclass(frozen=True)
class Line:
    """The line x -> intercept + slope * x."""
    intercept: Fraction
    slope: Fraction

    def at(self, x: Fraction) -> Fraction:
        return self.intercept + self.slope * x


@dataclass(frozen=True)
class EnvelopeMinimum:
    """Minimum of an upper envelope over a half-line.

    Attributes:
        value: The infimum of the envelope
        argmin: A point attaining it, or the boundary it is approached at
        attained: False when the infimum is only approached at an open boundary
    """
    value: Fraction
    argmin: Fraction
    attained: bool


def _crossing(left: Line, right: Line) -> Fraction:
    return (left.intercept - right.intercept) / (right.slope - left.slope)


def upper_envelope(lines: Iterable[Line]) -> list[Line]:
    """Lines that appear on max_k line_k, ordered by slope."""
    best: dict[Fraction, Fraction] = {}
    for line in lines:
        if line.slope not in best or line.intercept > best[line.slope]:
            best[line.slope] = line.intercept
    hull: list[Line] = []
    for slope in sorted(best):
        line = Line(best[slope], slope)
        while len(hull) >= 2 and _crossing(hull[-2], line) <= _crossing(hull[-2], hull[-1]):
            hull.pop()
        hull.append(line)
    return hull


def minimize_upper_envelope(
    lines: Iterable[Line],
    lower: Fraction,
    lower_inclusive: bool,
    prefer: Fraction = Fraction(1),
) -> EnvelopeMinimum:
    """Minimize max_k line_k(x) over x >= lower (or x > lower).

    On a flat optimum the point closest to ``prefer`` is returned.

    Raises:
        ValueError: If there are no lines or the envelope is unbounded below
    """
    hull = upper_envelope(lines)
    if not hull:
        raise ValueError("no constraints")
    breaks = [_crossing(hull[t - 1], hull[t]) for t in range(1, len(hull))]

    # line t is active on [breaks[t-1], breaks[t]]
    start = 0
    while start < len(breaks) and breaks[start] <= lower:
        start += 1

    def segment(t: int) -> tuple[Fraction, Optional[Fraction]]:
        left = lower if t == start else breaks[t - 1]
        right = breaks[t] if t < len(breaks) else None
        return left, right

    for t in range(start, len(hull)):
        line = hull[t]
        left, right = segment(t)
        if line.slope > 0:
            value = line.at(left)
            attained = not (t == start and left == lower and not lower_inclusive)
            return EnvelopeMinimum(value, left, attained)
        if line.slope == 0:
            point = _clamp_flat(prefer, left, right, lower, lower_inclusive and t == start)
            return EnvelopeMinimum(line.intercept, point, True)
    raise ValueError("envelope is unbounded below")


def _clamp_flat(
    prefer: Fraction,
    left: Fraction,
    right: Optional[Fraction],
    lower: Fraction,
    left_closed_at_lower: bool,
) -> Fraction:
    point = max(prefer, left)
    if right is not None:
        point = min(point, right)
    if point == lower and not left_closed_at_lower:
        point = (left + right) / 2 if right is not None else left + 1
    return point
