"""Finite-support distributions over strategy profiles."""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import ParameterError

Profile = tuple[int, ...]
MixedStrategy = tuple[tuple[int, Fraction], ...]


def validate_mixed_strategy(mix: Iterable[tuple[int, Fraction]]) -> MixedStrategy:
    """Normalize a per-player mix of (strategy, probability) pairs.

    Raises:
        ParameterError: If probabilities are not positive or do not sum to 1
    """
    pairs = tuple((int(k), Fraction(p)) for k, p in mix)
    if any(p <= 0 for _, p in pairs):
        raise ParameterError(f"mixed strategy {pairs} has a non-positive probability")
    if len({k for k, _ in pairs}) != len(pairs):
        raise ParameterError(f"mixed strategy {pairs} repeats a strategy")
    if sum(p for _, p in pairs) != 1:
        raise ParameterError(f"mixed strategy {pairs} does not sum to 1")
    return pairs


def pure(strategy: int) -> MixedStrategy:
    return ((strategy, Fraction(1)),)


def uniform_mix(strategies: Sequence[int]) -> MixedStrategy:
    share = Fraction(1, len(strategies))
    return tuple((k, share) for k in strategies)


@dataclass(frozen=True)
class FiniteSupportDistribution:
    """A probability distribution σ over finitely many pure profiles."""
    support: tuple[tuple[Profile, Fraction], ...]

    def __post_init__(self):
        support = tuple((tuple(profile), Fraction(p)) for profile, p in self.support)
        if not support:
            raise ParameterError("a distribution needs at least one profile")
        if any(p <= 0 for _, p in support):
            raise ParameterError("probabilities must be positive")
        if len({profile for profile, _ in support}) != len(support):
            raise ParameterError("support profiles must be distinct")
        if sum(p for _, p in support) != 1:
            raise ParameterError("probabilities must sum to exactly 1")
        object.__setattr__(self, "support", support)

    @classmethod
    def point_mass(cls, profile: Sequence[int]) -> "FiniteSupportDistribution":
        return cls(((tuple(profile), Fraction(1)),))

    @classmethod
    def uniform(cls, profiles: Sequence[Sequence[int]]) -> "FiniteSupportDistribution":
        share = Fraction(1, len(profiles))
        return cls(tuple((tuple(profile), share) for profile in profiles))

    def __iter__(self):
        return iter(self.support)

    def __len__(self) -> int:
        return len(self.support)


def product_distribution(mixes: Sequence[Iterable[tuple[int, Fraction]]]) -> FiniteSupportDistribution:
    """The product of independent per-player mixed strategies."""
    normalized = [validate_mixed_strategy(mix) for mix in mixes]
    support = []
    for combo in itertools.product(*normalized):
        probability = Fraction(1)
        for _, p in combo:
            probability *= p
        support.append((tuple(k for k, _ in combo), probability))
    return FiniteSupportDistribution(tuple(support))
