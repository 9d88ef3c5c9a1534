"""Finite strategic games with exact rational costs."""

import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence, Union

from ..config import get_settings
from ..errors import BudgetExceededError, EvaluationError, ParameterError
from .parameters import AltruismVector, FriendshipMatrix
from .verdict import Verdict

logger = logging.getLogger(__name__)

DEFAULT = -1

Profile = tuple[int, ...]
CostFunction = Callable[[int, Profile], Fraction]
SocialCostFunction = Callable[[Profile], Fraction]


class Orientation(str, Enum):
    """Whether players and society minimize costs or maximize payoffs."""
    MINIMIZE = "min"
    MAXIMIZE = "max"

    def improves(self, candidate: Fraction, current: Fraction) -> bool:
        """True if ``candidate`` is strictly better than ``current``."""
        if self is Orientation.MINIMIZE:
            return candidate < current
        return candidate > current

    def at_most(self, lhs: Fraction, rhs: Fraction) -> bool:
        """The orientation-aware ``lhs <= rhs`` (``>=`` when maximizing)."""
        if self is Orientation.MINIMIZE:
            return lhs <= rhs
        return lhs >= rhs

    def best(self, values: Sequence[Fraction]) -> Fraction:
        return min(values) if self is Orientation.MINIMIZE else max(values)


@dataclass(frozen=True)
class FiniteGame:
    """A finite game with per-player costs and a social cost.

    For ``Orientation.MAXIMIZE`` the same fields hold payoffs and welfare.
    Evaluators must be pure: the same profile always yields the same value.

    Attributes:
        strategy_counts: |Σ_i| per player
        cost: Player cost C_i(s)
        social_cost: Social cost C(s)
        orientation: Minimization or maximization
        weights: Optional positive player weights w_i
        name: Human readable label used in logs and reports
        sum_bounded: Declared C(s) <= Σ_i C_i(s) (reversed when maximizing)
        weight_bounded: Declared C(s) <= Σ_i w_i C_i(s)
    """
    strategy_counts: tuple[int, ...]
    cost: CostFunction = field(compare=False)
    social_cost: SocialCostFunction = field(compare=False)
    orientation: Orientation = Orientation.MINIMIZE
    weights: Optional[tuple[Fraction, ...]] = None
    name: str = "game"
    sum_bounded: bool = False
    weight_bounded: bool = False

    def __post_init__(self):
        if not self.strategy_counts:
            raise ParameterError("a game needs at least one player")
        if any(k < 1 for k in self.strategy_counts):
            raise ParameterError(f"strategy counts must be positive, got {self.strategy_counts}")
        if self.weights is not None:
            if len(self.weights) != len(self.strategy_counts):
                raise ParameterError("one weight per player is required")
            if any(w <= 0 for w in self.weights):
                raise ParameterError("player weights must be positive")

    @property
    def n_players(self) -> int:
        return len(self.strategy_counts)

    @property
    def profile_count(self) -> int:
        return math.prod(self.strategy_counts)

    def player_weights(self) -> tuple[Fraction, ...]:
        """The declared weights, or unit weights when none are declared."""
        if self.weights is None:
            return tuple(Fraction(1) for _ in self.strategy_counts)
        return self.weights

    def ensure_within_budget(self, budget: Optional[int] = None) -> int:
        """Check that exhaustive enumeration is allowed.

        Returns:
            The number of profiles

        Raises:
            BudgetExceededError: If the profile count exceeds the budget
        """
        limit = get_settings().enumeration_budget if budget is None else budget
        count = self.profile_count
        if count > limit:
            raise BudgetExceededError(count, limit)
        return count

    def profiles(self, budget: Optional[int] = None) -> Iterator[Profile]:
        """Iterate over all pure profiles in lexicographic order."""
        count = self.ensure_within_budget(budget)
        logger.debug(f"Enumerating {count} profiles of {self.name}")
        return itertools.product(*(range(k) for k in self.strategy_counts))

    def validate_profile(self, profile: Sequence[int], allow_default: bool = False) -> Profile:
        """Return ``profile`` as a tuple after bounds checking.

        Raises:
            EvaluationError: If an entry is out of range
        """
        profile = tuple(profile)
        if len(profile) != self.n_players:
            raise EvaluationError(f"profile {profile} has {len(profile)} entries, expected {self.n_players}")
        for i, (strategy, count) in enumerate(zip(profile, self.strategy_counts)):
            if strategy == DEFAULT and allow_default:
                continue
            if not 0 <= strategy < count:
                raise EvaluationError(f"strategy {strategy} of player {i} is out of range 0..{count - 1}")
        return profile

    def costs(self, profile: Profile) -> tuple[Fraction, ...]:
        return tuple(self.cost(i, profile) for i in range(self.n_players))


def deviate(profile: Profile, player: int, strategy: int) -> Profile:
    """The profile (s_i', s_{-i})."""
    return profile[:player] + (strategy,) + profile[player + 1:]


def _profile_rank(profile: Profile, counts: Sequence[int]) -> int:
    rank = 0
    for strategy, count in zip(profile, counts):
        rank = rank * count + strategy
    return rank


def table_game(
    strategy_counts: Sequence[int],
    costs: Sequence[Sequence[Union[Fraction, int, str]]],
    social: Union[str, Sequence[Union[Fraction, int, str]]] = "sum",
    orientation: Orientation = Orientation.MINIMIZE,
    weights: Optional[Sequence[Fraction]] = None,
    name: str = "table",
    budget: Optional[int] = None,
) -> FiniteGame:
    """Build a normal-form game from explicit tables.

    Args:
        strategy_counts: |Σ_i| per player
        costs: For each player, costs of all profiles in lexicographic order
        social: ``"sum"`` or the social cost of every profile
        orientation: Minimization or maximization
        weights: Optional player weights
        name: Label of the game
        budget: Enumeration budget override

    Returns:
        The table game; a ``"sum"`` social cost is declared sum-bounded

    Raises:
        ParameterError: If a table has the wrong size
        BudgetExceededError: If the tables exceed the budget
    """
    counts = tuple(int(k) for k in strategy_counts)
    size = math.prod(counts) if counts else 0
    limit = get_settings().enumeration_budget if budget is None else budget
    if size > limit:
        raise BudgetExceededError(size, limit)
    if len(costs) != len(counts):
        raise ParameterError(f"expected {len(counts)} cost tables, got {len(costs)}")
    tables = tuple(tuple(Fraction(c) for c in row) for row in costs)
    for i, row in enumerate(tables):
        if len(row) != size:
            raise ParameterError(f"cost table of player {i} has {len(row)} entries, expected {size}")

    if social == "sum":
        social_table = tuple(sum((row[r] for row in tables), Fraction(0)) for r in range(size))
        declared_sum = True
    else:
        social_table = tuple(Fraction(c) for c in social)
        if len(social_table) != size:
            raise ParameterError(f"social table has {len(social_table)} entries, expected {size}")
        declared_sum = False

    def cost(i: int, profile: Profile) -> Fraction:
        return tables[i][_profile_rank(profile, counts)]

    def social_cost(profile: Profile) -> Fraction:
        return social_table[_profile_rank(profile, counts)]

    return FiniteGame(
        strategy_counts=counts,
        cost=cost,
        social_cost=social_cost,
        orientation=orientation,
        weights=None if weights is None else tuple(Fraction(w) for w in weights),
        name=name,
        sum_bounded=declared_sum,
        weight_bounded=declared_sum and weights is None,
    )


def altruistic_extension(game: FiniteGame, alpha: AltruismVector) -> FiniteGame:
    """Perceived costs C_i^α = (1 - α_i) C_i + α_i C with the base social cost."""
    if len(alpha) != game.n_players:
        raise ParameterError(f"altruism vector has {len(alpha)} entries for {game.n_players} players")
    if not game.sum_bounded:
        logger.warning(f"Altruistic extension of {game.name}, which is not declared sum-bounded")
    values = alpha.values

    def perceived(i: int, profile: Profile) -> Fraction:
        a = values[i]
        if a == 0:
            return game.cost(i, profile)
        return (1 - a) * game.cost(i, profile) + a * game.social_cost(profile)

    return FiniteGame(
        strategy_counts=game.strategy_counts,
        cost=perceived,
        social_cost=game.social_cost,
        orientation=game.orientation,
        weights=game.weights,
        name=f"altruistic({game.name})",
    )


def friendship_extension(game: FiniteGame, alpha: FriendshipMatrix) -> FiniteGame:
    """Perceived costs C_i^α = Σ_j α_ij C_j with the base social cost."""
    if alpha.n != game.n_players:
        raise ParameterError(f"friendship matrix is {alpha.n}x{alpha.n} for {game.n_players} players")

    def perceived(i: int, profile: Profile) -> Fraction:
        total = game.cost(i, profile)
        for j, a in alpha.friends(i):
            total += a * game.cost(j, profile)
        return total

    return FiniteGame(
        strategy_counts=game.strategy_counts,
        cost=perceived,
        social_cost=game.social_cost,
        orientation=game.orientation,
        weights=game.weights,
        name=f"friendship({game.name})",
    )


ExtendedCost = Callable[[int, Profile], Fraction]
ExtendedSocialCost = Callable[[Profile], Fraction]


@dataclass(frozen=True)
class DefaultStrategyMap:
    """The non-participation strategy ∅_i of every player.

    A player's default is either an alias for one of its own strategies or
    handled by the extended evaluators ``cost``/``social_cost``, which must
    accept ``DEFAULT`` entries and agree with the game on Σ.

    Attributes:
        aliases: Per player, the strategy index standing in for ∅_i, or None
        cost: Extended player cost on Π_i (Σ_i ∪ {∅_i})
        social_cost: Extended social cost on Π_i (Σ_i ∪ {∅_i})
        native: Players whose ∅_i the extended evaluators understand
    """
    aliases: tuple[Optional[int], ...] = ()
    cost: Optional[ExtendedCost] = field(default=None, compare=False)
    social_cost: Optional[ExtendedSocialCost] = field(default=None, compare=False)
    native: frozenset[int] = frozenset()

    @classmethod
    def evaluated(cls, n_players: int, cost: ExtendedCost, social_cost: ExtendedSocialCost) -> "DefaultStrategyMap":
        """Defaults for every player handled by extended evaluators."""
        return cls(
            aliases=(None,) * n_players,
            cost=cost,
            social_cost=social_cost,
            native=frozenset(range(n_players)),
        )

    @classmethod
    def from_aliases(cls, aliases: Sequence[Optional[int]]) -> "DefaultStrategyMap":
        return cls(aliases=tuple(aliases))

    def has_default(self, player: int) -> bool:
        if player in self.native:
            return True
        return player < len(self.aliases) and self.aliases[player] is not None

    def resolve(self, profile: Profile) -> tuple[Profile, bool]:
        """Replace aliased defaults; report whether native defaults remain.

        Raises:
            EvaluationError: If a DEFAULT entry has no registered default
        """
        resolved = list(profile)
        remaining = False
        for i, strategy in enumerate(profile):
            if strategy != DEFAULT:
                continue
            if i < len(self.aliases) and self.aliases[i] is not None:
                resolved[i] = self.aliases[i]
            elif i in self.native:
                remaining = True
            else:
                raise EvaluationError(f"player {i} has no registered default strategy")
        return tuple(resolved), remaining

    def player_cost(self, game: FiniteGame, player: int, profile: Profile) -> Fraction:
        """𝔠_i on a profile that may contain DEFAULT entries."""
        resolved, remaining = self.resolve(profile)
        if remaining:
            return self.cost(player, resolved)
        return game.cost(player, resolved)

    def social(self, game: FiniteGame, profile: Profile) -> Fraction:
        """𝔠 on a profile that may contain DEFAULT entries."""
        resolved, remaining = self.resolve(profile)
        if remaining:
            return self.social_cost(resolved)
        return game.social_cost(resolved)


def evaluate_with_defaults(
    game: FiniteGame, defaults: DefaultStrategyMap, profile: Sequence[int]
) -> tuple[tuple[Fraction, ...], Fraction]:
    """Per-player costs and social cost under the extended cost function.

    Args:
        game: The game
        defaults: Registered non-participation strategies
        profile: Strategy indices, DEFAULT allowed

    Returns:
        (per-player costs, social cost)

    Raises:
        EvaluationError: If the profile is out of range or uses an unregistered default
    """
    profile = game.validate_profile(profile, allow_default=True)
    costs = tuple(defaults.player_cost(game, i, profile) for i in range(game.n_players))
    return costs, defaults.social(game, profile)


def is_sum_bounded(game: FiniteGame, budget: Optional[int] = None) -> Verdict:
    """Check C(s) <= Σ_i C_i(s) on every profile (>= when maximizing)."""
    for profile in game.profiles(budget):
        total = sum(game.costs(profile), Fraction(0))
        if not game.orientation.at_most(game.social_cost(profile), total):
            return Verdict.fail(witness=profile, condition="sum-bounded")
    return Verdict.ok()


def is_weight_bounded(
    game: FiniteGame, weights: Optional[Sequence[Fraction]] = None, budget: Optional[int] = None
) -> Verdict:
    """Check C(s) <= Σ_i w_i C_i(s) on every profile (>= when maximizing)."""
    w = game.player_weights() if weights is None else tuple(Fraction(x) for x in weights)
    if len(w) != game.n_players:
        raise ParameterError("one weight per player is required")
    for profile in game.profiles(budget):
        total = sum((wi * c for wi, c in zip(w, game.costs(profile))), Fraction(0))
        if not game.orientation.at_most(game.social_cost(profile), total):
            return Verdict.fail(witness=profile, condition="weight-bounded")
    return Verdict.ok()
