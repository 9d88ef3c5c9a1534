"""Optima, pure and coarse equilibria, dynamics and empirical PoA."""

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Sequence

from ..config import get_settings
from ..errors import ParameterError
from ..models.distribution import FiniteSupportDistribution, MixedStrategy, product_distribution
from ..models.game import FiniteGame, Orientation, Profile, deviate
from ..models.verdict import Verdict

logger = logging.getLogger(__name__)


def all_optima(game: FiniteGame, budget: Optional[int] = None) -> tuple[list[Profile], Fraction]:
    """Every profile attaining the optimal social cost, in lexicographic order."""
    best: Optional[Fraction] = None
    optima: list[Profile] = []
    for profile in game.profiles(budget):
        value = game.social_cost(profile)
        if best is None or game.orientation.improves(value, best):
            best = value
            optima = [profile]
        elif value == best:
            optima.append(profile)
    return optima, best


def social_optimum(game: FiniteGame, budget: Optional[int] = None) -> tuple[Profile, Fraction]:
    """The lexicographically first optimal profile and its value.

    Raises:
        BudgetExceededError: If the game has too many profiles
    """
    optima, value = all_optima(game, budget)
    return optima[0], value


def best_response(game: FiniteGame, player: int, profile: Profile) -> tuple[int, Fraction]:
    """The lowest-index strategy minimizing (maximizing) the player's cost."""
    best_strategy = 0
    best_value = game.cost(player, deviate(profile, player, 0))
    for strategy in range(1, game.strategy_counts[player]):
        value = game.cost(player, deviate(profile, player, strategy))
        if game.orientation.improves(value, best_value):
            best_strategy, best_value = strategy, value
    return best_strategy, best_value


def is_pure_nash(game: FiniteGame, profile: Sequence[int]) -> Verdict:
    """Check that no unilateral deviation strictly improves the deviator.

    Returns:
        Verdict whose witness is the first violating (player, strategy)
    """
    profile = game.validate_profile(profile)
    for i in range(game.n_players):
        current = game.cost(i, profile)
        for strategy in range(game.strategy_counts[i]):
            if strategy == profile[i]:
                continue
            if game.orientation.improves(game.cost(i, deviate(profile, i, strategy)), current):
                return Verdict.fail(witness=(i, strategy))
    return Verdict.ok()


def enumerate_pure_nash(game: FiniteGame, budget: Optional[int] = None) -> list[Profile]:
    """All pure Nash equilibria in lexicographic order."""
    count = game.ensure_within_budget(budget)
    logger.info(f"Enumerating pure Nash equilibria of {game.name} over {count} profiles")
    return [profile for profile in game.profiles(budget) if is_pure_nash(game, profile)]


def expected_social_cost(game: FiniteGame, sigma: FiniteSupportDistribution) -> Fraction:
    """E[C(s)] for s drawn from sigma."""
    return sum((p * game.social_cost(profile) for profile, p in sigma), Fraction(0))


def expected_player_cost(game: FiniteGame, player: int, sigma: FiniteSupportDistribution) -> Fraction:
    return sum((p * game.cost(player, profile) for profile, p in sigma), Fraction(0))


def is_coarse_equilibrium(game: FiniteGame, sigma: FiniteSupportDistribution) -> Verdict:
    """Check E[C_i(s)] <= E[C_i(s_i', s_{-i})] for every player and fixed deviation.

    Returns:
        Verdict whose witness is the first violating (player, strategy)
    """
    for profile, _ in sigma:
        game.validate_profile(profile)
    for i in range(game.n_players):
        current = expected_player_cost(game, i, sigma)
        for strategy in range(game.strategy_counts[i]):
            deviation = sum(
                (p * game.cost(i, deviate(profile, i, strategy)) for profile, p in sigma),
                Fraction(0),
            )
            if game.orientation.improves(deviation, current):
                return Verdict.fail(witness=(i, strategy))
    return Verdict.ok()


def is_mixed_equilibrium(game: FiniteGame, mixes: Sequence[MixedStrategy]) -> Verdict:
    """Check a profile of independent mixed strategies.

    Against independent opponents the fixed-deviation test is exactly the
    coarse test on the product distribution.
    """
    if len(mixes) != game.n_players:
        raise ParameterError("one mixed strategy per player is required")
    return is_coarse_equilibrium(game, product_distribution(mixes))


def coarse_poa_of(game: FiniteGame, sigma: FiniteSupportDistribution, optimum_value: Fraction) -> Fraction:
    """E[C(σ)]/C(s*) for costs, Π(s*)/E[Π(σ)] for payoffs.

    Raises:
        ParameterError: If the denominator is zero
    """
    expected = expected_social_cost(game, sigma)
    numerator, denominator = (
        (expected, optimum_value) if game.orientation is Orientation.MINIMIZE else (optimum_value, expected)
    )
    if denominator == 0:
        raise ParameterError("ratio undefined: zero denominator")
    return numerator / denominator


class DynamicsStatus(str, Enum):
    CONVERGED = "converged"
    STEP_LIMIT = "step_limit"


@dataclass
class DynamicsResult:
    """Trajectory of best-response dynamics."""
    trajectory: list[Profile]
    status: DynamicsStatus

    @property
    def steps(self) -> int:
        return len(self.trajectory) - 1

    @property
    def final(self) -> Profile:
        return self.trajectory[-1]


def best_response_dynamics(game: FiniteGame, start: Sequence[int], max_steps: int = 1000) -> DynamicsResult:
    """Let the lowest-index player with an improving move play its best response.

    Args:
        game: The game
        start: Initial profile
        max_steps: Step limit

    Returns:
        The visited profiles, starting with ``start``, and the termination status
    """
    profile = game.validate_profile(start)
    trajectory = [profile]
    for _ in range(max_steps):
        moved = False
        for i in range(game.n_players):
            strategy, value = best_response(game, i, profile)
            if game.orientation.improves(value, game.cost(i, profile)):
                profile = deviate(profile, i, strategy)
                trajectory.append(profile)
                moved = True
                break
        if not moved:
            return DynamicsResult(trajectory, DynamicsStatus.CONVERGED)
    if is_pure_nash(game, profile):
        return DynamicsResult(trajectory, DynamicsStatus.CONVERGED)
    return DynamicsResult(trajectory, DynamicsStatus.STEP_LIMIT)


@dataclass
class PoAResult:
    """Pure price of anarchy of one game.

    Attributes:
        value: Worst equilibrium ratio, None when infinite or undefined
        infinite: Some equilibrium is infinitely worse than the optimum
        no_equilibrium: The game has no pure Nash equilibrium
        optimum: Lexicographically first optimal profile
        optimum_value: Optimal social cost
        equilibria: All pure Nash equilibria
        equilibrium_costs: Social cost of each equilibrium
        worst_equilibrium: Equilibrium attaining the ratio
    """
    value: Optional[Fraction]
    infinite: bool
    no_equilibrium: bool
    optimum: Profile
    optimum_value: Fraction
    equilibria: list[Profile] = field(default_factory=list)
    equilibrium_costs: list[Fraction] = field(default_factory=list)
    worst_equilibrium: Optional[Profile] = None


def _ratio(orientation: Orientation, equilibrium: Fraction, optimum: Fraction) -> Optional[Fraction]:
    if orientation is Orientation.MINIMIZE:
        if optimum == 0:
            return None if equilibrium > 0 else Fraction(1)
        return equilibrium / optimum
    if equilibrium == 0:
        return None if optimum > 0 else Fraction(1)
    return optimum / equilibrium


def pure_poa(game: FiniteGame, budget: Optional[int] = None) -> PoAResult:
    """Worst ratio between a pure Nash equilibrium and the optimum."""
    optimum, optimum_value = social_optimum(game, budget)
    equilibria = enumerate_pure_nash(game, budget)
    costs = [game.social_cost(profile) for profile in equilibria]
    result = PoAResult(
        value=None,
        infinite=False,
        no_equilibrium=not equilibria,
        optimum=optimum,
        optimum_value=optimum_value,
        equilibria=equilibria,
        equilibrium_costs=costs,
    )
    if not equilibria:
        logger.warning(f"{game.name} has no pure Nash equilibrium")
        return result
    for profile, cost in zip(equilibria, costs):
        ratio = _ratio(game.orientation, cost, optimum_value)
        if ratio is None:
            result.infinite = True
            result.value = None
            result.worst_equilibrium = profile
            return result
        if result.value is None or ratio > result.value:
            result.value = ratio
            result.worst_equilibrium = profile
    return result


@dataclass
class EquilibriumReport:
    """Summary of a game's pure equilibria and optimum."""
    game_name: str
    equilibria: list[Profile]
    equilibrium_costs: list[Fraction]
    optima: list[Profile]
    optimum_value: Fraction
    poa: Optional[Fraction]
    infinite: bool


def equilibrium_report(game: FiniteGame, budget: Optional[int] = None) -> EquilibriumReport:
    optima, value = all_optima(game, budget)
    poa = pure_poa(game, budget)
    return EquilibriumReport(
        game_name=game.name,
        equilibria=poa.equilibria,
        equilibrium_costs=poa.equilibrium_costs,
        optima=optima,
        optimum_value=value,
        poa=poa.value,
        infinite=poa.infinite,
    )


@dataclass
class SweepResult:
    """Largest pure PoA observed over a sampled instance class.

    This is a lower bound on the class PoA, never its supremum.
    """
    instances: int
    max_ratio: Optional[Fraction]
    worst_index: Optional[int]
    infinite: bool = False
    without_equilibrium: int = 0


def poa_sweep(
    generator: Callable[[random.Random], FiniteGame],
    count: int,
    seed: Optional[int] = None,
    budget: Optional[int] = None,
) -> SweepResult:
    """Sample ``count`` games and report the worst pure PoA seen."""
    rng = random.Random(get_settings().default_seed if seed is None else seed)
    result = SweepResult(instances=count, max_ratio=None, worst_index=None)
    for index in range(count):
        poa = pure_poa(generator(rng), budget)
        if poa.no_equilibrium:
            result.without_equilibrium += 1
            continue
        if poa.infinite:
            result.infinite = True
            result.worst_index = index
            continue
        if not result.infinite and (result.max_ratio is None or poa.value > result.max_ratio):
            result.max_ratio = poa.value
            result.worst_index = index
    logger.info(f"PoA sweep over {count} instances: max ratio {result.max_ratio}")
    return result
