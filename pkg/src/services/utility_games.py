"""Valid and basic utility games over a submodular set function."""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Collection, Optional, Sequence

from ..errors import CertificateError, ParameterError, UnsupportedInstanceError
from ..models.certificate import CertificateFlavor, SmoothnessCertificate
from ..models.game import DEFAULT, DefaultStrategyMap, FiniteGame, Orientation, Profile
from ..models.parameters import AltruismVector
from ..models.verdict import Verdict
from .equilibria import social_optimum
from .social_contribution import check_smoothness_base, corresponding_scg, reduction_transfer_check

logger = logging.getLogger(__name__)

MAX_GROUND = 16


def members(mask: int) -> tuple[int, ...]:
    """Elements of a subset given as a bitmask."""
    return tuple(e for e in range(mask.bit_length()) if mask >> e & 1)


def mask_of(elements: Collection[int]) -> int:
    """Bitmask of a subset given by its elements."""
    mask = 0
    for e in elements:
        mask |= 1 << e
    return mask


@dataclass(frozen=True)
class SetFunction:
    """V: 2^E -> Q as a table indexed by bitmask.

    Attributes:
        ground: |E|, elements are 0..ground-1
        values: V(S) for every bitmask S
    """
    ground: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if not 0 <= self.ground <= MAX_GROUND:
            raise ParameterError(f"ground sets are limited to {MAX_GROUND} elements")
        if len(self.values) != 1 << self.ground:
            raise ParameterError(f"incomplete table: {len(self.values)} values for {1 << self.ground} subsets")
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @classmethod
    def from_callable(cls, ground: int, f: Callable[[int], Fraction]) -> "SetFunction":
        if not 0 <= ground <= MAX_GROUND:
            raise ParameterError(f"ground sets are limited to {MAX_GROUND} elements")
        return cls(ground, tuple(Fraction(f(mask)) for mask in range(1 << ground)))

    @classmethod
    def cardinality(cls, ground: int) -> "SetFunction":
        return cls.from_callable(ground, lambda mask: mask.bit_count())

    def __call__(self, mask: int) -> Fraction:
        return self.values[mask]

    @property
    def full(self) -> int:
        return (1 << self.ground) - 1


def check_submodular(v: SetFunction) -> Verdict:
    """Check V(A+x) - V(A) >= V(B+x) - V(B) for all A ⊆ B, x ∉ B.

    Diminishing returns along single-element extensions B = A + y is
    equivalent to the general condition.

    Returns:
        Verdict whose witness is (A, B, x) with sets as sorted element tuples
    """
    for a in range(1 << v.ground):
        outside = [e for e in range(v.ground) if not a >> e & 1]
        for x in outside:
            gain = v(a | 1 << x) - v(a)
            for y in outside:
                if y == x:
                    continue
                b = a | 1 << y
                if gain < v(b | 1 << x) - v(b):
                    return Verdict.fail(witness=(members(a), members(b), x), condition="submodular")
    return Verdict.ok()


def check_nondecreasing(v: SetFunction) -> Verdict:
    """Check V(A) <= V(A + x); the witness is (A, x)."""
    for a in range(1 << v.ground):
        for x in range(v.ground):
            if not a >> x & 1 and v(a | 1 << x) < v(a):
                return Verdict.fail(witness=(members(a), x), condition="nondecreasing")
    return Verdict.ok()


def check_nonnegative(v: SetFunction) -> Verdict:
    for mask, value in enumerate(v.values):
        if value < 0:
            return Verdict.fail(witness=members(mask), condition="nonnegative")
    return Verdict.ok()


def coverage_function(client_values: Sequence[Fraction], facilities: Sequence[Collection[int]]) -> SetFunction:
    """V(S) = total value of the clients covered by some facility in S.

    Args:
        client_values: Nonnegative value of each client
        facilities: Clients covered by each facility; facilities form the ground set
    """
    values = [Fraction(c) for c in client_values]
    if any(c < 0 for c in values):
        raise ParameterError("client values must be nonnegative")
    covers = [mask_of(f) for f in facilities]
    if any(c >> len(values) for c in covers):
        raise ParameterError("a facility covers an unknown client")

    def covered(mask: int) -> Fraction:
        clients = 0
        for f in members(mask):
            clients |= covers[f]
        return sum((values[c] for c in members(clients)), Fraction(0))

    return SetFunction.from_callable(len(covers), covered)


Payoff = Callable[[int, tuple[int, ...]], Fraction]


@dataclass(frozen=True)
class ValidUtilityGame:
    """Players choose subsets of the ground set; Π(s) = V(∪_i s_i).

    Attributes:
        value: The set function V
        strategies: Per player, the allowed subsets as bitmasks
        payoff: Π_i given the chosen bitmask of every player
        name: Label used in logs
        basic: Π_i is exactly the marginal contribution
    """
    value: SetFunction
    strategies: tuple[tuple[int, ...], ...]
    payoff: Payoff = field(compare=False)
    name: str = "utility"
    basic: bool = False

    def __post_init__(self):
        if not self.strategies or any(not options for options in self.strategies):
            raise ParameterError("every player needs at least one strategy")
        for options in self.strategies:
            if any(not 0 <= mask <= self.value.full for mask in options):
                raise ParameterError("a strategy uses an element outside the ground set")

    @property
    def n_players(self) -> int:
        return len(self.strategies)

    def chosen(self, profile: Profile) -> tuple[int, ...]:
        """The bitmask of every player; a non-participant chooses ∅."""
        return tuple(0 if k == DEFAULT else self.strategies[i][k] for i, k in enumerate(profile))

    def welfare(self, chosen: Sequence[int]) -> Fraction:
        union = 0
        for mask in chosen:
            union |= mask
        return self.value(union)


def _marginal(v: SetFunction, chosen: tuple[int, ...], player: int) -> Fraction:
    union = others = 0
    for j, mask in enumerate(chosen):
        union |= mask
        if j != player:
            others |= mask
    return v(union) - v(others)


def _require_submodular(v: SetFunction) -> None:
    for check in (check_nonnegative, check_submodular):
        verdict = check(v)
        if not verdict:
            raise ParameterError(f"V is not {verdict.condition}: witness {verdict.witness}")


def _strategy_masks(strategies: Sequence[Sequence[Collection[int]]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(s if isinstance(s, int) else mask_of(s) for s in options) for options in strategies)


def basic_utility_game(v: SetFunction, strategies: Sequence[Sequence[Collection[int]]]) -> ValidUtilityGame:
    """Π_i(s) = Π(s) - Π(∅, s_{-i}).

    Raises:
        ParameterError: If V is negative somewhere or not submodular
    """
    _require_submodular(v)
    return ValidUtilityGame(
        value=v,
        strategies=_strategy_masks(strategies),
        payoff=lambda i, chosen: _marginal(v, chosen, i),
        name="basic-utility",
        basic=True,
    )


def marginal_utility_game(v: SetFunction, strategies: Sequence[Sequence[Collection[int]]]) -> ValidUtilityGame:
    """Players in index order each collect their marginal value over the earlier ones.

    Π_i(s) = V(s_0 ∪ ... ∪ s_i) - V(s_0 ∪ ... ∪ s_{i-1}); the payoffs add up
    to V(∪ s) - V(∅) and dominate the marginal contribution by submodularity.
    """
    _require_submodular(v)

    def sequential(i: int, chosen: tuple[int, ...]) -> Fraction:
        before = 0
        for mask in chosen[:i]:
            before |= mask
        return v(before | chosen[i]) - v(before)

    return ValidUtilityGame(
        value=v,
        strategies=_strategy_masks(strategies),
        payoff=sequential,
        name="sequential-utility",
    )


def utility_game(vg: ValidUtilityGame) -> tuple[FiniteGame, DefaultStrategyMap]:
    """The payoff-maximization game; ∅_i chooses the empty set."""

    def cost(i: int, profile: Profile) -> Fraction:
        return vg.payoff(i, vg.chosen(profile))

    def social(profile: Profile) -> Fraction:
        return vg.welfare(vg.chosen(profile))

    game = FiniteGame(
        strategy_counts=tuple(len(options) for options in vg.strategies),
        cost=cost,
        social_cost=social,
        orientation=Orientation.MAXIMIZE,
        name=vg.name,
        sum_bounded=True,
    )
    return game, DefaultStrategyMap.evaluated(vg.n_players, cost, social)


def check_valid_utility(
    vg: ValidUtilityGame, budget: Optional[int] = None, game: Optional[FiniteGame] = None
) -> Verdict:
    """Check submodularity, nonnegativity, Σ_i Π_i <= Π and Π_i >= Π(s) - Π(∅, s_{-i}).

    Args:
        vg: The utility game
        budget: Enumeration budget override
        game: Payoffs to check instead of ``vg.payoff``, e.g. a corresponding SCG

    Returns:
        Verdict with ``condition`` naming the first failing requirement
    """
    for check in (check_submodular, check_nonnegative):
        verdict = check(vg.value)
        if not verdict:
            return verdict
    if game is None:
        game, _ = utility_game(vg)
    for profile in game.profiles(budget):
        chosen = vg.chosen(profile)
        payoffs = game.costs(profile)
        if sum(payoffs, Fraction(0)) > vg.welfare(chosen):
            return Verdict.fail(witness=profile, condition="sum-bounded")
        for i, p in enumerate(payoffs):
            if p < _marginal(vg.value, chosen, i):
                return Verdict.fail(witness=(i, profile), condition="marginal")
    return Verdict.ok()


def default_altruism_sample(n: int) -> tuple[AltruismVector, ...]:
    """Selfish, half-altruistic and fully altruistic players."""
    return tuple(AltruismVector.uniform(n, level) for level in (0, Fraction(1, 2), 1))


def utility_poa2_certificate(
    vg: ValidUtilityGame,
    budget: Optional[int] = None,
    alphas: Optional[Sequence[AltruismVector]] = None,
) -> SmoothnessCertificate:
    """Find and verify the (1, -1) certificate on the corresponding SCG and
    carry it over to altruistic extensions.

    Args:
        vg: The utility game, with nondecreasing V
        budget: Enumeration budget override
        alphas: Altruism vectors to transfer the certificate to; a selfish,
            half and fully altruistic sample by default

    Raises:
        UnsupportedInstanceError: If V is not nondecreasing
        CertificateError: If the certificate fails on some profile of the
            SCG or of an extension
    """
    monotone = check_nondecreasing(vg.value)
    if not monotone:
        raise UnsupportedInstanceError(f"V decreases at {monotone.witness}")
    game, defaults = utility_game(vg)
    s_star, _ = social_optimum(game, budget)
    cert = SmoothnessCertificate.pure_deviation(1, -1, s_star, s_star)
    verdict = check_smoothness_base(corresponding_scg(game, defaults), cert, budget)
    if not verdict:
        raise CertificateError(f"(1, -1)-smoothness fails for {vg.name}", verdict.witness)
    for alpha in default_altruism_sample(vg.n_players) if alphas is None else alphas:
        transferred = reduction_transfer_check(game, defaults, alpha, CertificateFlavor.ALTRUISTIC, cert, budget=budget)
        if not transferred:
            raise CertificateError(
                f"(1, -1)-smoothness fails for the altruistic extension of {vg.name} with alpha {alpha}",
                transferred.witness,
            )
    return cert


def random_coverage_game(
    rng: random.Random,
    players: int,
    facilities: int,
    clients: int,
    strategies: int = 2,
    max_value: int = 4,
) -> ValidUtilityGame:
    """A basic utility game over a random coverage function.

    Each player picks one of ``strategies`` random facility subsets (possibly empty).
    """
    values = [Fraction(rng.randint(0, max_value)) for _ in range(clients)]
    covers = [[c for c in range(clients) if rng.random() < 0.5] for _ in range(facilities)]
    v = coverage_function(values, covers)
    options = [[rng.randrange(1 << facilities) for _ in range(strategies)] for _ in range(players)]
    return basic_utility_game(v, options)
