"""Linear atomic congestion games and the 17/3 friendship lower-bound family."""

import itertools
import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from ..errors import ParameterError
from ..models.game import DEFAULT, DefaultStrategyMap, FiniteGame, Profile, deviate, friendship_extension
from ..models.parameters import FriendshipMatrix
from ..models.verdict import Verdict
from .equilibria import is_pure_nash, social_optimum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearDelay:
    """d(x) = a x + b."""
    a: Fraction = Fraction(1)
    b: Fraction = Fraction(0)

    def __call__(self, load: int) -> Fraction:
        return self.a * load + self.b


@dataclass(frozen=True)
class CongestionGame:
    """Resources with linear delays and per-player resource-set strategies."""
    delays: tuple[LinearDelay, ...]
    strategies: tuple[tuple[frozenset[int], ...], ...]

    def __post_init__(self):
        delays = tuple(LinearDelay(Fraction(d.a), Fraction(d.b)) for d in self.delays)
        strategies = tuple(tuple(frozenset(s) for s in player) for player in self.strategies)
        object.__setattr__(self, "delays", delays)
        object.__setattr__(self, "strategies", strategies)
        if any(d.a < 0 or d.b < 0 for d in delays):
            raise ParameterError("delay coefficients must be nonnegative")
        if not strategies:
            raise ParameterError("a congestion game needs at least one player")
        for i, player in enumerate(strategies):
            if not player:
                raise ParameterError(f"player {i} has no strategy")
            for subset in player:
                if any(not 0 <= e < len(delays) for e in subset):
                    raise ParameterError(f"player {i} uses an unknown resource")

    @property
    def n_players(self) -> int:
        return len(self.strategies)

    @property
    def n_resources(self) -> int:
        return len(self.delays)

    def is_identity(self) -> bool:
        return all(d.a == 1 and d.b == 0 for d in self.delays)

    def loads(self, profile: Profile) -> list[int]:
        """x_e(s); players set to DEFAULT use no resource."""
        loads = [0] * self.n_resources
        for i, k in enumerate(profile):
            if k == DEFAULT:
                continue
            for e in self.strategies[i][k]:
                loads[e] += 1
        return loads

    def player_cost(self, player: int, profile: Profile, loads: Optional[Sequence[int]] = None) -> Fraction:
        k = profile[player]
        if k == DEFAULT:
            return Fraction(0)
        loads = self.loads(profile) if loads is None else loads
        return sum((self.delays[e](loads[e]) for e in self.strategies[player][k]), Fraction(0))

    def social_cost(self, profile: Profile, loads: Optional[Sequence[int]] = None) -> Fraction:
        """Σ_e x_e d_e(x_e), which equals Σ_i C_i(s)."""
        loads = self.loads(profile) if loads is None else loads
        return sum((x * self.delays[e](x) for e, x in enumerate(loads) if x), Fraction(0))


def congestion_game(cg: CongestionGame) -> tuple[FiniteGame, DefaultStrategyMap]:
    """The finite game with C = Σ_i C_i and defaults using no resource."""

    @lru_cache(maxsize=65536)
    def loads(profile: Profile) -> tuple[int, ...]:
        return tuple(cg.loads(profile))

    def cost(i: int, profile: Profile) -> Fraction:
        return cg.player_cost(i, profile, loads(profile))

    def social(profile: Profile) -> Fraction:
        return cg.social_cost(profile, loads(profile))

    game = FiniteGame(
        strategy_counts=tuple(len(player) for player in cg.strategies),
        cost=cost,
        social_cost=social,
        name=f"congestion({cg.n_players}x{cg.n_resources})",
        sum_bounded=True,
        weight_bounded=True,
    )
    return game, DefaultStrategyMap.evaluated(cg.n_players, cost, social)


def normalize_to_identity(cg: CongestionGame) -> tuple[CongestionGame, Fraction]:
    """Rewrite every delay as identity resources, scaling costs to integers.

    A resource with scaled delay A x + B becomes A shared identity copies
    plus B private copies per player that can use it.

    Returns:
        The identity game and the scale factor relating its costs to the original
    """
    denominators = [d.a.denominator for d in cg.delays] + [d.b.denominator for d in cg.delays]
    scale = Fraction(math.lcm(*denominators)) if denominators else Fraction(1)
    next_label = 0
    shared: list[list[int]] = []
    for d in cg.delays:
        copies = int(d.a * scale)
        shared.append(list(range(next_label, next_label + copies)))
        next_label += copies
    private: dict[tuple[int, int], list[int]] = {}
    for i, player in enumerate(cg.strategies):
        used = sorted(set().union(*player))
        for e in used:
            copies = int(cg.delays[e].b * scale)
            private[(i, e)] = list(range(next_label, next_label + copies))
            next_label += copies
    strategies = tuple(
        tuple(
            frozenset(itertools.chain.from_iterable(shared[e] + private[(i, e)] for e in subset))
            for subset in player
        )
        for i, player in enumerate(cg.strategies)
    )
    return CongestionGame(tuple(LinearDelay() for _ in range(next_label)), strategies), scale


def _require_identity(cg: CongestionGame) -> None:
    if not cg.is_identity():
        raise ParameterError("this inequality is stated for identity delays")


def christodoulou_inequality_check(cg: CongestionGame, s: Profile, s_star: Profile) -> bool:
    """Σ_i C_i(s*_i, s_{-i}) <= Σ_e x*_e (x_e + 1) for identity delays."""
    _require_identity(cg)
    x, x_star = cg.loads(s), cg.loads(s_star)
    lhs = sum((cg.player_cost(i, deviate(s, i, s_star[i])) for i in range(cg.n_players)), Fraction(0))
    return lhs <= sum(b * (a + 1) for a, b in zip(x, x_star))


def scg_chain_check(cg: CongestionGame, s: Profile, s_star: Profile) -> bool:
    """Σ_i C̄_i(s*_i, s_{-i}) <= Σ_e x*_e (2 x_e + 1) for identity delays."""
    _require_identity(cg)
    x, x_star = cg.loads(s), cg.loads(s_star)
    lhs = Fraction(0)
    for i in range(cg.n_players):
        lhs += cg.social_cost(deviate(s, i, s_star[i])) - cg.social_cost(deviate(s, i, DEFAULT))
    return lhs <= sum(b * (2 * a + 1) for a, b in zip(x, x_star))


def _naturals(a: int, b: int) -> None:
    if a < 0 or b < 0:
        raise ParameterError("arguments must be natural numbers")


def bilo_inequality(a: int, b: int) -> bool:
    """2/5 a³ + 17/5 b² >= b (a + 1)."""
    _naturals(a, b)
    return Fraction(2, 5) * a ** 3 + Fraction(17, 5) * b ** 2 >= b * (a + 1)


def bilo_chain_inequality(a: int, b: int) -> bool:
    """2/5 a² + 17/5 b² >= b (2a + 1), the per-resource step of the 17/3 bound."""
    _naturals(a, b)
    return Fraction(2, 5) * a ** 2 + Fraction(17, 5) * b ** 2 >= b * (2 * a + 1)


def rosenthal_potential(cg: CongestionGame, s: Profile) -> Fraction:
    """Φ(s) = Σ_e Σ_{k=1..x_e} d_e(k)."""
    return sum(
        (sum((cg.delays[e](k) for k in range(1, x + 1)), Fraction(0)) for e, x in enumerate(cg.loads(s))),
        Fraction(0),
    )


def random_identity_game(
    rng: random.Random,
    players: int,
    strategies: int,
    resources: int,
) -> CongestionGame:
    """Identity delays, each strategy a random nonempty subset of the resources."""
    masks = range(1, 2 ** resources)
    return CongestionGame(
        tuple(LinearDelay() for _ in range(resources)),
        tuple(
            tuple(frozenset(e for e in range(resources) if mask >> e & 1) for mask in rng.sample(masks, strategies))
            for _ in range(players)
        ),
    )


def banded_optimum(cg: CongestionGame, blocks: Sequence[Sequence[int]]) -> tuple[Profile, Fraction]:
    """Exact optimum of a game whose resources only couple nearby blocks.

    Dynamic programming over the blocks in order; the state is the choice of
    the last ``width`` blocks, where ``width`` is the largest block distance
    between two players sharing a resource. A resource's cost is charged once
    the last block that can use it has been decided.
    """
    block_of: dict[int, int] = {}
    position: dict[int, int] = {}
    for b, members in enumerate(blocks):
        for pos, player in enumerate(members):
            block_of[player] = b
            position[player] = pos
    if len(block_of) != cg.n_players:
        raise ParameterError("blocks must partition the players")

    users: dict[int, list[tuple[int, frozenset[int]]]] = {}
    for player, options in enumerate(cg.strategies):
        for e in set().union(*options):
            containing = frozenset(k for k, subset in enumerate(options) if e in subset)
            users.setdefault(e, []).append((player, containing))
    width = 0
    charged_at: dict[int, list[int]] = {}
    for e, players in users.items():
        span = [block_of[p] for p, _ in players]
        width = max(width, max(span) - min(span))
        charged_at.setdefault(max(span), []).append(e)

    choices = [list(itertools.product(*(range(len(cg.strategies[p])) for p in members))) for members in blocks]

    def resource_cost(e: int, window: tuple, last: int) -> Fraction:
        load = 0
        for player, containing in users[e]:
            choice = window[len(window) - 1 - (last - block_of[player])]
            if choice[position[player]] in containing:
                load += 1
        return load * cg.delays[e](load) if load else Fraction(0)

    layer: dict[tuple, Fraction] = {(): Fraction(0)}
    history: list[dict[tuple, tuple[tuple, tuple]]] = []
    for k in range(len(blocks)):
        next_layer: dict[tuple, Fraction] = {}
        pointers: dict[tuple, tuple[tuple, tuple]] = {}
        for state, cost in layer.items():
            for choice in choices[k]:
                window = state + (choice,)
                total = cost + sum((resource_cost(e, window, k) for e in charged_at.get(k, [])), Fraction(0))
                key = window[len(window) - width:] if width else ()
                if key not in next_layer or total < next_layer[key]:
                    next_layer[key] = total
                    pointers[key] = (state, choice)
        history.append(pointers)
        layer = next_layer

    state = min(layer, key=lambda key: layer[key])
    value = layer[state]
    picked: list[tuple] = []
    for pointers in reversed(history):
        state, choice = pointers[state]
        picked.append(choice)
    picked.reverse()
    profile = [0] * cg.n_players
    for members, choice in zip(blocks, picked):
        for player, strategy in zip(members, choice):
            profile[player] = strategy
    return tuple(profile), value


ROLES = ("a", "b", "c")


@dataclass(frozen=True)
class LowerBoundFamily:
    """The block-chain instance with n interior blocks.

    Player 3k + r is role ``ROLES[r]`` of block k; strategy 0 is its
    equilibrium strategy s_i and strategy 1 is s*_i.
    """
    n: int
    game: CongestionGame
    s: Profile
    s_star: Profile
    alpha: FriendshipMatrix

    @property
    def blocks(self) -> list[list[int]]:
        return [[3 * k, 3 * k + 1, 3 * k + 2] for k in range(self.n + 3)]

    def player(self, role: str, block: int) -> int:
        return 3 * block + ROLES.index(role)

    def block_costs(self, profile: Profile) -> list[Fraction]:
        loads = self.game.loads(profile)
        return [
            sum((self.game.player_cost(p, profile, loads) for p in members), Fraction(0))
            for members in self.blocks
        ]

    def formula_ratio(self) -> Fraction:
        """(17 n + X) / (3 n + X*) with the boundary constants read off the instance."""
        spent, reference = self.block_costs(self.s), self.block_costs(self.s_star)
        boundary = (0, self.n + 1, self.n + 2)
        x = sum((spent[k] for k in boundary), Fraction(0))
        x_star = sum((reference[k] for k in boundary), Fraction(0))
        return (17 * self.n + x) / (3 * self.n + x_star)


def _chain_strategy(role: str, k: int) -> frozenset[int]:
    if role == "a":
        return frozenset({3 * k, 3 * k + 1, 3 * k + 2})
    if role == "b":
        return frozenset({3 * k + 2, 3 * k + 3})
    return frozenset({3 * k + 3, 3 * k + 4})


def lower_bound_family(n: int) -> LowerBoundFamily:
    """Build the friendship instance whose pure PoA tends to 17/3.

    Raises:
        ParameterError: If n is negative
    """
    if n < 0:
        raise ParameterError("the number of interior blocks must be nonnegative")
    blocks = n + 3
    equilibrium = [_chain_strategy(ROLES[r], k) for k in range(blocks) for r in range(3)]

    loads: dict[int, int] = {}
    for subset in equilibrium:
        for e in subset:
            loads[e] = loads.get(e, 0) + 1

    next_label = 3 * n + 11
    optimal: list[frozenset[int]] = []
    for k in range(blocks):
        for r in range(3):
            if k <= n:
                optimal.append(frozenset({3 * k + 6 + r}))
                continue
            own_cost = sum(loads[e] for e in equilibrium[3 * k + r])
            optimal.append(frozenset(range(next_label, next_label + own_cost)))
            next_label += own_cost

    entries = {}
    for k in range(n + 1):
        a, b, c = 3 * k, 3 * k + 1, 3 * k + 2
        entries[(a, 3 * (k + 1) + 1)] = 1
        entries[(a, 3 * (k + 1) + 2)] = 1
        entries[(a, 3 * (k + 2))] = 1
        entries[(b, 3 * (k + 1) + 2)] = 1
        entries[(b, 3 * (k + 2))] = 1
        entries[(c, 3 * (k + 2))] = 1
        entries[(c, 3 * (k + 2) + 1)] = 1

    game = CongestionGame(
        tuple(LinearDelay() for _ in range(next_label)),
        tuple((eq, opt) for eq, opt in zip(equilibrium, optimal)),
    )
    players = 3 * blocks
    return LowerBoundFamily(
        n=n,
        game=game,
        s=(0,) * players,
        s_star=(1,) * players,
        alpha=FriendshipMatrix.from_entries(players, entries),
    )


def family_optimum(family: LowerBoundFamily) -> tuple[Profile, Fraction]:
    return banded_optimum(family.game, family.blocks)


@dataclass(frozen=True)
class FamilyVerification:
    """Checks run on one member of the lower-bound family.

    Attributes:
        nash: s is a pure Nash equilibrium of the friendship extension
        cost: C(s)
        reference_cost: C(s*) of the constructed s*
        optimum: Exact optimal social cost
        optimum_profile: A profile attaining it
        ratio: C(s) / C(s*)
        exact_ratio: C(s) / OPT, the certified pure PoA lower bound
        formula_ratio: (17 n + X) / (3 n + X*)
        interior_blocks: Every interior block costs 17 under s and 3 under s*
        exhaustive_agrees: Brute force matches the dynamic program (small n only)
    """
    n: int
    nash: Verdict
    cost: Fraction
    reference_cost: Fraction
    optimum: Fraction
    optimum_profile: Profile
    ratio: Fraction
    exact_ratio: Fraction
    formula_ratio: Fraction
    interior_blocks: bool
    exhaustive_agrees: Optional[bool]

    @property
    def holds(self) -> bool:
        return (
            bool(self.nash)
            and self.interior_blocks
            and self.ratio == self.formula_ratio
            and self.optimum <= self.reference_cost
            and self.exhaustive_agrees is not False
        )


def verify_lower_bound_family(family: LowerBoundFamily, exhaustive_limit: int = 2) -> FamilyVerification:
    """Verify the equilibrium, the block accounting and the exact optimum."""
    game, _ = congestion_game(family.game)
    nash = is_pure_nash(friendship_extension(game, family.alpha), family.s)
    if not nash:
        logger.warning(f"Family member n={family.n} is not an equilibrium: deviation {nash.witness}")
    cost = game.social_cost(family.s)
    reference = game.social_cost(family.s_star)
    optimum_profile, optimum = family_optimum(family)
    spent, saved = family.block_costs(family.s), family.block_costs(family.s_star)
    interior = all(spent[k] == 17 and saved[k] == 3 for k in range(1, family.n + 1))
    agrees = None
    if family.n <= exhaustive_limit:
        _, brute = social_optimum(game)
        agrees = brute == optimum
    logger.info(f"Family member n={family.n}: C(s)={cost}, C(s*)={reference}, OPT={optimum}")
    return FamilyVerification(
        n=family.n,
        nash=nash,
        cost=cost,
        reference_cost=reference,
        optimum=optimum,
        optimum_profile=optimum_profile,
        ratio=cost / reference,
        exact_ratio=cost / optimum,
        formula_ratio=family.formula_ratio(),
        interior_blocks=interior,
        exhaustive_agrees=agrees,
    )
