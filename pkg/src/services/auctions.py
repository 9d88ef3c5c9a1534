"""Single-item auctions where the highest bid wins and pays at most the second-highest bid.

The highest bid wins, ties (zero bids included) going to the lowest index,
and the winner's payment under the second-price rule is the highest other
bid. Only the empty auction, a lone bidder bidding nothing, has no winner.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Sequence

from ..config import get_settings
from ..errors import BudgetExceededError, CertificateError, ParameterError
from ..models.certificate import SmoothnessCertificate
from ..models.distribution import FiniteSupportDistribution
from ..models.game import DEFAULT, DefaultStrategyMap, FiniteGame, Orientation, Profile, friendship_extension
from ..models.parameters import FriendshipMatrix
from ..models.verdict import Verdict
from .equilibria import coarse_poa_of, enumerate_pure_nash, is_coarse_equilibrium, is_pure_nash
from .social_contribution import check_smoothness_base, corresponding_scg

logger = logging.getLogger(__name__)

Bids = tuple[Fraction, ...]
PriceRule = Callable[[Bids], Sequence[Fraction]]


class PricingRule(str, Enum):
    SECOND_PRICE = "second-price"
    CUSTOM = "custom"


def default_grid(valuations: Sequence[Fraction], player: int) -> tuple[Fraction, ...]:
    """{0, v_1, ..., v_n} ∩ [0, v_i] in increasing order."""
    cap = valuations[player]
    return tuple(sorted({Fraction(0)} | {Fraction(v) for v in valuations if v <= cap}))


@dataclass(frozen=True)
class Auction:
    """Valuations, per-bidder bid grids and a pricing rule.

    Attributes:
        valuations: v_i >= 0
        grids: Increasing bid grids, each containing 0 and capped at v_i
        pricing: Second price, or a custom rule never charging more
        custom_price: Payments for every bidder given the bids (custom pricing only)
    """
    valuations: tuple[Fraction, ...]
    grids: tuple[tuple[Fraction, ...], ...] = ()
    pricing: PricingRule = PricingRule.SECOND_PRICE
    custom_price: Optional[PriceRule] = field(default=None, compare=False)

    def __post_init__(self):
        valuations = tuple(Fraction(v) for v in self.valuations)
        if not valuations:
            raise ParameterError("an auction needs at least one bidder")
        if any(v < 0 for v in valuations):
            raise ParameterError("valuations must be nonnegative")
        if self.grids:
            grids = tuple(tuple(sorted({Fraction(b) for b in grid})) for grid in self.grids)
        else:
            grids = tuple(default_grid(valuations, i) for i in range(len(valuations)))
        if len(grids) != len(valuations):
            raise ParameterError("one bid grid per bidder is required")
        for i, grid in enumerate(grids):
            if not grid or grid[0] != 0:
                raise ParameterError(f"the bid grid of bidder {i} must contain 0")
            if grid[-1] > valuations[i]:
                raise ParameterError(f"bidder {i} may not bid above its valuation {valuations[i]}")
        if (self.pricing is PricingRule.CUSTOM) != (self.custom_price is not None):
            raise ParameterError("a custom price function goes with custom pricing only")
        object.__setattr__(self, "valuations", valuations)
        object.__setattr__(self, "grids", grids)

    @property
    def n_bidders(self) -> int:
        return len(self.valuations)

    def bids(self, profile: Profile) -> Bids:
        """Bid values of a profile of grid indices; DEFAULT bids nothing."""
        return tuple(Fraction(0) if k == DEFAULT else self.grids[i][k] for i, k in enumerate(profile))

    def index_of(self, player: int, bid: Fraction) -> int:
        try:
            return self.grids[player].index(Fraction(bid))
        except ValueError:
            raise ParameterError(f"bid {bid} is not on the grid of bidder {player}") from None


def winner(bids: Sequence[Fraction]) -> Optional[int]:
    """Lowest-index highest bid, None for the empty auction."""
    best: Optional[int] = None
    for i, b in enumerate(bids):
        if best is None or b > bids[best]:
            best = i
    return best


def second_price_payments(bids: Sequence[Fraction]) -> tuple[Fraction, ...]:
    payments = [Fraction(0)] * len(bids)
    w = winner(bids)
    if w is not None:
        payments[w] = max((b for i, b in enumerate(bids) if i != w), default=Fraction(0))
    return tuple(payments)


def payments(auction: Auction, bids: Sequence[Fraction]) -> tuple[Fraction, ...]:
    if auction.pricing is PricingRule.CUSTOM:
        return tuple(Fraction(p) for p in auction.custom_price(tuple(bids)))
    return second_price_payments(bids)


def welfare(auction: Auction, bids: Sequence[Fraction]) -> Fraction:
    """Π(b) = v_{a(b)}, 0 without a winner."""
    w = winner(bids)
    return Fraction(0) if w is None else auction.valuations[w]


def payoff(auction: Auction, player: int, bids: Sequence[Fraction]) -> Fraction:
    value = auction.valuations[player] if winner(bids) == player else Fraction(0)
    return value - payments(auction, bids)[player]


def without(bids: Sequence[Fraction], player: int) -> Bids:
    """(0, b_{-i}); a lone bidder leaves the empty auction."""
    if len(bids) == 1:
        return ()
    absent = list(bids)
    absent[player] = Fraction(0)
    return tuple(absent)


def scg_payoff(auction: Auction, player: int, bids: Sequence[Fraction]) -> Fraction:
    """Π̄_i(b) = Π(b) - Π(0, b_{-i})."""
    return welfare(auction, bids) - welfare(auction, without(bids, player))


def _bid_profiles(auction: Auction, budget: Optional[int]):
    limit = get_settings().enumeration_budget if budget is None else budget
    count = 1
    for grid in auction.grids:
        count *= len(grid)
    if count > limit:
        raise BudgetExceededError(count, limit)
    return itertools.product(*auction.grids)


def validate_pricing(auction: Auction, budget: Optional[int] = None) -> Verdict:
    """Check 0 <= p_i(b) <= second-price p_i(b) on every bid profile."""
    if auction.pricing is PricingRule.SECOND_PRICE:
        return Verdict.ok()
    for bids in _bid_profiles(auction, budget):
        charged = payments(auction, bids)
        if len(charged) != auction.n_bidders:
            return Verdict.fail(witness=bids, condition="pricing", detail="one payment per bidder is required")
        for p, cap in zip(charged, second_price_payments(bids)):
            if p < 0 or p > cap:
                return Verdict.fail(witness=bids, condition="pricing")
    return Verdict.ok()


def auction_game(auction: Auction, budget: Optional[int] = None) -> tuple[FiniteGame, DefaultStrategyMap]:
    """The payoff-maximization game over grid indices; ∅_i is the bid 0.

    A lone bidder's ∅_1 is the empty auction, with payoff and welfare 0.

    Raises:
        ParameterError: If custom pricing charges more than the second price
    """
    checked = validate_pricing(auction, budget)
    if not checked:
        raise ParameterError(f"custom pricing exceeds the second price at bids {checked.witness}")

    def cost(i: int, profile: Profile) -> Fraction:
        return payoff(auction, i, auction.bids(profile))

    def social(profile: Profile) -> Fraction:
        return welfare(auction, auction.bids(profile))

    game = FiniteGame(
        strategy_counts=tuple(len(grid) for grid in auction.grids),
        cost=cost,
        social_cost=social,
        orientation=Orientation.MAXIMIZE,
        name=f"auction({', '.join(str(v) for v in auction.valuations)})",
        sum_bounded=True,
        weight_bounded=True,
    )
    if auction.n_bidders == 1:
        return game, DefaultStrategyMap.evaluated(1, lambda i, profile: Fraction(0), lambda profile: Fraction(0))
    return game, DefaultStrategyMap.from_aliases([0] * auction.n_bidders)


def truthful_profile(auction: Auction) -> Profile:
    return tuple(auction.index_of(i, v) for i, v in enumerate(auction.valuations))


def top_bidder(auction: Auction) -> int:
    """Lowest index among the highest valuations."""
    return max(range(auction.n_bidders), key=lambda i: (auction.valuations[i], -i))


def optimal_profile(auction: Auction) -> Profile:
    """b*: the top bidder bids its valuation, everybody else bids nothing."""
    top = top_bidder(auction)
    profile = [0] * auction.n_bidders
    profile[top] = auction.index_of(top, auction.valuations[top])
    return tuple(profile)


def altruism_poa2_certificate(auction: Auction, budget: Optional[int] = None) -> SmoothnessCertificate:
    """Verify Σ_i Π̄_i(b*_i, b_{-i}) >= Π(b*) - Π(b) for every b.

    This (1, -1) certificate on the social contribution game bounds the
    robust PoA of every altruistic extension by 2.

    Raises:
        CertificateError: If the inequality fails on some bid profile
    """
    game, defaults = auction_game(auction, budget)
    b_star = optimal_profile(auction)
    cert = SmoothnessCertificate.pure_deviation(1, -1, b_star, b_star)
    verdict = check_smoothness_base(corresponding_scg(game, defaults), cert, budget)
    if not verdict:
        raise CertificateError(f"(1, -1)-smoothness fails for {game.name}", verdict.witness)
    return cert


@dataclass(frozen=True)
class TightAuction:
    """Two bidders with v = (1, 2) who care fully about each other."""
    auction: Auction
    alpha: FriendshipMatrix
    equilibrium: Profile
    optimum: Profile

    def ratio(self) -> Fraction:
        return welfare(self.auction, self.auction.bids(self.optimum)) / welfare(
            self.auction, self.auction.bids(self.equilibrium)
        )

    def verify(self) -> Verdict:
        game, _ = auction_game(self.auction)
        return is_pure_nash(friendship_extension(game, self.alpha), self.equilibrium)


def tight_example() -> TightAuction:
    auction = Auction((Fraction(1), Fraction(2)))
    return TightAuction(
        auction=auction,
        alpha=FriendshipMatrix.uniform(2, 1),
        equilibrium=(auction.index_of(0, 1), auction.index_of(1, 0)),
        optimum=optimal_profile(auction),
    )


@dataclass(frozen=True)
class CoarseRatios:
    """Π(b*) / E[Π(σ)] for each tested coarse equilibrium σ."""
    ratios: tuple[Optional[Fraction], ...]

    @property
    def max_ratio(self) -> Optional[Fraction]:
        finite = [r for r in self.ratios if r is not None]
        if len(finite) != len(self.ratios):
            return None
        return max(finite, default=None)

    @property
    def holds(self) -> bool:
        """Every ratio is finite and at most 2."""
        return all(r is not None and r <= 2 for r in self.ratios)


def friendship_coarse_poa_check(
    auction: Auction,
    alpha: FriendshipMatrix,
    candidates: Sequence[FiniteSupportDistribution],
) -> CoarseRatios:
    """Welfare ratios of coarse equilibria of a friendship extension.

    Raises:
        ParameterError: If a candidate is not a coarse equilibrium of the extension
    """
    game, _ = auction_game(auction)
    extension = friendship_extension(game, alpha)
    optimum = game.social_cost(optimal_profile(auction))
    ratios: list[Optional[Fraction]] = []
    for index, sigma in enumerate(candidates):
        coarse = is_coarse_equilibrium(extension, sigma)
        if not coarse:
            raise ParameterError(f"candidate {index} is not a coarse equilibrium: deviation {coarse.witness}")
        try:
            ratios.append(coarse_poa_of(game, sigma, optimum))
        except ParameterError:
            ratios.append(None if optimum > 0 else Fraction(1))
    result = CoarseRatios(tuple(ratios))
    if not result.holds:
        logger.warning(f"A coarse equilibrium of friendship({game.name}) exceeds welfare ratio 2")
    return result


def friendship_nash_inequality_check(
    auction: Auction, alpha: FriendshipMatrix, budget: Optional[int] = None
) -> Verdict:
    """At every pure Nash b of the extension that the top bidder loses,
    0 >= Π(b*_top, b_{-top}) - Π(0, b_{-top}) - Π(b).

    Returns:
        Verdict whose witness is the first violating equilibrium
    """
    game, _ = auction_game(auction, budget)
    top = top_bidder(auction)
    top_bid = auction.valuations[top]
    for profile in enumerate_pure_nash(friendship_extension(game, alpha), budget):
        bids = list(auction.bids(profile))
        if winner(bids) == top:
            continue
        here = welfare(auction, bids)
        bids[top] = top_bid
        raised = welfare(auction, bids)
        if raised - welfare(auction, without(bids, top)) - here > 0:
            return Verdict.fail(witness=profile, condition="friendship-nash")
    return Verdict.ok()


def random_auction(rng: random.Random, bidders: int, max_value: int = 5) -> Auction:
    """Integer valuations in [0, max_value] on the default grids."""
    return Auction(tuple(Fraction(rng.randint(0, max_value)) for _ in range(bidders)))
