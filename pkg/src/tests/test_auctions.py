"""Unit tests for second-price auctions."""

import random
from fractions import Fraction

import pytest

from src.errors import ParameterError
from src.models import FiniteSupportDistribution, Orientation
from src.services.auctions import (
    Auction,
    PricingRule,
    altruism_poa2_certificate,
    auction_game,
    default_grid,
    friendship_coarse_poa_check,
    friendship_nash_inequality_check,
    optimal_profile,
    payoff,
    random_auction,
    scg_payoff,
    second_price_payments,
    tight_example,
    top_bidder,
    truthful_profile,
    validate_pricing,
    welfare,
    winner,
)


def bids(*values):
    return tuple(Fraction(v) for v in values)


class TestAllocation:
    """Tests for winner determination and payments."""

    def test_all_zero_bids(self):
        """Test zero bids tie like any other bid."""
        assert winner(bids(0, 0)) == 0
        assert second_price_payments(bids(0, 0)) == bids(0, 0)

    def test_empty_auction(self):
        """Test the empty auction has no winner."""
        assert winner(()) is None
        assert welfare(Auction(bids(3)), ()) == 0

    def test_ties_go_to_lowest_index(self):
        """Test tie breaking among positive bids."""
        assert winner(bids(2, 3, 3)) == 1

    def test_second_price(self):
        """Test the winner pays the highest other bid."""
        assert second_price_payments(bids(3, 1, 2)) == bids(2, 0, 0)
        assert second_price_payments(bids(2)) == bids(0)

    def test_payoffs_and_welfare(self):
        """Test truthful bidding with valuations (1, 2)."""
        auction = Auction(bids(1, 2))
        assert welfare(auction, bids(1, 2)) == 2
        assert payoff(auction, 1, bids(1, 2)) == 1
        assert payoff(auction, 0, bids(1, 2)) == 0

    def test_scg_payoff(self):
        """Test the marginal welfare contribution."""
        auction = Auction(bids(1, 2))
        assert scg_payoff(auction, 1, bids(1, 2)) == 1
        assert scg_payoff(auction, 0, bids(1, 2)) == 0

    def test_all_zero_welfare(self):
        """Test welfare at (0, 0) is the tie-broken winner's value."""
        auction = Auction(bids(1, 2))
        game, _ = auction_game(auction)
        assert game.social_cost((0, 0)) == 1
        assert scg_payoff(auction, 0, bids(0, 0)) == 0

    def test_single_bidder(self):
        """Test a lone bidder wins at any bid and contributes its valuation."""
        auction = Auction(bids(3))
        game, defaults = auction_game(auction)
        for k in range(len(auction.grids[0])):
            assert game.social_cost((k,)) == 3
            assert game.cost(0, (k,)) == 3
        assert defaults.social(game, (-1,)) == 0
        assert scg_payoff(auction, 0, bids(0)) == 3
        assert altruism_poa2_certificate(auction).robust_bound(Orientation.MAXIMIZE) == 2


class TestAuctionModel:
    """Tests for grids, validation and the finite game."""

    def test_default_grid(self):
        """Test grids are the valuations capped at the bidder's own."""
        assert default_grid(bids(1, 2), 1) == bids(0, 1, 2)
        assert default_grid(bids(1, 2), 0) == bids(0, 1)

    def test_grid_above_valuation(self):
        """Test overbidding grids are rejected."""
        with pytest.raises(ParameterError):
            Auction(bids(1), grids=(bids(0, 2),))

    def test_grid_without_zero(self):
        """Test grids must contain the zero bid."""
        with pytest.raises(ParameterError):
            Auction(bids(1), grids=(bids(1),))

    def test_custom_price_needs_custom_rule(self):
        """Test custom price functions go with custom pricing."""
        with pytest.raises(ParameterError):
            Auction(bids(1), custom_price=lambda b: [0])

    def test_index_of(self):
        """Test bid lookup on the grid."""
        auction = Auction(bids(1, 2))
        assert auction.index_of(1, Fraction(2)) == 2
        with pytest.raises(ParameterError):
            auction.index_of(0, Fraction(2))

    def test_game(self):
        """Test the auction is a payoff game with bid-zero defaults."""
        auction = Auction(bids(1, 2))
        game, defaults = auction_game(auction)
        assert game.orientation is Orientation.MAXIMIZE
        assert game.strategy_counts == (2, 3)
        assert defaults.aliases == (0, 0)
        assert game.social_cost(truthful_profile(auction)) == 2

    def test_free_pricing_is_valid(self):
        """Test a rule charging nothing stays below the second price."""
        auction = Auction(bids(1, 2), pricing=PricingRule.CUSTOM, custom_price=lambda b: [0] * len(b))
        assert validate_pricing(auction)
        auction_game(auction)

    def test_first_price_is_rejected(self):
        """Test charging the own bid exceeds the second price."""
        auction = Auction(
            bids(1, 2),
            pricing=PricingRule.CUSTOM,
            custom_price=lambda b: [x if i == winner(b) else 0 for i, x in enumerate(b)],
        )
        assert not validate_pricing(auction)
        with pytest.raises(ParameterError):
            auction_game(auction)

    def test_optimal_profile(self):
        """Test b* lets the top bidder bid its valuation alone."""
        auction = Auction(bids(2, 3, 3))
        assert top_bidder(auction) == 1
        assert optimal_profile(auction) == (0, 2, 0)


class TestWelfareBounds:
    """Tests for the altruism and friendship bounds."""

    def test_certificate_on_random_auctions(self):
        """Test the (1, -1) certificate gives robust PoA 2."""
        rng = random.Random(7)
        for _ in range(40):
            cert = altruism_poa2_certificate(random_auction(rng, 3))
            assert cert.robust_bound(Orientation.MAXIMIZE) == 2

    def test_tight_example(self):
        """Test the friendship equilibrium with welfare ratio 2."""
        tight = tight_example()
        assert tight.verify()
        assert tight.ratio() == 2

    def test_coarse_ratio_of_tight_example(self):
        """Test the coarse ratio of the tight equilibrium."""
        tight = tight_example()
        sigma = FiniteSupportDistribution.point_mass(tight.equilibrium)
        result = friendship_coarse_poa_check(tight.auction, tight.alpha, [sigma])
        assert result.holds
        assert result.max_ratio == 2

    def test_non_coarse_candidate(self):
        """Test the all-zero profile is not stable."""
        tight = tight_example()
        with pytest.raises(ParameterError):
            friendship_coarse_poa_check(tight.auction, tight.alpha, [FiniteSupportDistribution.point_mass((0, 0))])

    def test_friendship_nash_inequality(self):
        """Test the per-equilibrium inequality on the tight example."""
        tight = tight_example()
        assert friendship_nash_inequality_check(tight.auction, tight.alpha)

    def test_random_auction_is_seeded(self):
        """Test the generator is deterministic per seed."""
        assert random_auction(random.Random(1), 3) == random_auction(random.Random(1), 3)
