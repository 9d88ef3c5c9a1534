"""Unit tests for congestion games and the 17/3 family."""

import random
from fractions import Fraction

import pytest

from src.errors import ParameterError
from src.models.game import deviate
from src.services.congestion import (
    CongestionGame,
    LinearDelay,
    banded_optimum,
    bilo_chain_inequality,
    bilo_inequality,
    christodoulou_inequality_check,
    congestion_game,
    family_optimum,
    lower_bound_family,
    normalize_to_identity,
    random_identity_game,
    rosenthal_potential,
    scg_chain_check,
    verify_lower_bound_family,
)
from src.services.equilibria import enumerate_pure_nash


def two_links():
    return CongestionGame((LinearDelay(), LinearDelay()), (({0}, {1}), ({0}, {1})))


class TestCongestionGame:
    """Tests for the congestion model."""

    def test_costs(self):
        """Test player and social costs under identity delays."""
        cg = two_links()
        assert cg.loads((0, 0)) == [2, 0]
        assert cg.player_cost(1, (0, 0)) == 2
        assert cg.social_cost((0, 0)) == 4

    def test_negative_delay_rejected(self):
        """Test delay coefficients must be nonnegative."""
        with pytest.raises(ParameterError):
            CongestionGame((LinearDelay(Fraction(-1)),), (({0},),))

    def test_unknown_resource_rejected(self):
        """Test strategies must use known resources."""
        with pytest.raises(ParameterError):
            CongestionGame((LinearDelay(),), (({1},),))

    def test_finite_game(self):
        """Test the finite game and its defaults."""
        game, defaults = congestion_game(two_links())
        assert game.sum_bounded
        assert game.social_cost((0, 1)) == 2
        assert defaults.social(game, (-1, 0)) == 1

    def test_rosenthal_potential_is_exact(self):
        """Test potential differences equal cost differences."""
        rng = random.Random(5)
        cg = random_identity_game(rng, players=3, strategies=2, resources=3)
        s = (0, 0, 0)
        for i in range(3):
            moved = deviate(s, i, 1)
            assert rosenthal_potential(cg, moved) - rosenthal_potential(cg, s) == (
                cg.player_cost(i, moved) - cg.player_cost(i, s)
            )

    def test_random_game_is_seeded(self):
        """Test the generator is deterministic per seed."""
        first = random_identity_game(random.Random(2), 2, 2, 3)
        second = random_identity_game(random.Random(2), 2, 2, 3)
        assert first == second
        assert first.is_identity()


class TestNormalization:
    """Tests for rewriting affine delays with identity resources."""

    def test_affine_delay(self):
        """Test 2x + 1 becomes two shared and one private identity resource."""
        cg = CongestionGame((LinearDelay(Fraction(2), Fraction(1)),), (({0},), ({0},)))
        identity, scale = normalize_to_identity(cg)
        assert scale == 1
        assert identity.is_identity()
        assert identity.player_cost(0, (0, 0)) == cg.player_cost(0, (0, 0)) == 5

    def test_fractional_delay_is_scaled(self):
        """Test rational coefficients are cleared by the scale."""
        cg = CongestionGame((LinearDelay(Fraction(1, 2)),), (({0},),))
        identity, scale = normalize_to_identity(cg)
        assert scale == 2
        assert identity.player_cost(0, (0,)) == scale * cg.player_cost(0, (0,))

    def test_nash_set_is_preserved(self):
        """Test random affine games keep their equilibria and scaled costs."""
        rng = random.Random(3)
        for _ in range(10):
            shape = random_identity_game(rng, players=rng.randint(2, 3), strategies=2, resources=3)
            delays = tuple(
                LinearDelay(Fraction(rng.randint(0, 3), rng.randint(1, 2)), Fraction(rng.randint(0, 2), rng.randint(1, 3)))
                for _ in shape.delays
            )
            cg = CongestionGame(delays, shape.strategies)
            identity, scale = normalize_to_identity(cg)
            original, _ = congestion_game(cg)
            normalized, _ = congestion_game(identity)
            assert enumerate_pure_nash(normalized) == enumerate_pure_nash(original)
            for s in original.profiles():
                assert normalized.social_cost(s) == scale * original.social_cost(s)


class TestInequalities:
    """Tests for the per-resource inequalities behind the bounds."""

    def test_chain_inequality_grid(self):
        """Test the chain inequality for all loads up to 100."""
        assert all(bilo_chain_inequality(a, b) for a in range(101) for b in range(101))

    def test_cubic_inequality_grid(self):
        """Test the cubic inequality for all loads up to 100."""
        assert all(bilo_inequality(a, b) for a in range(101) for b in range(101))

    def test_negative_rejected(self):
        """Test arguments must be natural numbers."""
        with pytest.raises(ParameterError):
            bilo_chain_inequality(-1, 0)

    def test_profile_checks(self):
        """Test both profile inequalities on two links."""
        cg = two_links()
        assert christodoulou_inequality_check(cg, (0, 0), (0, 1))
        assert scg_chain_check(cg, (0, 0), (0, 1))

    def test_profile_checks_need_identity(self):
        """Test non-identity delays are rejected."""
        cg = CongestionGame((LinearDelay(Fraction(2)),), (({0},),))
        with pytest.raises(ParameterError):
            scg_chain_check(cg, (0,), (0,))


class TestBandedOptimum:
    """Tests for the block dynamic program."""

    def test_matches_brute_force(self):
        """Test the optimum of two links."""
        profile, value = banded_optimum(two_links(), [[0], [1]])
        assert value == 2
        assert two_links().social_cost(profile) == 2

    def test_blocks_must_partition(self):
        """Test missing players are rejected."""
        with pytest.raises(ParameterError):
            banded_optimum(two_links(), [[0]])


class TestLowerBoundFamily:
    """Tests for the friendship lower-bound family."""

    def test_roles(self):
        """Test player numbering by role and block."""
        family = lower_bound_family(1)
        assert family.player("b", 1) == 4
        assert len(family.blocks) == 4
        assert family.game.n_players == 12

    def test_empty_chain(self):
        """Test the boundary constants with no interior blocks."""
        result = verify_lower_bound_family(lower_bound_family(0))
        assert result.holds
        assert result.ratio == Fraction(45, 34)

    def test_small_member_exhaustive(self):
        """Test n = 1 against brute force."""
        result = verify_lower_bound_family(lower_bound_family(1))
        assert result.holds
        assert result.exhaustive_agrees
        assert result.ratio == Fraction(17 + 45, 3 + 34)

    def test_family_optimum(self):
        """Test the dynamic program attains the verified optimum."""
        family = lower_bound_family(1)
        profile, value = family_optimum(family)
        assert family.game.social_cost(profile) == value
        assert value == verify_lower_bound_family(family).optimum

    @pytest.mark.parametrize("n", [5, 20])
    def test_ratio_formula(self, n):
        """Test the ratio (17n + 45) / (3n + 34)."""
        result = verify_lower_bound_family(lower_bound_family(n))
        assert result.holds
        assert result.ratio == Fraction(17 * n + 45, 3 * n + 34)
        assert result.exhaustive_agrees is None
        assert result.exact_ratio >= result.ratio

    def test_negative_n(self):
        """Test n must be nonnegative."""
        with pytest.raises(ParameterError):
            lower_bound_family(-1)
