"""Unit tests for games, parameters, distributions and certificates."""

from fractions import Fraction

import pytest

from src.errors import BudgetExceededError, EvaluationError, ParameterError
from src.models import (
    DEFAULT,
    AltruismVector,
    CertificateFlavor,
    DefaultStrategyMap,
    FiniteSupportDistribution,
    FriendshipMatrix,
    Orientation,
    SmoothnessCertificate,
    altruistic_extension,
    evaluate_with_defaults,
    friendship_extension,
    product_distribution,
    table_game,
)
from src.models.game import deviate, is_sum_bounded, is_weight_bounded


def dilemma():
    return table_game([2, 2], [[1, 3, 0, 2], [1, 0, 3, 2]], name="dilemma")


class TestTableGame:
    """Tests for table_game and FiniteGame."""

    def test_costs_follow_lexicographic_order(self):
        """Test that tables are read in lexicographic profile order."""
        game = dilemma()
        assert game.cost(0, (1, 0)) == 0
        assert game.cost(1, (1, 0)) == 3
        assert game.social_cost((1, 1)) == 4

    def test_sum_social_cost_is_declared_sum_bounded(self):
        """Test that a summed social cost is declared sum-bounded."""
        game = dilemma()
        assert game.sum_bounded
        assert is_sum_bounded(game)

    def test_explicit_social_cost(self):
        """Test that an explicit social table is used as given."""
        game = table_game([2, 2], [[1, 3, 0, 2], [1, 0, 3, 2]], social=[5, 5, 5, 5])
        assert game.social_cost((0, 0)) == 5
        assert not game.sum_bounded
        assert not is_sum_bounded(game)

    def test_wrong_table_size_raises(self):
        """Test that a short cost table is rejected."""
        with pytest.raises(ParameterError):
            table_game([2, 2], [[1, 2, 3], [1, 2, 3, 4]])

    def test_budget_is_enforced(self):
        """Test that enumeration beyond the budget raises."""
        game = dilemma()
        with pytest.raises(BudgetExceededError):
            list(game.profiles(budget=3))
        assert len(list(game.profiles(budget=4))) == 4

    def test_nonpositive_weights_raise(self):
        """Test that weights must be positive."""
        with pytest.raises(ParameterError):
            table_game([2, 2], [[1, 3, 0, 2], [1, 0, 3, 2]], weights=[1, 0])

    def test_weight_bounded(self):
        """Test the weighted bound with weights above one."""
        game = dilemma()
        assert is_weight_bounded(game, [2, 2])
        assert not is_weight_bounded(game, [Fraction(1, 2), Fraction(1, 2)])

    def test_validate_profile(self):
        """Test bounds checking of profiles."""
        game = dilemma()
        assert game.validate_profile([0, 1]) == (0, 1)
        with pytest.raises(EvaluationError):
            game.validate_profile((0, 2))
        with pytest.raises(EvaluationError):
            game.validate_profile((DEFAULT, 0))

    def test_deviate(self):
        """Test unilateral deviation."""
        assert deviate((0, 1, 2), 1, 5) == (0, 5, 2)

    def test_orientation_helpers(self):
        """Test orientation-aware comparisons."""
        assert Orientation.MINIMIZE.improves(Fraction(1), Fraction(2))
        assert Orientation.MAXIMIZE.improves(Fraction(2), Fraction(1))
        assert Orientation.MAXIMIZE.at_most(Fraction(3), Fraction(2))
        assert Orientation.MAXIMIZE.best([Fraction(1), Fraction(4)]) == 4


class TestExtensions:
    """Tests for altruistic and friendship extensions."""

    def test_full_altruism_perceives_social_cost(self):
        """Test that α = 1 players perceive the social cost."""
        game = altruistic_extension(dilemma(), AltruismVector.uniform(2, 1))
        assert game.cost(0, (1, 0)) == 3
        assert game.social_cost((1, 0)) == 3

    def test_partial_altruism(self):
        """Test the convex combination of own and social cost."""
        game = altruistic_extension(dilemma(), AltruismVector((Fraction(1, 2), 0)))
        assert game.cost(0, (0, 0)) == Fraction(3, 2)
        assert game.cost(1, (0, 0)) == 1

    def test_friendship_adds_weighted_friend_costs(self):
        """Test perceived costs under a friendship matrix."""
        alpha = FriendshipMatrix.from_entries(2, {(0, 1): Fraction(1, 2)})
        game = friendship_extension(dilemma(), alpha)
        assert game.cost(0, (1, 0)) == Fraction(3, 2)
        assert game.cost(1, (1, 0)) == 3

    def test_size_mismatch_raises(self):
        """Test that parameters must match the player count."""
        with pytest.raises(ParameterError):
            altruistic_extension(dilemma(), AltruismVector.zeros(3))
        with pytest.raises(ParameterError):
            friendship_extension(dilemma(), FriendshipMatrix.identity(3))


class TestDefaults:
    """Tests for DefaultStrategyMap."""

    def test_alias_defaults(self):
        """Test that aliased defaults evaluate as the aliased strategy."""
        defaults = DefaultStrategyMap.from_aliases([1, None])
        costs, social = evaluate_with_defaults(dilemma(), defaults, (DEFAULT, 0))
        assert costs == (Fraction(0), Fraction(3))
        assert social == 3

    def test_unregistered_default_raises(self):
        """Test that a missing default is an evaluation error."""
        defaults = DefaultStrategyMap.from_aliases([1, None])
        with pytest.raises(EvaluationError):
            evaluate_with_defaults(dilemma(), defaults, (0, DEFAULT))

    def test_evaluated_defaults(self):
        """Test that native defaults go through the extended evaluators."""
        defaults = DefaultStrategyMap.evaluated(
            2,
            cost=lambda i, s: Fraction(0) if s[i] == DEFAULT else Fraction(7),
            social_cost=lambda s: Fraction(sum(1 for k in s if k != DEFAULT)),
        )
        costs, social = evaluate_with_defaults(dilemma(), defaults, (DEFAULT, 1))
        assert costs == (Fraction(0), Fraction(7))
        assert social == 1
        assert defaults.has_default(1)


class TestParameters:
    """Tests for AltruismVector and FriendshipMatrix."""

    def test_altruism_range(self):
        """Test that standard altruism stays in [0, 1]."""
        with pytest.raises(ParameterError):
            AltruismVector((Fraction(3, 2),))
        assert AltruismVector((Fraction(-1),), extended=True)[0] == -1

    def test_friendship_diagonal_is_one(self):
        """Test that diagonal entries other than 1 are rejected."""
        with pytest.raises(ParameterError):
            FriendshipMatrix.from_entries(2, {(0, 0): Fraction(1, 2)})
        assert FriendshipMatrix.identity(2)[1, 1] == 1

    def test_friendship_entry_range(self):
        """Test that affection stays in [0, 1]."""
        with pytest.raises(ParameterError):
            FriendshipMatrix.from_entries(2, {(0, 1): 2})

    def test_dense_round_trip(self):
        """Test dense conversion of a sparse matrix."""
        dense = [[1, Fraction(1, 3)], [0, 1]]
        alpha = FriendshipMatrix.from_dense(dense)
        assert alpha.to_dense() == [[1, Fraction(1, 3)], [0, 1]]
        assert list(alpha.entries()) == [(0, 1, Fraction(1, 3))]

    def test_from_altruism(self):
        """Test the friendship matrix induced by altruism levels."""
        alpha = FriendshipMatrix.from_altruism(AltruismVector((Fraction(1, 4), 0, 1)))
        assert alpha[0, 2] == Fraction(1, 4)
        assert alpha.friends(1) == ()
        assert alpha[2, 0] == 1


class TestDistributions:
    """Tests for finite-support distributions."""

    def test_probabilities_must_sum_to_one(self):
        """Test that improper distributions are rejected."""
        with pytest.raises(ParameterError):
            FiniteSupportDistribution((((0, 0), Fraction(1, 2)),))

    def test_product_distribution(self):
        """Test the product of two uniform mixes."""
        half = Fraction(1, 2)
        sigma = product_distribution([[(0, half), (1, half)], [(1, 1)]])
        assert len(sigma) == 2
        assert dict(sigma.support) == {(0, 1): half, (1, 1): half}

    def test_point_mass(self):
        """Test a point mass."""
        assert FiniteSupportDistribution.point_mass([1, 0]).support == (((1, 0), Fraction(1)),)


class TestCertificate:
    """Tests for SmoothnessCertificate."""

    def test_robust_bound_minimize(self):
        """Test λ/(1−μ) for cost games."""
        cert = SmoothnessCertificate.pure_deviation(Fraction(17, 5), Fraction(2, 5), (0,), (0,))
        assert cert.robust_bound() == Fraction(17, 3)
        assert cert.is_pure

    def test_robust_bound_maximize(self):
        """Test (1−μ)/λ for payoff games."""
        cert = SmoothnessCertificate.pure_deviation(1, -1, (0,), (0,), CertificateFlavor.ALTRUISTIC)
        assert cert.robust_bound(Orientation.MAXIMIZE) == 2

    def test_mu_below_one(self):
        """Test that μ >= 1 is rejected."""
        with pytest.raises(ParameterError):
            SmoothnessCertificate.pure_deviation(1, 1, (0,), (0,))

    def test_lambda_nonnegative(self):
        """Test that negative λ is rejected."""
        with pytest.raises(ParameterError):
            SmoothnessCertificate.pure_deviation(-1, 0, (0,), (0,))
