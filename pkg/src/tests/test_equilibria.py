"""Unit tests for optima, equilibria, dynamics and PoA."""

from fractions import Fraction

from src.models import FiniteSupportDistribution, Orientation, table_game
from src.services.equilibria import (
    DynamicsStatus,
    all_optima,
    best_response,
    best_response_dynamics,
    coarse_poa_of,
    enumerate_pure_nash,
    equilibrium_report,
    expected_social_cost,
    is_coarse_equilibrium,
    is_mixed_equilibrium,
    is_pure_nash,
    poa_sweep,
    pure_poa,
    social_optimum,
)

HALF = Fraction(1, 2)


def dilemma():
    return table_game([2, 2], [[1, 3, 0, 2], [1, 0, 3, 2]], name="dilemma")


def pennies():
    return table_game([2, 2], [[0, 1, 1, 0], [1, 0, 0, 1]], name="pennies")


class TestOptima:
    """Tests for optimum search."""

    def test_social_optimum(self):
        """Test the cooperative profile is optimal."""
        assert social_optimum(dilemma()) == ((0, 0), 2)

    def test_all_optima_lists_ties(self):
        """Test that tied optima are all returned in order."""
        optima, value = all_optima(pennies())
        assert value == 1
        assert optima == [(0, 0), (0, 1), (1, 0), (1, 1)]


class TestPureNash:
    """Tests for pure Nash equilibria."""

    def test_dilemma_equilibrium(self):
        """Test that mutual defection is the unique equilibrium."""
        assert enumerate_pure_nash(dilemma()) == [(1, 1)]

    def test_witness_is_first_improving_deviation(self):
        """Test the witness of a non-equilibrium."""
        verdict = is_pure_nash(dilemma(), (0, 0))
        assert not verdict
        assert verdict.witness == (0, 1)

    def test_best_response(self):
        """Test the best response against cooperation."""
        assert best_response(dilemma(), 0, (0, 0)) == (1, Fraction(0))

    def test_no_pure_equilibrium(self):
        """Test matching pennies has no pure equilibrium."""
        result = pure_poa(pennies())
        assert result.no_equilibrium
        assert result.value is None


class TestPriceOfAnarchy:
    """Tests for pure_poa."""

    def test_dilemma_poa(self):
        """Test PoA 2 of the dilemma."""
        result = pure_poa(dilemma())
        assert result.value == 2
        assert result.worst_equilibrium == (1, 1)
        assert result.optimum == (0, 0)

    def test_infinite_poa(self):
        """Test a zero optimum with a costly equilibrium."""
        game = table_game([2], [[0, 1]], social=[1, 0])
        result = pure_poa(game)
        assert result.infinite
        assert result.value is None

    def test_maximization(self):
        """Test a payoff game attaining its optimum."""
        game = table_game([2], [[1, 2]], orientation=Orientation.MAXIMIZE)
        assert pure_poa(game).value == 1

    def test_report(self):
        """Test the equilibrium report summary."""
        report = equilibrium_report(dilemma())
        assert report.optima == [(0, 0)]
        assert report.poa == 2
        assert report.equilibrium_costs == [4]

    def test_sweep_reports_worst_ratio(self):
        """Test that a sweep keeps the worst ratio seen."""
        result = poa_sweep(lambda rng: dilemma(), count=3, seed=1)
        assert result.max_ratio == 2
        assert result.worst_index == 0


class TestCoarseEquilibria:
    """Tests for coarse and mixed equilibria."""

    def test_point_mass_equilibrium(self):
        """Test that a pure equilibrium is a coarse equilibrium."""
        sigma = FiniteSupportDistribution.point_mass((1, 1))
        assert is_coarse_equilibrium(dilemma(), sigma)
        assert coarse_poa_of(dilemma(), sigma, Fraction(2)) == 2

    def test_point_mass_non_equilibrium(self):
        """Test that cooperation is not coarse stable."""
        assert not is_coarse_equilibrium(dilemma(), FiniteSupportDistribution.point_mass((0, 0)))

    def test_uniform_pennies(self):
        """Test the uniform mixed equilibrium of matching pennies."""
        mix = ((0, HALF), (1, HALF))
        assert is_mixed_equilibrium(pennies(), [mix, mix])
        assert not is_mixed_equilibrium(pennies(), [((0, 1),), mix])

    def test_expected_social_cost(self):
        """Test the expectation of a two-point mixture."""
        sigma = FiniteSupportDistribution((((0, 0), HALF), ((1, 1), HALF)))
        assert expected_social_cost(dilemma(), sigma) == 3
        assert expected_social_cost(dilemma(), FiniteSupportDistribution.point_mass((1, 0))) == 3


class TestDynamics:
    """Tests for best-response dynamics."""

    def test_converges_to_equilibrium(self):
        """Test the trajectory from cooperation."""
        result = best_response_dynamics(dilemma(), (0, 0))
        assert result.trajectory == [(0, 0), (1, 0), (1, 1)]
        assert result.steps == 2
        assert result.status is DynamicsStatus.CONVERGED

    def test_step_limit(self):
        """Test that cycling dynamics hit the step limit."""
        result = best_response_dynamics(pennies(), (0, 0), max_steps=5)
        assert result.status is DynamicsStatus.STEP_LIMIT
        assert result.steps == 5
