"""Unit tests for scheduling games."""

import random
from fractions import Fraction

import pytest

from src.errors import ParameterError, UnsupportedInstanceError
from src.models import FriendshipMatrix
from src.services.scheduling import (
    Environment,
    SchedulingInstance,
    brute_force_optimum,
    check_weight_condition,
    cole_inequality_check,
    completion_times,
    direct_mixed_cost,
    friendship_pure_poa_check,
    linear_weights_inequality,
    machine_order,
    mft_schedule,
    mixed_lower_bound_instance,
    optimal_cost_closed_form,
    p_friendship_certificate,
    random_identical_instance,
    random_uniform_instance,
    random_weight_condition_instance,
    restricted_instance,
    rpoa_p_certificate,
    scheduling_game,
    smith_exchange_check,
    uniform_mixed_cost,
    weight_counterexample,
    weighted_scg_chain_check,
    weighted_social_cost,
)


def three_jobs():
    return SchedulingInstance.identical([3, 1, 2], 2)


class TestInstances:
    """Tests for instance construction and Smith's rule."""

    def test_identical_environment(self):
        """Test unit speeds give a P instance."""
        assert three_jobs().environment is Environment.IDENTICAL
        assert SchedulingInstance.uniform([1], [2]).environment is Environment.UNIFORM

    def test_smith_order(self):
        """Test shorter jobs go first on a machine."""
        instance = SchedulingInstance.unrelated([[2, 1]], [1, 1])
        assert completion_times(instance, (0, 0)) == (3, 1)

    def test_zero_weight_jobs_go_last(self):
        """Test that weight-zero jobs are sequenced after weighted ones."""
        instance = SchedulingInstance.unrelated([[1, 1]], [0, 1])
        assert completion_times(instance, (0, 0)) == (2, 1)

    def test_machine_order_and_cost(self):
        """Test SPT order on identical machines and the summed cost."""
        instance = three_jobs()
        assert machine_order(instance, 0, {0, 1, 2}) == [1, 2, 0]
        assert weighted_social_cost(instance, (0, 0, 1)) == 7
        assert weighted_social_cost(instance, (-1, -1, -1)) == 0

    def test_nonpositive_processing_rejected(self):
        """Test processing times must be positive."""
        with pytest.raises(ParameterError):
            SchedulingInstance.unrelated([[0, 1]], [1, 1])

    def test_game_weights(self):
        """Test the scheduling game carries positive job weights."""
        instance = SchedulingInstance.unrelated([[1, 2]], [2, 1])
        game, _ = scheduling_game(instance)
        assert game.weights == (2, 1)
        assert not game.sum_bounded
        assert game.social_cost((0, 0)) == 2 * 1 + 1 * 3


class TestWeightCondition:
    """Tests for the ratio/weight consistency condition."""

    def test_violation_witness(self):
        """Test a heavier job with a smaller ratio violates the condition."""
        instance = SchedulingInstance.unrelated([[1, 1]], [2, 1])
        verdict = check_weight_condition(instance)
        assert not verdict
        assert verdict.witness == (0, 0, 1)

    def test_unit_weights_hold(self):
        """Test unit weights always satisfy the condition."""
        assert check_weight_condition(three_jobs())

    def test_random_instances_hold(self):
        """Test generated instances satisfy the condition."""
        rng = random.Random(3)
        for _ in range(5):
            assert check_weight_condition(random_weight_condition_instance(rng, 2, 3))

    def test_counterexample(self):
        """Test the weight counterexample reaches (m + 1) / 2."""
        counterexample = weight_counterexample(3)
        assert counterexample.verify()
        assert counterexample.ratio() == 2
        assert not check_weight_condition(counterexample.instance)

    def test_counterexample_needs_two_machines(self):
        """Test m = 1 is rejected."""
        with pytest.raises(ParameterError):
            weight_counterexample(1)


class TestOptimum:
    """Tests for optimal schedules on identical machines."""

    def test_mft_schedule(self):
        """Test longest jobs are spread first."""
        assert mft_schedule(three_jobs()) == (0, 0, 1)

    def test_closed_form_matches_brute_force(self):
        """Test the closed form against enumeration."""
        instance = three_jobs()
        assert optimal_cost_closed_form(instance) == 7
        assert brute_force_optimum(instance)[1] == 7

    def test_random_closed_form(self):
        """Test the closed form on random identical instances."""
        rng = random.Random(11)
        for _ in range(5):
            instance = random_identical_instance(rng, 2, 4)
            assert optimal_cost_closed_form(instance) == brute_force_optimum(instance)[1]

    def test_mft_on_uniform_machines(self):
        """Test MFT matches the brute-force optimum on random related-machine instances."""
        rng = random.Random(17)
        for _ in range(10):
            instance = random_uniform_instance(rng, rng.randint(2, 3), rng.randint(2, 5))
            assert weighted_social_cost(instance, mft_schedule(instance)) == brute_force_optimum(instance)[1]

    def test_mft_rejects_unrelated(self):
        """Test MFT needs uniform or identical machines."""
        with pytest.raises(UnsupportedInstanceError):
            mft_schedule(SchedulingInstance.unrelated([[1]], [1]))


class TestMixedDeviation:
    """Tests for the uniform random deviation."""

    def test_closed_form_matches_simulation(self):
        """Test the closed form against direct evaluation."""
        instance = three_jobs()
        assert uniform_mixed_cost(instance) == 8
        assert direct_mixed_cost(instance, (0, 0, 1)) == 8

    def test_lower_bound_instance(self):
        """Test the mixed cost of m unit jobs on m machines."""
        instance = mixed_lower_bound_instance(6)
        assert uniform_mixed_cost(instance) == Fraction(17, 2)
        assert uniform_mixed_cost(instance) / optimal_cost_closed_form(instance) == Fraction(17, 12)

    def test_rpoa_certificate(self):
        """Test the selfish certificate gives 3/2 - 1/(2m)."""
        cert = rpoa_p_certificate(mixed_lower_bound_instance(2))
        assert cert.lam == Fraction(5, 4)
        assert cert.robust_bound() == Fraction(5, 4)

    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
    def test_rpoa_certificate_exhaustive(self, m):
        """Test the uniform deviation bound on every schedule while m * n <= 12."""
        rng = random.Random(m)
        for n in range(1, 12 // m + 1):
            unit = SchedulingInstance.identical([1] * n, m)
            cert = rpoa_p_certificate(unit)
            if n == m:
                assert cert.robust_bound() == Fraction(3, 2) - Fraction(1, 2 * m)
            for _ in range(3):
                rpoa_p_certificate(random_identical_instance(rng, m, n))

    def test_friendship_certificate(self):
        """Test the (2, 0) certificate on the social contribution game."""
        cert = p_friendship_certificate(three_jobs())
        assert cert.robust_bound() == 2

    def test_linear_weights_inequality(self):
        """Test the averaging inequality and its input checks."""
        assert linear_weights_inequality([1, 1], 2)
        assert linear_weights_inequality([1, 2, 5], 3)
        with pytest.raises(ParameterError):
            linear_weights_inequality([2, 1], 2)


class TestFriendshipBound:
    """Tests for the friendship PoA on identical machines."""

    def test_equilibria_within_two(self):
        """Test every friendship equilibrium costs at most twice the optimum."""
        alpha = FriendshipMatrix.uniform(3, Fraction(1, 2))
        assert friendship_pure_poa_check(three_jobs(), alpha)

    def test_chain_inequalities(self):
        """Test the completion-time inequalities on one pair of schedules."""
        instance = SchedulingInstance.unrelated([[1, 2], [2, 1]], [1, 1])
        assert cole_inequality_check(instance, (0, 0), (0, 1))
        assert weighted_scg_chain_check(instance, (0, 0), (0, 1))


class TestRestrictions:
    """Tests for restricted assignment and exchange arguments."""

    def test_restricted_instance(self):
        """Test forbidden machines get a prohibitive time."""
        restricted = restricted_instance(SchedulingInstance.identical([1, 1], 2), [{0}, {0, 1}])
        assert restricted.processing[1][0] == 3
        assert restricted.processing[1][1] == 1

    def test_empty_allowed_set(self):
        """Test every job needs an allowed machine."""
        with pytest.raises(ParameterError):
            restricted_instance(SchedulingInstance.identical([1], 1), [set()])

    def test_smith_exchange(self):
        """Test Smith order is locally optimal."""
        instance = SchedulingInstance.unrelated([[3, 1, 2]], [1, 2, 1])
        assert smith_exchange_check(instance, 0, [0, 1, 2])
