"""Min-sum machine scheduling games.

Each job picks a machine; every machine sequences its jobs by Smith's rule
(increasing ρ_ij = p_ij / w_j, zero-weight jobs last, ties by job index).
A job's cost is its completion time and the social cost is Σ_j w_j C_j.
"""

import logging
import random
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Collection, Optional, Sequence

from ..errors import CertificateError, ParameterError, UnsupportedInstanceError
from ..models.certificate import CertificateFlavor, SmoothnessCertificate
from ..models.distribution import MixedStrategy, uniform_mix
from ..models.game import DEFAULT, DefaultStrategyMap, FiniteGame, Profile, deviate, friendship_extension
from ..models.parameters import FriendshipMatrix
from ..models.verdict import Verdict
from .equilibria import enumerate_pure_nash, is_pure_nash, social_optimum
from .social_contribution import check_smoothness_base, corresponding_scg

logger = logging.getLogger(__name__)

Schedule = Profile


class Environment(str, Enum):
    """Machine environment in three-field notation."""
    UNRELATED = "R"
    UNIFORM = "Q"
    IDENTICAL = "P"


@dataclass(frozen=True)
class SchedulingInstance:
    """Jobs, machines and processing times.

    Attributes:
        processing: p[i][j], processing time of job j on machine i
        weights: w_j >= 0 per job
        environment: R, Q or P
        sizes: p_j for Q and P instances
        speeds: s_i for Q and P instances
    """
    processing: tuple[tuple[Fraction, ...], ...]
    weights: tuple[Fraction, ...]
    environment: Environment = Environment.UNRELATED
    sizes: Optional[tuple[Fraction, ...]] = None
    speeds: Optional[tuple[Fraction, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "processing", tuple(tuple(Fraction(p) for p in row) for row in self.processing))
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))
        if not self.processing or not self.weights:
            raise ParameterError("an instance needs at least one machine and one job")
        for row in self.processing:
            if len(row) != self.n:
                raise ParameterError(f"every machine needs {self.n} processing times")
            if any(p <= 0 for p in row):
                raise ParameterError("processing times must be positive")
        if any(w < 0 for w in self.weights):
            raise ParameterError("weights must be nonnegative")
        if self.environment is not Environment.UNRELATED:
            if self.sizes is None or self.speeds is None:
                raise ParameterError(f"environment {self.environment.value} needs sizes and speeds")
            for i, s in enumerate(self.speeds):
                if any(self.processing[i][j] != p / s for j, p in enumerate(self.sizes)):
                    raise ParameterError("uniform machines need p_ij = p_j / s_i")
            if self.environment is Environment.IDENTICAL and any(s != 1 for s in self.speeds):
                raise ParameterError("identical machines have unit speed")

    @property
    def m(self) -> int:
        return len(self.processing)

    @property
    def n(self) -> int:
        return len(self.weights)

    @classmethod
    def unrelated(cls, processing: Sequence[Sequence[Fraction]], weights: Sequence[Fraction]) -> "SchedulingInstance":
        return cls(tuple(tuple(row) for row in processing), tuple(weights))

    @classmethod
    def uniform(
        cls,
        sizes: Sequence[Fraction],
        speeds: Sequence[Fraction],
        weights: Optional[Sequence[Fraction]] = None,
    ) -> "SchedulingInstance":
        sizes = tuple(Fraction(p) for p in sizes)
        speeds = tuple(Fraction(s) for s in speeds)
        if any(s <= 0 for s in speeds):
            raise ParameterError("speeds must be positive")
        environment = Environment.IDENTICAL if all(s == 1 for s in speeds) else Environment.UNIFORM
        return cls(
            processing=tuple(tuple(p / s for p in sizes) for s in speeds),
            weights=tuple(weights) if weights is not None else tuple(Fraction(1) for _ in sizes),
            environment=environment,
            sizes=sizes,
            speeds=speeds,
        )

    @classmethod
    def identical(cls, sizes: Sequence[Fraction], m: int, weights: Optional[Sequence[Fraction]] = None) -> "SchedulingInstance":
        if m < 1:
            raise ParameterError("at least one machine is required")
        return cls.uniform(sizes, [Fraction(1)] * m, weights)

    def rho(self, machine: int, job: int) -> Optional[Fraction]:
        """ρ_ij = p_ij / w_j, or None for +∞ when w_j = 0."""
        w = self.weights[job]
        return None if w == 0 else self.processing[machine][job] / w

    def has_unit_weights(self) -> bool:
        return all(w == 1 for w in self.weights)


def _smith_key(instance: SchedulingInstance, machine: int, job: int) -> tuple:
    rho = instance.rho(machine, job)
    return (1, Fraction(0), job) if rho is None else (0, rho, job)


def machine_order(instance: SchedulingInstance, machine: int, jobs: Collection[int]) -> list[int]:
    """Jobs in Smith order on ``machine``."""
    return sorted(jobs, key=lambda j: _smith_key(instance, machine, j))


def _machine_loads(x: Schedule) -> dict[int, list[int]]:
    jobs: dict[int, list[int]] = defaultdict(list)
    for j, machine in enumerate(x):
        if machine != DEFAULT:
            jobs[machine].append(j)
    return jobs


def completion_times(instance: SchedulingInstance, x: Schedule) -> tuple[Fraction, ...]:
    """C_j(x); jobs set to DEFAULT use no machine and finish at 0."""
    times = [Fraction(0)] * instance.n
    for machine, jobs in _machine_loads(x).items():
        elapsed = Fraction(0)
        for j in machine_order(instance, machine, jobs):
            elapsed += instance.processing[machine][j]
            times[j] = elapsed
    return tuple(times)


def weighted_social_cost(instance: SchedulingInstance, x: Schedule) -> Fraction:
    return sum((w * c for w, c in zip(instance.weights, completion_times(instance, x))), Fraction(0))


def check_weight_condition(instance: SchedulingInstance) -> Verdict:
    """Check that ρ_ij <= ρ_ik implies w_j <= w_k; the witness is (i, j, k)."""
    for i in range(instance.m):
        for j in range(instance.n):
            for k in range(instance.n):
                if j == k or instance.weights[j] <= instance.weights[k]:
                    continue
                rho_j, rho_k = instance.rho(i, j), instance.rho(i, k)
                if rho_k is None or (rho_j is not None and rho_j <= rho_k):
                    return Verdict.fail(witness=(i, j, k), condition="weight")
    return Verdict.ok()


def scheduling_game(instance: SchedulingInstance) -> tuple[FiniteGame, DefaultStrategyMap]:
    """The scheduling game and its "use no machine" defaults."""

    @lru_cache(maxsize=65536)
    def times(x: Schedule) -> tuple[Fraction, ...]:
        return completion_times(instance, x)

    def cost(j: int, x: Schedule) -> Fraction:
        return times(x)[j]

    def social(x: Schedule) -> Fraction:
        return sum((w * c for w, c in zip(instance.weights, times(x))), Fraction(0))

    positive = all(w > 0 for w in instance.weights)
    game = FiniteGame(
        strategy_counts=(instance.m,) * instance.n,
        cost=cost,
        social_cost=social,
        weights=instance.weights if positive else None,
        name=f"{instance.environment.value}|{instance.m}x{instance.n}",
        sum_bounded=all(w <= 1 for w in instance.weights),
        weight_bounded=positive,
    )
    return game, DefaultStrategyMap.evaluated(instance.n, cost, social)


def jobs_behind(instance: SchedulingInstance, x: Schedule, job: int) -> int:
    """h^x_{x_j}(j), the number of jobs sequenced after ``job`` on its machine."""
    machine = x[job]
    order = machine_order(instance, machine, _machine_loads(x)[machine])
    return len(order) - 1 - order.index(job)


def cole_inequality_check(instance: SchedulingInstance, x: Schedule, x_star: Schedule) -> bool:
    """The weighted completion-time inequality behind the (2, 1/2) certificate.

    Σ_i Σ_{j∈X*_i} w_j p_ij + Σ_i Σ_{j∈X*_i} Σ_{k∈X_i} w_j w_k min{ρ_ij, ρ_ik}
    <= 2 C(x*) + C(x) / 2. Pairs with a zero weight contribute nothing.
    """
    lhs = Fraction(0)
    loads = _machine_loads(x)
    for j, i in enumerate(x_star):
        w_j = instance.weights[j]
        lhs += w_j * instance.processing[i][j]
        if w_j == 0:
            continue
        for k in loads.get(i, []):
            w_k = instance.weights[k]
            if w_k == 0:
                continue
            lhs += w_j * w_k * min(instance.rho(i, j), instance.rho(i, k))
    rhs = 2 * weighted_social_cost(instance, x_star) + weighted_social_cost(instance, x) / 2
    return lhs <= rhs


def weighted_scg_chain_check(instance: SchedulingInstance, x: Schedule, x_star: Schedule) -> bool:
    """Σ_j C̄_j(x*_j, x_{-j}) <= 2 C(x*) + C(x) / 2."""
    total = Fraction(0)
    for j in range(instance.n):
        moved = deviate(x, j, x_star[j])
        total += weighted_social_cost(instance, moved) - weighted_social_cost(instance, deviate(x, j, DEFAULT))
    return total <= 2 * weighted_social_cost(instance, x_star) + weighted_social_cost(instance, x) / 2


def _require_environment(instance: SchedulingInstance, *allowed: Environment) -> None:
    if instance.environment not in allowed:
        names = "/".join(e.value for e in allowed)
        raise UnsupportedInstanceError(f"needs a {names} instance, got {instance.environment.value}")


def mft_schedule(instance: SchedulingInstance) -> Schedule:
    """Assign the longest remaining job to the machine minimizing (h_i + 1) / s_i.

    Raises:
        UnsupportedInstanceError: For unrelated machines or weighted jobs
    """
    _require_environment(instance, Environment.UNIFORM, Environment.IDENTICAL)
    if not instance.has_unit_weights():
        raise UnsupportedInstanceError("MFT minimizes unweighted total completion time")
    counts = [0] * instance.m
    x = [0] * instance.n
    for j in sorted(range(instance.n), key=lambda k: (-instance.sizes[k], k)):
        machine = min(range(instance.m), key=lambda i: ((counts[i] + 1) / instance.speeds[i], i))
        x[j] = machine
        counts[machine] += 1
    return tuple(x)


def optimal_cost_closed_form(instance: SchedulingInstance) -> Fraction:
    """Σ_j p_j (1 + ⌊(n - j)/m⌋) over jobs sorted by nondecreasing size."""
    _require_environment(instance, Environment.IDENTICAL)
    sizes = sorted(instance.sizes)
    n, m = instance.n, instance.m
    return sum((p * (1 + (n - j) // m) for j, p in enumerate(sizes, start=1)), Fraction(0))


def processing_lower_bound(instance: SchedulingInstance) -> Fraction:
    """Σ_j w_j min_i p_ij, a lower bound on every schedule's cost."""
    return sum(
        (w * min(instance.processing[i][j] for i in range(instance.m)) for j, w in enumerate(instance.weights)),
        Fraction(0),
    )


def brute_force_optimum(instance: SchedulingInstance, budget: Optional[int] = None) -> tuple[Schedule, Fraction]:
    game, _ = scheduling_game(instance)
    return social_optimum(game, budget)


def uniform_deviation(m: int) -> MixedStrategy:
    """Every machine with probability 1/m."""
    return uniform_mix(range(m))


def uniform_mixed_cost(instance: SchedulingInstance, x: Optional[Schedule] = None) -> Fraction:
    """Σ_j E[C_j(x̄_j, x_{-j})] for uniformly random single deviations.

    The value is (1/m) Σ_j p_j (m + n - j) over jobs sorted by size and does
    not depend on x.
    """
    _require_environment(instance, Environment.IDENTICAL)
    if not instance.has_unit_weights():
        raise UnsupportedInstanceError("the closed form assumes unit weights")
    if x is not None and len(x) != instance.n:
        raise ParameterError("schedule length does not match the instance")
    n, m = instance.n, instance.m
    ordered = sorted(range(n), key=lambda j: (instance.sizes[j], j))
    total = sum((instance.sizes[j] * (m + n - r) for r, j in enumerate(ordered, start=1)), Fraction(0))
    return total / m


def direct_mixed_cost(instance: SchedulingInstance, x: Schedule) -> Fraction:
    """Σ_j Σ_i (1/m) C_j(i, x_{-j}), evaluated by simulation."""
    total = Fraction(0)
    for j in range(instance.n):
        for i in range(instance.m):
            total += completion_times(instance, deviate(x, j, i))[j]
    return total / instance.m


def mixed_lower_bound_instance(m: int) -> SchedulingInstance:
    """m identical machines with m unit jobs."""
    if m < 1:
        raise ParameterError("at least one machine is required")
    return SchedulingInstance.identical([Fraction(1)] * m, m)


def rpoa_p_certificate(instance: SchedulingInstance, budget: Optional[int] = None) -> SmoothnessCertificate:
    """Certificate with the uniform deviation for identical machines.

    Verifies Σ_j E[C_j(x̄_j, x_{-j})] <= C(x*) + (1/2 - 1/(2m)) Σ_j p_j for
    every schedule x and returns it in (λ, 0) form, so the robust PoA is at
    most 3/2 - 1/(2m).

    Raises:
        CertificateError: If some schedule violates the inequality
    """
    _require_environment(instance, Environment.IDENTICAL)
    game, _ = scheduling_game(instance)
    x_star = mft_schedule(instance)
    optimum = weighted_social_cost(instance, x_star)
    slack = (Fraction(1, 2) - Fraction(1, 2 * instance.m)) * sum(instance.sizes, Fraction(0))
    cert = SmoothnessCertificate(
        lam=1 + slack / optimum,
        mu=Fraction(0),
        sbar=tuple(uniform_deviation(instance.m) for _ in range(instance.n)),
        sstar=x_star,
    )
    verdict = check_smoothness_base(game, cert, budget)
    if not verdict:
        raise CertificateError("uniform deviation bound failed", verdict.witness)
    return cert


def p_friendship_certificate(instance: SchedulingInstance, budget: Optional[int] = None) -> SmoothnessCertificate:
    """(2, 0) certificate with the uniform deviation on the social contribution game.

    Σ_j E[C̄_j(x̄_j, x_{-j})] = 2 Σ_j E[C_j(x̄_j, x_{-j})] - Σ_j p_j <= 2 C(x*).

    Raises:
        CertificateError: If some schedule violates the inequality
    """
    _require_environment(instance, Environment.IDENTICAL)
    game, defaults = scheduling_game(instance)
    cert = SmoothnessCertificate(
        lam=Fraction(2),
        mu=Fraction(0),
        sbar=tuple(uniform_deviation(instance.m) for _ in range(instance.n)),
        sstar=mft_schedule(instance),
        flavor=CertificateFlavor.BASE,
    )
    verdict = check_smoothness_base(corresponding_scg(game, defaults), cert, budget)
    if not verdict:
        raise CertificateError("friendship bound 2 failed", verdict.witness)
    return cert


def friendship_pure_poa_check(
    instance: SchedulingInstance, alpha: FriendshipMatrix, budget: Optional[int] = None
) -> Verdict:
    """Check C(x) <= 2 C(x*) for every pure Nash equilibrium of the friendship extension."""
    game, _ = scheduling_game(instance)
    _, optimum = social_optimum(game, budget)
    for x in enumerate_pure_nash(friendship_extension(game, alpha), budget):
        if game.social_cost(x) > 2 * optimum:
            return Verdict.fail(witness=x, condition="friendship-poa")
    return Verdict.ok()


def linear_weights_inequality(p: Sequence[Fraction], m: int) -> bool:
    """(1/2 - 1/(2m)) Σ_j p_j >= Σ_j ((m - j)/m) p_j for nondecreasing p of length m.

    Raises:
        ParameterError: If p is unsorted or has the wrong length
    """
    p = [Fraction(v) for v in p]
    if len(p) != m:
        raise ParameterError(f"expected {m} values, got {len(p)}")
    if any(a > b for a, b in zip(p, p[1:])):
        raise ParameterError("values must be nondecreasing")
    lhs = (Fraction(1, 2) - Fraction(1, 2 * m)) * sum(p, Fraction(0))
    rhs = sum((Fraction(m - j, m) * v for j, v in enumerate(p, start=1)), Fraction(0))
    return lhs >= rhs


@dataclass(frozen=True)
class WeightCounterexample:
    """Friendship equilibrium that is (m+1)/2 times worse than the optimum.

    Jobs 0..m-1 have weight 1 and care fully about the weight-0 jobs.
    """
    instance: SchedulingInstance
    alpha: FriendshipMatrix
    x: Schedule
    x_star: Schedule

    @property
    def m(self) -> int:
        return self.instance.m

    def ratio(self) -> Fraction:
        return weighted_social_cost(self.instance, self.x) / weighted_social_cost(self.instance, self.x_star)

    def verify(self) -> Verdict:
        """x is a pure Nash equilibrium of the extension and x* meets the lower bound."""
        game, _ = scheduling_game(self.instance)
        nash = is_pure_nash(friendship_extension(game, self.alpha), self.x)
        if not nash:
            return Verdict.fail(witness=nash.witness, condition="nash")
        if weighted_social_cost(self.instance, self.x_star) != processing_lower_bound(self.instance):
            return Verdict.fail(witness=self.x_star, condition="optimal")
        return Verdict.ok()


def weight_counterexample(m: int) -> WeightCounterexample:
    """Build the instance violating the weight condition.

    Raises:
        ParameterError: If m < 2
    """
    if m < 2:
        raise ParameterError("the construction needs at least two machines")
    heavy = list(range(m))
    light = list(range(m, m * m))
    weights = [Fraction(1)] * m + [Fraction(0)] * len(light)
    instance = SchedulingInstance.identical([Fraction(1)] * (m * m), m, weights)
    alpha = FriendshipMatrix.from_entries(m * m, {(j, k): 1 for j in heavy for k in light})
    spread = [1 + r % (m - 1) for r in range(len(light))]
    x = tuple([0] * m + spread)
    x_star = tuple(heavy + spread)
    logger.debug(f"Built weight counterexample with {m} machines and {m * m} jobs")
    return WeightCounterexample(instance, alpha, x, x_star)


def restricted_instance(instance: SchedulingInstance, allowed: Sequence[Collection[int]]) -> SchedulingInstance:
    """Forbid machines by giving them a processing time no schedule can absorb.

    The forbidden time 1 + Σ_k max_i p_ik exceeds every completion time
    reachable on allowed machines.
    """
    if len(allowed) != instance.n:
        raise ParameterError("one allowed machine set per job is required")
    if any(not machines for machines in allowed):
        raise ParameterError("every job needs at least one allowed machine")
    big = 1 + sum(
        (max(instance.processing[i][k] for i in range(instance.m)) for k in range(instance.n)),
        Fraction(0),
    )
    processing = tuple(
        tuple(instance.processing[i][j] if i in allowed[j] else big for j in range(instance.n))
        for i in range(instance.m)
    )
    return SchedulingInstance.unrelated(processing, instance.weights)


def smith_exchange_check(instance: SchedulingInstance, machine: int, jobs: Collection[int]) -> Verdict:
    """Swapping two adjacent jobs out of Smith order never lowers Σ w_j C_j."""

    def cost(order: list[int]) -> Fraction:
        elapsed, total = Fraction(0), Fraction(0)
        for j in order:
            elapsed += instance.processing[machine][j]
            total += instance.weights[j] * elapsed
        return total

    order = machine_order(instance, machine, jobs)
    base = cost(order)
    for position in range(len(order) - 1):
        swapped = list(order)
        swapped[position], swapped[position + 1] = swapped[position + 1], swapped[position]
        if cost(swapped) < base:
            return Verdict.fail(witness=(order[position], order[position + 1]), condition="exchange")
    return Verdict.ok()


def random_weight_condition_instance(rng: random.Random, m: int, n: int, max_weight: int = 4) -> SchedulingInstance:
    """Unrelated machines whose ratio order agrees with the weight order on every machine."""
    weights = [Fraction(rng.randint(1, max_weight)) for _ in range(n)]
    by_weight = sorted(range(n), key=lambda j: (weights[j], j))
    processing = []
    for _ in range(m):
        ratios = sorted(Fraction(v, 2) for v in rng.sample(range(1, 6 * n + 1), n))
        row = [Fraction(0)] * n
        for rho, j in zip(ratios, by_weight):
            row[j] = rho * weights[j]
        processing.append(row)
    return SchedulingInstance.unrelated(processing, weights)


def random_identical_instance(rng: random.Random, m: int, n: int, max_size: int = 6) -> SchedulingInstance:
    sizes = [Fraction(rng.randint(1, max_size), rng.randint(1, 2)) for _ in range(n)]
    return SchedulingInstance.identical(sizes, m)


def random_uniform_instance(rng: random.Random, m: int, n: int, max_size: int = 6) -> SchedulingInstance:
    sizes = [Fraction(rng.randint(1, max_size), rng.randint(1, 2)) for _ in range(n)]
    speeds = [Fraction(rng.randint(1, 3), rng.randint(1, 2)) for _ in range(m)]
    return SchedulingInstance.uniform(sizes, speeds)
