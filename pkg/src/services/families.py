"""Lower-bound constructions packaged with their instance documents and verification."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Optional

from ..errors import ParameterError
from ..schemas import AltruismSchema, AuctionSchema, CongestionSchema, FriendshipSchema, SchedulingSchema
from . import auctions, congestion, scheduling

logger = logging.getLogger(__name__)


class Family(str, Enum):
    CONGESTION17 = "congestion17"
    SCHED_B = "schedB"
    AUCTION_TIGHT = "auctionTight"
    MIXED_LB = "mixedLB"


DEFAULT_PARAMS = {
    Family.CONGESTION17: 20,
    Family.SCHED_B: 4,
    Family.AUCTION_TIGHT: 0,
    Family.MIXED_LB: 4,
}

# exhaustive certificate check for the mixed instance only up to m * n profiles of this size
MIXED_CERTIFICATE_LIMIT = 12


@dataclass
class FamilyRun:
    """Verification results plus the documents describing the instance.

    Attributes:
        results: Observed values and verdicts
        ok: Every verification held
        documents: ``instance.json``, ``alpha.json`` and ``profiles.json`` contents
    """
    results: dict[str, Any]
    ok: bool
    documents: dict[str, Any] = field(default_factory=dict)


def _congestion(n: int) -> FamilyRun:
    family = congestion.lower_bound_family(n)
    verification = congestion.verify_lower_bound_family(family)
    return FamilyRun(
        results={
            "family": Family.CONGESTION17,
            "n": n,
            "nash": verification.nash.holds,
            "cost": verification.cost,
            "reference_cost": verification.reference_cost,
            "optimum": verification.optimum,
            "ratio": verification.ratio,
            "formula_ratio": verification.formula_ratio,
            "exact_ratio": verification.exact_ratio,
            "exhaustive_agrees": verification.exhaustive_agrees,
        },
        ok=verification.holds,
        documents={
            "instance.json": CongestionSchema.from_game(family.game),
            "alpha.json": FriendshipSchema.from_matrix(family.alpha),
            "profiles.json": {
                "profiles": {"s": family.s, "s_star": family.s_star, "optimum": verification.optimum_profile}
            },
        },
    )


def _weight_counterexample(m: int) -> FamilyRun:
    counterexample = scheduling.weight_counterexample(m)
    verdict = counterexample.verify()
    ratio = counterexample.ratio()
    return FamilyRun(
        results={
            "family": Family.SCHED_B,
            "m": m,
            "nash": verdict.holds,
            "witness": verdict.witness,
            "ratio": ratio,
            "weight_condition": scheduling.check_weight_condition(counterexample.instance).holds,
        },
        ok=bool(verdict) and ratio == Fraction(m + 1, 2),
        documents={
            "instance.json": SchedulingSchema.from_instance(counterexample.instance),
            "alpha.json": FriendshipSchema.from_matrix(counterexample.alpha),
            "profiles.json": {"profiles": {"x": counterexample.x, "x_star": counterexample.x_star}},
        },
    )


def _tight_auction() -> FamilyRun:
    tight = auctions.tight_example()
    verdict = tight.verify()
    return FamilyRun(
        results={"family": Family.AUCTION_TIGHT, "nash": verdict.holds, "ratio": tight.ratio()},
        ok=bool(verdict) and tight.ratio() == 2,
        documents={
            "instance.json": AuctionSchema.from_auction(tight.auction),
            "alpha.json": FriendshipSchema.from_matrix(tight.alpha),
            "profiles.json": {"profiles": {"b": tight.equilibrium, "b_star": tight.optimum}},
        },
    )


def _mixed_lower_bound(m: int, budget: Optional[int]) -> FamilyRun:
    instance = scheduling.mixed_lower_bound_instance(m)
    mixed = scheduling.uniform_mixed_cost(instance)
    optimum = scheduling.optimal_cost_closed_form(instance)
    expected = Fraction(3, 2) - Fraction(1, 2 * m)
    results = {
        "family": Family.MIXED_LB,
        "m": m,
        "mixed_cost": mixed,
        "optimum": optimum,
        "ratio": mixed / optimum,
        "expected_ratio": expected,
    }
    if m * instance.n <= MIXED_CERTIFICATE_LIMIT:
        results["certificate_lambda"] = scheduling.rpoa_p_certificate(instance, budget).lam
    return FamilyRun(
        results=results,
        ok=mixed / optimum == expected,
        documents={
            "instance.json": SchedulingSchema.from_instance(instance),
            "alpha.json": AltruismSchema(alpha=[0] * instance.n),
            "profiles.json": {"profiles": {"x_star": scheduling.mft_schedule(instance)}},
        },
    )


def run_family(family: Family, param: Optional[int] = None, budget: Optional[int] = None) -> FamilyRun:
    """Build and verify one construction.

    Args:
        family: Which construction
        param: n for congestion17, m for schedB and mixedLB, ignored for auctionTight
        budget: Enumeration budget override

    Raises:
        ParameterError: If the parameter is out of range
    """
    value = DEFAULT_PARAMS[family] if param is None else param
    logger.info(f"Building family {family.value} with parameter {value}")
    if family is Family.CONGESTION17:
        if value < 0:
            raise ParameterError("the congestion family needs n >= 0")
        return _congestion(value)
    if family is Family.AUCTION_TIGHT:
        return _tight_auction()
    if value < 2:
        raise ParameterError(f"{family.value} needs at least two machines")
    if family is Family.SCHED_B:
        return _weight_counterexample(value)
    return _mixed_lower_bound(value, budget)
