"""Social contribution games, smoothness checks and the robust-PoA optimizer.

A player's social contribution cost is its marginal impact on the social
cost, C̄_i(s) = C(s) - C(∅_i, s_{-i}). Smoothness certificates verified on
the social contribution game transfer to altruistic and friendship
extensions of SC-bounded (resp. strongly SC-bounded) games.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..errors import ParameterError, PreconditionError
from ..models.certificate import CertificateFlavor, SmoothnessCertificate
from ..models.distribution import FiniteSupportDistribution, MixedStrategy, pure
from ..models.game import (
    DEFAULT,
    DefaultStrategyMap,
    FiniteGame,
    Orientation,
    Profile,
    deviate,
    friendship_extension,
    is_weight_bounded,
)
from ..models.parameters import AltruismVector, FriendshipMatrix
from ..models.verdict import Verdict
from .envelope import Line, minimize_upper_envelope
from .equilibria import all_optima, expected_social_cost, is_coarse_equilibrium

logger = logging.getLogger(__name__)


def scg_cost(game: FiniteGame, defaults: DefaultStrategyMap, player: int, profile: Profile) -> Fraction:
    """C̄_i(s) = C(s) - C(∅_i, s_{-i})."""
    return defaults.social(game, profile) - defaults.social(game, deviate(profile, player, DEFAULT))


def corresponding_scg(game: FiniteGame, defaults: DefaultStrategyMap) -> FiniteGame:
    """The game with the same strategies and social cost and C̄_i as player costs."""
    for i in range(game.n_players):
        if not defaults.has_default(i):
            raise ParameterError(f"player {i} has no registered default strategy")

    def cost(i: int, profile: Profile) -> Fraction:
        return scg_cost(game, defaults, i, profile)

    return FiniteGame(
        strategy_counts=game.strategy_counts,
        cost=cost,
        social_cost=game.social_cost,
        orientation=game.orientation,
        weights=game.weights,
        name=f"scg({game.name})",
    )


def scg_default_map(game: FiniteGame, defaults: DefaultStrategyMap) -> DefaultStrategyMap:
    """Defaults for ``corresponding_scg(game, defaults)``; a non-participant contributes nothing."""
    if not defaults.native:
        return defaults
    return DefaultStrategyMap(
        aliases=defaults.aliases,
        cost=lambda i, profile: scg_cost(game, defaults, i, profile),
        social_cost=defaults.social_cost,
        native=defaults.native,
    )


def is_scg(game: FiniteGame, defaults: DefaultStrategyMap, budget: Optional[int] = None) -> Verdict:
    """Check C_i(s) = C̄_i(s) on every profile; the witness is (i, s)."""
    for profile in game.profiles(budget):
        for i in range(game.n_players):
            if game.cost(i, profile) != scg_cost(game, defaults, i, profile):
                return Verdict.fail(witness=(i, profile), condition="scg")
    return Verdict.ok()


def check_sc_bounded(game: FiniteGame, defaults: DefaultStrategyMap, budget: Optional[int] = None) -> Verdict:
    """Check C_i(s) <= C̄_i(s) (>= for payoffs); the witness is (i, s)."""
    for profile in game.profiles(budget):
        for i in range(game.n_players):
            if not game.orientation.at_most(game.cost(i, profile), scg_cost(game, defaults, i, profile)):
                logger.warning(f"{game.name} is not SC-bounded at player {i}, profile {profile}")
                return Verdict.fail(witness=(i, profile), condition="sc-bounded")
    return Verdict.ok()


def check_strongly_sc_bounded(
    game: FiniteGame,
    defaults: DefaultStrategyMap,
    weights: Optional[Sequence[Fraction]] = None,
    budget: Optional[int] = None,
) -> Verdict:
    """Check the three strong SC-boundedness conditions.

    (1) a non-participant pays nothing, (2) other players are never worse off
    when i leaves, and (3) w_i Σ_j (C_j(s) - C_j(∅_i, s_{-i})) <= C̄_i(s).
    Inequalities reverse for payoff games.

    Returns:
        Verdict with ``condition`` in {"1", "2", "3"} and witness (i, s)

    Raises:
        ParameterError: If a weight is not positive
    """
    w = game.player_weights() if weights is None else tuple(Fraction(x) for x in weights)
    if len(w) != game.n_players or any(x <= 0 for x in w):
        raise ParameterError("strong SC-boundedness needs one positive weight per player")
    orientation = game.orientation
    for profile in game.profiles(budget):
        base = game.costs(profile)
        social = game.social_cost(profile)
        for i in range(game.n_players):
            absent = deviate(profile, i, DEFAULT)
            absent_costs = [defaults.player_cost(game, j, absent) for j in range(game.n_players)]
            if absent_costs[i] != 0:
                return Verdict.fail(witness=(i, profile), condition="1")
            for j in range(game.n_players):
                if j != i and not orientation.at_most(absent_costs[j], base[j]):
                    return Verdict.fail(witness=(i, profile), condition="2")
            impact = w[i] * sum((b - a for b, a in zip(base, absent_costs)), Fraction(0))
            if not orientation.at_most(impact, social - defaults.social(game, absent)):
                return Verdict.fail(witness=(i, profile), condition="3")
    return Verdict.ok()


def check_altruism_independence_identity(
    game: FiniteGame,
    defaults: Optional[DefaultStrategyMap] = None,
    budget: Optional[int] = None,
) -> Verdict:
    """Check that C(s) - C_i(s) does not depend on s_i.

    The witness (i, s, k) compares s with (k, s_{-i}). With ``defaults``, a
    game satisfying the identity is additionally required to be their SCG.
    """
    for profile in game.profiles(budget):
        for i in range(game.n_players):
            if profile[i] == 0:
                continue
            anchor = deviate(profile, i, 0)
            others_here = game.social_cost(profile) - game.cost(i, profile)
            others_anchor = game.social_cost(anchor) - game.cost(i, anchor)
            if others_here != others_anchor:
                return Verdict.fail(witness=(i, anchor, profile[i]), condition="identity")
    if defaults is not None:
        verdict = is_scg(game, defaults, budget)
        if not verdict:
            return Verdict.fail(witness=verdict.witness, condition="not-scg")
    return Verdict.ok()


def deviation_sum_base(game: FiniteGame, sbar: Sequence[MixedStrategy], profile: Profile) -> Fraction:
    """Σ_i E[C_i(s̄_i, s_{-i})]."""
    total = Fraction(0)
    for i, mix in enumerate(sbar):
        for strategy, p in mix:
            total += p * game.cost(i, deviate(profile, i, strategy))
    return total


def deviation_sum_altruistic(game: FiniteGame, alpha: AltruismVector, sstar: Profile, profile: Profile) -> Fraction:
    """Σ_i [C_i(s*_i, s_{-i}) + α_i (C_{-i}(s*_i, s_{-i}) - C_{-i}(s))]."""
    social = game.social_cost(profile)
    total = Fraction(0)
    for i in range(game.n_players):
        moved = deviate(profile, i, sstar[i])
        own = game.cost(i, moved)
        total += own
        if alpha[i] != 0:
            others_moved = game.social_cost(moved) - own
            others_here = social - game.cost(i, profile)
            total += alpha[i] * (others_moved - others_here)
    return total


def deviation_sum_friendship(
    game: FiniteGame,
    alpha: FriendshipMatrix,
    weights: Sequence[Fraction],
    sbar: Sequence[MixedStrategy],
    profile: Profile,
) -> Fraction:
    """Σ_i w_i E[C_i(s̄_i, s_{-i}) + Σ_{j≠i} α_ij (C_j(s̄_i, s_{-i}) - C_j(s))]."""
    here = game.costs(profile)
    total = Fraction(0)
    for i, mix in enumerate(sbar):
        term = Fraction(0)
        for strategy, p in mix:
            moved = deviate(profile, i, strategy)
            value = game.cost(i, moved)
            for j, a in alpha.friends(i):
                value += a * (game.cost(j, moved) - here[j])
            term += p * value
        total += weights[i] * term
    return total


def _optimum_check(game: FiniteGame, sstar: Profile, budget: Optional[int]) -> tuple[list[Profile], Fraction, Verdict]:
    optima, value = all_optima(game, budget)
    game.validate_profile(sstar)
    if game.social_cost(sstar) != value:
        return optima, value, Verdict.fail(witness=sstar, condition="optimal", detail="s* is not optimal")
    return optima, value, Verdict.ok()


def _scan(game: FiniteGame, deviation, lam: Fraction, mu: Fraction, optimum: Fraction, budget: Optional[int]) -> Verdict:
    constant = lam * optimum
    for profile in game.profiles(budget):
        if not game.orientation.at_most(deviation(profile), constant + mu * game.social_cost(profile)):
            return Verdict.fail(witness=profile, condition="smoothness")
    return Verdict.ok()


def check_smoothness_base(game: FiniteGame, cert: SmoothnessCertificate, budget: Optional[int] = None) -> Verdict:
    """Check Σ_i C_i(s̄_i, s_{-i}) <= λ C(s*) + μ C(s) for every s.

    Returns:
        Verdict whose witness is the first violating profile
    """
    _, optimum, verdict = _optimum_check(game, cert.sstar, budget)
    if not verdict:
        return verdict
    result = _scan(game, lambda s: deviation_sum_base(game, cert.sbar, s), cert.lam, cert.mu, optimum, budget)
    if not result:
        logger.warning(f"({cert.lam}, {cert.mu})-smoothness of {game.name} fails at {result.witness}")
    return result


def check_smoothness_altruistic(
    game: FiniteGame, alpha: AltruismVector, cert: SmoothnessCertificate, budget: Optional[int] = None
) -> Verdict:
    """Check the altruistic smoothness inequality for some optimal s*.

    The certificate's s* is tried first, then every other optimum.
    """
    if len(alpha) != game.n_players:
        raise ParameterError("altruism vector length does not match the game")
    optima, optimum, verdict = _optimum_check(game, cert.sstar, budget)
    if not verdict:
        return verdict
    first_failure: Optional[Verdict] = None
    for sstar in [cert.sstar] + [o for o in optima if o != cert.sstar]:
        result = _scan(
            game,
            lambda s, target=sstar: deviation_sum_altruistic(game, alpha, target, s),
            cert.lam,
            cert.mu,
            optimum,
            budget,
        )
        if result:
            return Verdict.ok(detail=f"s* = {sstar}")
        first_failure = first_failure or result
    logger.warning(f"Altruistic ({cert.lam}, {cert.mu})-smoothness of {game.name} fails at {first_failure.witness}")
    return first_failure


def check_smoothness_friendship(
    game: FiniteGame,
    alpha: FriendshipMatrix,
    cert: SmoothnessCertificate,
    weights: Optional[Sequence[Fraction]] = None,
    budget: Optional[int] = None,
) -> Verdict:
    """Check the weighted friendship smoothness inequality.

    All optima share C(s*), so one scan covers every optimal s*.

    Raises:
        PreconditionError: If the social cost is not weight-bounded
    """
    w = game.player_weights() if weights is None else tuple(Fraction(x) for x in weights)
    bounded = is_weight_bounded(game, w, budget)
    if not bounded:
        raise PreconditionError("weight-bounded", bounded.witness)
    _, optimum, verdict = _optimum_check(game, cert.sstar, budget)
    if not verdict:
        return verdict
    result = _scan(
        game,
        lambda s: deviation_sum_friendship(game, alpha, w, cert.sbar, s),
        cert.lam,
        cert.mu,
        optimum,
        budget,
    )
    if not result:
        logger.warning(f"Friendship ({cert.lam}, {cert.mu})-smoothness of {game.name} fails at {result.witness}")
    return result


@dataclass(frozen=True)
class RobustBound:
    """Best robust PoA bound found over a set of deviation candidates.

    Attributes:
        value: λ/(1−μ) for costs, (1−μ)/λ for payoffs; None if degenerate or infeasible
        lam: Optimal λ, None when not attained
        mu: Optimal μ, None when not attained
        sbar: The candidate deviation giving the bound
        sstar: The optimum used
        flavor: Which inequality was optimized
        attained: False when the bound is only approached
        degenerate: The optimal social cost is zero
        infeasible: No (λ, μ) satisfies the constraints
    """
    value: Optional[Fraction]
    lam: Optional[Fraction]
    mu: Optional[Fraction]
    sbar: Optional[tuple[MixedStrategy, ...]]
    sstar: Optional[Profile]
    flavor: CertificateFlavor
    attained: bool = True
    degenerate: bool = False
    infeasible: bool = False

    def certificate(self) -> SmoothnessCertificate:
        if self.lam is None or self.mu is None:
            raise ParameterError("the robust bound is not attained by a certificate")
        return SmoothnessCertificate(self.lam, self.mu, self.sbar, self.sstar, self.flavor)


def _solve_minimization(optimum: Fraction, points: list[tuple[Fraction, Fraction]]):
    # v = 1/(1 - μ) > 0, ξ = λ v; each profile gives ξ >= (C + v (D - C)) / C*
    lines = [Line(Fraction(0), Fraction(0))]
    lines += [Line(c / optimum, (d - c) / optimum) for c, d in points]
    best = minimize_upper_envelope(lines, Fraction(0), lower_inclusive=False)
    if not best.attained:
        return best.value, None, None, False, False
    v = best.argmin
    return best.value, best.value / v, 1 - 1 / v, True, False


def _solve_maximization(optimum: Fraction, points: list[tuple[Fraction, Fraction]]):
    # y = 1/λ > 0, ξ = (1 - μ) y; each profile gives ξ Π >= Π* + y (Π - D)
    lower, inclusive = Fraction(0), False
    lines = [Line(Fraction(0), Fraction(0))]
    for welfare, d in points:
        if welfare < 0:
            raise ParameterError("robust bounds for payoff games need nonnegative welfare")
        if welfare == 0:
            if d <= 0:
                return None, None, None, False, True
            if optimum / d >= lower:
                lower, inclusive = optimum / d, True
            continue
        lines.append(Line(optimum / welfare, (welfare - d) / welfare))
    best = minimize_upper_envelope(lines, lower, lower_inclusive=inclusive)
    if best.value <= 0:
        return None, None, None, False, True
    if not best.attained:
        return best.value, None, None, False, False
    y = best.argmin
    return best.value, 1 / y, 1 - best.value / y, True, False


def robust_poa_bound(
    game: FiniteGame,
    candidates: Optional[Sequence[Sequence[MixedStrategy]]] = None,
    flavor: CertificateFlavor = CertificateFlavor.BASE,
    alpha: Optional[object] = None,
    weights: Optional[Sequence[Fraction]] = None,
    budget: Optional[int] = None,
) -> RobustBound:
    """Minimize the robust bound over (λ, μ) for each candidate deviation s̄.

    Each profile contributes one linear constraint; after the substitution
    v = 1/(1-μ) the objective is the upper envelope of those lines, which is
    minimized exactly at a vertex or at the boundary.

    Args:
        game: The base game
        candidates: Deviation profiles s̄; defaults to every optimum as a pure s̄
        flavor: Which smoothness inequality to optimize
        alpha: AltruismVector (altruistic) or FriendshipMatrix (friendship)
        weights: Player weights for the friendship flavor
        budget: Enumeration budget override

    Returns:
        The smallest bound over all candidates
    """
    optima, optimum = all_optima(game, budget)
    sstar = optima[0]
    if candidates is None:
        candidates = [tuple(pure(k) for k in o) for o in optima]
    if not candidates:
        raise ParameterError("at least one deviation candidate is required")
    if optimum == 0:
        return RobustBound(None, None, None, None, sstar, flavor, attained=False, degenerate=True)

    profiles = list(game.profiles(budget))
    social = [game.social_cost(s) for s in profiles]
    w = game.player_weights() if weights is None else tuple(Fraction(x) for x in weights)

    best: Optional[RobustBound] = None
    for candidate in candidates:
        sbar = tuple(tuple(mix) for mix in candidate)
        target = sstar
        if flavor is CertificateFlavor.ALTRUISTIC:
            if not isinstance(alpha, AltruismVector):
                raise ParameterError("the altruistic flavor needs an AltruismVector")
            if any(len(mix) != 1 for mix in sbar):
                raise ParameterError("altruistic deviations are pure optima")
            target = tuple(mix[0][0] for mix in sbar)
            if game.social_cost(target) != optimum:
                raise ParameterError(f"altruistic candidate {target} is not optimal")
            deviations = [deviation_sum_altruistic(game, alpha, target, s) for s in profiles]
        elif flavor is CertificateFlavor.FRIENDSHIP:
            if not isinstance(alpha, FriendshipMatrix):
                raise ParameterError("the friendship flavor needs a FriendshipMatrix")
            deviations = [deviation_sum_friendship(game, alpha, w, sbar, s) for s in profiles]
        else:
            deviations = [deviation_sum_base(game, sbar, s) for s in profiles]

        points = list(zip(social, deviations))
        if game.orientation is Orientation.MINIMIZE:
            value, lam, mu, attained, infeasible = _solve_minimization(optimum, points)
        else:
            value, lam, mu, attained, infeasible = _solve_maximization(optimum, points)
        if infeasible:
            logger.info(f"No certificate exists for candidate {sbar} on {game.name}")
            continue
        bound = RobustBound(value, lam, mu, sbar, target, flavor, attained=attained)
        if best is None or value < best.value:
            best = bound

    if best is None:
        return RobustBound(None, None, None, None, sstar, flavor, attained=False, infeasible=True)
    logger.info(f"Robust PoA bound of {game.name}: {best.value} (λ={best.lam}, μ={best.mu})")
    return best


def reduction_transfer_check(
    game: FiniteGame,
    defaults: DefaultStrategyMap,
    alpha: object,
    flavor: CertificateFlavor,
    cert: SmoothnessCertificate,
    weights: Optional[Sequence[Fraction]] = None,
    budget: Optional[int] = None,
) -> Verdict:
    """Re-verify an SCG certificate on an altruistic or friendship extension.

    Raises:
        PreconditionError: If the game is not (strongly) SC-bounded or the
            certificate does not hold on the social contribution game
    """
    if flavor is CertificateFlavor.ALTRUISTIC:
        bounded = check_sc_bounded(game, defaults, budget)
    elif flavor is CertificateFlavor.FRIENDSHIP:
        bounded = check_strongly_sc_bounded(game, defaults, weights, budget)
    else:
        raise ParameterError("the transfer check needs the altruistic or friendship flavor")
    if not bounded:
        name = "sc-bounded" if flavor is CertificateFlavor.ALTRUISTIC else f"strongly-sc-bounded ({bounded.condition})"
        raise PreconditionError(name, bounded.witness)
    on_scg = check_smoothness_base(corresponding_scg(game, defaults), cert, budget)
    if not on_scg:
        raise PreconditionError("certificate on the social contribution game", on_scg.witness)
    if flavor is CertificateFlavor.ALTRUISTIC:
        return check_smoothness_altruistic(game, alpha, cert, budget)
    return check_smoothness_friendship(game, alpha, cert, weights, budget)


def coarse_poa_transfer_check(
    game: FiniteGame,
    alpha: FriendshipMatrix,
    cert: SmoothnessCertificate,
    sigma: FiniteSupportDistribution,
    weights: Optional[Sequence[Fraction]] = None,
    budget: Optional[int] = None,
) -> Verdict:
    """Check E[C(σ)] <= (λ/(1−μ)) C(s*) for a coarse equilibrium σ of the extension.

    Raises:
        PreconditionError: If the certificate does not hold on the extension
        ParameterError: If σ is not a coarse equilibrium of the extension
    """
    smooth = check_smoothness_friendship(game, alpha, cert, weights, budget)
    if not smooth:
        raise PreconditionError("friendship smoothness", smooth.witness)
    extension = friendship_extension(game, alpha)
    coarse = is_coarse_equilibrium(extension, sigma)
    if not coarse:
        raise ParameterError(f"σ is not a coarse equilibrium of {extension.name}: deviation {coarse.witness}")
    optimum = game.social_cost(cert.sstar)
    expected = expected_social_cost(game, sigma)
    if game.orientation is Orientation.MINIMIZE:
        holds = expected <= cert.robust_bound(game.orientation) * optimum
    else:
        holds = expected * cert.robust_bound(game.orientation) >= optimum
    if holds:
        return Verdict.ok()
    return Verdict.fail(witness=expected, condition="coarse-poa")
