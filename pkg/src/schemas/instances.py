"""JSON formats of every instance family, parameter and certificate."""

from fractions import Fraction
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..models.certificate import CertificateFlavor, SmoothnessCertificate
from ..models.distribution import FiniteSupportDistribution
from ..models.game import DEFAULT, DefaultStrategyMap, FiniteGame, Orientation, table_game
from ..models.parameters import AltruismVector, FriendshipMatrix
from ..services.auctions import Auction, PricingRule
from ..services.congestion import CongestionGame, LinearDelay
from ..services.scheduling import Environment, SchedulingInstance
from ..services.utility_games import SetFunction
from .common import Rational


class TableGameSchema(BaseModel):
    """Normal-form game given by explicit cost tables in lexicographic profile order."""
    players: int = Field(..., ge=1)
    strategies: list[int]
    costs: list[list[Rational]]
    social: Union[Literal["sum"], list[Rational]] = "sum"
    orientation: Orientation = Orientation.MINIMIZE
    weights: Optional[list[Rational]] = None
    defaults: Optional[list[Optional[int]]] = None
    name: str = "table"

    @model_validator(mode="after")
    def check_shape(self) -> "TableGameSchema":
        if len(self.strategies) != self.players:
            raise ValueError(f"expected {self.players} strategy counts, got {len(self.strategies)}")
        if any(k < 1 for k in self.strategies):
            raise ValueError("every player needs at least one strategy")
        if self.weights is not None and len(self.weights) != self.players:
            raise ValueError("one weight per player is required")
        if self.defaults is not None:
            if len(self.defaults) != self.players:
                raise ValueError("one default entry per player is required")
            for k, alias in zip(self.strategies, self.defaults):
                if alias is not None and not 0 <= alias < k:
                    raise ValueError(f"default alias {alias} is out of range")
        return self

    def to_game(self, budget: Optional[int] = None) -> FiniteGame:
        return table_game(
            self.strategies,
            self.costs,
            social=self.social,
            orientation=self.orientation,
            weights=self.weights,
            name=self.name,
            budget=budget,
        )

    def default_map(self) -> Optional[DefaultStrategyMap]:
        """Default strategies given as aliases for one of each player's strategies."""
        if self.defaults is None:
            return None
        return DefaultStrategyMap.from_aliases(self.defaults)

    @classmethod
    def from_game(cls, game: FiniteGame, budget: Optional[int] = None) -> "TableGameSchema":
        profiles = list(game.profiles(budget))
        return cls(
            players=game.n_players,
            strategies=list(game.strategy_counts),
            costs=[[game.cost(i, s) for s in profiles] for i in range(game.n_players)],
            social=[game.social_cost(s) for s in profiles],
            orientation=game.orientation,
            weights=None if game.weights is None else list(game.weights),
            name=game.name,
        )


class SchedulingSchema(BaseModel):
    """``p`` is the m x n matrix p[i][j] for R and the job sizes for Q and P."""
    env: Environment
    m: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    p: Union[list[list[Rational]], list[Rational]]
    speeds: Optional[list[Rational]] = None
    weights: Optional[list[Rational]] = None

    def to_instance(self) -> SchedulingInstance:
        weights = self.weights if self.weights is not None else [Fraction(1)] * self.n
        if len(weights) != self.n:
            raise ValueError(f"expected {self.n} weights")
        if self.env is Environment.UNRELATED:
            if len(self.p) != self.m or any(not isinstance(row, list) or len(row) != self.n for row in self.p):
                raise ValueError(f"R instances need an {self.m} x {self.n} processing matrix")
            return SchedulingInstance.unrelated(self.p, weights)
        if len(self.p) != self.n or any(isinstance(p, list) for p in self.p):
            raise ValueError(f"{self.env.value} instances need {self.n} job sizes")
        if self.env is Environment.IDENTICAL:
            return SchedulingInstance.identical(self.p, self.m, weights)
        if self.speeds is None or len(self.speeds) != self.m:
            raise ValueError(f"Q instances need {self.m} speeds")
        return SchedulingInstance.uniform(self.p, self.speeds, weights)

    @classmethod
    def from_instance(cls, instance: SchedulingInstance) -> "SchedulingSchema":
        if instance.environment is Environment.UNRELATED:
            p = [list(row) for row in instance.processing]
        else:
            p = list(instance.sizes)
        return cls(
            env=instance.environment,
            m=instance.m,
            n=instance.n,
            p=p,
            speeds=list(instance.speeds) if instance.environment is Environment.UNIFORM else None,
            weights=list(instance.weights),
        )


class DelaySchema(BaseModel):
    a: Rational = Fraction(1)
    b: Rational = Fraction(0)


class CongestionSchema(BaseModel):
    resources: int = Field(..., ge=0)
    delays: list[DelaySchema]
    strategies: list[list[list[int]]]

    @model_validator(mode="after")
    def check_resources(self) -> "CongestionSchema":
        if len(self.delays) != self.resources:
            raise ValueError(f"expected {self.resources} delays, got {len(self.delays)}")
        return self

    def to_game(self) -> CongestionGame:
        return CongestionGame(
            tuple(LinearDelay(d.a, d.b) for d in self.delays),
            tuple(tuple(frozenset(s) for s in player) for player in self.strategies),
        )

    @classmethod
    def from_game(cls, cg: CongestionGame) -> "CongestionSchema":
        return cls(
            resources=cg.n_resources,
            delays=[DelaySchema(a=d.a, b=d.b) for d in cg.delays],
            strategies=[[sorted(s) for s in player] for player in cg.strategies],
        )


class AuctionSchema(BaseModel):
    valuations: list[Rational] = Field(..., min_length=1)
    grids: Optional[list[list[Rational]]] = None
    pricing: Literal["second-price"] = PricingRule.SECOND_PRICE.value

    def to_auction(self) -> Auction:
        grids = () if self.grids is None else tuple(tuple(g) for g in self.grids)
        return Auction(tuple(self.valuations), grids)

    @classmethod
    def from_auction(cls, auction: Auction) -> "AuctionSchema":
        return cls(valuations=list(auction.valuations), grids=[list(g) for g in auction.grids])


class SetFunctionSchema(BaseModel):
    """Values keyed by the decimal bitmask of the subset."""
    ground: int = Field(..., ge=0, le=16)
    values: dict[str, Rational]

    def to_set_function(self) -> SetFunction:
        table = [None] * (1 << self.ground)
        for key, value in self.values.items():
            try:
                mask = int(key)
            except ValueError:
                raise ValueError(f"bitmask key {key!r} is not an integer") from None
            if not 0 <= mask < len(table):
                raise ValueError(f"bitmask {mask} is outside the ground set")
            table[mask] = value
        missing = [mask for mask, value in enumerate(table) if value is None]
        if missing:
            raise ValueError(f"incomplete table: no value for bitmask {missing[0]}")
        return SetFunction(self.ground, tuple(table))

    @classmethod
    def from_set_function(cls, v: SetFunction) -> "SetFunctionSchema":
        return cls(ground=v.ground, values={str(mask): value for mask, value in enumerate(v.values)})


class UtilityGameSchema(BaseModel):
    """A basic utility game: strategies are element lists, payoffs are marginal contributions."""
    value: SetFunctionSchema
    strategies: list[list[list[int]]]


class FriendshipSchema(BaseModel):
    """Sparse ``entries`` [i, j, α_ij] with an implicit unit diagonal, or a dense matrix."""
    players: Optional[int] = Field(None, ge=1)
    entries: Optional[list[tuple[int, int, Rational]]] = None
    dense: Optional[list[list[Rational]]] = None

    @model_validator(mode="after")
    def check_form(self) -> "FriendshipSchema":
        if (self.dense is None) == (self.entries is None):
            raise ValueError("give either 'entries' with 'players' or 'dense'")
        if self.entries is not None and self.players is None:
            raise ValueError("sparse friendship matrices need 'players'")
        return self

    def to_matrix(self) -> FriendshipMatrix:
        if self.dense is not None:
            return FriendshipMatrix.from_dense(self.dense)
        return FriendshipMatrix.from_entries(self.players, {(i, j): a for i, j, a in self.entries})

    @classmethod
    def from_matrix(cls, alpha: FriendshipMatrix) -> "FriendshipSchema":
        return cls(players=alpha.n, entries=[(i, j, a) for i, j, a in alpha.entries()])


class AltruismSchema(BaseModel):
    alpha: list[Rational]
    extended: bool = False

    def to_vector(self) -> AltruismVector:
        return AltruismVector(tuple(self.alpha), extended=self.extended)


class CertificateSchema(BaseModel):
    """``sbar`` entries are a strategy index or a list of [strategy, probability] pairs."""
    model_config = ConfigDict(populate_by_name=True)

    lam: Rational = Field(..., alias="lambda")
    mu: Rational
    sbar: list[Union[int, list[tuple[int, Rational]]]]
    sstar: list[int]
    flavor: CertificateFlavor = CertificateFlavor.BASE

    def to_certificate(self) -> SmoothnessCertificate:
        sbar = tuple(((k, Fraction(1)),) if isinstance(k, int) else tuple(k) for k in self.sbar)
        return SmoothnessCertificate(self.lam, self.mu, sbar, tuple(self.sstar), self.flavor)

    @classmethod
    def from_certificate(cls, cert: SmoothnessCertificate) -> "CertificateSchema":
        sbar = [mix[0][0] if len(mix) == 1 else [list(pair) for pair in mix] for mix in cert.sbar]
        return cls(lam=cert.lam, mu=cert.mu, sbar=sbar, sstar=list(cert.sstar), flavor=cert.flavor)


class ProfilesSchema(BaseModel):
    """Named profiles; -1 marks a player using its default strategy."""
    profiles: dict[str, list[int]]

    @field_validator("profiles")
    @classmethod
    def check_entries(cls, value: dict[str, list[int]]) -> dict[str, list[int]]:
        for name, profile in value.items():
            if any(k < DEFAULT for k in profile):
                raise ValueError(f"profile {name} has an entry below {DEFAULT}")
        return value


class DistributionSchema(BaseModel):
    support: list[tuple[list[int], Rational]]

    def to_distribution(self) -> FiniteSupportDistribution:
        return FiniteSupportDistribution(tuple((tuple(s), p) for s, p in self.support))
