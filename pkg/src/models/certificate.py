"""Smoothness certificates."""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from ..errors import ParameterError
from .distribution import MixedStrategy, pure, validate_mixed_strategy
from .game import Orientation, Profile


class CertificateFlavor(str, Enum):
    """Which smoothness inequality a certificate claims."""
    BASE = "base"
    ALTRUISTIC = "altruistic"
    FRIENDSHIP = "friendship-weighted"


@dataclass(frozen=True)
class SmoothnessCertificate:
    """A (λ, μ) smoothness witness.

    Minimization games claim Σ_i dev_i(s) <= λ C(s*) + μ C(s) for every s;
    maximization games claim Σ_i dev_i(s) >= λ Π(s*) + μ Π(s).

    Attributes:
        lam: λ >= 0
        mu: μ < 1
        sbar: Per player, the deviation as (strategy, probability) pairs
        sstar: An optimal profile
        flavor: Which inequality is certified
    """
    lam: Fraction
    mu: Fraction
    sbar: tuple[MixedStrategy, ...]
    sstar: Profile
    flavor: CertificateFlavor = CertificateFlavor.BASE

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        object.__setattr__(self, "mu", Fraction(self.mu))
        object.__setattr__(self, "sbar", tuple(validate_mixed_strategy(mix) for mix in self.sbar))
        object.__setattr__(self, "sstar", tuple(self.sstar))
        if self.lam < 0:
            raise ParameterError(f"λ must be nonnegative, got {self.lam}")
        if self.mu >= 1:
            raise ParameterError(f"μ must be below 1, got {self.mu}")
        if len(self.sbar) != len(self.sstar):
            raise ParameterError("s̄ and s* must cover the same players")

    @classmethod
    def pure_deviation(
        cls,
        lam: Fraction,
        mu: Fraction,
        sbar: Sequence[int],
        sstar: Sequence[int],
        flavor: CertificateFlavor = CertificateFlavor.BASE,
    ) -> "SmoothnessCertificate":
        return cls(Fraction(lam), Fraction(mu), tuple(pure(k) for k in sbar), tuple(sstar), flavor)

    @property
    def is_pure(self) -> bool:
        return all(len(mix) == 1 for mix in self.sbar)

    def robust_bound(self, orientation: Orientation = Orientation.MINIMIZE) -> Fraction:
        """λ/(1−μ) for costs, (1−μ)/λ for payoffs."""
        if orientation is Orientation.MINIMIZE:
            return self.lam / (1 - self.mu)
        if self.lam == 0:
            raise ParameterError("a maximization certificate needs λ > 0")
        return (1 - self.mu) / self.lam
