"""Models package."""
from .certificate import CertificateFlavor, SmoothnessCertificate
from .distribution import FiniteSupportDistribution, MixedStrategy, product_distribution
from .game import (
    DEFAULT,
    DefaultStrategyMap,
    FiniteGame,
    Orientation,
    Profile,
    altruistic_extension,
    evaluate_with_defaults,
    friendship_extension,
    table_game,
)
from .parameters import AltruismVector, FriendshipMatrix
from .verdict import Verdict

__all__ = [
    "DEFAULT",
    "AltruismVector",
    "CertificateFlavor",
    "DefaultStrategyMap",
    "FiniteGame",
    "FiniteSupportDistribution",
    "FriendshipMatrix",
    "MixedStrategy",
    "Orientation",
    "Profile",
    "SmoothnessCertificate",
    "Verdict",
    "altruistic_extension",
    "evaluate_with_defaults",
    "friendship_extension",
    "product_distribution",
    "table_game",
]
