"""Schemas package."""
from .common import Rational, format_rational, jsonable, parse_rational
from .instances import (
    AltruismSchema,
    AuctionSchema,
    CertificateSchema,
    CongestionSchema,
    DistributionSchema,
    FriendshipSchema,
    ProfilesSchema,
    SchedulingSchema,
    SetFunctionSchema,
    TableGameSchema,
    UtilityGameSchema,
)
from .api import PoARequest, SmoothnessRequest
from .report import RunReport, instance_digest

__all__ = [
    "AltruismSchema",
    "AuctionSchema",
    "CertificateSchema",
    "CongestionSchema",
    "DistributionSchema",
    "FriendshipSchema",
    "PoARequest",
    "ProfilesSchema",
    "Rational",
    "RunReport",
    "SchedulingSchema",
    "SetFunctionSchema",
    "SmoothnessRequest",
    "TableGameSchema",
    "UtilityGameSchema",
    "format_rational",
    "instance_digest",
    "jsonable",
    "parse_rational",
]
