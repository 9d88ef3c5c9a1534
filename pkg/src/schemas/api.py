"""Request bodies for the HTTP API."""

from typing import Literal, Optional

from pydantic import BaseModel, model_validator

from .instances import AltruismSchema, CertificateSchema, FriendshipSchema, TableGameSchema


class ExtensionRequest(BaseModel):
    """A table game plus optional other-regarding parameters."""
    game: TableGameSchema
    altruism: Optional[AltruismSchema] = None
    friendship: Optional[FriendshipSchema] = None


class PoARequest(ExtensionRequest):
    extension: Literal["none", "altruism", "friendship"] = "none"

    @model_validator(mode="after")
    def check_parameters(self) -> "PoARequest":
        if self.extension == "altruism" and self.altruism is None:
            raise ValueError("the altruism extension needs 'altruism'")
        if self.extension == "friendship" and self.friendship is None:
            raise ValueError("the friendship extension needs 'friendship'")
        return self


class SmoothnessRequest(ExtensionRequest):
    """Certificate check request; ``scg`` checks on the social contribution game."""
    certificate: CertificateSchema
    scg: bool = False
