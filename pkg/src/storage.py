"""Storage layer for reading and writing instance files as JSON."""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, TypeVar, Union

from pydantic import BaseModel, ValidationError

from .errors import InputFormatError
from .models.game import DefaultStrategyMap, FiniteGame
from .schemas import (
    AuctionSchema,
    CongestionSchema,
    SchedulingSchema,
    TableGameSchema,
    UtilityGameSchema,
    instance_digest,
)
from .services.auctions import auction_game
from .services.congestion import congestion_game
from .services.scheduling import scheduling_game
from .services.utility_games import basic_utility_game, utility_game

logger = logging.getLogger(__name__)

Schema = TypeVar("Schema", bound=BaseModel)


class InstanceStorage:
    """Reads and writes instance documents in one directory.

    Attributes:
        directory: Folder holding the JSON files
    """

    def __init__(self, directory: Union[str, Path] = "."):
        self.directory = Path(directory)

    def path(self, name: str) -> Path:
        return self.directory / name

    def read_bytes(self, name: str) -> bytes:
        """Raw document contents.

        Raises:
            InputFormatError: If the file does not exist
        """
        path = self.path(name)
        try:
            return path.read_bytes()
        except FileNotFoundError:
            raise InputFormatError(f"Instance file not found: {path}") from None

    def load(self, name: str, schema: type[Schema]) -> Schema:
        """Parse a document with the given schema.

        Raises:
            InputFormatError: If the file is missing, not JSON, or does not match the schema
        """
        raw = self.read_bytes(name)
        try:
            return schema.model_validate_json(raw)
        except ValidationError as e:
            raise InputFormatError(f"Corrupted instance file {self.path(name)}: {e}") from e
        except ValueError as e:
            raise InputFormatError(f"Corrupted instance file {self.path(name)}: {e}") from e

    def load_with_digest(self, name: str, schema: type[Schema]) -> tuple[Schema, str]:
        return self.load(name, schema), instance_digest(self.read_bytes(name))

    def save(self, name: str, document: Union[BaseModel, dict[str, Any]]) -> Path:
        """Write a document, serializing rationals as "p/q" strings."""
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path(name)
        if isinstance(document, BaseModel):
            data = document.model_dump(mode="json", by_alias=True, exclude_none=True)
        else:
            data = document
        path.write_text(json.dumps(data, indent=2))
        logger.debug(f"Wrote {path}")
        return path


@dataclass
class LoadedGame:
    """A game read from disk together with its default strategies.

    Attributes:
        kind: Which instance format the document used
        game: The finite game
        defaults: Its non-participation strategies, None if the format has none
        digest: sha256 of the document
        instance: The parsed schema
    """
    kind: str
    game: FiniteGame
    defaults: Optional[DefaultStrategyMap]
    digest: str
    instance: BaseModel


FORMATS: tuple[tuple[str, str, type[BaseModel]], ...] = (
    ("table", "costs", TableGameSchema),
    ("scheduling", "env", SchedulingSchema),
    ("congestion", "delays", CongestionSchema),
    ("auction", "valuations", AuctionSchema),
    ("utility", "value", UtilityGameSchema),
)


def detect_format(document: dict[str, Any]) -> tuple[str, type[BaseModel]]:
    for kind, key, schema in FORMATS:
        if key in document:
            return kind, schema
    raise InputFormatError(f"Unrecognized instance document with keys {sorted(document)}")


def load_game(path: Union[str, Path], budget: Optional[int] = None) -> LoadedGame:
    """Load any supported instance document as a finite game.

    Raises:
        InputFormatError: If the document cannot be parsed or has an unknown format
    """
    path = Path(path)
    storage = InstanceStorage(path.parent)
    raw = storage.read_bytes(path.name)
    try:
        document = json.loads(raw)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"Corrupted instance file {path}: {e}") from e
    if not isinstance(document, dict):
        raise InputFormatError(f"Instance file {path} must hold a JSON object")
    kind, schema = detect_format(document)
    instance = storage.load(path.name, schema)
    try:
        if kind == "table":
            game, defaults = instance.to_game(budget), instance.default_map()
        elif kind == "scheduling":
            game, defaults = scheduling_game(instance.to_instance())
        elif kind == "congestion":
            game, defaults = congestion_game(instance.to_game())
        elif kind == "auction":
            game, defaults = auction_game(instance.to_auction(), budget)
        else:
            vg = basic_utility_game(instance.value.to_set_function(), instance.strategies)
            game, defaults = utility_game(vg)
    except ValueError as e:
        raise InputFormatError(f"Invalid {kind} instance in {path}: {e}") from e
    logger.info(f"Loaded {kind} instance {game.name} from {path}")
    return LoadedGame(kind, game, defaults, instance_digest(raw), instance)
