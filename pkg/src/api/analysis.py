"""Analysis endpoints: price of anarchy, certificates, constructions and the table."""

import logging
from typing import Any, Optional, Union

from fastapi import APIRouter, HTTPException, Query, status

from ..errors import (
    BudgetExceededError,
    CertificateError,
    GameAnalysisError,
    PreconditionError,
)
from ..models.certificate import CertificateFlavor
from ..models.game import FiniteGame, altruistic_extension, friendship_extension
from ..models.parameters import AltruismVector, FriendshipMatrix
from ..schemas import PoARequest, SmoothnessRequest, jsonable
from ..schemas.api import ExtensionRequest
from ..services.equilibria import pure_poa
from ..services.families import Family, run_family
from ..services.social_contribution import (
    check_smoothness_altruistic,
    check_smoothness_base,
    check_smoothness_friendship,
    corresponding_scg,
)
from ..services.table1 import Table1Scale, reproduce_table1

logger = logging.getLogger(__name__)

router = APIRouter()

MAX_FAMILY_PARAM = 1000


def _http_error(error: GameAnalysisError) -> HTTPException:
    if isinstance(error, BudgetExceededError):
        code = status.HTTP_413_REQUEST_ENTITY_TOO_LARGE
    elif isinstance(error, (PreconditionError, CertificateError)):
        code = status.HTTP_422_UNPROCESSABLE_ENTITY
    else:
        code = status.HTTP_400_BAD_REQUEST
    logger.warning(f"Request rejected with {code}: {error}")
    return HTTPException(status_code=code, detail=str(error))


def _parameters(request: ExtensionRequest, kind: str) -> Union[AltruismVector, FriendshipMatrix]:
    if kind == "altruism":
        if request.altruism is None:
            raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail="missing 'altruism'")
        return request.altruism.to_vector()
    if request.friendship is None:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail="missing 'friendship'")
    return request.friendship.to_matrix()


def _base_game(request: ExtensionRequest, budget: Optional[int]) -> FiniteGame:
    try:
        return request.game.to_game(budget)
    except GameAnalysisError as e:
        raise _http_error(e) from e
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e)) from e


@router.post("/games/poa")
def game_poa(request: PoARequest, budget: Optional[int] = Query(None, ge=1)):
    """Exact pure price of anarchy of a table game, optionally extended."""
    game = _base_game(request, budget)
    try:
        if request.extension == "altruism":
            game = altruistic_extension(game, _parameters(request, "altruism"))
        elif request.extension == "friendship":
            game = friendship_extension(game, _parameters(request, "friendship"))
        result = pure_poa(game, budget)
    except GameAnalysisError as e:
        raise _http_error(e) from e
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e)) from e
    return jsonable({
        "game": game.name,
        "poa": result.value,
        "infinite": result.infinite,
        "no_equilibrium": result.no_equilibrium,
        "equilibria": result.equilibria,
        "optimum_value": result.optimum_value,
    })


@router.post("/games/smoothness")
def game_smoothness(request: SmoothnessRequest, budget: Optional[int] = Query(None, ge=1)):
    """Verify a smoothness certificate; a failing certificate still answers 200 with its witness."""
    game = _base_game(request, budget)
    try:
        if request.scg:
            defaults = request.game.default_map()
            if defaults is None:
                raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail="the game declares no defaults")
            game = corresponding_scg(game, defaults)
        cert = request.certificate.to_certificate()
        if cert.flavor is CertificateFlavor.ALTRUISTIC:
            verdict = check_smoothness_altruistic(game, _parameters(request, "altruism"), cert, budget)
        elif cert.flavor is CertificateFlavor.FRIENDSHIP:
            verdict = check_smoothness_friendship(game, _parameters(request, "friendship"), cert, budget=budget)
        else:
            verdict = check_smoothness_base(game, cert, budget)
    except GameAnalysisError as e:
        raise _http_error(e) from e
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e)) from e
    return jsonable({
        "game": game.name,
        "holds": verdict.holds,
        "condition": verdict.condition,
        "witness": verdict.witness,
        "robust_bound": cert.robust_bound(game.orientation) if cert.lam > 0 else None,
    })


@router.get("/families/{family}")
def family_construction(family: Family, param: Optional[int] = Query(None, ge=0, le=MAX_FAMILY_PARAM)):
    """Build and verify a lower-bound construction."""
    try:
        run = run_family(family, param)
    except GameAnalysisError as e:
        raise _http_error(e) from e
    return jsonable({"ok": run.ok, **run.results})


@router.get("/table1")
def table1(
    scale: Table1Scale = Query(Table1Scale.SMALL),
    seed: Optional[int] = Query(None),
    congestion_n: Optional[int] = Query(None, ge=0, le=MAX_FAMILY_PARAM),
    scheduling_m: Optional[int] = Query(None, ge=2, le=MAX_FAMILY_PARAM),
) -> dict[str, Any]:
    """Reproduce the summary table; runs in a worker thread."""
    report = reproduce_table1(scale, seed, congestion_n, scheduling_m)
    return jsonable({
        "seed": report.seed,
        "scale": report.scale,
        "passed": report.passed,
        "wall_time": report.wall_time,
        "rows": [
            {"row": row.row, "claimed": row.claimed, "observed": row.observed, "verdict": row.verdict, "notes": row.notes}
            for row in report.rows
        ],
    })
