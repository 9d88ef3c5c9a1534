"""Command-line interface for the price of anarchy toolkit.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 budget exceeded.
"""

import json
import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Optional, Union

import typer
import uvicorn

from .config import get_settings
from .errors import (
    BudgetExceededError,
    CertificateError,
    GameAnalysisError,
    InputFormatError,
    PreconditionError,
)
from .models.certificate import CertificateFlavor, SmoothnessCertificate
from .models.game import FiniteGame, altruistic_extension, friendship_extension
from .models.parameters import AltruismVector, FriendshipMatrix
from .schemas import (
    AltruismSchema,
    CertificateSchema,
    FriendshipSchema,
    RunReport,
    jsonable,
    parse_rational,
)
from .services import congestion
from .services.families import Family, run_family
from .services.equilibria import all_optima, best_response_dynamics, pure_poa
from .services.run_log import get_run_log
from .services.social_contribution import (
    check_altruism_independence_identity,
    check_sc_bounded,
    check_smoothness_altruistic,
    check_smoothness_base,
    check_smoothness_friendship,
    check_strongly_sc_bounded,
    corresponding_scg,
    is_scg,
    robust_poa_bound,
)
from .services.table1 import Table1Scale, reproduce_table1
from .storage import InstanceStorage, load_game

logger = logging.getLogger(__name__)

app = typer.Typer(help="Price of anarchy analysis for games with altruistic and friendly players.")


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class Extension(str, Enum):
    NONE = "none"
    ALTRUISM = "altruism"
    FRIENDSHIP = "friendship"


@dataclass
class CliState:
    budget: Optional[int] = None
    seed: int = 0
    output: Optional[OutputFormat] = None
    log: bool = True


@dataclass
class Outcome:
    """What a command produced: JSON-able results and whether its checks held."""
    results: dict[str, Any]
    ok: bool = True
    digest: Optional[str] = None
    csv: Optional[str] = None
    arguments: dict[str, Any] = field(default_factory=dict)


@app.callback()
def main(
    ctx: typer.Context,
    budget: Optional[int] = typer.Option(None, "--budget", min=1, help="Maximum number of enumerated profiles"),
    seed: Optional[int] = typer.Option(None, "--seed", min=0, help="Seed for sampled instances"),
    output: Optional[OutputFormat] = typer.Option(None, "--format", help="Output format"),
    log: bool = typer.Option(True, "--log/--no-log", help="Append the run report to the run log"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
):
    settings = get_settings()
    logging.basicConfig(
        level=logging.DEBUG if verbose else getattr(logging, settings.log_level, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    ctx.obj = CliState(
        budget=settings.enumeration_budget if budget is None else budget,
        seed=settings.default_seed if seed is None else seed,
        output=output,
        log=log,
    )


def _csv_lines(results: dict[str, Any]) -> str:
    lines = ["key,value"]
    for key, value in results.items():
        text = json.dumps(value) if isinstance(value, (list, dict)) else str(value)
        lines.append(f"{key},\"{text}\"" if "," in text else f"{key},{text}")
    return "\n".join(lines) + "\n"


def _execute(
    ctx: typer.Context,
    command: str,
    arguments: dict[str, Any],
    body: Callable[[CliState], Outcome],
    default_format: OutputFormat = OutputFormat.JSON,
) -> None:
    """Run a command body, print its results, record the report and exit with the right code."""
    state: CliState = ctx.obj
    started = time.perf_counter()
    outcome = Outcome(results={})
    try:
        outcome = body(state)
        exit_code = 0 if outcome.ok else 1
    except BudgetExceededError as e:
        logger.error(str(e))
        outcome.results = {"error": str(e)}
        exit_code = 3
    except (PreconditionError, CertificateError) as e:
        logger.error(str(e))
        outcome.results = {"error": str(e)}
        exit_code = 1
    except GameAnalysisError as e:
        logger.error(str(e))
        outcome.results = {"error": str(e)}
        exit_code = 2

    results = jsonable(outcome.results)
    fmt = state.output or default_format
    if fmt is OutputFormat.CSV:
        typer.echo(outcome.csv if outcome.csv is not None else _csv_lines(results), nl=False)
    else:
        typer.echo(json.dumps(results, indent=2))

    if state.log:
        get_run_log().record(RunReport(
            command=command,
            arguments=jsonable({**arguments, **outcome.arguments}),
            instance_digest=outcome.digest,
            seed=state.seed,
            results=results,
            wall_time=time.perf_counter() - started,
            exit_code=exit_code,
        ))
    if exit_code:
        raise typer.Exit(exit_code)


def parse_profile(text: str) -> tuple[int, ...]:
    """Parse "0,1,-1" into (0, 1, -1)."""
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise InputFormatError(f"profiles are comma-separated integers, got {text!r}") from None


def parse_rational_option(text: str, option: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise InputFormatError(f"{option}: {e}") from None


def load_alpha(source: Optional[str], extension: Extension, n: int) -> Union[AltruismVector, FriendshipMatrix, None]:
    """Parse ``uniform:<q>`` or a parameter file for the chosen extension."""
    if extension is Extension.NONE:
        return None
    if source is None:
        raise InputFormatError(f"the {extension.value} extension needs --alpha")
    if source.startswith("uniform:"):
        level = parse_rational_option(source.split(":", 1)[1], "--alpha")
        if extension is Extension.ALTRUISM:
            return AltruismVector.uniform(n, level)
        return FriendshipMatrix.uniform(n, level)
    path = Path(source)
    storage = InstanceStorage(path.parent)
    if extension is Extension.ALTRUISM:
        alpha = storage.load(path.name, AltruismSchema).to_vector()
    else:
        alpha = storage.load(path.name, FriendshipSchema).to_matrix()
    return alpha


def _extend(game: FiniteGame, extension: Extension, alpha) -> FiniteGame:
    if extension is Extension.ALTRUISM:
        return altruistic_extension(game, alpha)
    if extension is Extension.FRIENDSHIP:
        return friendship_extension(game, alpha)
    return game


@app.command()
def poa(
    ctx: typer.Context,
    game_file: Path = typer.Argument(..., help="Instance JSON"),
    extension: Extension = typer.Option(Extension.NONE, "--extension"),
    alpha: Optional[str] = typer.Option(None, "--alpha", help="Parameter file or uniform:<q>"),
    solution: str = typer.Option("pure", "--solution", help="Solution concept (pure)"),
):
    """Enumerate pure equilibria and report the price of anarchy."""

    def body(state: CliState) -> Outcome:
        if solution != "pure":
            raise InputFormatError(f"unsupported solution concept {solution!r}")
        loaded = load_game(game_file, state.budget)
        extended = _extend(loaded.game, extension, load_alpha(alpha, extension, loaded.game.n_players))
        result = pure_poa(extended, state.budget)
        return Outcome(
            results={
                "game": extended.name,
                "poa": result.value,
                "infinite": result.infinite,
                "no_equilibrium": result.no_equilibrium,
                "equilibria": result.equilibria,
                "equilibrium_costs": result.equilibrium_costs,
                "worst_equilibrium": result.worst_equilibrium,
                "optimum": result.optimum,
                "optimum_value": result.optimum_value,
            },
            digest=loaded.digest,
        )

    _execute(ctx, "poa", {"game_file": str(game_file), "extension": extension, "alpha": alpha}, body)


@app.command()
def smoothness(
    ctx: typer.Context,
    game_file: Path = typer.Argument(..., help="Instance JSON"),
    certificate: Optional[Path] = typer.Option(None, "--certificate", help="Certificate JSON"),
    lam: Optional[str] = typer.Option(None, "--lambda", help="λ as p/q"),
    mu: Optional[str] = typer.Option(None, "--mu", help="μ as p/q"),
    sbar: Optional[str] = typer.Option(None, "--sbar", help="Pure deviation profile, defaults to s*"),
    sstar: Optional[str] = typer.Option(None, "--sstar", help="Optimal profile, defaults to the first optimum"),
    flavor: CertificateFlavor = typer.Option(CertificateFlavor.BASE, "--flavor"),
    alpha: Optional[str] = typer.Option(None, "--alpha", help="Parameter file or uniform:<q>"),
    scg: bool = typer.Option(False, "--scg", help="Check on the social contribution game"),
    search: bool = typer.Option(False, "--search", help="Also report the best robust bound"),
):
    """Verify a (λ, μ)-smoothness certificate exhaustively."""

    def body(state: CliState) -> Outcome:
        loaded = load_game(game_file, state.budget)
        game = loaded.game
        if scg:
            if loaded.defaults is None:
                raise InputFormatError("the instance declares no default strategies")
            game = corresponding_scg(game, loaded.defaults)
        if certificate is not None:
            cert = InstanceStorage(certificate.parent).load(certificate.name, CertificateSchema).to_certificate()
        else:
            if lam is None or mu is None:
                raise InputFormatError("give --certificate or both --lambda and --mu")
            optima, _ = all_optima(game, state.budget)
            target = parse_profile(sstar) if sstar else optima[0]
            cert = SmoothnessCertificate.pure_deviation(
                parse_rational_option(lam, "--lambda"), parse_rational_option(mu, "--mu"), parse_profile(sbar) if sbar else target, target, flavor
            )
        if cert.flavor is CertificateFlavor.ALTRUISTIC:
            alpha_values = load_alpha(alpha, Extension.ALTRUISM, game.n_players)
            verdict = check_smoothness_altruistic(game, alpha_values, cert, state.budget)
        elif cert.flavor is CertificateFlavor.FRIENDSHIP:
            alpha_values = load_alpha(alpha, Extension.FRIENDSHIP, game.n_players)
            verdict = check_smoothness_friendship(game, alpha_values, cert, budget=state.budget)
        else:
            alpha_values = None
            verdict = check_smoothness_base(game, cert, state.budget)
        results = {
            "game": game.name,
            "lambda": cert.lam,
            "mu": cert.mu,
            "flavor": cert.flavor,
            "verdict": "PASS" if verdict else "FAIL",
            "condition": verdict.condition,
            "witness": verdict.witness,
            "robust_bound": cert.robust_bound(game.orientation) if cert.lam > 0 else None,
        }
        if search:
            best = robust_poa_bound(game, flavor=cert.flavor, alpha=alpha_values, budget=state.budget)
            results["best_bound"] = best.value
            results["best_lambda"] = best.lam
            results["best_mu"] = best.mu
        return Outcome(results=results, ok=bool(verdict), digest=loaded.digest)

    arguments = {"game_file": str(game_file), "lambda": lam, "mu": mu, "sbar": sbar, "flavor": flavor, "scg": scg}
    _execute(ctx, "smoothness", arguments, body)


@app.command("scg-check")
def scg_check(
    ctx: typer.Context,
    game_file: Path = typer.Argument(..., help="Instance JSON"),
):
    """Check the social contribution conditions of a game with default strategies."""

    def body(state: CliState) -> Outcome:
        loaded = load_game(game_file, state.budget)
        if loaded.defaults is None:
            raise InputFormatError("the instance declares no default strategies")
        game, defaults = loaded.game, loaded.defaults
        sc_bounded = check_sc_bounded(game, defaults, state.budget)
        strong = check_strongly_sc_bounded(game, defaults, budget=state.budget)
        equal = is_scg(game, defaults, state.budget)
        identity = check_altruism_independence_identity(corresponding_scg(game, defaults), budget=state.budget)

        def summary(verdict) -> dict[str, Any]:
            return {"holds": verdict.holds, "condition": verdict.condition, "witness": verdict.witness}

        return Outcome(
            results={
                "game": game.name,
                "is_scg": summary(equal),
                "sc_bounded": summary(sc_bounded),
                "strongly_sc_bounded": summary(strong),
                "scg_identity": summary(identity),
            },
            ok=bool(sc_bounded),
            digest=loaded.digest,
        )

    _execute(ctx, "scg-check", {"game_file": str(game_file)}, body)


@app.command()
def family(
    ctx: typer.Context,
    name: Family = typer.Argument(..., help="Construction to build"),
    param: Optional[int] = typer.Option(None, "--param", help="n for congestion17, m for schedB and mixedLB"),
    out: Path = typer.Option(Path("family"), "--out", help="Directory for instance.json, alpha.json, profiles.json"),
):
    """Build a lower-bound construction, write it to disk and verify it."""

    def body(state: CliState) -> Outcome:
        run = run_family(name, param, state.budget)
        storage = InstanceStorage(out)
        for document_name, document in run.documents.items():
            storage.save(document_name, document)
        return Outcome(results={**run.results, "out": str(out)}, ok=run.ok)

    _execute(ctx, "family", {"name": name, "param": param, "out": str(out)}, body)


@app.command()
def table1(
    ctx: typer.Context,
    scale: Table1Scale = typer.Option(Table1Scale.SMALL, "--scale"),
    congestion_n: Optional[int] = typer.Option(None, "--congestion-n", min=0),
    scheduling_m: Optional[int] = typer.Option(None, "--scheduling-m", min=2),
):
    """Reproduce the robust price of anarchy table."""

    def body(state: CliState) -> Outcome:
        report = reproduce_table1(scale, state.seed, congestion_n, scheduling_m)
        rows = [
            {
                "row": row.row,
                "claimed": row.claimed,
                "observed": row.observed,
                "verdict": row.verdict,
                "checks": row.checks,
                "notes": row.notes,
            }
            for row in report.rows
        ]
        return Outcome(
            results={"rows": rows, "passed": report.passed, "wall_time": round(report.wall_time, 3)},
            ok=report.passed,
            csv=report.to_csv(),
        )

    arguments = {"scale": scale, "congestion_n": congestion_n, "scheduling_m": scheduling_m}
    _execute(ctx, "table1", arguments, body, default_format=OutputFormat.CSV)


@app.command()
def dynamics(
    ctx: typer.Context,
    game_file: Path = typer.Argument(..., help="Instance JSON"),
    start: Optional[str] = typer.Option(None, "--start", help="Initial profile, defaults to all zeros"),
    max_steps: int = typer.Option(1000, "--max-steps", min=0),
    extension: Extension = typer.Option(Extension.NONE, "--extension"),
    alpha: Optional[str] = typer.Option(None, "--alpha", help="Parameter file or uniform:<q>"),
):
    """Run best-response dynamics from a starting profile."""

    def body(state: CliState) -> Outcome:
        loaded = load_game(game_file, state.budget)
        game = _extend(loaded.game, extension, load_alpha(alpha, extension, loaded.game.n_players))
        initial = parse_profile(start) if start else (0,) * game.n_players
        result = best_response_dynamics(game, initial, max_steps)
        results = {
            "game": game.name,
            "status": result.status,
            "steps": result.steps,
            "final": result.final,
            "final_social_cost": game.social_cost(result.final),
            "trajectory": result.trajectory,
        }
        if loaded.kind == "congestion":
            cg = loaded.instance.to_game()
            results["potential"] = [congestion.rosenthal_potential(cg, s) for s in result.trajectory]
        return Outcome(results=results, digest=loaded.digest)

    arguments = {"game_file": str(game_file), "start": start, "max_steps": max_steps, "extension": extension}
    _execute(ctx, "dynamics", arguments, body)


@app.command()
def serve(
    host: str = typer.Option("127.0.0.1", "--host"),
    port: int = typer.Option(8000, "--port"),
):
    """Start the HTTP API."""
    uvicorn.run("src.main:app", host=host, port=port)


if __name__ == "__main__":
    app()
