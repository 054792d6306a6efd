"""
FastAPI routes for running experiments over oracle worlds.

Usage:
    POST /api/v1/experiments - Run a game from a GameSpec, returns the report
    GET /api/v1/health - Check API health status
    GET /api/v1/info - Get API information and capabilities
"""
import logging

from fastapi import APIRouter, HTTPException, status
from fastapi.concurrency import run_in_threadpool

from forrelab import __version__
from forrelab.agents.registry import BUILTIN_ADVERSARIES, INVERTERS
from forrelab.core.config.settings import settings
from forrelab.core.errors import ForrelabError, PreconditionError
from forrelab.services.experiments import BUILDERS, ExperimentReport, GameKind, GameSpec, run_game
from forrelab.services.oracle_world.profile import PRESETS

logger = logging.getLogger(__name__)

router = APIRouter(tags=["Experiments"])


@router.post("/experiments", response_model=ExperimentReport)
async def run_experiment(spec: GameSpec):
    """
    Run one experiment synchronously and return its report.

    External adversaries are refused: the API never spawns client-supplied
    commands.
    """
    logger.info(f"Received experiment request: {spec.game.value}, {spec.trials} trials, seed={spec.seed}")
    if spec.adversary.kind == "external":
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail="external adversaries are only available from the command line",
        )
    try:
        report = await run_in_threadpool(run_game, spec)
    except PreconditionError as e:
        logger.warning(f"Rejected experiment {spec.game.value}: {e}")
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
    except ForrelabError as e:
        logger.error(f"Experiment {spec.game.value} failed: {e}", exc_info=True)
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))
    logger.info(f"Experiment {spec.game.value} finished in {report.wall_time:.2f}s, consistent={report.consistent}")
    return report


@router.get("/health")
async def health_check():
    """
    Health check endpoint to verify if API is running.
    """
    logger.debug("Health check requested")
    return {
        "status": "healthy",
        "service": "forrelab API",
        "version": __version__,
        "settings": {
            "workers": settings.workers,
            "decode_repetitions": settings.decode_repetitions,
            "query_cap_factor": settings.query_cap_factor,
        },
    }


@router.get("/info")
async def get_api_info():
    """
    Get information about the API capabilities and supported features.

    Returns:
        dict: Information about the API
    """
    return {
        "name": "forrelab API",
        "version": __version__,
        "description": "Security games and resampling experiments over Forrelation-encoded oracle worlds",
        "games": [kind.value for kind in GameKind],
        "profiles": sorted(PRESETS),
        "adversaries": sorted(BUILTIN_ADVERSARIES) + ["fake-pk:<inverter>"],
        "inverters": sorted(INVERTERS),
        "circuit_builders": list(BUILDERS),
        "endpoints": [
            "POST /api/v1/experiments - Run an experiment",
            "GET /api/v1/health - Check service health",
            "GET /api/v1/info - Get API information",
        ],
    }
