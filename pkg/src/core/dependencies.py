# src/core/dependencies.py

import logging
from functools import lru_cache

from src.core.config import Settings, get_settings
from src.core.monitoring.service import RunMonitor

# --- Component Services ---
from src.components.canon.service import CanonService
from src.components.chroma.service import ChromaService
from src.components.embed.service import EmbedService
from src.components.jobs.service import JobRunner

logger = logging.getLogger(__name__)

# --- Monitoring Getters ---

@lru_cache(maxsize=None)
def get_run_monitor() -> RunMonitor:
    logger.debug("Creating singleton instance of RunMonitor")
    return RunMonitor()

# --- Service Getters ---

@lru_cache(maxsize=None)
def get_chroma_service() -> ChromaService:
    logger.debug("Creating singleton instance of ChromaService")
    return ChromaService(settings=get_settings(), monitor=get_run_monitor())

@lru_cache(maxsize=None)
def get_embed_service() -> EmbedService:
    logger.debug("Creating singleton instance of EmbedService")
    return EmbedService(settings=get_settings(), monitor=get_run_monitor())

@lru_cache(maxsize=None)
def get_canon_service() -> CanonService:
    logger.debug("Creating singleton instance of CanonService")
    return CanonService(settings=get_settings(), monitor=get_run_monitor())

@lru_cache(maxsize=None)
def get_job_runner() -> JobRunner:
    logger.debug("Creating singleton instance of JobRunner")
    return JobRunner(
        settings=get_settings(),
        monitor=get_run_monitor(),
        chroma=get_chroma_service(),
        embed=get_embed_service(),
        canon=get_canon_service(),
    )


def runner_for(settings: Settings) -> JobRunner:
    """The shared runner, or a fresh one when command-line flags changed the settings."""
    if settings == get_settings():
        return get_job_runner()
    logger.debug("Building a JobRunner for overridden settings")
    monitor = get_run_monitor()
    return JobRunner(
        settings=settings,
        monitor=monitor,
        chroma=ChromaService(settings=settings, monitor=monitor),
        embed=EmbedService(settings=settings, monitor=monitor),
        canon=CanonService(settings=settings, monitor=monitor),
    )
