import logging

from fastapi import FastAPI

from forrelab.api.routes import experiments
from forrelab.core.config.settings import settings

logging.basicConfig(level=settings.log_level)

app = FastAPI(title="forrelab API")

app.include_router(
    experiments.router,
    prefix="/api/v1",
)
