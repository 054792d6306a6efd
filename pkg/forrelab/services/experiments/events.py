"""
JSON-lines event log for experiment runs.
"""
import logging
import threading
import time
from pathlib import Path
from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, Field

from forrelab.core.config.settings import settings

logger = logging.getLogger(__name__)


class ExperimentEvent(BaseModel):
    event: Literal["game_start", "trial_batch", "game_end"]
    game: str
    seed: int
    trials: int
    completed: int = 0
    wall_time: Optional[float] = None
    timestamp: float = Field(default_factory=time.time)
    data: dict[str, Any] = Field(default_factory=dict)


class EventLog:
    """
    Appends one JSON object per line. With no path (argument or
    ``settings.event_log``) every emit is a no-op.
    """

    def __init__(self, path: Union[str, Path, None] = None):
        path = path if path is not None else settings.event_log
        self.path = Path(path) if path else None
        self._lock = threading.Lock()

    def emit(self, event: ExperimentEvent):
        if self.path is None:
            return
        line = event.model_dump_json() + "\n"
        with self._lock:
            try:
                with self.path.open("a", encoding="utf-8") as handle:
                    handle.write(line)
            except OSError as e:
                logger.error(f"Cannot write event log {self.path}: {e}", exc_info=True)
