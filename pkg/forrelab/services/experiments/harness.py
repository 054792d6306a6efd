"""
Shared plumbing of the games: per-trial outcomes, event emission, timing and
aggregation into a report.
"""
import hashlib
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from forrelab.core.randomness import draw_seed, make_rng
from forrelab.core.stats import DifferenceEstimate, ProportionEstimate
from forrelab.services.oracle_world.handle import OracleHandle, QueryCounts
from forrelab.services.oracle_world.world import OracleWorld
from .events import EventLog, ExperimentEvent
from .models import GameSpec
from .pool import run_trials
from .report import Estimate, ExperimentReport

logger = logging.getLogger(__name__)


@dataclass
class TrialOutcome:
    """Per-trial indicators (summed over trials), exact side values (averaged) and accounting."""
    hits: dict[str, int] = field(default_factory=dict)
    exact: dict[str, float] = field(default_factory=dict)
    digest: str = ""
    counts: QueryCounts = field(default_factory=QueryCounts)


@dataclass
class GameResults:
    spec: GameSpec
    outcomes: list[TrialOutcome]
    wall_time: float

    @property
    def trials(self) -> int:
        return len(self.outcomes)

    def total(self, name: str) -> int:
        return sum(o.hits.get(name, 0) for o in self.outcomes)

    def proportion(self, name: str) -> ProportionEstimate:
        return ProportionEstimate.from_counts(self.total(name), self.trials)

    def difference(self, first: str, second: str) -> DifferenceEstimate:
        return DifferenceEstimate.from_counts(self.total(first), self.trials, self.total(second), self.trials)

    def mean_exact(self, name: str) -> float:
        return float(np.mean([o.exact[name] for o in self.outcomes]))

    def digest(self) -> str:
        h = hashlib.sha256()
        for o in self.outcomes:
            h.update(o.digest.encode("ascii"))
        return h.hexdigest()

    def query_counts(self) -> dict[str, int]:
        return {
            "a_queries": sum(o.counts.a_queries for o in self.outcomes),
            "b_queries": sum(o.counts.b_queries for o in self.outcomes),
            "decodes": sum(o.counts.decodes for o in self.outcomes),
            "quantum_queries": sum(o.counts.quantum_queries for o in self.outcomes),
            "max_per_trial": max((o.counts.total for o in self.outcomes), default=0),
        }

    def report(self, **fields) -> ExperimentReport:
        return ExperimentReport(
            spec=self.spec,
            world_digest=fields.pop("world_digest", None) or self.digest(),
            query_counts=self.query_counts(),
            wall_time=self.wall_time,
            **fields,
        )

    def estimates(self, *names: str) -> list[Estimate]:
        return [Estimate.of(name, self.proportion(name), self.trials) for name in names]


def merge_counts(*handles: OracleHandle) -> QueryCounts:
    """Sum the adversary-side counts of several handles."""
    merged = QueryCounts()
    for h in handles:
        merged.a_queries += h.counts.a_queries
        merged.b_queries += h.counts.b_queries
        merged.decodes += h.counts.decodes
        merged.quantum_queries += h.counts.quantum_queries
    return merged


def execute(
    spec: GameSpec,
    trial: Callable[[np.random.Generator], TrialOutcome],
    event_log: Optional[EventLog] = None,
    progress: bool = False,
) -> GameResults:
    """
    Run ``trial`` once per trial with its own generator, emitting
    game_start / trial_batch / game_end events.
    """
    log = event_log or EventLog()
    game = spec.game.value
    log.emit(ExperimentEvent(event="game_start", game=game, seed=spec.seed, trials=spec.trials,
                             data={"profile": spec.profile.describe()}))
    logger.info(f"Starting {game}: {spec.profile.describe()}, {spec.trials} trials, seed={spec.seed}")
    start = time.perf_counter()

    def on_batch(done: int):
        log.emit(ExperimentEvent(event="trial_batch", game=game, seed=spec.seed, trials=spec.trials,
                                 completed=done))

    outcomes = run_trials(
        lambda i, seed_seq: trial(make_rng(seed_seq)),
        spec.trials,
        spec.seed,
        workers=spec.workers,
        progress=progress,
        on_batch=on_batch,
        desc=game,
    )
    wall = time.perf_counter() - start
    log.emit(ExperimentEvent(event="game_end", game=game, seed=spec.seed, trials=spec.trials,
                             completed=spec.trials, wall_time=wall))
    logger.info(f"Finished {game} in {wall:.2f}s")
    return GameResults(spec=spec, outcomes=outcomes, wall_time=wall)


def handles_for(world: OracleWorld, spec: GameSpec, rng: np.random.Generator, count: int = 2) -> list[OracleHandle]:
    """Capped adversary handles with independent decoder streams."""
    return [
        OracleHandle(world, cap=spec.query_cap(), repetitions=spec.repetitions, seed=draw_seed(rng))
        for _ in range(count)
    ]


def honest_handle(world: OracleWorld, spec: GameSpec, rng: np.random.Generator) -> OracleHandle:
    """Uncapped handle for the honest parties of a game."""
    return OracleHandle(world, repetitions=spec.repetitions, seed=draw_seed(rng))


def random_bits(rng: np.random.Generator, width: int) -> str:
    return "".join(str(int(b)) for b in rng.integers(0, 2, size=width))
