"""
Trial execution.

Trial i receives the i-th child of ``SeedSequence(seed).spawn(trials)``, so
its randomness does not depend on scheduling. Results come back in trial
order whatever the worker count.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, TypeVar

import numpy as np
from tqdm import tqdm

from forrelab.core.config.settings import settings
from forrelab.core.randomness import derive_seeds

logger = logging.getLogger(__name__)

T = TypeVar("T")


def run_trials(
    trial: Callable[[int, np.random.SeedSequence], T],
    trials: int,
    seed: int,
    workers: Optional[int] = None,
    progress: bool = False,
    on_batch: Optional[Callable[[int], None]] = None,
    desc: str = "trials",
) -> list[T]:
    """
    Run ``trial(i, seed_i)`` for i < trials.

    Args:
        trial: one trial; must not share mutable state with other trials
        trials (int): number of trials
        seed (int): root seed
        workers (int | None): thread count, settings.workers if None
        progress (bool): show a tqdm bar
        on_batch: called with the number of completed trials every tenth of the run

    Returns:
        list: per-trial results in trial order
    """
    seeds = derive_seeds(seed, trials)
    workers = workers or settings.workers
    step = max(1, trials // 10)
    results: list[T] = []
    bar = tqdm(total=trials, disable=not progress, desc=desc)
    try:
        if workers <= 1:
            for i, s in enumerate(seeds):
                results.append(trial(i, s))
                bar.update(1)
                if on_batch and (i + 1) % step == 0:
                    on_batch(i + 1)
        else:
            logger.debug(f"Running {trials} trials on {workers} threads")
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for i, result in enumerate(pool.map(trial, range(trials), seeds)):
                    results.append(result)
                    bar.update(1)
                    if on_batch and (i + 1) % step == 0:
                        on_batch(i + 1)
    finally:
        bar.close()
    return results
