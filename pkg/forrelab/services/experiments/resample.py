"""
Resampling experiments: run one distinguisher on a world A and on the world
A' obtained by planting a fresh encoded slice, and measure how often its
output changes.

Configurations:
    prf    A' = A with row f_k replaced by a uniform pattern; z is a uniform h
    pk     A' = A with G(td) = pk* for a uniform pk*; z = pk*
    image  A' = A with F(pk, x) = y* for a uniform y*; z = y*

Both runs share the adversary's randomness and the decoder stream, so the
paired difference isolates the effect of the planted slice.
"""
import logging
from typing import Optional

import numpy as np

from forrelab.agents.registry import build_adversary
from forrelab.core.bits import int_to_bits
from forrelab.core.errors import ShapeMismatchError
from forrelab.core.randomness import draw_seed, make_rng
from forrelab.services.oracle_world.addressing import REGION_F
from forrelab.services.oracle_world.handle import OracleHandle
from forrelab.services.oracle_world.profile import WorldKind
from forrelab.services.oracle_world.snapshot import world_digest
from forrelab.services.oracle_world.world import (
    OracleWorld,
    plant_image,
    plant_public_key,
    resample_block,
    sample_prf_world,
    sample_trapdoor_world,
)
from .events import EventLog
from .harness import TrialOutcome, execute, merge_counts, random_bits
from .models import GameSpec, ResampleConfig
from .report import BoundCheck, Estimate, ExperimentReport

logger = logging.getLogger(__name__)

REGION_IGNORING = ("constant0", "constant1", "b-only")

_WORLD_KIND = {
    ResampleConfig.PRF: WorldKind.PRF,
    ResampleConfig.PUBLIC_KEY: WorldKind.TRAPDOOR,
    ResampleConfig.IMAGE: WorldKind.TRAPDOOR,
}


def _plant(spec: GameSpec, rng: np.random.Generator) -> tuple[OracleWorld, OracleWorld, str, dict]:
    """Sample A, plant the configured slice and draw the challenge z."""
    profile = spec.profile
    n = profile.n
    if spec.resample is ResampleConfig.PRF:
        world = sample_prf_world(profile, rng)
        k = int(rng.integers(0, 1 << n))
        planted = resample_block(world, REGION_F, (k,), random_bits(rng, 1 << n), draw_seed(rng))
        return world, planted, random_bits(rng, 1 << n), {}

    world = sample_trapdoor_world(profile, rng)
    if spec.resample is ResampleConfig.PUBLIC_KEY:
        td = int(rng.integers(0, 1 << n))
        pk_star = int(rng.integers(0, 1 << profile.lam))
        planted = plant_public_key(world, td, pk_star, draw_seed(rng))
        return world, planted, int_to_bits(pk_star, profile.lam), {}

    pk = world.g(int(rng.integers(0, 1 << n)))
    x = int(rng.integers(0, 1 << n))
    y_star = int(rng.integers(0, 1 << profile.m))
    planted = plant_image(world, pk, x, y_star, draw_seed(rng))
    image = world.inverse_table(pk)
    side = {
        "hits": {"trivial_inversion": int(y_star in image)},
        "exact": {"image_density": len(image) / (1 << profile.m)},
    }
    return world, planted, int_to_bits(y_star, profile.m), side


def run_resample_experiment(
    spec: GameSpec, event_log: Optional[EventLog] = None, progress: bool = False
) -> ExperimentReport:
    """
    Estimate Pr[Adv^{A'}(z) = 1] - Pr[Adv^{A}(z) = 1] together with the rate
    at which the two runs disagree, which bounds the expected absolute
    per-world difference.

    Raises:
        ShapeMismatchError: if the profile kind does not fit the configuration
    """
    wanted = _WORLD_KIND[spec.resample]
    if spec.profile.kind is not wanted:
        raise ShapeMismatchError(
            f"resample config {spec.resample.value} needs a {wanted.value} profile, "
            f"got {spec.profile.kind.value}"
        )

    def trial(rng: np.random.Generator) -> TrialOutcome:
        world, planted, challenge, side = _plant(spec, rng)
        handle_seed, adversary_seed = draw_seed(rng), draw_seed(rng)
        outputs, handles = [], []
        for w in (world, planted):
            handle = OracleHandle(w, cap=spec.query_cap(), repetitions=spec.repetitions, seed=handle_seed)
            adversary = build_adversary(spec.adversary, w)
            outputs.append(adversary(handle, challenge, make_rng(adversary_seed)))
            handles.append(handle)
        original, resampled = outputs
        hits = {"original": original, "resampled": resampled, "disagree": int(original != resampled)}
        hits.update(side.get("hits", {}))
        return TrialOutcome(
            hits=hits,
            exact=side.get("exact", {}),
            digest=world_digest(planted),
            counts=merge_counts(*handles),
        )

    results = execute(spec, trial, event_log, progress)
    diff = results.difference("resampled", "original")
    disagree = results.proportion("disagree")
    estimates = results.estimates("original", "resampled", "disagree")
    estimates.append(Estimate.of("difference", diff, results.trials))
    checks = []
    notes = [f"planted slice: {spec.resample.value}"]
    if spec.adversary.kind == "builtin" and spec.adversary.name in REGION_IGNORING and not spec.adversary.squaring:
        checks.append(BoundCheck.at_most("disagreement_region_ignoring", disagree.estimate, 0.0, 0.0))
        notes.append(f"{spec.adversary.name} never reads A: outputs must agree in every trial")

    if spec.resample is ResampleConfig.IMAGE:
        n, m = spec.profile.n, spec.profile.m
        trivial = results.proportion("trivial_inversion")
        estimates.extend(results.estimates("trivial_inversion"))
        estimates.append(
            Estimate(name="image_density_exact", value=results.mean_exact("image_density"), trials=results.trials)
        )
        checks.append(BoundCheck.at_most("trivial_inversion", trivial.estimate, trivial.stderr, 2.0 ** (n - m)))

    logger.info(f"Resample {spec.resample.value}: difference {diff.estimate:+.4f}, disagreement {disagree.estimate:.4f}")
    return results.report(estimates=estimates, checks=checks, notes=notes)
