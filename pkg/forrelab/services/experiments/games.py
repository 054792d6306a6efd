"""
Security games over oracle worlds.

Every trial samples a fresh world from its own seed. Adversaries get capped
OracleHandles and the challenge; the checkers below read plaintext, which
never leaves the harness.
"""
import logging
from typing import Optional

import numpy as np

from forrelab.agents.registry import build_adversary, build_inverter
from forrelab.core.bits import bits_to_int, int_to_bits, is_bitstring
from forrelab.core.config.settings import settings
from forrelab.core.errors import ShapeMismatchError
from forrelab.core.randomness import draw_seed, make_rng
from forrelab.services.crypto.budget import bit_error_bound
from forrelab.services.crypto.prf import owf_error_budget, owf_inputs
from forrelab.services.crypto.trapdoor import (
    gen_error_budget,
    inv_error_budget,
    pk_collision_probability,
    towf_gen,
)
from forrelab.services.oracle_world.addressing import REGION_F
from forrelab.services.oracle_world.profile import WorldKind
from forrelab.services.oracle_world.snapshot import world_digest
from forrelab.services.oracle_world.world import (
    PrfOracleWorld,
    resample_block,
    sample_prf_world,
    sample_trapdoor_world,
)
from .ac0_games import run_block_resample, run_planted_indist, run_sensitivity_tail
from .events import EventLog
from .harness import (
    TrialOutcome,
    execute,
    handles_for,
    honest_handle,
    merge_counts,
    random_bits,
)
from .models import GameKind, GameSpec, InvertMode
from .report import BoundCheck, Estimate, ExperimentReport
from .resample import run_resample_experiment

logger = logging.getLogger(__name__)


def _require(spec: GameSpec, kind: WorldKind):
    if spec.profile.kind is not kind:
        raise ShapeMismatchError(f"{spec.game.value} needs a {kind.value} profile, got {spec.profile.kind.value}")


def rig_prf_world(world: PrfOracleWorld, rng: np.random.Generator, x: int = 0) -> PrfOracleWorld:
    """Force f_k(x) = 0 for every key, re-encoding the rows that change."""
    for k in range(1 << world.n):
        row = world.f_k(k)
        if row[x] == "1":
            world = resample_block(world, REGION_F, (k,), row[:x] + "0" + row[x + 1:], draw_seed(rng))
    return world


def _decode_budget(spec: GameSpec) -> dict[str, float]:
    return {"decode_bit": bit_error_bound(spec.repetitions or settings.decode_repetitions)}


def run_prf_game(spec: GameSpec, event_log: Optional[EventLog] = None, progress: bool = False) -> ExperimentReport:
    """
    PRF distinguishing: the adversary sees the table of f_k for a uniform key,
    or a uniform table h, and outputs a bit.

    Returns:
        ExperimentReport: Pr[1 | f_k], Pr[1 | h] and their difference
    """
    _require(spec, WorldKind.PRF)

    def trial(rng: np.random.Generator) -> TrialOutcome:
        world = sample_prf_world(spec.profile, rng)
        if spec.rigged:
            world = rig_prf_world(world, rng)
        adversary = build_adversary(spec.adversary, world)
        n = world.n
        real = world.f_k(int(rng.integers(0, 1 << n)))
        h = random_bits(rng, 1 << n)
        real_handle, random_handle = handles_for(world, spec, rng)
        out_real = adversary(real_handle, real, make_rng(draw_seed(rng)))
        out_random = adversary(random_handle, h, make_rng(draw_seed(rng)))
        return TrialOutcome(
            hits={"real": out_real, "random": out_random},
            digest=world_digest(world),
            counts=merge_counts(real_handle, random_handle),
        )

    results = execute(spec, trial, event_log, progress)
    diff = results.difference("real", "random")
    estimates = results.estimates("real", "random")
    estimates.append(Estimate.of("advantage", diff, results.trials))
    checks = [BoundCheck.close_to("advantage_vs_zero", diff.estimate, diff.stderr, 0.0)]
    notes = []
    if spec.rigged and spec.adversary.name == "first-bit":
        target = 0.25 if spec.adversary.squaring else 0.5
        checks.append(BoundCheck.close_to("advantage_vs_rigged", diff.estimate, diff.stderr, target))
    if spec.adversary.squaring:
        notes.append("wrapped adversary: per-world advantage is (a - b)^2 of the inner adversary")
    if spec.adversary.name == "decode-compare":
        notes.append("decode-and-compare uses up to 2^(2n) decodes; it is a harness sanity check")
    return results.report(estimates=estimates, checks=checks, error_budgets=_decode_budget(spec), notes=notes)


def run_pk_pseudorandom_game(
    spec: GameSpec, event_log: Optional[EventLog] = None, progress: bool = False
) -> ExperimentReport:
    """Distinguish Gen public keys from uniform 3n-bit strings."""
    _require(spec, WorldKind.TRAPDOOR)

    def trial(rng: np.random.Generator) -> TrialOutcome:
        world = sample_trapdoor_world(spec.profile, rng)
        distinguisher = build_adversary(spec.adversary, world)
        gen_pk = towf_gen(honest_handle(world, spec, rng), rng).pk
        uniform_pk = random_bits(rng, spec.profile.lam)
        gen_handle, uniform_handle = handles_for(world, spec, rng)
        out_gen = distinguisher(gen_handle, gen_pk, make_rng(draw_seed(rng)))
        out_uniform = distinguisher(uniform_handle, uniform_pk, make_rng(draw_seed(rng)))
        in_image = int(np.any(world.G == bits_to_int(uniform_pk)))
        return TrialOutcome(
            hits={"gen": out_gen, "uniform": out_uniform, "uniform_in_g_image": in_image},
            digest=world_digest(world),
            counts=merge_counts(gen_handle, uniform_handle),
        )

    results = execute(spec, trial, event_log, progress)
    diff = results.difference("gen", "uniform")
    estimates = results.estimates("gen", "uniform", "uniform_in_g_image")
    estimates.append(Estimate.of("advantage", diff, results.trials))
    n, lam = spec.profile.n, spec.profile.lam
    in_image = results.proportion("uniform_in_g_image")
    checks = [
        BoundCheck.close_to("advantage_vs_zero", diff.estimate, diff.stderr, 0.0),
        BoundCheck.at_most("uniform_pk_in_g_image", in_image.estimate, in_image.stderr, 2.0 ** (n - lam)),
    ]
    budgets = {**_decode_budget(spec), "gen": gen_error_budget(spec.profile, spec.repetitions)}
    return results.report(estimates=estimates, checks=checks, error_budgets=budgets)


def _valid_guess(guess: Optional[str], width: int) -> bool:
    return guess is not None and len(guess) == width and is_bitstring(guess)


def run_towf_invert_game(
    spec: GameSpec, event_log: Optional[EventLog] = None, progress: bool = False
) -> ExperimentReport:
    """
    Inversion of the trapdoor function: the inverter gets (pk, y = F(pk, x))
    for uniform x and wins iff F(pk, x') = y. In ``gen`` mode pk comes from
    Gen; in ``uniform`` mode it is a uniform 3n-bit string.

    Besides the success rate the report carries the exact success of a
    random guess (preimage count / 2^n) and how often a uniform y* lands in
    the image of F(pk, .).
    """
    _require(spec, WorldKind.TRAPDOOR)
    n, m = spec.profile.n, spec.profile.m

    def trial(rng: np.random.Generator) -> TrialOutcome:
        world = sample_trapdoor_world(spec.profile, rng)
        inverter = build_inverter(spec.adversary.inverter, world)
        if spec.mode is InvertMode.GEN:
            pk_bits = towf_gen(honest_handle(world, spec, rng), rng).pk
        else:
            pk_bits = random_bits(rng, spec.profile.lam)
        pk = bits_to_int(pk_bits)
        x = int(rng.integers(0, 1 << n))
        y = world.f(pk, x)
        (handle,) = handles_for(world, spec, rng, count=1)
        guess = inverter(handle, pk_bits, int_to_bits(y, m), make_rng(draw_seed(rng)))
        success = int(_valid_guess(guess, n) and world.f(pk, bits_to_int(guess)) == y)
        preimages = int(np.count_nonzero(world.F[pk] == y))
        y_star = int(rng.integers(0, 1 << m))
        return TrialOutcome(
            hits={
                "success": success,
                "uniform_y_in_image": int(y_star in world.inverse_table(pk)),
                "pk_injective": int(world.is_injective(pk)),
            },
            exact={"random_guess_success": preimages / (1 << n)},
            digest=world_digest(world),
            counts=handle.counts,
        )

    results = execute(spec, trial, event_log, progress)
    success = results.proportion("success")
    membership = results.proportion("uniform_y_in_image")
    estimates = results.estimates("success", "uniform_y_in_image", "pk_injective")
    random_guess = results.mean_exact("random_guess_success")
    estimates.append(Estimate(name="random_guess_success_exact", value=random_guess, trials=results.trials))
    estimates.append(
        Estimate(name="pk_collision_exact", value=pk_collision_probability(spec.profile), trials=results.trials)
    )
    checks = [
        BoundCheck.at_most("uniform_y_in_image", membership.estimate, membership.stderr, 2.0 ** (n - m)),
    ]
    inverter = spec.adversary.inverter
    if inverter == "random-guess":
        checks.append(BoundCheck.close_to("random_guess_vs_exact", success.estimate, success.stderr, random_guess))
    if inverter == "trapdoor-holding" and spec.mode is InvertMode.GEN:
        checks.append(BoundCheck.at_least("trapdoor_correctness", success.estimate, success.stderr, 1 - 2 * 2.0 ** -n))
    budgets = {
        "gen": gen_error_budget(spec.profile, spec.repetitions),
        "inv": inv_error_budget(spec.profile, spec.repetitions),
    }
    notes = ["checker evaluates F on plaintext; inverters see only oracle handles"]
    return results.report(estimates=estimates, checks=checks, error_budgets=budgets, notes=notes)


def run_owf_invert_game(
    spec: GameSpec, event_log: Optional[EventLog] = None, progress: bool = False
) -> ExperimentReport:
    """
    Inversion of g(k) = f_k(1) ‖ ... ‖ f_k(3n) in PRF worlds, plus the
    frequency of worlds where g is not injective.
    """
    _require(spec, WorldKind.PRF)
    n = spec.profile.n
    relaxed = 3 * n >= (1 << n)
    inputs = owf_inputs(n, relaxed_indexing=relaxed)

    def g_table(world: PrfOracleWorld) -> np.ndarray:
        bits = world.table[:, inputs].astype(np.int64)
        return bits @ (1 << np.arange(len(inputs) - 1, -1, -1, dtype=np.int64))

    def trial(rng: np.random.Generator) -> TrialOutcome:
        world = sample_prf_world(spec.profile, rng)
        inverter = build_inverter(spec.adversary.inverter, world)
        table = g_table(world)
        k = int(rng.integers(0, 1 << n))
        y = int(table[k])
        (handle,) = handles_for(world, spec, rng, count=1)
        guess = inverter(handle, "", int_to_bits(y, len(inputs)), make_rng(draw_seed(rng)))
        success = int(_valid_guess(guess, n) and int(table[bits_to_int(guess)]) == y)
        return TrialOutcome(
            hits={"success": success, "collision": int(len(np.unique(table)) < len(table))},
            exact={"random_guess_success": float(np.count_nonzero(table == y)) / (1 << n)},
            digest=world_digest(world),
            counts=handle.counts,
        )

    results = execute(spec, trial, event_log, progress)
    success = results.proportion("success")
    collision = results.proportion("collision")
    estimates = results.estimates("success", "collision")
    random_guess = results.mean_exact("random_guess_success")
    estimates.append(Estimate(name="random_guess_success_exact", value=random_guess, trials=results.trials))
    checks = []
    if not relaxed:
        checks.append(BoundCheck.at_most("collision_rate", collision.estimate, collision.stderr, 2.0 ** -n))
    if spec.adversary.inverter == "random-guess":
        checks.append(BoundCheck.close_to("random_guess_vs_exact", success.estimate, success.stderr, random_guess))
    notes = ["relaxed indexing: inputs reduced mod 2^n"] if relaxed else []
    return results.report(
        estimates=estimates,
        checks=checks,
        error_budgets={"owf": owf_error_budget(spec.profile, spec.repetitions)},
        notes=notes,
    )


def run_game(spec: GameSpec, event_log: Optional[EventLog] = None, progress: bool = False) -> ExperimentReport:
    """Dispatch ``spec`` to the runner of its game kind."""
    runners = {
        GameKind.PRF_DISTINGUISH: run_prf_game,
        GameKind.PK_PSEUDORANDOM: run_pk_pseudorandom_game,
        GameKind.TOWF_INVERT: run_towf_invert_game,
        GameKind.OWF_INVERT: run_owf_invert_game,
        GameKind.BLOCK_RESAMPLE: run_block_resample,
        GameKind.SENSITIVITY_TAIL: run_sensitivity_tail,
        GameKind.PLANTED_INDIST: run_planted_indist,
        GameKind.RESAMPLE: run_resample_experiment,
    }
    return runners[spec.game](spec, event_log, progress)
