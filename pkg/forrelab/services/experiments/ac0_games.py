"""
Circuit experiments: sensitivity tails, block resampling and planted-block
indistinguishability. These run on circuits alone, no oracle world involved;
``trials`` counts Monte-Carlo samples.
"""
import hashlib
import logging
import math
import time
from typing import Callable, Optional

import numpy as np

from forrelab.core.errors import BudgetExceededError, ShapeMismatchError
from forrelab.core.randomness import make_rng
from forrelab.core.stats import ProportionEstimate, proportion_stderr
from forrelab.services.ac0 import (
    Ac0Circuit,
    BernoulliRows,
    BlockMatrixShape,
    PatternedRows,
    block_resample_flip_prob,
    block_resample_flip_prob_exact,
    distinguishing_advantage_exact,
    expected_block_flip_prob,
    format_netlist,
    hybrid_chain_advantages,
    sensitivity_tail_estimate,
    sensitivity_tail_exact,
)
from forrelab.services.ac0.sensitivity import MAX_EXACT_INPUTS
from .circuits import build_circuit
from .events import EventLog, ExperimentEvent
from .models import GameSpec
from .report import BoundCheck, Estimate, ExperimentReport

logger = logging.getLogger(__name__)

EXACT_BLOCK_SIZE = 16


def circuit_digest(circuit: Ac0Circuit) -> str:
    return hashlib.sha256(format_netlist(circuit).encode("utf-8")).hexdigest()


def _timed(
    spec: GameSpec, event_log: Optional[EventLog], body: Callable[[], ExperimentReport]
) -> ExperimentReport:
    log = event_log or EventLog()
    game = spec.game.value
    log.emit(ExperimentEvent(event="game_start", game=game, seed=spec.seed, trials=spec.trials))
    logger.info(f"Starting {game}: {spec.trials} samples, seed={spec.seed}")
    start = time.perf_counter()
    report = body()
    wall = time.perf_counter() - start
    log.emit(ExperimentEvent(event="game_end", game=game, seed=spec.seed, trials=spec.trials,
                             completed=spec.trials, wall_time=wall))
    logger.info(f"Finished {game} in {wall:.2f}s")
    return report.model_copy(update={"wall_time": wall})


def run_sensitivity_tail(spec: GameSpec, event_log: Optional[EventLog] = None, progress: bool = False) -> ExperimentReport:
    """Pr_x[s^x(C) >= t], with the enumerated value when the arity allows."""

    def body() -> ExperimentReport:
        circuit = build_circuit(spec.circuit)
        est = sensitivity_tail_estimate(circuit, spec.t, spec.trials, spec.seed)
        estimates = [Estimate.of("tail", est, spec.trials)]
        checks = []
        if circuit.num_inputs <= MAX_EXACT_INPUTS:
            exact = sensitivity_tail_exact(circuit, spec.t)
            estimates.append(Estimate(name="tail_exact", value=exact, trials=spec.trials))
            checks.append(BoundCheck.close_to("tail_vs_exact", est.estimate, est.stderr, exact))
        notes = [f"circuit: {circuit.num_inputs} inputs, size {circuit.size}, depth {circuit.depth}"]
        return ExperimentReport(spec=spec, estimates=estimates, checks=checks,
                                world_digest=circuit_digest(circuit), notes=notes)

    return _timed(spec, event_log, body)


def _expected_flip_estimate(
    circuit: Ac0Circuit, shape: BlockMatrixShape, dist: BernoulliRows, trials: int, rng: np.random.Generator
) -> ProportionEstimate:
    """E_{x ~ D^K} Pr_y[f(x) != f(y)], one resample per fresh x."""
    x = dist.sample(rng, trials * shape.K).reshape(trials, shape.K, shape.M)
    y = x.copy()
    y[np.arange(trials), rng.integers(shape.K, size=trials)] = dist.sample(rng, trials)
    fx = circuit.evaluate_batch(x.reshape(trials, -1))
    fy = circuit.evaluate_batch(y.reshape(trials, -1))
    return ProportionEstimate.from_counts(int((fx != fy).sum()), trials)


def run_block_resample(spec: GameSpec, event_log: Optional[EventLog] = None, progress: bool = False) -> ExperimentReport:
    """
    Flip probability of a K x M circuit under resampling one row from
    Bernoulli(p) rows: at one sampled x, and averaged over x ~ D^K.

    The circuit's arity is forced to K * M.
    """

    def body() -> ExperimentReport:
        shape = BlockMatrixShape(spec.K, spec.M)
        circuit = build_circuit(spec.circuit.model_copy(update={"num_inputs": shape.size}))
        dist = BernoulliRows(shape.M, spec.p)
        rng = make_rng(spec.seed)
        x = dist.sample(rng, shape.K).reshape(-1)
        at_x = block_resample_flip_prob(circuit, shape, dist, x, spec.trials, rng)
        expected = _expected_flip_estimate(circuit, shape, dist, spec.trials, rng)
        estimates = [Estimate.of("flip_at_x", at_x, spec.trials), Estimate.of("flip_expected", expected, spec.trials)]
        checks = []
        exact_x = block_resample_flip_prob_exact(circuit, shape, dist, x)
        estimates.append(Estimate(name="flip_at_x_exact", value=exact_x, trials=spec.trials))
        checks.append(BoundCheck.close_to("flip_at_x_vs_exact", at_x.estimate, at_x.stderr, exact_x))
        if shape.size <= EXACT_BLOCK_SIZE:
            exact = expected_block_flip_prob(circuit, shape, dist)
            estimates.append(Estimate(name="flip_expected_exact", value=exact, trials=spec.trials))
            checks.append(BoundCheck.close_to("flip_expected_vs_exact", expected.estimate, expected.stderr, exact))
            if spec.circuit.builder == "single-bit" and not spec.circuit.path:
                closed = 2 * spec.p * (1 - spec.p) / shape.K
                checks.append(BoundCheck.close_to("single_bit_closed_form", exact, 0.0, closed))
        notes = [f"x = {''.join(map(str, x))}", f"K={shape.K}, M={shape.M}, p={spec.p}"]
        return ExperimentReport(spec=spec, estimates=estimates, checks=checks,
                                world_digest=circuit_digest(circuit), notes=notes)

    return _timed(spec, event_log, body)


def run_planted_indist(spec: GameSpec, event_log: Optional[EventLog] = None, progress: bool = False) -> ExperimentReport:
    """
    Hybrid walk from P_{0^N, L} to P_{pattern, L}, one block per step, with
    L = 2^(block_ell + 1). Reports each gap, the telescoped total, and the
    exact total when the two supports are enumerable.
    """

    def body() -> ExperimentReport:
        pattern, ell = spec.pattern, spec.block_ell
        width = len(pattern) * (2 << ell)
        circuit = build_circuit(spec.circuit.model_copy(update={"num_inputs": width}))
        if circuit.num_inputs != width:
            raise ShapeMismatchError(f"circuit has {circuit.num_inputs} inputs, pattern needs {width}")
        start = "0" * len(pattern)
        chain = hybrid_chain_advantages(circuit, start, pattern, ell, spec.trials, spec.seed)
        estimates = [Estimate.of(f"hybrid_{i}:{z}", acc, spec.trials)
                     for i, (z, acc) in enumerate(zip(chain.patterns, chain.acceptance))]
        estimates.extend(Estimate(name=f"gap_{i}", value=g, trials=spec.trials) for i, g in enumerate(chain.gaps))
        estimates.append(Estimate(name="total", value=chain.total, trials=spec.trials))
        first, last = chain.acceptance[0], chain.acceptance[-1]
        stderr = math.hypot(proportion_stderr(first.estimate, first.trials), proportion_stderr(last.estimate, last.trials))
        checks = [BoundCheck.at_most("telescoped_gaps", abs(sum(chain.gaps) - chain.total), 0.0, 1e-9)]
        notes = []
        try:
            exact = distinguishing_advantage_exact(circuit, PatternedRows(start, ell), PatternedRows(pattern, ell))
        except BudgetExceededError as e:
            notes.append(f"exact advantage skipped: {e}")
        else:
            estimates.append(Estimate(name="total_exact", value=exact, trials=spec.trials))
            checks.append(BoundCheck.close_to("total_vs_exact", chain.total, stderr, exact))
        return ExperimentReport(spec=spec, estimates=estimates, checks=checks,
                                world_digest=circuit_digest(circuit), notes=notes)

    return _timed(spec, event_log, body)
