"""
Experiment harness: game specifications, trial execution, games and reports.
"""

from .models import CircuitRef, GameKind, GameSpec, InvertMode, ResampleConfig
from .report import CSV_COLUMNS, BoundCheck, Estimate, ExperimentReport, load_report
from .events import EventLog, ExperimentEvent
from .pool import run_trials
from .circuits import BUILDERS, build_circuit
from .harness import GameResults, TrialOutcome, execute
from .games import (
    rig_prf_world,
    run_game,
    run_owf_invert_game,
    run_pk_pseudorandom_game,
    run_prf_game,
    run_towf_invert_game,
)
from .resample import run_resample_experiment
from .ac0_games import run_block_resample, run_planted_indist, run_sensitivity_tail

__all__ = [
    "CircuitRef",
    "GameKind",
    "GameSpec",
    "InvertMode",
    "ResampleConfig",
    "CSV_COLUMNS",
    "BoundCheck",
    "Estimate",
    "ExperimentReport",
    "load_report",
    "EventLog",
    "ExperimentEvent",
    "run_trials",
    "BUILDERS",
    "build_circuit",
    "GameResults",
    "TrialOutcome",
    "execute",
    "rig_prf_world",
    "run_game",
    "run_prf_game",
    "run_pk_pseudorandom_game",
    "run_towf_invert_game",
    "run_owf_invert_game",
    "run_resample_experiment",
    "run_block_resample",
    "run_planted_indist",
    "run_sensitivity_tail",
]
