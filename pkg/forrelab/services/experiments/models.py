"""
Experiment specifications.
"""
from enum import Enum
from typing import Optional, Union

from pydantic import BaseModel, Field, field_validator

from forrelab.agents.registry import AdversaryRef
from forrelab.core.config.settings import settings
from forrelab.core.errors import DomainRangeError
from forrelab.services.oracle_world.profile import PRESETS, ScaleProfile, load_profile


class GameKind(str, Enum):
    PRF_DISTINGUISH = "prf-distinguish"
    PK_PSEUDORANDOM = "pk-pseudorandom"
    TOWF_INVERT = "towf-invert"
    OWF_INVERT = "owf-invert"
    BLOCK_RESAMPLE = "block-resample"
    SENSITIVITY_TAIL = "sensitivity-tail"
    PLANTED_INDIST = "planted-indist"
    RESAMPLE = "resample"


class ResampleConfig(str, Enum):
    """What gets planted: a PRF row, a public key G(td), or an image F(pk, x)."""
    PRF = "prf"
    PUBLIC_KEY = "pk"
    IMAGE = "image"


class InvertMode(str, Enum):
    GEN = "gen"
    UNIFORM = "uniform"


class CircuitRef(BaseModel):
    """
    A circuit for the AC0 games: a netlist file, or a named builder.

    Builders: parity, or, and, threshold (param = t), single-bit
    (param = index), constant (param = value), random (size, depth),
    phi-proxy (num_inputs = 2^(ell+1)).
    """
    builder: str = "parity"
    path: Optional[str] = None
    num_inputs: int = Field(8, ge=1, le=64)
    param: int = 0
    size: int = Field(12, ge=1)
    depth: int = Field(3, ge=1)
    circuit_seed: int = 0


class GameSpec(BaseModel):
    """
    One experiment: the game, its world profile, the adversary and the trial
    budget. Only the fields a game reads matter for it.

    Attributes:
        game: which experiment to run
        profile: world profile, or a preset name / JSON path
        adversary: adversary (distinguisher or inverter) reference
        trials: number of independent trials
        seed: root seed; trial i uses the i-th spawned child
        cap: query cap T; None means query_cap_factor * n^2
        repetitions: decoder repetitions; None means the configured default
        mode: Gen keys or uniform keys for inversion / pk games
        resample: planting configuration of the resampling experiment
        rigged: force f_k(0) = 0 in every PRF row
        circuit: circuit for the AC0 games
        t: sensitivity threshold
        K, M, p: block shape and Bernoulli row bias for block resampling
        pattern: target pattern of the planted-block hybrid chain
        block_ell: block exponent for the planted-block game
        workers: worker threads; None means settings.workers
    """
    game: GameKind
    profile: ScaleProfile = PRESETS["desk"]
    adversary: AdversaryRef = Field(default_factory=AdversaryRef)
    trials: int = Field(200, ge=1)
    seed: int = Field(0, ge=0)
    cap: Optional[int] = Field(None, ge=1)
    repetitions: Optional[int] = Field(None, ge=1)
    mode: InvertMode = InvertMode.GEN
    resample: ResampleConfig = ResampleConfig.PRF
    rigged: bool = False
    circuit: CircuitRef = Field(default_factory=CircuitRef)
    t: float = 2.0
    K: int = Field(3, ge=1)
    M: int = Field(2, ge=1)
    p: float = Field(0.5, ge=0.0, le=1.0)
    pattern: str = "1"
    block_ell: int = Field(1, ge=1, le=3)
    workers: Optional[int] = Field(None, ge=1, exclude=True)

    @field_validator("profile", mode="before")
    @classmethod
    def _resolve_profile(cls, value: Union[str, dict, ScaleProfile]):
        if isinstance(value, str):
            try:
                return load_profile(value)
            except DomainRangeError as e:
                raise ValueError(str(e)) from e
        return value

    def query_cap(self) -> int:
        return self.cap or settings.query_cap_factor * self.profile.n ** 2
