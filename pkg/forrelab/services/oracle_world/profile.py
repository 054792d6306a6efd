"""
Scale profiles for oracle worlds.

A profile fixes the world kind, the security parameter n, the per-block
Forrelation exponent ell (block length L = 2^(ell+1)) and the sampler used for
Forrelated blocks. ``paper_exact`` ties ell to n the way the construction
does (L = 2^(4n) for PRF worlds, L = 2^(15n) for trapdoor worlds); desk
profiles choose (n, ell) independently.
"""
import json
from enum import Enum
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from forrelab.core.bits import index_width
from forrelab.core.errors import BudgetExceededError, DomainRangeError
from forrelab.services.forrelation.samplers import SamplerKind


class WorldKind(str, Enum):
    PRF = "prf"
    TRAPDOOR = "trapdoor"


class ScaleProfile(BaseModel):
    """
    Size parameters of an oracle world.

    Attributes:
        kind (WorldKind): PRF world (oracle A of keyed functions) or trapdoor
            world (G, F, I)
        n (int): security parameter
        ell (int): Forrelation exponent of every block
        sampler (SamplerKind): Forrelated construction for pattern bit 1
        eps (float): Gaussian coupling; None uses 1 / (24 ln L)
        paper_exact (bool): enforce L = 2^(4n) / 2^(15n)
    """
    model_config = ConfigDict(frozen=True, use_enum_values=False)

    kind: WorldKind = WorldKind.PRF
    n: int = Field(2, ge=1, le=8)
    ell: int = Field(8, ge=1, le=20)
    sampler: SamplerKind = SamplerKind.EXACT
    eps: Optional[float] = Field(None, gt=0.0, le=1.0)
    paper_exact: bool = False

    @model_validator(mode="after")
    def _check_paper_exact(self):
        if self.paper_exact:
            exponent = 4 * self.n if self.kind is WorldKind.PRF else 15 * self.n
            if self.ell + 1 != exponent:
                raise ValueError(
                    f"paper_exact {self.kind.value} world with n={self.n} needs "
                    f"ell = {exponent - 1}, got {self.ell}"
                )
        return self

    @property
    def block_length(self) -> int:
        return 2 << self.ell

    @property
    def y_width(self) -> int:
        return self.ell + 1

    @property
    def lam(self) -> int:
        """Public-key length 3n."""
        return 3 * self.n

    @property
    def m(self) -> int:
        """Trapdoor-function output length 6n."""
        return 6 * self.n

    @property
    def block_count(self) -> int:
        n = self.n
        if self.kind is WorldKind.PRF:
            return (1 << n) * (1 << n)
        g = (1 << n) * self.lam
        f = (1 << self.lam) * (1 << n) * self.m
        i = (1 << n) * (1 << self.m) * (n + 1)
        return g + f + i

    @property
    def encoded_bits(self) -> int:
        """Total number of encoded bits of A (every block, L bits each)."""
        return self.block_count * self.block_length

    @property
    def plaintext_bits(self) -> int:
        n = self.n
        if self.kind is WorldKind.PRF:
            return 1 << (2 * n)
        return (1 << n) * self.lam + (1 << (self.lam + n)) * self.m

    @property
    def address_width(self) -> int:
        n = self.n
        if self.kind is WorldKind.PRF:
            return 2 * n + self.y_width
        # tag + widest region (F): pk, x, output index, y
        return 2 + self.lam + n + index_width(self.m) + self.y_width

    def check_budget(self, budget_bits: int, cache_blocks: int):
        """
        PRF worlds must fit every encoded bit; trapdoor worlds store only
        plaintext eagerly and at most ``cache_blocks`` encoded blocks.
        """
        if self.kind is WorldKind.PRF:
            needed = self.encoded_bits
        else:
            needed = self.plaintext_bits + min(self.block_count, cache_blocks) * self.block_length
        if needed > budget_bits:
            raise BudgetExceededError(
                f"{self.kind.value} world n={self.n} ell={self.ell} needs {needed} bits, "
                f"budget is {budget_bits}"
            )

    def describe(self) -> str:
        return (
            f"{self.kind.value}(n={self.n}, ell={self.ell}, sampler={self.sampler.value}"
            f"{', paper_exact' if self.paper_exact else ''})"
        )


PRESETS: dict[str, ScaleProfile] = {
    "desk": ScaleProfile(kind=WorldKind.PRF, n=2, ell=8),
    "desk-trapdoor": ScaleProfile(kind=WorldKind.TRAPDOOR, n=2, ell=7),
    "desk-trapdoor-n4": ScaleProfile(kind=WorldKind.TRAPDOOR, n=4, ell=7),
    "paper": ScaleProfile(kind=WorldKind.PRF, n=2, ell=7, paper_exact=True),
}


def load_profile(name_or_path: Union[str, Path]) -> ScaleProfile:
    """
    Resolve a preset name or a JSON file holding ScaleProfile fields.

    Raises:
        DomainRangeError: for an unknown preset, unreadable file or invalid fields
    """
    key = str(name_or_path)
    if key in PRESETS:
        return PRESETS[key]
    path = Path(key)
    if not path.is_file():
        raise DomainRangeError(
            f"unknown profile {key!r}; presets are {', '.join(sorted(PRESETS))}"
        )
    try:
        return ScaleProfile.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except (ValueError, OSError) as e:
        raise DomainRangeError(f"invalid profile file {path}: {e}") from e
