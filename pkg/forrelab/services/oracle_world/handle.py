"""
Query-accounting view of a world.

Constructions and adversaries never see plaintext: they get an OracleHandle
exposing A, B and the quantum decoder on named blocks. The handle counts every
interaction and enforces an optional cap T on their number.
"""
import logging
from dataclasses import dataclass
from typing import Optional

from forrelab.core.config.settings import settings
from forrelab.core.errors import DomainRangeError, QueryBudgetExceeded
from forrelab.core.randomness import SeedLike, make_rng
from forrelab.services.forrelation.decoder import quantum_forrelation_test
from .addressing import parse_block_prefix
from .oracle_b import query_b
from .profile import ScaleProfile
from .world import OracleWorld

logger = logging.getLogger(__name__)


@dataclass
class QueryCounts:
    a_queries: int = 0
    b_queries: int = 0
    decodes: int = 0
    quantum_queries: int = 0

    @property
    def total(self) -> int:
        """Interactions counted against the cap: A reads, B queries and decodes."""
        return self.a_queries + self.b_queries + self.decodes


class OracleHandle:
    """
    Oracle access to one world.

    Args:
        world (OracleWorld): the world behind the handle
        cap (int | None): maximum number of interactions, None for unlimited
        repetitions (int | None): default decoder repetitions
        threshold (float | None): default decoder threshold
        seed: randomness for decoder measurements
    """

    def __init__(
        self,
        world: OracleWorld,
        cap: Optional[int] = None,
        repetitions: Optional[int] = None,
        threshold: Optional[float] = None,
        seed: SeedLike = None,
    ):
        self._world = world
        self.cap = cap
        self.repetitions = repetitions or settings.decode_repetitions
        self.threshold = settings.decode_threshold if threshold is None else threshold
        self._rng = make_rng(seed)
        self.counts = QueryCounts()

    @property
    def profile(self) -> ScaleProfile:
        return self._world.profile

    def _charge(self):
        if self.cap is not None and self.counts.total >= self.cap:
            logger.warning(f"Query cap T={self.cap} reached; rejecting query")
            raise QueryBudgetExceeded(f"query cap T={self.cap} exceeded")

    def read_a(self, address: str) -> int:
        self._charge()
        self.counts.a_queries += 1
        return self._world.read_a(address)

    def query_b(self, encoded_query: str) -> int:
        self._charge()
        self.counts.b_queries += 1
        return query_b(self._world, encoded_query)

    def decode(self, prefix: str, repetitions: Optional[int] = None) -> int:
        """
        Run the amplified forrelation test on the block named by ``prefix``.

        A prefix that names no block decodes the all-zero region and returns 0.
        Each repetition makes 2 quantum queries.
        """
        reps = self.repetitions if repetitions is None else repetitions
        if reps < 1:
            raise DomainRangeError(f"repetitions must be >= 1, got {reps}")
        self._charge()
        self.counts.decodes += 1
        self.counts.quantum_queries += 2 * reps
        key = parse_block_prefix(self.profile, prefix)
        if key is None:
            return 0
        return quantum_forrelation_test(
            self._world.block(key), reps, self.threshold, self._rng
        )

    def decode_string(self, prefixes: list[str], repetitions: Optional[int] = None) -> str:
        return "".join(str(self.decode(p, repetitions)) for p in prefixes)
