"""
Row distributions over {0,1}^M for the block-sensitivity machinery.

A row distribution samples (size, M) arrays of 0/1 and, when it is small
enough, lists its full support with probabilities so estimators can be
checked against exact enumeration.

- UniformRows: i.i.d. fair bits
- BernoulliRows: independent bits with per-column bias p
- PatternedRows: P_{z,L}, one Forrelation block per pattern bit
  (Forrelated where z_i = 1, uniform where z_i = 0)
- MixtureRows: a weighted mixture, e.g. P_{S,L} = uniform mixture of
  P_{z,L} over z in S
"""
import itertools
from abc import ABC, abstractmethod
from typing import Optional, Sequence

import numpy as np

from forrelab.core.bits import is_bitstring
from forrelab.core.errors import BudgetExceededError, DomainRangeError, ShapeMismatchError
from forrelab.services.forrelation.samplers import (
    SamplerKind,
    default_eps,
    sample_exact_batch,
    sample_gaussian_batch,
    sample_uniform_batch,
)
from forrelab.services.forrelation.transform import fwht

MAX_SUPPORT = 1 << 16


def all_rows(width: int) -> np.ndarray:
    """Every row of {0,1}^width in lexicographic order, MSB first."""
    if width > 20:
        raise BudgetExceededError(f"cannot enumerate 2^{width} rows")
    values = np.arange(1 << width, dtype=np.int64)[:, None]
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)[None, :]
    return ((values >> shifts) & 1).astype(np.uint8)


class RowDistribution(ABC):
    width: int

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """(size, width) uint8 array of independent rows."""

    @abstractmethod
    def support(self, max_support: int = MAX_SUPPORT) -> tuple[np.ndarray, np.ndarray]:
        """(rows, probs): every row with non-zero mass and its probability."""


class UniformRows(RowDistribution):
    def __init__(self, width: int):
        if width < 1:
            raise DomainRangeError("row width must be >= 1")
        self.width = width

    def sample(self, rng, size):
        return rng.integers(0, 2, size=(size, self.width), dtype=np.uint8)

    def support(self, max_support=MAX_SUPPORT):
        if (1 << self.width) > max_support:
            raise BudgetExceededError(f"uniform support 2^{self.width} exceeds {max_support}")
        rows = all_rows(self.width)
        return rows, np.full(len(rows), 1.0 / len(rows))


class BernoulliRows(RowDistribution):
    """Independent bits, column j equal to 1 with probability p[j]."""

    def __init__(self, width: int, p):
        p = np.broadcast_to(np.asarray(p, dtype=np.float64), (width,)).copy()
        if np.any((p < 0) | (p > 1)):
            raise DomainRangeError("bit probabilities must lie in [0, 1]")
        self.width = width
        self.p = p

    def sample(self, rng, size):
        return (rng.random((size, self.width)) < self.p).astype(np.uint8)

    def support(self, max_support=MAX_SUPPORT):
        if (1 << self.width) > max_support:
            raise BudgetExceededError(f"support 2^{self.width} exceeds {max_support}")
        rows = all_rows(self.width)
        probs = np.prod(np.where(rows == 1, self.p, 1.0 - self.p), axis=1)
        keep = probs > 0
        return rows[keep], probs[keep]


def _block_support(ell: int, forrelated: bool, sampler: SamplerKind):
    length = 2 << ell
    if not forrelated:
        rows = all_rows(length)
        return rows, np.full(len(rows), 1.0 / len(rows))
    if sampler is not SamplerKind.EXACT:
        raise BudgetExceededError("only the exact sampler has an enumerable support")
    f_rows = all_rows(1 << ell)
    g_rows = (fwht(1.0 - 2.0 * f_rows) < 0).astype(np.uint8)
    rows = np.concatenate((f_rows, g_rows), axis=1)
    return rows, np.full(len(rows), 1.0 / len(rows))


class PatternedRows(RowDistribution):
    """
    P_{z,L}: a row is the concatenation of len(z) blocks f ‖ g of
    L = 2^(ell+1) bits each.
    """

    def __init__(
        self,
        pattern: str,
        ell: int,
        sampler: SamplerKind = SamplerKind.EXACT,
        eps: Optional[float] = None,
    ):
        if not pattern or not is_bitstring(pattern):
            raise ShapeMismatchError(f"pattern must be a non-empty bit string, got {pattern!r}")
        if sampler is SamplerKind.EXACT and ell < 1 and "1" in pattern:
            raise DomainRangeError("the exact sampler needs ell >= 1")
        self.pattern = pattern
        self.ell = ell
        self.sampler = sampler
        self.eps = default_eps(ell) if eps is None else eps
        self.block_length = 2 << ell
        self.width = len(pattern) * self.block_length

    def sample(self, rng, size):
        blocks = []
        for bit in self.pattern:
            if bit == "0":
                f, g = sample_uniform_batch(self.ell, size, rng)
            elif self.sampler is SamplerKind.GAUSSIAN:
                f, g = sample_gaussian_batch(self.ell, self.eps, size, rng)
            else:
                f, g = sample_exact_batch(self.ell, size, rng)
            blocks.append(np.concatenate((f, g), axis=1))
        return np.concatenate(blocks, axis=1).astype(np.uint8)

    def support(self, max_support=MAX_SUPPORT):
        parts = [_block_support(self.ell, bit == "1", self.sampler) for bit in self.pattern]
        total = int(np.prod([len(r) for r, _ in parts], dtype=object))
        if total > max_support:
            raise BudgetExceededError(f"patterned support {total} exceeds {max_support}")
        rows, probs = [], []
        for combo in itertools.product(*(range(len(r)) for r, _ in parts)):
            rows.append(np.concatenate([parts[i][0][c] for i, c in enumerate(combo)]))
            probs.append(np.prod([parts[i][1][c] for i, c in enumerate(combo)]))
        return np.array(rows, dtype=np.uint8), np.array(probs)


class MixtureRows(RowDistribution):
    def __init__(self, components: Sequence[RowDistribution], weights: Optional[Sequence[float]] = None):
        if not components:
            raise ShapeMismatchError("mixture needs at least one component")
        widths = {c.width for c in components}
        if len(widths) != 1:
            raise ShapeMismatchError(f"mixture components disagree on width: {sorted(widths)}")
        self.components = list(components)
        self.width = widths.pop()
        w = np.ones(len(components)) if weights is None else np.asarray(weights, dtype=np.float64)
        if len(w) != len(components) or np.any(w < 0) or w.sum() <= 0:
            raise DomainRangeError("mixture weights must be non-negative and not all zero")
        self.weights = w / w.sum()

    def sample(self, rng, size):
        choice = rng.choice(len(self.components), size=size, p=self.weights)
        out = np.empty((size, self.width), dtype=np.uint8)
        for index, component in enumerate(self.components):
            mask = choice == index
            count = int(mask.sum())
            if count:
                out[mask] = component.sample(rng, count)
        return out

    def support(self, max_support=MAX_SUPPORT):
        rows, probs = [], []
        for weight, component in zip(self.weights, self.components):
            if weight == 0:
                continue
            r, p = component.support(max_support)
            rows.append(r)
            probs.append(weight * p)
        rows = np.concatenate(rows)
        if len(rows) > max_support:
            raise BudgetExceededError(f"mixture support {len(rows)} exceeds {max_support}")
        return rows, np.concatenate(probs)


def pattern_set_rows(
    patterns: Sequence[str],
    ell: int,
    sampler: SamplerKind = SamplerKind.EXACT,
    eps: Optional[float] = None,
) -> MixtureRows:
    """P_{S,L}: pick z uniformly from S, then draw from P_{z,L}."""
    return MixtureRows([PatternedRows(z, ell, sampler, eps) for z in patterns])
