"""
Random subsets of GF(q)^n.

Randomness comes from numpy's Philox4x64-10 counter-based bit generator,
keyed by (seed, trial). Under the Bernoulli model point i consumes the i-th
double of its stream, so a draw depends only on (seed, trial) and never on
evaluation order, sharding or worker count.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from fqpatterns.core.caps import enforce_cap
from fqpatterns.core.errors import BadParams, DimensionMismatch
from fqpatterns.services.field import FieldCtx

RNG_ID = "numpy-philox4x64-10/key=seed|trial<<64/stream<<192/v1"

_STREAM_POINTS = 0
_STREAM_SHUFFLE = 1


class Model(str, Enum):
    BERNOULLI = "bernoulli"
    UNIFORM = "uniform"
    EXPLICIT = "explicit"


def _generator(seed: int, trial: int, stream: int) -> np.random.Generator:
    if not 0 <= seed < 1 << 64:
        raise BadParams(f"seed = {seed} must lie in [0, 2^64)")
    if not 0 <= trial < 1 << 64:
        raise BadParams(f"trial = {trial} must lie in [0, 2^64)")
    bitgen = np.random.Philox(key=seed | (trial << 64), counter=stream << 192)
    return np.random.Generator(bitgen)


def _space_size(ctx: FieldCtx, n: int) -> int:
    if n < 1:
        raise BadParams(f"n = {n} must be >= 1")
    size = ctx.q ** n
    enforce_cap("q^n", size, "SPACE_CAP")
    return size


@dataclass(frozen=True, eq=False)
class SampleSet:
    """A subset of GF(q)^n as a read-only membership bitset, plus provenance."""

    ctx: FieldCtx
    n: int
    bits: np.ndarray
    model: Model = Model.EXPLICIT
    param: float | int | None = None
    seed: int | None = None
    trial: int | None = None

    def __post_init__(self):
        bits = np.array(self.bits, dtype=bool, copy=True)
        if bits.shape != (self.ctx.q ** self.n,):
            raise DimensionMismatch(
                f"bitset of shape {bits.shape} does not match GF({self.ctx.q})^{self.n}"
            )
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def num_points(self) -> int:
        return len(self.bits)

    @property
    def size(self) -> int:
        return int(self.bits.sum())

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def to_hex(self) -> str:
        """Bitset as hex, point 0 in the least significant bit of the first byte."""
        return np.packbits(self.bits, bitorder="little").tobytes().hex()

    @classmethod
    def from_indices(cls, ctx: FieldCtx, n: int, indices: Iterable[int]) -> "SampleSet":
        idx = np.asarray(list(indices), dtype=np.int64)
        size = ctx.q ** n
        if idx.size and (idx.min() < 0 or idx.max() >= size):
            raise BadParams(f"point index outside [0, {size})")
        bits = np.zeros(size, dtype=bool)
        bits[idx] = True
        return cls(ctx, n, bits)

    def provenance(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "model": self.model.value,
            "param": self.param,
            "seed": self.seed,
            "trial": self.trial,
            "rng": RNG_ID,
        }


def point_uniforms(ctx: FieldCtx, n: int, seed: int, trial: int) -> np.ndarray:
    """One U[0,1) double per point, indexed by point index."""
    size = _space_size(ctx, n)
    return _generator(seed, trial, _STREAM_POINTS).random(size)


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0.0 <= delta <= 1.0:
        raise BadParams(f"delta = {delta} must lie in [0, 1]")
    return delta


def sample_bernoulli(ctx: FieldCtx, n: int, delta: float, seed: int, trial: int = 0) -> SampleSet:
    delta = _check_delta(delta)
    u = point_uniforms(ctx, n, seed, trial)
    return SampleSet(ctx, n, u < delta, Model.BERNOULLI, delta, seed, trial)


def _check_M(M: int, size: int) -> int:
    if not 0 <= M <= size:
        raise BadParams(f"M = {M} must lie in [0, {size}]")
    return int(M)


def _shuffled_prefix(size: int, M: int, seed: int, trial: int) -> np.ndarray:
    # step i only writes positions >= i, so perm[:k] is final after k steps
    rng = _generator(seed, trial, _STREAM_SHUFFLE)
    perm = np.arange(size, dtype=np.int64)
    if M:
        targets = rng.integers(np.arange(M), size)
        for i, j in enumerate(targets.tolist()):
            perm[i], perm[j] = perm[j], perm[i]
    return perm[:M]


def sample_uniform_m(ctx: FieldCtx, n: int, M: int, seed: int, trial: int = 0) -> SampleSet:
    """Uniformly random M-subset via a partial Fisher-Yates shuffle."""
    size = _space_size(ctx, n)
    M = _check_M(M, size)
    bits = np.zeros(size, dtype=bool)
    bits[_shuffled_prefix(size, M, seed, trial)] = True
    return SampleSet(ctx, n, bits, Model.UNIFORM, M, seed, trial)


def point_ranks(ctx: FieldCtx, n: int, M_max: int, seed: int, trial: int) -> np.ndarray:
    """
    Position of each point in one seeded shuffle, for the first M_max
    positions; every other point gets q^n. E(M) = {x : rank_x < M}.
    """
    size = _space_size(ctx, n)
    M_max = _check_M(M_max, size)
    ranks = np.full(size, size, dtype=np.int64)
    ranks[_shuffled_prefix(size, M_max, seed, trial)] = np.arange(M_max, dtype=np.int64)
    return ranks


def coupled_sweep(
    ctx: FieldCtx, n: int, deltas: Sequence[float], seed: int, trial: int = 0
) -> list[SampleSet]:
    """
    Nested samples E(d_1) <= E(d_2) <= ... from one uniform per point.
    Each member has the same law as sample_bernoulli at that delta.
    """
    ds = [_check_delta(d) for d in deltas]
    if ds != sorted(ds):
        raise BadParams("coupled deltas must be non-decreasing")
    u = point_uniforms(ctx, n, seed, trial)
    return [SampleSet(ctx, n, u < d, Model.BERNOULLI, d, seed, trial) for d in ds]


def coupled_uniform_sweep(
    ctx: FieldCtx, n: int, Ms: Sequence[int], seed: int, trial: int = 0
) -> list[SampleSet]:
    """
    Nested uniform samples E(M_1) <= E(M_2) <= ... as prefixes of one shuffle.
    Each member is a uniformly random M_i-subset.
    """
    Ms = [int(M) for M in Ms]
    if Ms != sorted(Ms):
        raise BadParams("coupled sizes must be non-decreasing")
    if not Ms:
        return []
    ranks = point_ranks(ctx, n, Ms[-1], seed, trial)
    return [SampleSet(ctx, n, ranks < M, Model.UNIFORM, M, seed, trial) for M in Ms]
