"""
Deletion-method construction of pattern-free sets.

Sample E at the density where |A| * delta^a = 1/2, so E(X) <= |E|/2 on
average, then delete points until no member of the family survives.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
import structlog

from fqpatterns.core.config import settings
from fqpatterns.core.errors import BadParams, InvariantBreach
from fqpatterns.core.metrics import POINTS_DELETED
from fqpatterns.models.extremal import ExtremalRow, FreeSetResult
from fqpatterns.services.census import extremal_rate, family_size
from fqpatterns.services.patterns import PatternFamily, count_X, make_family, patterns_through
from fqpatterns.services.sampler import Model, SampleSet, sample_bernoulli

log = structlog.get_logger(__name__)

# below this expected sample size the concentration argument is weak
SMALL_INSTANCE = 100


def deletion_delta(family: PatternFamily) -> float:
    size = family_size(family)
    if size == 0:
        raise BadParams(f"{family.label} has no members; every set is free")
    return (1 / (2 * size)) ** (1 / family.a)


def chebyshev_bound(family: PatternFamily, delta: float) -> float:
    """Chebyshev bound on P(| |E| - q^n delta | >= q^n delta / 2)."""
    mean = family.num_points * delta
    return 4 * (1 - delta) / mean if mean > 0 else 1.0


def prune_to_free(family: PatternFamily, E: SampleSet) -> tuple[np.ndarray, int]:
    """
    Greedy deletion: while a member lies inside the set, drop the lowest
    point of the lexicographically first one. Deleting points never creates
    members, so this is a single ascending pass: a point goes exactly when a
    member has it as its smallest point and lies among the points still kept
    above it.
    """
    bits = np.array(E.bits, copy=True)
    allowed = bits.copy()
    idx = np.flatnonzero(bits)
    deleted = 0
    for s in idx:
        allowed[s] = False
        if len(patterns_through(family, int(s), allowed)):
            bits[s] = False
            deleted += 1
    return bits, deleted


def verify_free(family: PatternFamily, S: SampleSet | Iterable[int]) -> bool:
    if not isinstance(S, SampleSet):
        S = SampleSet.from_indices(family.ctx, family.n, S)
    return count_X(family, S) == 0


def deletion_construct(family: PatternFamily, seed: int, trial: int = 0) -> FreeSetResult:
    delta = deletion_delta(family)
    expected_size = family.num_points * delta
    if expected_size < SMALL_INSTANCE:
        log.warning(
            "deletion_small_instance",
            family=family.label,
            expected_size=round(expected_size, 3),
            minimum=SMALL_INSTANCE,
        )

    E = sample_bernoulli(family.ctx, family.n, delta, seed, trial)
    initial = count_X(family, E)
    bits, deleted = prune_to_free(family, E)
    S = SampleSet(family.ctx, family.n, bits, Model.EXPLICIT, delta, seed, trial)

    certified = verify_free(family, S)
    if not certified:
        raise InvariantBreach(f"{family.label}: deletion left a member inside the set (seed {seed})")
    if deleted > initial:
        raise InvariantBreach(f"{family.label}: {deleted} deletions for {initial} members (seed {seed})")

    POINTS_DELETED.labels(family.kind.value).inc(deleted)
    log.info(
        "deletion_done",
        family=family.label,
        seed=seed,
        initial_size=E.size,
        initial_patterns=initial,
        deleted=deleted,
    )
    return FreeSetResult(
        **family.describe(),
        seed=seed,
        delta_used=delta,
        initial_size=E.size,
        initial_patterns=initial,
        deleted=deleted,
        size=S.size,
        certified=certified,
        chebyshev=chebyshev_bound(family, delta),
        points=[int(i) for i in S.indices()],
    )


def best_free_set(family: PatternFamily, seeds: Sequence[int]) -> FreeSetResult:
    """Largest construction over the given seeds; ties go to the smaller seed."""
    if not seeds:
        raise BadParams("need at least one seed")
    results = [deletion_construct(family, seed) for seed in seeds]
    return max(results, key=lambda r: (r.size, -r.seed))


def extremal_table(
    kind: str,
    qn_list: Sequence[tuple[int, int]],
    m: int | None = None,
    seeds: int | None = None,
) -> list[ExtremalRow]:
    budget = seeds if seeds is not None else settings.EXTREMAL_SEEDS
    if budget < 1:
        raise BadParams(f"seed budget {budget} must be >= 1")
    rows = []
    for q, n in qn_list:
        family = make_family(kind, q, n, m)
        best = best_free_set(family, range(budget))
        rate = extremal_rate(family)
        rows.append(
            ExtremalRow(
                **family.describe(),
                size=best.size,
                seed=best.seed,
                delta=best.delta_used,
                rate=rate,
                ratio=best.size / rate,
                certified=best.certified,
            )
        )
    return rows
