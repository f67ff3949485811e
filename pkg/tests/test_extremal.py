import numpy as np
import pytest
from structlog.testing import capture_logs

from fqpatterns.core.errors import BadParams
from fqpatterns.services.census import extremal_rate
from fqpatterns.services.extremal import (
    best_free_set,
    chebyshev_bound,
    deletion_construct,
    deletion_delta,
    extremal_table,
    prune_to_free,
    verify_free,
)
from fqpatterns.services.field import Vec
from fqpatterns.services.patterns import contained_patterns, count_X, make_family
from fqpatterns.services.sampler import SampleSet


def test_verify_free_examples():
    family = make_family("3ap", 3, 2)
    F = family.ctx
    assert verify_free(family, [])
    assert not verify_free(family, range(9))
    triple = [Vec(F, (0, 0)).index, Vec(F, (1, 0)).index, Vec(F, (0, 1)).index]
    assert verify_free(family, triple)


def test_deletion_delta():
    assert deletion_delta(make_family("pg", 2, 2)) == pytest.approx(0.5 ** 0.25)
    family = make_family("3ap", 5, 3)
    assert 7750 * deletion_delta(family) ** 3 == pytest.approx(0.5)


def test_chebyshev_bound():
    family = make_family("3ap", 3, 2)
    assert chebyshev_bound(family, 0.5) == pytest.approx(4 * 0.5 / 4.5)
    assert chebyshev_bound(family, 0.0) == 1.0


def test_prune_empty_set():
    family = make_family("rt", 3, 2)
    bits, deleted = prune_to_free(family, SampleSet(family.ctx, 2, np.zeros(9, dtype=bool)))
    assert not bits.any()
    assert deleted == 0


def test_prune_single_parallelogram():
    family = make_family("pg", 2, 2)
    bits, deleted = prune_to_free(family, SampleSet.from_indices(family.ctx, 2, range(4)))
    assert deleted == 1
    assert bits.tolist() == [False, True, True, True]
    bits, deleted = prune_to_free(family, SampleSet.from_indices(family.ctx, 2, [0, 1, 3]))
    assert deleted == 0


def test_prune_matches_greedy_rescan():
    # delete the lowest point of the lex-first contained member until none is left
    family = make_family("3ap", 5, 2)
    rng = np.random.default_rng(12)
    for _ in range(20):
        E = SampleSet(family.ctx, 2, rng.random(25) < 0.6)
        greedy = np.array(E.bits, copy=True)
        while True:
            rows = contained_patterns(family, greedy)
            if not len(rows):
                break
            greedy[rows[0][0]] = False
        bits, deleted = prune_to_free(family, E)
        assert np.array_equal(bits, greedy)
        assert deleted == E.size - int(bits.sum())


def test_deletion_construct_is_certified_and_deterministic():
    family = make_family("3ap", 5, 3)
    a = deletion_construct(family, seed=3)
    b = deletion_construct(family, seed=3)
    assert a == b
    assert a.certified
    assert verify_free(family, a.points)
    assert a.size == a.initial_size - a.deleted
    assert a.deleted <= a.initial_patterns
    assert a.points == sorted(a.points)


def test_deletion_keeps_the_largest_sampled_point():
    family = make_family("rt", 5, 2)
    for seed in range(10):
        result = deletion_construct(family, seed)
        assert (result.size >= 1) == (result.initial_size >= 1)
        assert count_X(family, SampleSet.from_indices(family.ctx, 2, result.points)) == 0


def test_small_instance_warns():
    with capture_logs() as logs:
        deletion_construct(make_family("pg", 2, 2), seed=0)
    assert any(e["event"] == "deletion_small_instance" and e["log_level"] == "warning" for e in logs)


def test_best_free_set():
    family = make_family("3ap", 3, 3)
    results = [deletion_construct(family, s) for s in range(5)]
    best = best_free_set(family, range(5))
    top = max(r.size for r in results)
    assert best.size == top
    assert best.seed == min(r.seed for r in results if r.size == top)
    with pytest.raises(BadParams):
        best_free_set(family, [])


def test_extremal_table():
    rows = extremal_table("3ap", [(3, 2), (3, 3), (3, 4)], seeds=3)
    assert [(r.q, r.n) for r in rows] == [(3, 2), (3, 3), (3, 4)]
    for r in rows:
        assert r.certified
        assert r.ratio == pytest.approx(r.size / r.rate)
        assert r.ratio > 0


def test_right_triangle_rate_is_independent_of_n():
    rows = extremal_table("rt", [(5, 2), (5, 3)], seeds=1)
    assert rows[0].rate == rows[1].rate == pytest.approx(5 ** (1 / 3))
    assert extremal_rate(make_family("rt", 5, 4)) == rows[0].rate


def test_extremal_table_plane_rows():
    rows = extremal_table("plane", [(3, 3)], m=1, seeds=2)
    assert rows[0].m == 1
    assert rows[0].certified
