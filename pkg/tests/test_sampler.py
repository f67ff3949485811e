import numpy as np
import pytest

from fqpatterns.core.config import settings
from fqpatterns.core.errors import BadParams, DimensionMismatch, TooLarge
from fqpatterns.services.field import make_field
from fqpatterns.services.sampler import (
    RNG_ID,
    Model,
    SampleSet,
    coupled_sweep,
    coupled_uniform_sweep,
    point_ranks,
    point_uniforms,
    sample_bernoulli,
    sample_uniform_m,
)


def test_bernoulli_is_reproducible():
    F = make_field(3)
    a = sample_bernoulli(F, 4, 0.3, seed=42, trial=5)
    b = sample_bernoulli(F, 4, 0.3, seed=42, trial=5)
    assert np.array_equal(a.bits, b.bits)
    assert a.to_hex() == b.to_hex()


def test_trials_and_seeds_give_different_draws():
    F = make_field(3)
    base = sample_bernoulli(F, 5, 0.5, seed=1, trial=0)
    assert not np.array_equal(base.bits, sample_bernoulli(F, 5, 0.5, seed=1, trial=1).bits)
    assert not np.array_equal(base.bits, sample_bernoulli(F, 5, 0.5, seed=2, trial=0).bits)


def test_bernoulli_extremes():
    F = make_field(5)
    assert sample_bernoulli(F, 2, 0.0, seed=0).size == 0
    assert sample_bernoulli(F, 2, 1.0, seed=0).size == 25
    with pytest.raises(BadParams):
        sample_bernoulli(F, 2, 1.2, seed=0)


def test_bernoulli_density():
    F = make_field(2)
    E = sample_bernoulli(F, 16, 0.25, seed=9)
    assert abs(E.size / E.num_points - 0.25) < 0.01


def test_uniform_m_has_exact_size():
    F = make_field(3)
    for M in (0, 1, 5, 80, 81):
        assert sample_uniform_m(F, 4, M, seed=3, trial=M).size == M
    with pytest.raises(BadParams):
        sample_uniform_m(F, 4, 82, seed=3)


def test_uniform_m_marginals():
    F = make_field(3)
    freq = np.zeros(9)
    trials = 3000
    for t in range(trials):
        freq += sample_uniform_m(F, 2, 3, seed=17, trial=t).bits
    assert np.all(np.abs(freq / trials - 1 / 3) < 0.05)


def test_uniform_m_is_reproducible():
    F = make_field(4)
    a = sample_uniform_m(F, 3, 20, seed=8, trial=2)
    b = sample_uniform_m(F, 3, 20, seed=8, trial=2)
    assert np.array_equal(a.bits, b.bits)


def test_coupled_sets_are_nested_and_match_bernoulli():
    F = make_field(3)
    deltas = [0.1, 0.2, 0.4, 0.8]
    sets = coupled_sweep(F, 4, deltas, seed=5, trial=7)
    for small, big in zip(sets, sets[1:]):
        assert np.all(big.bits[small.bits])
    for d, E in zip(deltas, sets):
        assert np.array_equal(E.bits, sample_bernoulli(F, 4, d, seed=5, trial=7).bits)


def test_coupled_needs_sorted_deltas():
    with pytest.raises(BadParams):
        coupled_sweep(make_field(3), 2, [0.5, 0.2], seed=0)


def test_coupled_uniform_sets_are_nested_prefixes():
    F = make_field(3)
    Ms = [0, 3, 3, 10, 27]
    sets = coupled_uniform_sweep(F, 3, Ms, seed=8, trial=2)
    assert [s.size for s in sets] == Ms
    for small, big in zip(sets, sets[1:]):
        assert not (small.bits & ~big.bits).any()
    assert all(s.model is Model.UNIFORM and s.param == M for s, M in zip(sets, Ms))
    # the largest member is exactly the uniform sample of that size
    assert np.array_equal(coupled_uniform_sweep(F, 3, [4, 12], 8, 2)[-1].bits, sample_uniform_m(F, 3, 12, 8, 2).bits)


def test_coupled_uniform_needs_sorted_sizes():
    with pytest.raises(BadParams):
        coupled_uniform_sweep(make_field(2), 3, [4, 2], seed=0)
    with pytest.raises(BadParams):
        coupled_uniform_sweep(make_field(2), 3, [2, 9], seed=0)


def test_point_ranks():
    F = make_field(2)
    ranks = point_ranks(F, 4, 5, seed=3, trial=0)
    assert sorted(ranks[ranks < 16].tolist()) == [0, 1, 2, 3, 4]
    assert (ranks == 16).sum() == 11


def test_point_uniforms_range():
    u = point_uniforms(make_field(7), 3, seed=0, trial=0)
    assert u.shape == (343,)
    assert u.min() >= 0 and u.max() < 1


def test_seed_range():
    F = make_field(3)
    with pytest.raises(BadParams):
        sample_bernoulli(F, 2, 0.5, seed=-1)
    with pytest.raises(BadParams):
        sample_bernoulli(F, 2, 0.5, seed=1 << 64)


def test_space_cap(monkeypatch):
    monkeypatch.setattr(settings, "SPACE_CAP", 1000)
    with pytest.raises(TooLarge):
        sample_bernoulli(make_field(2), 10, 0.5, seed=0)


def test_sample_set_hex_and_indices():
    F = make_field(2)
    E = SampleSet.from_indices(F, 3, [0, 3])
    assert E.to_hex() == "09"
    assert E.indices().tolist() == [0, 3]
    assert E.model is Model.EXPLICIT
    with pytest.raises(BadParams):
        SampleSet.from_indices(F, 3, [8])


def test_sample_set_is_read_only():
    E = sample_bernoulli(make_field(3), 2, 0.5, seed=1)
    with pytest.raises(ValueError):
        E.bits[0] = True


def test_sample_set_shape_checked():
    with pytest.raises(DimensionMismatch):
        SampleSet(make_field(3), 2, np.zeros(10, dtype=bool))


def test_provenance():
    E = sample_uniform_m(make_field(5), 2, 4, seed=11, trial=3)
    assert E.provenance() == {
        "q": 5,
        "n": 2,
        "model": "uniform",
        "param": 4,
        "seed": 11,
        "trial": 3,
        "rng": RNG_ID,
    }
