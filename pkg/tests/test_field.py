import itertools

import numpy as np
import pytest

from fqpatterns.core.errors import BadParams, DimensionMismatch, EmptySet, NotAPrimePower
from fqpatterns.services.field import (
    FieldCtx,
    Vec,
    affine_dim,
    dot,
    make_field,
    point_coords,
    point_index,
    rank,
    scalar_mul,
    smallest_irreducible,
    vec_add,
    vec_sub,
)

SMALL_ORDERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64]


def v(q, *coords):
    return Vec(make_field(q), coords)


def test_prime_field():
    F = make_field(5)
    assert (F.p, F.k, F.q) == (5, 1, 5)
    assert F.reduction_poly == ()


def test_extension_fields_use_smallest_irreducible():
    assert make_field(4).reduction_poly == (1, 1, 1)      # x^2 + x + 1
    assert make_field(8).reduction_poly == (1, 1, 0, 1)   # x^3 + x + 1
    assert make_field(9).reduction_poly == (1, 0, 1)      # x^2 + 1
    assert smallest_irreducible(2, 4) == (1, 1, 0, 0, 1)  # x^4 + x + 1


@pytest.mark.parametrize("q", [0, 1, 6, 12, 100])
def test_not_a_prime_power(q):
    with pytest.raises(NotAPrimePower):
        make_field(q)


def test_order_above_limit():
    with pytest.raises(BadParams):
        make_field(1 << 17)


@pytest.mark.parametrize("q", SMALL_ORDERS)
def test_field_axioms_exhaustive(q):
    F = make_field(q)
    add, mul = F.add_table, F.mul_table
    a = np.arange(q)[:, None, None]
    b = np.arange(q)[None, :, None]
    c = np.arange(q)[None, None, :]
    assert np.array_equal(add, add.T)
    assert np.array_equal(mul, mul.T)
    assert np.array_equal(add[add[a, b], c], add[a, add[b, c]])
    assert np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]])
    assert np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]])
    assert np.array_equal(add[0], np.arange(q))
    assert np.array_equal(mul[1], np.arange(q))
    nz = np.arange(1, q)
    assert np.all(mul[nz, F.inv_table[nz]] == 1)
    assert np.all(add[np.arange(q), F.neg_table] == 0)


@pytest.mark.parametrize("q", SMALL_ORDERS)
def test_frobenius(q):
    F = make_field(q)
    x = np.arange(q)[:, None]
    y = np.arange(q)[None, :]

    def frob(z):
        out = z
        for _ in range(F.p - 1):
            out = F.mul_arrays(out, z)
        return out

    assert np.array_equal(frob(F.add_arrays(x, y)), F.add_arrays(frob(x), frob(y)))


def test_table_free_path_matches_tables():
    tabled = make_field(16)
    bare = FieldCtx(2, 4, 16, smallest_irreducible(2, 4))
    for x, y in itertools.product(range(16), repeat=2):
        assert bare.add(x, y) == tabled.add(x, y)
        assert bare.mul(x, y) == tabled.mul(x, y)
        assert bare.sub(x, y) == tabled.sub(x, y)
    for x in range(1, 16):
        assert bare.inv(x) == tabled.inv(x)
    a = np.arange(16)[:, None]
    b = np.arange(16)[None, :]
    assert np.array_equal(bare.mul_arrays(a, b), tabled.mul_table)
    assert np.array_equal(bare.add_arrays(a, b), tabled.add_table)
    assert np.array_equal(bare.sub_arrays(a, b), tabled.add_table[a, tabled.neg_table[b]])
    assert np.array_equal(bare.neg_arrays(np.arange(16)), tabled.neg_table)


def test_large_fields_compute_on_the_fly():
    for q in (257, 289):
        F = make_field(q)
        assert not F.has_tables
        rng = np.random.default_rng(q)
        xs = rng.integers(1, q, size=50).tolist()
        ys = rng.integers(0, q, size=50).tolist()
        zs = rng.integers(0, q, size=50).tolist()
        for x, y, z in zip(xs, ys, zs):
            assert F.mul(x, F.inv(x)) == 1
            assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
        assert F.mul_arrays(xs, ys).tolist() == [F.mul(x, y) for x, y in zip(xs, ys)]
        assert F.add_arrays(xs, ys).tolist() == [F.add(x, y) for x, y in zip(xs, ys)]


def test_zero_has_no_inverse():
    with pytest.raises(BadParams):
        make_field(7).inv(0)


def test_pow():
    F = make_field(9)
    for x in range(1, 9):
        assert F.pow(x, 8) == 1
        assert F.pow(x, -1) == F.inv(x)


def test_vector_arithmetic():
    assert vec_add(v(3, 1, 2), v(3, 2, 1)).coords == (0, 0)
    assert scalar_mul(2, v(3, 1, 1)).coords == (2, 2)
    assert vec_sub(v(2, 1, 0), v(2, 0, 1)).coords == (1, 1)


def test_vector_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        vec_add(v(3, 1, 2), v(3, 1, 2, 0))
    with pytest.raises(DimensionMismatch):
        dot(v(3, 1, 2), v(5, 1, 2))


def test_dot():
    assert dot(v(3, 1, 0), v(3, 0, 1)) == 0
    assert dot(v(2, 1, 1), v(2, 1, 1)) == 0
    assert dot(v(3, 1, 2), v(3, 2, 2)) == 0
    assert dot(v(5, 1, 2), v(5, 3, 4)) == 1


def test_rank():
    assert rank([v(3, 1, 0), v(3, 0, 1)]) == 2
    assert rank([v(3, 1, 1), v(3, 2, 2)]) == 1
    assert rank([v(3, 0, 0)]) == 0
    with pytest.raises(EmptySet):
        rank([])


def test_affine_dim():
    assert affine_dim([v(3, 1, 2)]) == 0
    assert affine_dim([v(3, 0, 0), v(3, 1, 0), v(3, 0, 1)]) == 2
    assert affine_dim([v(3, 0, 0), v(3, 1, 1), v(3, 2, 2)]) == 1
    with pytest.raises(EmptySet):
        affine_dim([])


def test_affine_dim_translation_invariant_and_bounded():
    F = make_field(5)
    rng = np.random.default_rng(7)
    for _ in range(100):
        size = int(rng.integers(1, 6))
        pts = [Vec(F, tuple(rng.integers(0, 5, size=3).tolist())) for _ in range(size)]
        w = Vec(F, tuple(rng.integers(0, 5, size=3).tolist()))
        d = affine_dim(pts)
        assert d == affine_dim([vec_add(p, w) for p in pts])
        assert d <= min(size - 1, 3)


def test_index_bijection_small():
    F = make_field(3)
    seen = set()
    for i in range(3 ** 4):
        vec = Vec.from_index(F, 4, i)
        assert vec.index == i
        seen.add(vec.coords)
    assert len(seen) == 81


def test_index_bijection_vectorized():
    F = make_field(5)
    idx = np.arange(5 ** 8)
    coords = point_coords(F, 8, idx)
    assert coords.min() == 0 and coords.max() == 4
    assert np.array_equal(point_index(F, coords), idx)


def test_coords_out_of_range():
    with pytest.raises(BadParams):
        v(3, 3, 0)
    with pytest.raises(BadParams):
        Vec.from_index(make_field(3), 2, 9)
