"""
The four pattern families and pattern search inside point sets.

A pattern is an unordered set of distinct points, stored as the ascending
tuple of its point indices. Every listing is in ascending lexicographic
order of those tuples, and as arrays every row is one pattern.

Search is anchored: patterns_through(family, s, allowed) returns the members
that contain s and have every other point in `allowed`. Walking the points of
a set in ascending order and only allowing points above the anchor visits
every member exactly once, at its smallest point.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from fqpatterns.core.caps import enforce_cap
from fqpatterns.core.errors import (
    BadParams,
    CharTwo,
    DimensionMismatch,
    DuplicatePoints,
    WrongCardinality,
)
from fqpatterns.services.field import (
    FieldCtx,
    Vec,
    affine_dim,
    dot,
    dot_arrays,
    make_field,
    point_coords,
    point_index,
    scalar_mul,
    vec_add,
    vec_sub,
)
from fqpatterns.services.sampler import SampleSet

Pattern = tuple[int, ...]

# rows of the (block x candidates) grids built during brute-force search
_BLOCK = 256


class PatternKind(str, Enum):
    THREE_AP = "3ap"
    PARALLELOGRAM = "pg"
    RIGHT_TRIANGLE = "rt"
    PLANE = "plane"


_SIZES = {
    PatternKind.THREE_AP: 3,
    PatternKind.PARALLELOGRAM: 4,
    PatternKind.RIGHT_TRIANGLE: 3,
}

# (b, c) with |A| = Theta(q^(b*n - c)); planes are outside this framework
FRAMEWORK_PARAMS = {
    PatternKind.THREE_AP: (2, 0),
    PatternKind.PARALLELOGRAM: (3, 0),
    PatternKind.RIGHT_TRIANGLE: (3, 1),
}


@dataclass(frozen=True)
class PatternFamily:
    kind: PatternKind
    ctx: FieldCtx
    n: int
    m: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", PatternKind(self.kind))
        q = self.ctx.q
        if self.n < 1:
            raise BadParams(f"n = {self.n} must be >= 1")
        if self.kind is PatternKind.THREE_AP and self.ctx.p == 2:
            raise CharTwo(f"3-APs need odd q; in GF({q}) every x + 2v equals x")
        if self.kind in (PatternKind.RIGHT_TRIANGLE, PatternKind.PLANE) and self.n < 2:
            raise BadParams(f"{self.kind.value} needs n >= 2 (got n = {self.n})")
        if self.kind is PatternKind.PLANE:
            if self.m is None or not 1 <= self.m <= self.n - 1:
                raise BadParams(f"plane dimension m = {self.m} must lie in [1, {self.n - 1}]")
        elif self.m is not None:
            raise BadParams("m only applies to the plane family")

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def a(self) -> int:
        """Pattern size."""
        if self.kind is PatternKind.PLANE:
            return self.q ** self.m
        return _SIZES[self.kind]

    @property
    def num_points(self) -> int:
        return self.q ** self.n

    @property
    def label(self) -> str:
        base = f"{self.kind.value}(q={self.q},n={self.n}"
        return base + (f",m={self.m})" if self.m is not None else ")")

    def describe(self) -> dict:
        return {"family": self.kind.value, "q": self.q, "n": self.n, "m": self.m}


def make_family(kind: str | PatternKind, q: int, n: int, m: int | None = None) -> PatternFamily:
    try:
        kind = PatternKind(kind)
    except ValueError:
        raise BadParams(f"unknown family {kind!r}; expected one of {[k.value for k in PatternKind]}")
    return PatternFamily(kind, make_field(q), n, m)


# ---------- Membership predicates ----------


def _distinct(family: PatternFamily, points: Sequence[Vec], size: int) -> list[Vec]:
    pts = list(points)
    if len(pts) != size:
        raise WrongCardinality(f"{family.kind.value} patterns have {size} points, got {len(pts)}")
    for v in pts:
        if v.ctx.q != family.q or v.n != family.n:
            raise DimensionMismatch(f"point {v.coords} is not in GF({family.q})^{family.n}")
    if len({v.coords for v in pts}) != len(pts):
        raise DuplicatePoints("pattern points must be distinct")
    return pts


def _others(pts: list[Vec], i: int) -> tuple[Vec, Vec]:
    u, w = (pts[j] for j in range(3) if j != i)
    return u, w


def is_3ap(family: PatternFamily, points: Sequence[Vec]) -> bool:
    if family.ctx.p == 2:
        raise CharTwo("3-APs are undefined in characteristic 2")
    pts = _distinct(family, points, 3)
    for i in range(3):
        u, w = _others(pts, i)
        if scalar_mul(2, pts[i]) == vec_add(u, w):
            return True
    return False


def is_parallelogram(family: PatternFamily, points: Sequence[Vec]) -> bool:
    x = _distinct(family, points, 4)
    for a, b, c, d in ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)):
        if vec_add(x[a], x[b]) == vec_add(x[c], x[d]):
            return True
    return False


def is_right_triangle(family: PatternFamily, points: Sequence[Vec]) -> bool:
    if family.n < 2:
        raise BadParams("right triangles need n >= 2")
    pts = _distinct(family, points, 3)
    for i in range(3):
        u, w = _others(pts, i)
        if dot(vec_sub(u, pts[i]), vec_sub(w, pts[i])) == 0:
            return True
    return False


def is_plane(family: PatternFamily, points: Sequence[Vec]) -> bool:
    if family.kind is not PatternKind.PLANE:
        raise BadParams("is_plane needs a plane family")
    pts = _distinct(family, points, family.a)
    return affine_dim(pts) == family.m


_PREDICATES = {
    PatternKind.THREE_AP: is_3ap,
    PatternKind.PARALLELOGRAM: is_parallelogram,
    PatternKind.RIGHT_TRIANGLE: is_right_triangle,
    PatternKind.PLANE: is_plane,
}


def is_member(family: PatternFamily, points: Sequence[Vec]) -> bool:
    return _PREDICATES[family.kind](family, points)


# ---------- Planes ----------


def _check_plane_params(n: int, m: int) -> None:
    if n < 2 or not 1 <= m <= n - 1:
        raise BadParams(f"planes need n >= 2 and 1 <= m <= n - 1 (got n = {n}, m = {m})")


def subspace_bases(ctx: FieldCtx, n: int, m: int) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """Yield (pivot columns, basis) for every m-dim subspace, basis in reduced row echelon form."""
    q = ctx.q
    for pivots in itertools.combinations(range(n), m):
        pivot_set = set(pivots)
        free = [
            (i, j)
            for i, col in enumerate(pivots)
            for j in range(col + 1, n)
            if j not in pivot_set
        ]
        for values in itertools.product(range(q), repeat=len(free)):
            basis = np.zeros((m, n), dtype=np.int64)
            basis[np.arange(m), list(pivots)] = 1
            for (i, j), v in zip(free, values):
                basis[i, j] = v
            yield pivots, basis


def plane_blocks(ctx: FieldCtx, n: int, m: int) -> Iterator[np.ndarray]:
    """
    For each m-dim subspace V, a (q^(n-m), q^m) array whose rows are the
    sorted point indices of the cosets of V. Coset representatives are the
    vectors that vanish on the pivot columns of V's RREF basis.
    """
    q = ctx.q
    coeffs = point_coords(ctx, m, np.arange(q ** m))
    tails = point_coords(ctx, n - m, np.arange(q ** (n - m)))
    for pivots, basis in subspace_bases(ctx, n, m):
        span = np.zeros((q ** m, n), dtype=np.int64)
        for i in range(m):
            span = ctx.add_arrays(span, ctx.mul_arrays(coeffs[:, i : i + 1], basis[i][None, :]))
        reps = np.zeros((q ** (n - m), n), dtype=np.int64)
        reps[:, [j for j in range(n) if j not in pivots]] = tails
        cosets = ctx.add_arrays(reps[:, None, :], span[None, :, :])
        yield np.sort(point_index(ctx, cosets), axis=1)


def plane_count(q: int, n: int, m: int) -> int:
    from fqpatterns.services.census import gaussian_binomial

    return gaussian_binomial(n, m, q) * q ** (n - m)


@lru_cache(maxsize=16)
def _plane_matrix(q: int, n: int, m: int) -> np.ndarray:
    ctx = make_field(q)
    rows = np.concatenate(list(plane_blocks(ctx, n, m)))
    rows = rows[np.lexsort(rows.T[::-1])]
    rows.setflags(write=False)
    return rows


def plane_matrix(ctx: FieldCtx, n: int, m: int) -> np.ndarray:
    """All m-dim affine planes, one sorted row of point indices each, rows in lex order."""
    _check_plane_params(n, m)
    enforce_cap("|A(n,m)|", plane_count(ctx.q, n, m), "PLANE_CAP")
    return _plane_matrix(ctx.q, n, m)


def enumerate_planes(ctx: FieldCtx, n: int, m: int) -> Iterator[Pattern]:
    rows = plane_matrix(ctx, n, m)
    return (tuple(int(x) for x in row) for row in rows)


# ---------- Anchored search ----------


def _canonical(rows: np.ndarray, a: int) -> np.ndarray:
    if rows.size == 0:
        return np.empty((0, a), dtype=np.int64)
    return np.unique(np.sort(rows, axis=1), axis=0)


def _stack(parts: list[np.ndarray], a: int) -> np.ndarray:
    return np.concatenate(parts) if parts else np.empty((0, a), dtype=np.int64)


def _through_3ap(family, s, pts, allowed):
    ctx, n = family.ctx, family.n
    S = point_coords(ctx, n, s)
    T = point_coords(ctx, n, pts)
    # s as an end point: the middle is (s + t) / 2; s as the middle: the far end is 2s - t
    mid = point_index(ctx, ctx.mul_arrays(ctx.inv(2), ctx.add_arrays(S, T)))
    far = point_index(ctx, ctx.sub_arrays(ctx.add_arrays(S, S), T))
    parts = []
    for third in (mid, far):
        ok = allowed[third]
        parts.append(np.column_stack([np.full(int(ok.sum()), s), pts[ok], third[ok]]))
    return _canonical(_stack(parts, 3), 3)


def _through_pg(family, s, pts, allowed):
    ctx, n = family.ctx, family.n
    S = point_coords(ctx, n, s)
    P = point_coords(ctx, n, pts)
    parts = []
    for lo in range(0, len(pts), _BLOCK):
        # d is the vertex opposite s; {b, c} is the other diagonal with b + c = s + d
        sigma = ctx.add_arrays(S, P[lo : lo + _BLOCK])
        c = point_index(ctx, ctx.sub_arrays(sigma[:, None, :], P[None, :, :]))
        ok = allowed[c] & (pts[None, :] < c)
        di, bi = np.nonzero(ok)
        parts.append(np.column_stack([np.full(len(di), s), pts[lo + di], pts[bi], c[di, bi]]))
    return _canonical(_stack(parts, 4), 4)


def _through_rt(family, s, pts, allowed):
    ctx, n = family.ctx, family.n
    D = ctx.sub_arrays(point_coords(ctx, n, pts), point_coords(ctx, n, s))
    norms = dot_arrays(ctx, D, D)
    parts = []
    for lo in range(0, len(pts), _BLOCK):
        hi = min(lo + _BLOCK, len(pts))
        G = dot_arrays(ctx, D[lo:hi, None, :], D[None, :, :])
        # right angle at s, at u, or at w respectively
        right = (G == 0) | (G == norms[lo:hi, None]) | (G == norms[None, :])
        upper = np.arange(lo, hi)[:, None] < np.arange(len(pts))[None, :]
        ui, wi = np.nonzero(right & upper)
        parts.append(np.column_stack([np.full(len(ui), s), pts[lo + ui], pts[wi]]))
    return _canonical(_stack(parts, 3), 3)


def _through_plane(family, s, pts, allowed):
    rows = plane_matrix(family.ctx, family.n, family.m)
    rows = rows[(rows == s).any(axis=1)]
    present = allowed.copy()
    present[s] = True
    return rows[present[rows].all(axis=1)]


_THROUGH = {
    PatternKind.THREE_AP: _through_3ap,
    PatternKind.PARALLELOGRAM: _through_pg,
    PatternKind.RIGHT_TRIANGLE: _through_rt,
    PatternKind.PLANE: _through_plane,
}


def patterns_through(family: PatternFamily, s: int, allowed=None) -> np.ndarray:
    """
    Members containing point `s` whose other points all lie in `allowed`
    (a boolean mask over the space; default the whole space). Rows sorted.
    """
    size = family.num_points
    if not 0 <= s < size:
        raise BadParams(f"point index {s} outside [0, {size})")
    if allowed is None:
        if family.kind is not PatternKind.PLANE:
            enforce_cap("q^n", size, "ENUM_CAP")
        mask = np.ones(size, dtype=bool)
    else:
        mask = np.array(allowed, dtype=bool, copy=True)
        if mask.shape != (size,):
            raise DimensionMismatch(f"mask of shape {mask.shape} does not match q^n = {size}")
    mask[s] = False
    return _THROUGH[family.kind](family, int(s), np.flatnonzero(mask), mask)


def _anchored_blocks(family: PatternFamily, bits: np.ndarray) -> Iterator[np.ndarray]:
    idx = np.flatnonzero(bits)
    allowed = bits.copy()
    for i, s in enumerate(idx):
        allowed[s] = False
        rows = _THROUGH[family.kind](family, int(s), idx[i + 1 :], allowed)
        if len(rows):
            yield rows


def pattern_array(family: PatternFamily) -> np.ndarray:
    """The whole family as an (|A|, a) array in lex order."""
    if family.kind is PatternKind.PLANE:
        return plane_matrix(family.ctx, family.n, family.m)
    enforce_cap("q^n", family.num_points, "ENUM_CAP")
    bits = np.ones(family.num_points, dtype=bool)
    return _stack(list(_anchored_blocks(family, bits)), family.a)


def enumerate_family(family: PatternFamily) -> Iterator[Pattern]:
    """Every member once, ascending lex order of sorted index tuples."""
    if family.kind is PatternKind.PLANE:
        return enumerate_planes(family.ctx, family.n, family.m)
    enforce_cap("q^n", family.num_points, "ENUM_CAP")
    bits = np.ones(family.num_points, dtype=bool)
    return (tuple(int(x) for x in row) for block in _anchored_blocks(family, bits) for row in block)


# ---------- Counting inside a set ----------


def _bits_of(family: PatternFamily, E) -> np.ndarray:
    if isinstance(E, SampleSet):
        if E.q != family.q or E.n != family.n:
            raise DimensionMismatch(f"set lives in GF({E.q})^{E.n}, family in GF({family.q})^{family.n}")
        return np.array(E.bits, copy=True)
    bits = np.asarray(E, dtype=bool)
    if bits.shape != (family.num_points,):
        raise DimensionMismatch(f"bitset of shape {bits.shape} does not match q^n = {family.num_points}")
    return bits.copy()


def contained_patterns(family: PatternFamily, E) -> np.ndarray:
    """Members fully inside E, as rows in lex order."""
    bits = _bits_of(family, E)
    if family.kind is PatternKind.PLANE:
        rows = plane_matrix(family.ctx, family.n, family.m)
        return rows[bits[rows].all(axis=1)]
    return _stack(list(_anchored_blocks(family, bits)), family.a)


def count_X(family: PatternFamily, E) -> int:
    return len(contained_patterns(family, E))


def intersection_profile(rows: np.ndarray, num_points: int, a: int) -> np.ndarray:
    """
    counts[k] = number of ordered pairs (T, T') of rows with |T & T'| = k,
    read off the Gram matrix of the sparse row/point incidence matrix.
    """
    rows = np.asarray(rows, dtype=np.int64)
    total = len(rows)
    counts = np.zeros(a + 1, dtype=np.int64)
    if total == 0:
        return counts
    inc = sp.csr_matrix(
        (np.ones(total * a, dtype=np.int64), (np.repeat(np.arange(total), a), rows.ravel())),
        shape=(total, num_points),
    )
    overlaps = (inc @ inc.T).tocsr()
    sizes = np.bincount(overlaps.data, minlength=a + 1)
    counts[1:] = sizes[1 : a + 1]
    counts[0] = total * total - counts[1:].sum()
    return counts


def count_Y(family: PatternFamily, E) -> int:
    """Ordered pairs of distinct contained members that share at least one point."""
    rows = contained_patterns(family, E)
    profile = intersection_profile(rows, family.num_points, family.a)
    return int(profile[1 : family.a].sum())


def brute_force_count(family: PatternFamily, E) -> int:
    """Reference count: test every a-subset of E with the membership predicate."""
    bits = _bits_of(family, E)
    pts = [Vec.from_index(family.ctx, family.n, int(i)) for i in np.flatnonzero(bits)]
    return sum(1 for combo in itertools.combinations(pts, family.a) if is_member(family, combo))
