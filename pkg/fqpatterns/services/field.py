"""
Exact arithmetic in GF(q), q = p^k, and in the vector space GF(q)^n.

Encoding:
- a field element is an integer in [0, q); for k > 1 its base-p digits are
  the coefficients of its polynomial representative, lowest degree first.
- a point of GF(q)^n is the integer sum(coords[i] * q**i) in [0, q^n).

Scalar routines take and return Python ints. The *_arrays routines work on
numpy int64 arrays of elements and broadcast like ordinary ufuncs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from fqpatterns.core.errors import BadParams, DimensionMismatch, EmptySet, NotAPrimePower

MAX_ORDER = 1 << 16
TABLE_LIMIT = 256

# ---------- Polynomials over GF(p) (coefficient lists, lowest degree first) ----------


def _digits(x: int, base: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        x, d = divmod(x, base)
        out.append(d)
    return out


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _poly_rem(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    """Remainder of `a` modulo the monic polynomial `f`, padded to deg f coefficients."""
    d = len(f) - 1
    a = list(a) + [0] * max(0, d - len(a))
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i] % p
        if c:
            for j in range(d + 1):
                a[i - d + j] = (a[i - d + j] - c * f[j]) % p
    return [x % p for x in a[:d]]


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    # a reducible polynomial of degree k has a monic factor of degree <= k/2
    k = len(f) - 1
    for d in range(1, k // 2 + 1):
        for code in range(p ** d):
            g = _digits(code, p, d) + [1]
            if not any(_poly_rem(f, g, p)):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """
    The monic irreducible polynomial of degree k over GF(p) whose lower
    coefficients, read as base-p digits (constant term least significant),
    form the smallest integer. Found by exhaustive search.
    """
    for code in range(p ** k):
        f = tuple(_digits(code, p, k)) + (1,)
        if f[0] and _is_irreducible(f, p):
            return f
    raise BadParams(f"no irreducible polynomial of degree {k} over GF({p})")


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise NotAPrimePower(f"q = {q} is not a prime power (q >= 2 required)")
    p = next(d for d in itertools.count(2) if q % d == 0)
    k, rest = 0, q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise NotAPrimePower(f"q = {q} has at least two distinct prime factors")
    return p, k


# ---------- Field context ----------


def _times_x(v: np.ndarray, f: Sequence[int], p: int) -> np.ndarray:
    k = len(v)
    top = v[k - 1]
    w = np.concatenate(([0], v[:-1]))
    return (w - top * np.asarray(f[:k], dtype=np.int64)) % p


def _build_tables(p: int, k: int, poly: Sequence[int]):
    q = p ** k
    weights = p ** np.arange(k, dtype=np.int64)
    elems = np.arange(q, dtype=np.int64)
    digits = (elems[:, None] // weights[None, :]) % p
    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    neg = ((-digits) % p) @ weights
    if k == 1:
        mul = np.outer(elems, elems) % p
    else:
        mul = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            # column j holds the digits of a * x^j
            cols = np.empty((k, k), dtype=np.int64)
            v = digits[a].copy()
            for j in range(k):
                cols[:, j] = v
                v = _times_x(v, poly, p)
            mul[a] = ((digits @ cols.T) % p) @ weights
    inv = np.argmax(mul == 1, axis=1)
    inv[0] = 0
    tables = [add, mul, neg, inv.astype(np.int64)]
    for t in tables:
        t.setflags(write=False)
    return tables


@dataclass(frozen=True, eq=False)
class FieldCtx:
    p: int
    k: int
    q: int
    reduction_poly: tuple[int, ...] = ()
    add_table: np.ndarray | None = field(default=None, repr=False)
    mul_table: np.ndarray | None = field(default=None, repr=False)
    neg_table: np.ndarray | None = field(default=None, repr=False)
    inv_table: np.ndarray | None = field(default=None, repr=False)

    @property
    def has_tables(self) -> bool:
        return self.add_table is not None

    def _split(self, x: int) -> list[int]:
        return _digits(x, self.p, self.k)

    def _join(self, d: Sequence[int]) -> int:
        return sum(c * self.p ** i for i, c in enumerate(d))

    # --- scalars ---

    def add(self, x: int, y: int) -> int:
        if self.k == 1:
            return (x + y) % self.p
        if self.has_tables:
            return int(self.add_table[x, y])
        return self._join([(a + b) % self.p for a, b in zip(self._split(x), self._split(y))])

    def neg(self, x: int) -> int:
        if self.k == 1:
            return (-x) % self.p
        if self.has_tables:
            return int(self.neg_table[x])
        return self._join([(-a) % self.p for a in self._split(x)])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self.k == 1:
            return (x * y) % self.p
        if self.has_tables:
            return int(self.mul_table[x, y])
        prod = _poly_mul(self._split(x), self._split(y), self.p)
        return self._join(_poly_rem(prod, self.reduction_poly, self.p))

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(x), -e)
        result, base = 1, x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, x: int) -> int:
        if x % self.q == 0:
            raise BadParams("0 has no multiplicative inverse")
        if self.k == 1:
            return pow(x, -1, self.p)
        if self.has_tables:
            return int(self.inv_table[x])
        return self.pow(x, self.q - 2)

    # --- arrays ---

    def _digitwise(self, a, b, sign: int) -> np.ndarray:
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for i in range(self.k):
            w = self.p ** i
            da = (a // w) % self.p
            db = (b // w) % self.p
            out += ((da + sign * db) % self.p) * w
        return out

    def add_arrays(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.has_tables:
            return self.add_table[a, b]
        if self.k == 1:
            return (a + b) % self.p
        return self._digitwise(a, b, 1)

    def neg_arrays(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.has_tables:
            return self.neg_table[a]
        if self.k == 1:
            return (-a) % self.p
        return self._digitwise(np.zeros_like(a), a, -1)

    def sub_arrays(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.has_tables:
            return self.add_table[a, self.neg_table[b]]
        if self.k == 1:
            return (a - b) % self.p
        return self._digitwise(a, b, -1)

    def mul_arrays(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.has_tables:
            return self.mul_table[a, b]
        if self.k == 1:
            return (a * b) % self.p
        return np.frompyfunc(self.mul, 2, 1)(a, b).astype(np.int64)


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldCtx:
    if not isinstance(q, int) or isinstance(q, bool):
        raise BadParams(f"q must be an integer, got {q!r}")
    if q > MAX_ORDER:
        raise BadParams(f"q = {q} exceeds the supported maximum {MAX_ORDER}")
    p, k = _factor_prime_power(q)
    poly = smallest_irreducible(p, k) if k > 1 else ()
    tables = _build_tables(p, k, poly) if q <= TABLE_LIMIT else [None] * 4
    return FieldCtx(p, k, q, poly, *tables)


# ---------- Vectors ----------


@dataclass(frozen=True)
class Vec:
    ctx: FieldCtx
    coords: tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if any(not 0 <= c < self.ctx.q for c in coords):
            raise BadParams(f"coordinates {coords} out of range for GF({self.ctx.q})")
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def index(self) -> int:
        return sum(c * self.ctx.q ** i for i, c in enumerate(self.coords))

    @classmethod
    def from_index(cls, ctx: FieldCtx, n: int, index: int) -> "Vec":
        if not 0 <= index < ctx.q ** n:
            raise BadParams(f"index {index} outside [0, {ctx.q}^{n})")
        return cls(ctx, tuple(_digits(index, ctx.q, n)))


def _check_pair(u: Vec, v: Vec) -> None:
    if u.ctx.q != v.ctx.q or u.n != v.n:
        raise DimensionMismatch(f"GF({u.ctx.q})^{u.n} vs GF({v.ctx.q})^{v.n}")


def vec_add(u: Vec, v: Vec) -> Vec:
    _check_pair(u, v)
    return Vec(u.ctx, tuple(u.ctx.add(a, b) for a, b in zip(u.coords, v.coords)))


def vec_sub(u: Vec, v: Vec) -> Vec:
    _check_pair(u, v)
    return Vec(u.ctx, tuple(u.ctx.sub(a, b) for a, b in zip(u.coords, v.coords)))


def scalar_mul(c: int, v: Vec) -> Vec:
    if not 0 <= c < v.ctx.q:
        raise BadParams(f"scalar {c} is not an element of GF({v.ctx.q})")
    return Vec(v.ctx, tuple(v.ctx.mul(c, a) for a in v.coords))


def dot(u: Vec, v: Vec) -> int:
    """Standard bilinear form sum(u_i * v_i)."""
    _check_pair(u, v)
    acc = 0
    for a, b in zip(u.coords, v.coords):
        acc = u.ctx.add(acc, u.ctx.mul(a, b))
    return acc


def _row_rank(ctx: FieldCtx, rows: list[list[int]]) -> int:
    rows = [list(r) for r in rows]
    width = len(rows[0]) if rows else 0
    rank = 0
    for col in range(width):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        scale = ctx.inv(rows[rank][col])
        rows[rank] = [ctx.mul(scale, x) for x in rows[rank]]
        for i in range(len(rows)):
            c = rows[i][col]
            if i != rank and c:
                rows[i] = [ctx.sub(x, ctx.mul(c, y)) for x, y in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def rank(vectors: Sequence[Vec]) -> int:
    if not vectors:
        raise EmptySet("rank of an empty list")
    for v in vectors[1:]:
        _check_pair(vectors[0], v)
    return _row_rank(vectors[0].ctx, [list(v.coords) for v in vectors])


def affine_dim(points: Sequence[Vec]) -> int:
    """d(F): dimension of the smallest affine plane containing every point."""
    if not points:
        raise EmptySet("affine dimension of an empty set")
    base = points[0]
    diffs = [vec_sub(x, base) for x in points[1:]]
    return rank(diffs) if diffs else 0


# ---------- Vectorized helpers over point indices ----------


def point_coords(ctx: FieldCtx, n: int, indices) -> np.ndarray:
    """Coordinates of point indices; output has one extra trailing axis of length n."""
    idx = np.asarray(indices, dtype=np.int64)
    weights = ctx.q ** np.arange(n, dtype=np.int64)
    return (idx[..., None] // weights) % ctx.q


def point_index(ctx: FieldCtx, coords) -> np.ndarray:
    coords = np.asarray(coords, dtype=np.int64)
    weights = ctx.q ** np.arange(coords.shape[-1], dtype=np.int64)
    return coords @ weights


def dot_arrays(ctx: FieldCtx, u, v) -> np.ndarray:
    """Field dot product along the last axis, broadcasting the leading axes."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    acc = np.zeros(np.broadcast_shapes(u.shape[:-1], v.shape[:-1]), dtype=np.int64)
    for c in range(u.shape[-1]):
        acc = ctx.add_arrays(acc, ctx.mul_arrays(u[..., c], v[..., c]))
    return acc
