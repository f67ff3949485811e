"""
Exact combinatorics of a pattern family: family sizes, the pairwise
intersection census, expectations of X and Y under the Bernoulli model,
thresholds and the moment-condition report.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import structlog

from fqpatterns.core.caps import enforce_cap
from fqpatterns.core.errors import BadParams, InvariantBreach
from fqpatterns.models.census import CensusReport
from fqpatterns.services.field import Vec, affine_dim, make_field
from fqpatterns.services.patterns import (
    FRAMEWORK_PARAMS,
    PatternFamily,
    PatternKind,
    intersection_profile,
    make_family,
    pattern_array,
    patterns_through,
)

log = structlog.get_logger(__name__)


def gaussian_binomial(n: int, m: int, q: int) -> int:
    """Number of m-dim subspaces of GF(q)^n."""
    if n < 0 or not 0 <= m <= n or q < 2:
        raise BadParams(f"gaussian_binomial needs 0 <= m <= n and q >= 2 (n={n}, m={m}, q={q})")
    num = den = 1
    for i in range(m):
        num *= q ** n - q ** i
        den *= q ** m - q ** i
    value, rem = divmod(num, den)
    if rem:
        raise InvariantBreach(f"[{n} choose {m}]_{q} is not an integer")
    return value


def rref_subspace_count(n: int, m: int, q: int) -> int:
    """Count m-dim subspaces by RREF shape: each pivot set contributes q^(free entries)."""
    if n < 0 or not 0 <= m <= n:
        raise BadParams(f"need 0 <= m <= n (n={n}, m={m})")
    total = 0
    for pivots in itertools.combinations(range(n), m):
        free = sum((n - 1 - col) - (m - 1 - i) for i, col in enumerate(pivots))
        total += q ** free
    return total


@lru_cache(maxsize=None)
def _translation_size(kind: str, q: int, n: int) -> int:
    # every translate of a member is a member, so each point lies in the same
    # number of members; count those through the origin
    family = make_family(kind, q, n)
    through_origin = len(patterns_through(family, 0))
    total, rem = divmod(family.num_points * through_origin, family.a)
    if rem:
        raise InvariantBreach(f"{family.label}: q^n * |A_0| = {family.num_points * through_origin} not divisible by {family.a}")
    return total


def family_size(family: PatternFamily) -> int:
    """|A| exactly."""
    if family.kind is PatternKind.PLANE:
        return gaussian_binomial(family.n, family.m, family.q) * family.q ** (family.n - family.m)
    return _translation_size(family.kind.value, family.q, family.n)


def intersection_census(family: PatternFamily) -> dict[int, int]:
    """I_k = #{ordered (T, T') in A x A : |T & T'| = k} for k = 0..a."""
    size = family_size(family)
    enforce_cap("|A|", size, "CENSUS_CAP")
    rows = pattern_array(family)
    if len(rows) != size:
        raise InvariantBreach(f"{family.label}: enumerated {len(rows)} members, expected {size}")
    profile = intersection_profile(rows, family.num_points, family.a)
    census = {k: int(v) for k, v in enumerate(profile)}
    if sum(census.values()) != size * size or census[family.a] != size:
        raise InvariantBreach(f"{family.label}: intersection census does not sum to |A|^2")
    log.info("census_done", family=family.label, size=size)
    return census


def _check_delta(delta: float) -> float:
    if not 0.0 <= delta <= 1.0:
        raise BadParams(f"delta = {delta} must lie in [0, 1]")
    return float(delta)


def expected_X(family: PatternFamily, delta: float) -> float:
    delta = _check_delta(delta)
    return float(family_size(family) * delta ** family.a)


def expected_Y(family: PatternFamily, delta: float, census: Mapping[int, int] | None = None) -> float:
    """E(Y) = sum over 1 <= k <= a-1 of I_k * delta^(2a - k)."""
    delta = _check_delta(delta)
    census = census if census is not None else intersection_census(family)
    a = family.a
    return float(sum(census.get(k, 0) * delta ** (2 * a - k) for k in range(1, a)))


def expected_X2(family: PatternFamily, delta: float, census: Mapping[int, int] | None = None) -> float:
    """Second moment E(X^2): disjoint pairs, the diagonal, and the overlapping pairs."""
    delta = _check_delta(delta)
    census = census if census is not None else intersection_census(family)
    a = family.a
    return float(census[0] * delta ** (2 * a) + census[a] * delta ** a) + expected_Y(family, delta, census)


def expected_falling2(family: PatternFamily, delta: float, census: Mapping[int, int] | None = None) -> float:
    """E(X(X-1))."""
    census = census if census is not None else intersection_census(family)
    return expected_X2(family, delta, census) - expected_X(family, delta)


def paley_zygmund_bound(family: PatternFamily, delta: float, census: Mapping[int, int] | None = None) -> float:
    """Lower bound E(X)^2 / E(X^2) on P(X >= 1)."""
    second = expected_X2(family, delta, census)
    return expected_X(family, delta) ** 2 / second if second > 0 else 0.0


def markov_bound(family: PatternFamily, delta: float) -> float:
    """Upper bound min(1, E(X)) on P(X >= 1)."""
    return min(1.0, expected_X(family, delta))


def threshold(family: PatternFamily) -> float:
    """The scale t at which E(X) is of constant order."""
    q, n = family.q, family.n
    if family.kind is PatternKind.THREE_AP:
        return q ** (-2 * n / 3)
    if family.kind is PatternKind.RIGHT_TRIANGLE:
        return q ** (-n + 1 / 3)
    if family.kind is PatternKind.PARALLELOGRAM:
        return q ** (-3 * n / 4)
    m = family.m
    return q ** (-(m + 1) * n / q ** m)


def framework_threshold(family: PatternFamily) -> float:
    """q^((c - b*n) / a) for a family with |A| = Theta(q^(b*n - c))."""
    if family.kind not in FRAMEWORK_PARAMS:
        raise BadParams(f"{family.kind.value} has no (b, c) growth parameters")
    b, c = FRAMEWORK_PARAMS[family.kind]
    return family.q ** ((c - b * family.n) / family.a)


def extremal_rate(family: PatternFamily) -> float:
    """Order of the largest A-free set the deletion method guarantees."""
    q, n = family.q, family.n
    if family.kind is PatternKind.THREE_AP:
        return q ** (n / 3)
    if family.kind is PatternKind.PARALLELOGRAM:
        return q ** (n / 4)
    if family.kind is PatternKind.RIGHT_TRIANGLE:
        return q ** (1 / 3)
    m = family.m
    return q ** (n * (1 - (m + 1) / q ** m))


def plane_diagnostics(family: PatternFamily, delta: float) -> list[float]:
    """q^(-n(k+1)) * delta^(-q^k) for k = 0..m-1; all must be small near threshold."""
    if family.kind is not PatternKind.PLANE:
        return []
    delta = _check_delta(delta)
    q, n = family.q, family.n
    out = []
    for k in range(family.m):
        out.append(float("inf") if delta == 0 else q ** (-n * (k + 1)) * delta ** (-(q ** k)))
    return out


def ratio_c1(family: PatternFamily, census: Mapping[int, int] | None = None) -> float:
    census = census if census is not None else intersection_census(family)
    return census[0] / census[family.a] ** 2


def ratio_c2(family: PatternFamily, delta: float, census: Mapping[int, int] | None = None) -> float | None:
    """E(Y) / E(X)^2, or None when E(X) = 0."""
    census = census if census is not None else intersection_census(family)
    ex = expected_X(family, delta)
    return expected_Y(family, delta, census) / ex ** 2 if ex > 0 else None


def condition_report(family: PatternFamily, delta: float) -> CensusReport:
    census = intersection_census(family)
    size = census[family.a]
    ex = expected_X(family, delta)
    ey = expected_Y(family, delta, census)
    t = threshold(family)
    scale = 4 * t
    ratios = {
        "C1": ratio_c1(family, census),
        "C2": ratio_c2(family, delta, census),
        "C2_4t": ratio_c2(family, scale, census) if scale <= 1 else None,
    }
    return CensusReport(
        family=family.kind.value,
        q=family.q,
        n=family.n,
        m=family.m,
        A_size=size,
        I=census,
        delta=delta,
        E_X=ex,
        E_Y=ey,
        t=t,
        ratios=ratios,
        plane_diagnostics=plane_diagnostics(family, delta),
        paley_zygmund=paley_zygmund_bound(family, delta, census),
        markov=markov_bound(family, delta),
    )


# ---------- Exact counts ----------


def er_containment_prob(q: int, n: int, M: int, f: int) -> Fraction:
    """P(F inside E) for a fixed f-set F and E uniform among M-subsets of GF(q)^n."""
    ctx = make_field(q)
    if n < 1:
        raise BadParams(f"n = {n} must be >= 1")
    size = ctx.q ** n
    if not 0 <= f <= M <= size:
        raise BadParams(f"need 0 <= f <= M <= q^n (f={f}, M={M}, q^n={size})")
    num = den = 1
    for i in range(f):
        num *= M - i
        den *= size - i
    return Fraction(num, den)


def expected_X_uniform(family: PatternFamily, M: int) -> Fraction:
    """E(X) when E is a uniform M-subset."""
    if not 0 <= M <= family.num_points:
        raise BadParams(f"M = {M} must lie in [0, {family.num_points}]")
    if M < family.a:
        return Fraction(0)
    return family_size(family) * er_containment_prob(family.q, family.n, M, family.a)


def planes_containing(family: PatternFamily, points: Sequence[Vec]) -> int:
    """Number of m-dim affine planes containing the given points."""
    if family.kind is not PatternKind.PLANE:
        raise BadParams("planes_containing needs a plane family")
    d = affine_dim(points)
    if d > family.m:
        return 0
    return gaussian_binomial(family.n - d, family.m - d, family.q)


def patterns_containing(family: PatternFamily, points: Sequence[int]) -> int:
    """Number of members containing every given point index."""
    points = sorted(set(int(p) for p in points))
    if not points:
        raise BadParams("patterns_containing needs at least one point")
    if len(points) > family.a:
        return 0
    rows = patterns_through(family, points[0])
    others = points[1:]
    if not others:
        return len(rows)
    hits = sum((rows == p).any(axis=1) for p in others)
    return int((hits == len(others)).sum())
