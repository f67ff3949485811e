"""
Family registry used by the CLI:

- REGISTRY                       -> {family_name: builder}
- resolve_family(name)           -> builder (raises BadParams if unknown)
- build_family(name, q, n, m)    -> PatternFamily
- list_families()                -> list[str]
"""
from __future__ import annotations

from typing import Callable, Dict

from fqpatterns.core.errors import BadParams
from fqpatterns.services.field import make_field
from fqpatterns.services.patterns import PatternFamily, PatternKind

Builder = Callable[[int, int, "int | None"], PatternFamily]


def _fixed(kind: PatternKind) -> Builder:
    def build(q: int, n: int, m: int | None = None) -> PatternFamily:
        if m is not None:
            raise BadParams(f"--m only applies to planes, not {kind.value}")
        return PatternFamily(kind, make_field(q), n)

    return build


def _plane(q: int, n: int, m: int | None = None) -> PatternFamily:
    if m is None:
        raise BadParams("planes need --m")
    return PatternFamily(PatternKind.PLANE, make_field(q), n, m)


# --- Register map -------------------------------------------------------------

REGISTRY: Dict[str, Builder] = {
    PatternKind.THREE_AP.value: _fixed(PatternKind.THREE_AP),
    PatternKind.PARALLELOGRAM.value: _fixed(PatternKind.PARALLELOGRAM),
    PatternKind.RIGHT_TRIANGLE.value: _fixed(PatternKind.RIGHT_TRIANGLE),
    PatternKind.PLANE.value: _plane,
}

DESCRIPTIONS: Dict[str, str] = {
    "3ap": "three-term arithmetic progressions {x, x+v, x+2v} (odd q)",
    "pg": "parallelograms: four points pairing into diagonals with equal sums",
    "rt": "right triangles under the standard dot product",
    "plane": "m-dimensional affine planes (needs --m)",
}

# --- Convenience helpers ------------------------------------------------------


def resolve_family(name: str) -> Builder:
    """Return the builder or raise BadParams if the name is unknown."""
    if name not in REGISTRY:
        raise BadParams(f"Unknown family '{name}' (known: {', '.join(list_families())})")
    return REGISTRY[name]


def build_family(name: str, q: int, n: int, m: int | None = None) -> PatternFamily:
    return resolve_family(name)(q, n, m)


def list_families() -> list[str]:
    return list(REGISTRY.keys())
