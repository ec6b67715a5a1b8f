"""Built-in worked examples: four extensions small enough for degree-3 tables.

Each entry pairs a group with a normal subgroup; coefficient moduli are
chosen per check.  These four cover a split abelian case, a non-split
cyclic case, a non-split non-abelian case with central fiber, and a
non-abelian case with non-central normal subgroup and honest conjugation
action.
"""

from __future__ import annotations

from cocycle_lab.extdata import ExtensionData
from cocycle_lab.finite.groups import cyclic, klein_four, quaternion8, symmetric3

COEFF_MODULI = (2, 3, 4)


def _z4_over_z2() -> ExtensionData:
    G = cyclic(4)
    return ExtensionData.from_normal(G, G.subgroup_closure([2]))


def _klein_over_z2() -> ExtensionData:
    G = klein_four()
    return ExtensionData.from_normal(G, G.subgroup_closure([2]))


def _q8_center() -> ExtensionData:
    G = quaternion8()
    return ExtensionData.from_normal(G, G.center())


def _s3_over_z3() -> ExtensionData:
    G = symmetric3()
    return ExtensionData.from_normal(G, G.subgroup_closure([G.labels.index("(012)")]))


_BUILDERS = {
    "z4-over-z2": _z4_over_z2,
    "klein-over-z2": _klein_over_z2,
    "q8-center": _q8_center,
    "s3-over-z3": _s3_over_z3,
}

_CACHE: dict[str, ExtensionData] = {}


def corpus_names() -> tuple[str, ...]:
    return tuple(_BUILDERS)


def corpus_entry(name: str) -> ExtensionData:
    if name not in _BUILDERS:
        raise KeyError(f"unknown corpus entry {name!r}; have {sorted(_BUILDERS)}")
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name]()
    return _CACHE[name]


def corpus_all() -> dict[str, ExtensionData]:
    return {name: corpus_entry(name) for name in _BUILDERS}
