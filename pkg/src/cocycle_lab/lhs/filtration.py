"""Filtration of the cochain complex by arguments in the normal subgroup.

Level p of the degree-d cochains consists of those vanishing on every
tuple with at least d - p + 1 entries in N.  Level 0 is the whole space,
levels below 0 coincide with it, and above d only the zero cochain
remains.  The coboundary preserves each level, which is what lets pages
be presented as subquotients; that containment is asserted in tests by a
single matrix slice per level rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cocycle_lab.extdata import ExtensionData
from cocycle_lab.finite.cochains import Cochain, indexer

_COUNT_MEMO: dict = {}


def normal_count(ext: ExtensionData, d: int) -> np.ndarray:
    """For each flat d-tuple index, how many entries lie in the subgroup."""
    key = (ext.G.key, ext.normal, d)
    hit = _COUNT_MEMO.get(key)
    if hit is not None:
        return hit
    ix = indexer(ext.G, d)
    in_n = np.array(
        [1 if ext.in_normal(g) else 0 for g in ix.nonid], dtype=np.int64
    )
    idx = np.arange(ix.size, dtype=np.int64)
    count = np.zeros(ix.size, dtype=np.int64)
    for _ in range(d):
        count += in_n[idx % ix.q]
        idx //= ix.q
    count.setflags(write=False)
    _COUNT_MEMO[key] = count
    return count


def support_mask(ext: ExtensionData, d: int, p: int) -> np.ndarray:
    """Boolean mask of tuple indices where a level-p cochain may be nonzero."""
    return normal_count(ext, d) <= d - p


def filtration_membership(c: Cochain, ext: ExtensionData, p: int) -> bool:
    if c.module.group.key != ext.G.key:
        raise ValueError("cochain does not live on the extension's group")
    return bool((np.asarray(c.vec)[~support_mask(ext, c.p, p)] == 0).all())


def filtration_level(c: Cochain, ext: ExtensionData) -> int:
    """The largest level containing c; the zero cochain reports degree + 1."""
    p = c.p + 1
    while p > 0 and not filtration_membership(c, ext, p):
        p -= 1
    return p


@dataclass
class FilteredCochain:
    """A cochain tagged with a filtration level it provably belongs to."""

    cochain: Cochain
    level: int
    ext: ExtensionData

    def __post_init__(self):
        if not filtration_membership(self.cochain, self.ext, self.level):
            raise ValueError(
                f"cochain is not at filtration level {self.level} "
                f"(deepest valid level: {filtration_level(self.cochain, self.ext)})"
            )
