"""Cohomology groups of the normalized complex, with class arithmetic.

H^p = ker(d_p) / im(d_{p-1}) is presented through the Z/m quotient
machinery, so every class has a canonical coordinate tuple and an explicit
cochain representative, and membership tests are exact.
"""

from __future__ import annotations

import numpy as np

from cocycle_lab.finite.cochains import Cochain, coboundary_matrix, indexer
from cocycle_lab.finite.modules import CyclicModule
from cocycle_lab.modarith import (
    AbelianGroup,
    ColumnSpan,
    NotInSpan,
    Quotient,
    kernel_basis,
)


class CohomologyGroup:
    """H^p for one module, wrapping a quotient presentation of cocycles."""

    def __init__(self, module: CyclicModule, p: int, quot: Quotient):
        self.module = module
        self.p = p
        self._quot = quot
        self.factors = quot.factors
        self.order = quot.order
        self._abelian = AbelianGroup(self.factors)

    def __repr__(self):
        facs = " x ".join(f"Z/{f}" for f in self.factors) or "0"
        return f"H^{self.p} = {facs}"

    def reduce(self, c: Cochain) -> tuple[int, ...]:
        """Coordinates of the class of a cocycle (raises on non-cocycles)."""
        if c.p != self.p or c.module.key != self.module.key:
            raise ValueError("cochain lives in a different space")
        if not c.is_cocycle():
            raise ValueError("not a cocycle")
        return self._quot.reduce(c.vec)

    def rep(self, i: int) -> Cochain:
        return Cochain(self.module, self.p, self._quot.rep(i))

    def rep_of(self, coords) -> Cochain:
        return Cochain(self.module, self.p, self._quot.rep_of(coords))

    def classes(self):
        """All class coordinate tuples."""
        return self._abelian.elements()

    def is_coboundary(self, c: Cochain) -> bool:
        coords = self.reduce(c)
        return all(v == 0 for v in coords)

    def same_class(self, c1: Cochain, c2: Cochain) -> bool:
        return self.reduce(c1) == self.reduce(c2)

    def order_multiset(self) -> list[int]:
        return sorted(self._abelian.order_of(x) for x in self._abelian.elements())

    @property
    def abelian(self) -> AbelianGroup:
        return self._abelian


_COHO_MEMO: dict = {}
_IMAGE_MEMO: dict = {}


def _image_span(module: CyclicModule, p: int) -> ColumnSpan:
    key = (module.key, p)
    hit = _IMAGE_MEMO.get(key)
    if hit is None:
        hit = _IMAGE_MEMO[key] = ColumnSpan(coboundary_matrix(module, p), module.m)
    return hit


def coboundary_witness(c: Cochain) -> Cochain | None:
    """A cochain b of degree p-1 with db = c, or None if c is not exact.

    There is nothing below degree 0 in this complex, so degree-0 input
    always returns None, even for the zero cochain.
    """
    if c.p == 0:
        return None
    span = _image_span(c.module, c.p - 1)
    x = span.solve(np.asarray(c.vec) % c.module.m)
    if x is None:
        return None
    return Cochain(c.module, c.p - 1, x)


def cohomology(module: CyclicModule, p: int) -> CohomologyGroup:
    """H^p(G; A) on normalized cochains, memoized per (module, degree)."""
    key = (module.key, p)
    hit = _COHO_MEMO.get(key)
    if hit is not None:
        return hit
    m = module.m
    D = coboundary_matrix(module, p)
    gens = kernel_basis(D, m)
    if p == 0:
        rels = np.zeros((indexer(module.group, 0).size, 0), dtype=np.int64)
    else:
        rels = coboundary_matrix(module, p - 1)
    try:
        quot = Quotient(gens, rels, m)
    except NotInSpan as exc:  # pragma: no cover - d^2 = 0 guards this
        raise ArithmeticError("coboundaries escaped the cocycle space") from exc
    out = CohomologyGroup(module, p, quot)
    _COHO_MEMO[key] = out
    return out
