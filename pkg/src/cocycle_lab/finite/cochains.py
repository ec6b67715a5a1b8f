"""Normalized inhomogeneous cochains and their coboundary.

A p-cochain stores one coefficient per p-tuple of non-identity elements;
evaluation at any tuple containing the identity is 0 by the normalization
convention, which changes no cohomology but shrinks every matrix.

The coboundary follows the inhomogeneous bar pattern with the group acting
on the last slot:

    dc(g_1, ..., g_{p+1}) = c(g_2, ..., g_{p+1})
                            + sum_i (-1)^i c(g_1, ..., g_i g_{i+1}, ..., g_{p+1})
                            + (-1)^{p+1} c(g_1, ..., g_p).g_{p+1}
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _iproduct

import numpy as np

from cocycle_lab.finite.groups import FiniteGroup
from cocycle_lab.finite.modules import CyclicModule


class TupleIndexer:
    """Flat base-(|G|-1) indexing of p-tuples of non-identity elements."""

    def __init__(self, G: FiniteGroup, p: int):
        if p < 0:
            raise ValueError("arity must be nonnegative")
        self.G = G
        self.p = p
        self.nonid = tuple(g for g in range(G.n) if g != G.identity)
        pos = np.full(G.n, -1, dtype=np.int64)
        for i, g in enumerate(self.nonid):
            pos[g] = i
        self.pos = pos
        self.q = G.n - 1
        self.size = self.q**p

    def index(self, tup) -> int | None:
        """Flat index of a tuple, or None if any entry is the identity."""
        idx = 0
        for g in tup:
            pg = int(self.pos[g])
            if pg < 0:
                return None
            idx = idx * self.q + pg
        return idx

    def tuple_of(self, idx: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.p):
            out.append(self.nonid[idx % self.q])
            idx //= self.q
        return tuple(reversed(out))

    def tuples(self):
        """All p-tuples of non-identity elements, in flat-index order."""
        return _iproduct(self.nonid, repeat=self.p)


_INDEXER_MEMO: dict = {}


def indexer(G: FiniteGroup, p: int) -> TupleIndexer:
    key = (G.key, p)
    hit = _INDEXER_MEMO.get(key)
    if hit is None:
        hit = _INDEXER_MEMO[key] = TupleIndexer(G, p)
    return hit


_DELTA_MEMO: dict = {}


def coboundary_matrix(module: CyclicModule, p: int) -> np.ndarray:
    """Matrix of the degree-p coboundary on normalized coordinates.

    Shape ((n-1)^(p+1), (n-1)^p); apply as (D @ vec) % m.
    """
    key = (module.key, p)
    hit = _DELTA_MEMO.get(key)
    if hit is not None:
        return hit
    G, m = module.group, module.m
    src = indexer(G, p)
    dst = indexer(G, p + 1)
    D = np.zeros((dst.size, src.size), dtype=np.int64)
    sign_last = -1 if (p + 1) % 2 else 1
    for row, t in enumerate(dst.tuples()):
        c0 = src.index(t[1:])
        if c0 is not None:
            D[row, c0] += 1
        sgn = 1
        for i in range(p):
            sgn = -sgn
            merged = t[:i] + (G.op(t[i], t[i + 1]),) + t[i + 2:]
            ci = src.index(merged)
            if ci is not None:
                D[row, ci] += sgn
        cl = src.index(t[:p])
        if cl is not None:
            D[row, cl] += sign_last * module.unit(t[p])
    D %= m
    _DELTA_MEMO[key] = D
    return D


@dataclass
class Cochain:
    """A normalized p-cochain with coefficients in a cyclic module."""

    module: CyclicModule
    p: int
    vec: np.ndarray

    def __post_init__(self):
        ix = indexer(self.module.group, self.p)
        self.vec = np.asarray(self.vec, dtype=np.int64) % self.module.m
        if self.vec.shape != (ix.size,):
            raise ValueError(f"expected {ix.size} coordinates, got {self.vec.shape}")

    @classmethod
    def zero(cls, module: CyclicModule, p: int) -> "Cochain":
        return cls(module, p, np.zeros(indexer(module.group, p).size, np.int64))

    @classmethod
    def from_function(cls, module: CyclicModule, p: int, fn) -> "Cochain":
        ix = indexer(module.group, p)
        vec = np.fromiter((fn(t) for t in ix.tuples()), dtype=np.int64, count=ix.size)
        return cls(module, p, vec)

    def evaluate(self, tup) -> int:
        if len(tup) != self.p:
            raise ValueError(f"expected a {self.p}-tuple")
        ix = indexer(self.module.group, self.p)
        flat = ix.index(tup)
        return 0 if flat is None else int(self.vec[flat])

    def __add__(self, other: "Cochain") -> "Cochain":
        self._compat(other)
        return Cochain(self.module, self.p, (self.vec + other.vec) % self.module.m)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._compat(other)
        return Cochain(self.module, self.p, (self.vec - other.vec) % self.module.m)

    def __neg__(self) -> "Cochain":
        return Cochain(self.module, self.p, (-self.vec) % self.module.m)

    def scale(self, k: int) -> "Cochain":
        return Cochain(self.module, self.p, (int(k) * self.vec) % self.module.m)

    def _compat(self, other: "Cochain") -> None:
        if self.module.key != other.module.key or self.p != other.p:
            raise ValueError("cochains live in different spaces")

    def coboundary(self) -> "Cochain":
        D = coboundary_matrix(self.module, self.p)
        return Cochain(self.module, self.p + 1, (D @ self.vec) % self.module.m)

    def is_cocycle(self) -> bool:
        return not self.coboundary().vec.any()

    def is_zero(self) -> bool:
        return not self.vec.any()


def cup(c1: Cochain, c2: Cochain, pairing=None, out_module: CyclicModule | None = None) -> Cochain:
    """Cup product on normalized cochains.

    (c1 u c2)(g_1..g_{p+q}) pairs c1(g_1..g_p) acted on by g_{p+1}...g_{p+q}
    with c2(g_{p+1}..g_{p+q}).  The default pairing is multiplication in a
    shared Z/m.
    """
    G = c1.module.group
    if c2.module.group.key != G.key:
        raise ValueError("cup product needs a common group")
    if out_module is None:
        if c1.module.key != c2.module.key:
            raise ValueError("provide out_module when the factors disagree")
        out_module = c1.module
    if pairing is None:
        mm = out_module.m
        pairing = lambda a, b: (a * b) % mm  # noqa: E731
    p, q = c1.p, c2.p
    ix = indexer(G, p + q)
    out = np.zeros(ix.size, dtype=np.int64)
    for row, t in enumerate(ix.tuples()):
        v1 = c1.evaluate(t[:p])
        for g in t[p:]:
            v1 = c1.module.act(v1, g)
        v2 = c2.evaluate(t[p:])
        out[row] = pairing(v1, v2)
    return Cochain(out_module, p + q, out % out_module.m)
