"""Conjugation action of the quotient on subgroup cohomology.

A class [c] in H^q(N;A) is moved by g through (c.g)(n_1..n_q) =
c(g n_1 g^{-1}, ..., g n_q g^{-1}).g.  On classes the inner part acts
trivially, so the action descends to the quotient; that descent is
re-certified here element by element rather than assumed, because the
whole point of this package is to not trust the algebra on paper.
"""

from __future__ import annotations

import numpy as np

from cocycle_lab.extdata import ExtensionData
from cocycle_lab.finite.cochains import Cochain, indexer
from cocycle_lab.finite.cohomology import CohomologyGroup, cohomology
from cocycle_lab.finite.modules import CyclicModule, ModuleError

_RESTRICT_MEMO: dict = {}
_ACTION_MEMO: dict = {}


def restricted_module(ext: ExtensionData, module: CyclicModule) -> CyclicModule:
    """The coefficients as a module over the normal subgroup."""
    if module.group.key != ext.G.key:
        raise ValueError("module does not live on the extension's group")
    key = (ext.key, module.key)
    hit = _RESTRICT_MEMO.get(key)
    if hit is None:
        sub, embed = ext.subgroup()
        hit = _RESTRICT_MEMO[key] = module.restrict(sub, embed)
    return hit


def _position_in_subgroup(ext: ExtensionData) -> np.ndarray:
    sub, embed = ext.subgroup()
    pos = np.full(ext.G.n, -1, dtype=np.int64)
    for i, g in enumerate(embed):
        pos[g] = i
    return pos


def act_on_subgroup_cochain(
    ext: ExtensionData, module: CyclicModule, c: Cochain, g: int
) -> Cochain:
    """The right action of g in G on a cochain of the normal subgroup."""
    mod_n = restricted_module(ext, module)
    if c.module.key != mod_n.key:
        raise ValueError("cochain does not live on the normal subgroup")
    G = ext.G
    sub, embed = ext.subgroup()
    pos = _position_in_subgroup(ext)
    u = module.unit(g)
    ginv = G.inv(g)

    def moved(tup):
        conj = tuple(int(pos[G.op(G.op(g, int(embed[n])), ginv)]) for n in tup)
        return (c.evaluate(conj) * u) % module.m

    return Cochain.from_function(mod_n, c.p, moved)


def class_action(
    ext: ExtensionData, module: CyclicModule, q: int
) -> tuple[CohomologyGroup, dict[int, dict[tuple, tuple]]]:
    """H^q(N;A) together with the permutation each g in G induces on it.

    Certified on the spot: every map is checked to permute the classes,
    and elements of N are checked to act trivially (that is what makes
    the action one of Q and not just of G).
    """
    key = (ext.key, module.key, q)
    hit = _ACTION_MEMO.get(key)
    if hit is not None:
        return hit
    hq = cohomology(restricted_module(ext, module), q)
    maps: dict[int, dict[tuple, tuple]] = {}
    for g in range(ext.G.n):
        table = {}
        for coords in hq.classes():
            moved = act_on_subgroup_cochain(ext, module, hq.rep_of(coords), g)
            table[coords] = hq.reduce(moved)
        if len(set(table.values())) != hq.order:
            raise ModuleError(
                f"conjugation by {ext.G.labels[g]} does not permute H^{q}(N;A)"
            )
        if ext.in_normal(g) and any(v != k for k, v in table.items()):
            raise ModuleError(
                f"inner element {ext.G.labels[g]} acts nontrivially on classes"
            )
        maps[g] = table
    _ACTION_MEMO[key] = (hq, maps)
    return hq, maps


def invariant_classes(
    ext: ExtensionData, module: CyclicModule, q: int
) -> tuple[CohomologyGroup, frozenset]:
    """The G-invariant part of H^q(N;A), as a set of coordinate tuples."""
    hq, maps = class_action(ext, module, q)
    fixed = frozenset(
        coords
        for coords in hq.classes()
        if all(maps[g][coords] == coords for g in range(ext.G.n))
    )
    return hq, fixed


def class_action_module(
    ext: ExtensionData, module: CyclicModule, q: int
) -> tuple[CohomologyGroup, CyclicModule | None]:
    """H^q(N;A) as a coefficient module over the quotient.

    Returns (H^q(N;A), module over Q), with None in the module slot when
    the class group is trivial.  Requires the class group to be cyclic;
    multi-factor coefficients are out of scope and rejected loudly.
    """
    hq, maps = class_action(ext, module, q)
    if len(hq.factors) > 1:
        raise NotImplementedError(
            f"H^{q}(N;A) = {hq.factors} is not cyclic; "
            "only cyclic class coefficients are supported"
        )
    if hq.order == 1:
        return hq, None
    t = hq.factors[0]
    gen = (1,)
    units = np.ones(ext.quotient.n, dtype=np.int64)
    for qbar in range(ext.quotient.n):
        members = [g for g in range(ext.G.n) if ext.proj[g] == qbar]
        images = {maps[g][gen] for g in members}
        if len(images) != 1:
            raise ModuleError(
                f"class action is not constant on the coset of {ext.quotient.labels[qbar]}"
            )
        units[qbar] = images.pop()[0]
    return hq, CyclicModule(t, ext.quotient, units)
