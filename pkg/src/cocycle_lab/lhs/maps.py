"""The connecting maps: inflation, restriction, transgression, rho, shuffle.

Every map here operates on explicit cochains and certifies its own
postconditions at call time (cocycle checks, coset-representative
independence, inflatedness of lifts).  A failed postcondition raises
InternalConsistencyError rather than silently producing a class, because
these maps feed the exactness audit and a silent error there would
invalidate the whole report.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from cocycle_lab.extdata import ExtensionData
from cocycle_lab.finite.cochains import Cochain, indexer
from cocycle_lab.finite.cohomology import coboundary_witness, cohomology
from cocycle_lab.finite.modules import CyclicModule
from cocycle_lab.lhs.action import (
    _position_in_subgroup,
    class_action_module,
    invariant_classes,
    restricted_module,
)

_SUBMOD_MEMO: dict = {}


class InternalConsistencyError(ArithmeticError):
    pass


def invariant_submodule(
    ext: ExtensionData, module: CyclicModule
) -> tuple[CyclicModule, int]:
    """The subgroup-invariant coefficients as a module over the quotient.

    Returns (module over Q, multiplier): the invariants of Z/m are the
    multiples of the multiplier d, presented as Z/(m/d) with x standing
    for the coefficient d*x.  The induced units are checked to be
    constant on cosets by construction of the invariant generator.
    """
    key = (ext.key, module.key)
    hit = _SUBMOD_MEMO.get(key)
    if hit is not None:
        return hit
    d = module.invariant_generator(ext.normal)
    m2 = module.m // d
    units = np.ones(ext.quotient.n, dtype=np.int64)
    if m2 > 1:
        for qbar in range(ext.quotient.n):
            members = {
                module.unit(g) % m2
                for g in range(ext.G.n)
                if ext.proj[g] == qbar
            }
            if len(members) != 1:
                raise InternalConsistencyError(
                    "induced action is not constant on cosets"
                )
            units[qbar] = members.pop()
    out = (CyclicModule(m2, ext.quotient, units), d)
    _SUBMOD_MEMO[key] = out
    return out


def restrict_cochain(ext: ExtensionData, module: CyclicModule, c: Cochain) -> Cochain:
    """The literal restriction of a G-cochain to tuples from the subgroup."""
    if c.module.key != module.key:
        raise ValueError("cochain does not live over the given module")
    mod_n = restricted_module(ext, module)
    sub, embed = ext.subgroup()
    return Cochain.from_function(
        mod_n, c.p, lambda t: c.evaluate(tuple(int(embed[i]) for i in t))
    )


def inflation(ext: ExtensionData, module: CyclicModule, c: Cochain) -> Cochain:
    """Pull a cocycle on the quotient back to the whole group.

    The input is valued in the invariant submodule; values are embedded
    into Z/m by the invariant multiplier.  Cocycles stay cocycles, and
    that is asserted, not assumed.
    """
    mod_q, mult = invariant_submodule(ext, module)
    if c.module.key != mod_q.key:
        raise ValueError("cochain must be valued in the invariant submodule")
    if not c.is_cocycle():
        raise ValueError("inflation expects a cocycle")
    proj = ext.proj

    def pulled(t):
        return mult * c.evaluate(tuple(int(proj[g]) for g in t))

    out = Cochain.from_function(module, c.p, pulled)
    if not out.is_cocycle():  # pragma: no cover - pullback of a cocycle
        raise InternalConsistencyError("inflation broke the cocycle identity")
    return out


def restriction(
    ext: ExtensionData, module: CyclicModule, c: Cochain
) -> tuple[tuple[int, ...], Cochain]:
    """The class of c restricted to the subgroup, certified G-invariant."""
    if not c.is_cocycle():
        raise ValueError("restriction expects a cocycle")
    restr = restrict_cochain(ext, module, c)
    hq, fixed = invariant_classes(ext, module, c.p)
    coords = hq.reduce(restr)
    if coords not in fixed:
        raise InternalConsistencyError(
            "restricted class escaped the invariant part"
        )
    return coords, restr


def transgression_d2(
    ext: ExtensionData,
    module: CyclicModule,
    x,
    *,
    section=None,
    rep_shift: Cochain | None = None,
) -> tuple[int, ...]:
    """Transgress an invariant 1-class on N to a 2-class on Q.

    A representative is lifted to the group through the section, its
    coboundary is checked to be exactly inflated (that is the level-2
    condition in this degree), read off on section pairs, and reduced.
    `rep_shift` adds the coboundary of a 0-cochain on N to the chosen
    representative; callers use it to certify representative
    independence.
    """
    G, Q = ext.G, ext.quotient
    sec = ext.section if section is None else np.asarray(section, dtype=np.int64)
    hq, fixed = invariant_classes(ext, module, 1)
    if isinstance(x, Cochain):
        coords = hq.reduce(x)
        z = x
    else:
        coords = tuple(int(v) for v in x)
        z = hq.rep_of(coords)
    if coords not in fixed:
        raise ValueError(f"class {coords} is not G-invariant; cannot transgress")
    if rep_shift is not None:
        z = z + rep_shift.coboundary()
    pos = _position_in_subgroup(ext)
    mod_q, mult = invariant_submodule(ext, module)

    def lifted(t):
        g = t[0]
        k = G.op(int(g), G.inv(int(sec[ext.proj[g]])))
        return z.evaluate((int(pos[k]),))

    w = Cochain.from_function(module, 1, lifted)
    dw = w.coboundary()
    for g in range(G.n):
        for h in range(G.n):
            got = dw.evaluate((g, h))
            via_section = dw.evaluate(
                (int(sec[ext.proj[g]]), int(sec[ext.proj[h]]))
            )
            if got != via_section:
                raise InternalConsistencyError(
                    "lift coboundary is not inflated: depends on "
                    f"({G.labels[g]}, {G.labels[h]}) beyond its cosets"
                )
            if got % mult:
                raise InternalConsistencyError(
                    "lift coboundary escaped the invariant coefficients"
                )

    def read_off(t):
        return dw.evaluate((int(sec[t[0]]), int(sec[t[1]]))) // mult

    y = Cochain.from_function(mod_q, 2, read_off)
    if not y.is_cocycle():
        raise InternalConsistencyError("transgressed cochain is not a cocycle")
    return cohomology(mod_q, 2).reduce(y)


def rho(
    ext: ExtensionData,
    module: CyclicModule,
    C: Cochain,
    Lam: Cochain | None = None,
) -> dict:
    """The descent map sending a restricted-trivial 2-cocycle on G to a
    1-class on Q valued in H^1(N;A).

    Lam must satisfy C|_N = -dLam exactly; it is solved for when not
    supplied, and rejected with a witness pair when supplied but
    incompatible.  Lam is spread over G (zero off the subgroup) and its
    coboundary absorbed into C, leaving a cohomologous representative
    C' that vanishes on subgroup pairs.  Every member g of a coset then
    slices C' to the subgroup 1-cochain
        n |-> C'(g, g^-1 n g) - C'(n, g),
    certified to be a 1-cocycle whose class is shared by the whole
    coset, so the output involves no section choice; the per-coset
    classes are certified to assemble into a 1-cocycle on Q valued in
    the class-action module.  Absorbing Lam first is what makes the
    output well defined: a different 2-cocycle representative or a
    different compatible Lam moves C' by a coboundary that leaves every
    slice class unchanged.
    """
    G, Q = ext.G, ext.quotient
    if not C.is_cocycle():
        raise ValueError("rho expects a 2-cocycle on the group")
    mod_n = restricted_module(ext, module)
    restr = restrict_cochain(ext, module, C)
    if Lam is None:
        Lam = coboundary_witness(-restr)
        if Lam is None:
            raise ValueError(
                "no compatible Lam exists: the restriction of C is not a coboundary"
            )
    else:
        if Lam.module.key != mod_n.key or Lam.p != 1:
            raise ValueError("Lam must be a 1-cochain on the subgroup")
        defect = Lam.coboundary() + restr
        if not defect.is_zero():
            sub, _ = ext.subgroup()
            flat = int(np.flatnonzero(defect.vec)[0])
            n1, n2 = indexer(sub, 2).tuple_of(flat)
            raise ValueError(
                "Lam is incompatible with C at "
                f"({sub.labels[n1]}, {sub.labels[n2]})"
            )
    sub, embed = ext.subgroup()
    hq, M = class_action_module(ext, module, 1)

    ix = indexer(G, 1)
    spread = np.zeros(ix.size, dtype=np.int64)
    for nidx in range(1, sub.n):
        spread[ix.index((int(embed[nidx]),))] = -Lam.evaluate((nidx,)) % module.m
    flat = C - Cochain(module, 1, spread).coboundary()
    for i in range(sub.n):
        for j in range(sub.n):
            if flat.evaluate((int(embed[i]), int(embed[j]))):
                raise InternalConsistencyError(
                    "absorbing Lam did not flatten C on subgroup pairs"
                )

    per_coset: dict[int, tuple] = {}
    for qbar in range(Q.n):
        classes = set()
        for g in map(int, np.flatnonzero(ext.proj == qbar)):
            ginv = G.inv(g)

            def slice_val(t, g=g, ginv=ginv):
                n = int(embed[t[0]])
                conj = G.op(G.op(ginv, n), g)
                return (flat.evaluate((g, conj)) - flat.evaluate((n, g))) % module.m

            phi_g = Cochain.from_function(mod_n, 1, slice_val)
            if not phi_g.is_cocycle():
                raise InternalConsistencyError(
                    f"rho value at coset of {Q.labels[qbar]} is not a cocycle"
                )
            classes.add(hq.reduce(phi_g))
        if len(classes) != 1:
            raise InternalConsistencyError(
                f"rho class depends on the representative in coset {Q.labels[qbar]}"
            )
        per_coset[qbar] = classes.pop()
    if any(v != 0 for v in per_coset[Q.identity]):
        raise InternalConsistencyError("rho is nonzero on the identity coset")
    if M is None:
        return {"coords": (), "per_coset": per_coset, "lam": Lam, "cochain": None}
    f = Cochain.from_function(M, 1, lambda t: per_coset[int(t[0])][0])
    if not f.is_cocycle():
        raise InternalConsistencyError("rho output is not a cocycle on Q")
    coords = cohomology(M, 1).reduce(f)
    return {"coords": coords, "per_coset": per_coset, "lam": Lam, "cochain": f}


def shuffle_transform(
    ext: ExtensionData,
    module: CyclicModule,
    c: Cochain,
    p: int,
    q: int,
    *,
    section=None,
) -> dict[tuple, Cochain]:
    """The alternating shuffle sum turning a degree p+q cochain on G into
    a p-cochain on Q valued in q-cochains on N.

    Quotient entries are lifted through the section; each (p,q)-shuffle
    places the lifts at its first block and conjugated subgroup entries
    at the second, with conjugation depth read off the shuffle.  Used as
    a cross-check for the page presentations, and as the page-to-report
    dictionary at bidegree (1,1).
    """
    if c.p != p + q:
        raise ValueError("cochain degree must be p + q")
    if c.module.key != module.key:
        raise ValueError("cochain does not live over the given module")
    G, Q = ext.G, ext.quotient
    sec = ext.section if section is None else np.asarray(section, dtype=np.int64)
    mod_n = restricted_module(ext, module)
    sub, embed = ext.subgroup()
    m = module.m
    out: dict[tuple, Cochain] = {}
    offset = (p * (p - 1)) // 2
    for beta in indexer(Q, p).tuples():
        lifts = [int(sec[b]) for b in beta]
        prefix = [G.identity]
        for s_b in lifts:
            prefix.append(G.op(prefix[-1], s_b))
        prefix_inv = [G.inv(x) for x in prefix]

        def val(alpha, lifts=lifts, prefix=prefix, prefix_inv=prefix_inv):
            total = 0
            for S in combinations(range(p + q), p):
                T = [t for t in range(p + q) if t not in S]
                sign = -1 if (sum(S) - offset) % 2 else 1
                g = [0] * (p + q)
                for i, spot in enumerate(S):
                    g[spot] = lifts[i]
                for j, spot in enumerate(T):
                    depth = spot - j
                    x = int(embed[alpha[j]])
                    g[spot] = G.op(G.op(prefix_inv[depth], x), prefix[depth])
                total += sign * c.evaluate(tuple(g))
            return total % m

        out[beta] = Cochain.from_function(mod_n, q, val)
    return out


def phi_11(
    ext: ExtensionData,
    module: CyclicModule,
    c: Cochain,
    *,
    section=None,
) -> tuple[Cochain | None, dict[int, tuple]]:
    """Classes of the (1,1) shuffle: a 1-cochain on Q valued in H^1(N;A).

    Returns (cochain over the class-action module, per-coset classes);
    the cochain slot is None when H^1(N;A) is trivial.
    """
    shuf = shuffle_transform(ext, module, c, 1, 1, section=section)
    hq, M = class_action_module(ext, module, 1)
    per: dict[int, tuple] = {ext.quotient.identity: hq.abelian.zero()}
    for beta, ncochain in shuf.items():
        if not ncochain.is_cocycle():
            raise InternalConsistencyError(
                "shuffle output at (1,1) is not a cocycle on the subgroup"
            )
        per[int(beta[0])] = hq.reduce(ncochain)
    if M is None:
        return None, per
    f = Cochain.from_function(M, 1, lambda t: per[int(t[0])][0])
    if not f.is_cocycle():
        raise InternalConsistencyError("shuffle output is not a cocycle on Q")
    return f, per
