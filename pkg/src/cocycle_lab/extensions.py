"""The dictionary between H^2 classes and central extensions.

One direction reads a normalized 2-cocycle off a group with a central
cyclic subgroup via a section; the other builds a group on Q x Z/m from a
cocycle.  Associativity of the built table is literally the cocycle
identity, so both directions double as certificates for each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _iproduct

import numpy as np

from cocycle_lab.extdata import ExtensionData
from cocycle_lab.finite.cochains import Cochain, indexer
from cocycle_lab.finite.cohomology import CohomologyGroup, cohomology
from cocycle_lab.finite.groups import FiniteGroup
from cocycle_lab.finite.modules import CyclicModule


class NotCentralError(ValueError):
    pass


class NotCocycleError(ValueError):
    pass


@dataclass
class ExtensionClass:
    """The class of an extension in H^2(Q; Z/m), with its witnesses."""

    ext: ExtensionData
    coords: tuple[int, ...]
    chi: Cochain
    fiber_gen: int
    h2: CohomologyGroup

    @property
    def is_split(self) -> bool:
        return all(v == 0 for v in self.coords)


def extension_class(
    ext: ExtensionData,
    *,
    section=None,
    fiber_gen: int | None = None,
) -> ExtensionClass:
    """Read the 2-cocycle chi(q1,q2) = s(q1)s(q2)s(q1 q2)^{-1} off a section.

    The designated subgroup must be central and cyclic; its identification
    with Z/m is fixed by `fiber_gen` (default: the smallest-index element
    of full order).
    """
    G, Q = ext.G, ext.quotient
    N = ext.normal
    m = len(N)
    for a in N:
        if any(G.op(a, g) != G.op(g, a) for g in range(G.n)):
            raise NotCentralError(
                f"subgroup element {G.labels[a]} is not central"
            )
    if fiber_gen is None:
        full = [a for a in N if G.order_of(a) == m]
        if not full:
            raise NotCentralError("central subgroup is not cyclic")
        fiber_gen = min(full)
    dlog = {}
    cur = G.identity
    for k in range(m):
        dlog[cur] = k
        cur = G.op(cur, fiber_gen)
    if cur != G.identity or len(dlog) != m or set(dlog) != set(N):
        raise NotCentralError("fiber generator does not enumerate the subgroup")

    sec = ext.section if section is None else np.asarray(section, dtype=np.int64)
    if sec[Q.identity] != G.identity:
        raise ValueError("section must send identity to identity")

    def chi_val(t):
        q1, q2 = t
        x = G.op(G.op(int(sec[q1]), int(sec[q2])), G.inv(int(sec[Q.mul[q1, q2]])))
        if x not in dlog:
            raise NotCentralError("section defect escaped the fiber")
        return dlog[x]

    mod = CyclicModule(m, Q)
    chi = Cochain.from_function(mod, 2, chi_val)
    if not chi.is_cocycle():  # pragma: no cover - associativity of G forbids it
        raise NotCocycleError("section defect is not a cocycle")
    h2 = cohomology(mod, 2)
    return ExtensionClass(ext=ext, coords=h2.reduce(chi), chi=chi, fiber_gen=fiber_gen, h2=h2)


def extension_table(Q: FiniteGroup, m: int, chi: Cochain) -> np.ndarray:
    """Raw product table on Q x Z/m indexed q*m + a; no group validation."""
    n = Q.n * m
    mul = np.zeros((n, n), dtype=np.int64)
    for q1, a1 in _iproduct(range(Q.n), range(m)):
        for q2, a2 in _iproduct(range(Q.n), range(m)):
            q = Q.op(q1, q2)
            a = (a1 + a2 + chi.evaluate((q1, q2))) % m
            mul[q1 * m + a1, q2 * m + a2] = q * m + a
    return mul


@dataclass
class BuiltExtension:
    group: FiniteGroup
    base: FiniteGroup
    m: int
    chi: Cochain
    proj: np.ndarray

    @property
    def fiber(self) -> tuple[int, ...]:
        e = self.base.identity
        return tuple(e * self.m + a for a in range(self.m))

    @property
    def fiber_gen(self) -> int:
        return int(self.base.identity * self.m + (1 % self.m))

    def data(self) -> ExtensionData:
        section = np.arange(self.base.n, dtype=np.int64) * self.m
        return ExtensionData(
            G=self.group,
            normal=self.fiber,
            quotient=self.base,
            proj=self.proj,
            section=section,
        )


def _normalize_raw(Q: FiniteGroup, m: int, raw: np.ndarray) -> Cochain:
    """Turn a possibly non-normalized cocycle table into a Cochain.

    Cocycles always satisfy chi(e, q) = chi(q, e) = chi(e, e), so shifting
    by the constant chi(e, e) normalizes; anything else is rejected.
    """
    raw = np.asarray(raw, dtype=np.int64) % m
    if raw.shape != (Q.n, Q.n):
        raise ValueError("cocycle table must be |Q| x |Q|")
    e = Q.identity
    shift = int(raw[e, e])
    shifted = (raw - shift) % m
    if shifted[e, :].any() or shifted[:, e].any():
        raise NotCocycleError("table is not normalizable by a constant shift")
    mod = CyclicModule(m, Q)
    return Cochain.from_function(mod, 2, lambda t: int(shifted[t[0], t[1]]))


def build_extension(Q: FiniteGroup, m: int, chi) -> BuiltExtension:
    """A verified group on Q x Z/m with product twisted by the cocycle chi.

    chi may be a normalized 2-Cochain over Q with trivial Z/m coefficients,
    or a raw |Q| x |Q| integer table (normalized automatically).  A non-
    cocycle is rejected with the triple where associativity would fail.
    """
    if m < 1:
        raise ValueError("fiber modulus must be positive")
    if isinstance(chi, np.ndarray) or (
        not isinstance(chi, Cochain) and hasattr(chi, "__len__")
    ):
        chi = _normalize_raw(Q, m, np.asarray(chi))
    if not isinstance(chi, Cochain) or chi.p != 2:
        raise ValueError("chi must be a 2-cochain")
    if chi.module.group.key != Q.key or chi.module.m != m:
        raise ValueError("chi must live on Q with Z/m coefficients")
    if not chi.module.is_trivial:
        raise ValueError("central extensions need trivial coefficients")
    dchi = chi.coboundary()
    if not dchi.is_zero():
        ix = indexer(Q, 3)
        flat = int(np.flatnonzero(dchi.vec)[0])
        t = ix.tuple_of(flat)
        names = ", ".join(Q.labels[g] for g in t)
        raise NotCocycleError(
            f"not a cocycle: associativity would fail at ({names}), "
            f"defect {int(dchi.vec[flat])} mod {m}"
        )
    mul = extension_table(Q, m, chi)
    labels = [f"({Q.labels[q]},{a})" for q in range(Q.n) for a in range(m)]
    group = FiniteGroup(labels, mul)  # revalidates associativity from scratch
    proj = np.arange(Q.n * m, dtype=np.int64) // m
    return BuiltExtension(group=group, base=Q, m=m, chi=chi, proj=proj)


def find_isomorphism(G1: FiniteGroup, G2: FiniteGroup) -> dict[int, int] | None:
    """Search for an isomorphism between two small groups.

    Backtracking over generator images constrained by element order; fine
    for the orders used here (<= 16).
    """
    if G1.n != G2.n:
        return None
    gens: list[int] = []
    span = {G1.identity}
    for g in range(G1.n):
        if g not in span:
            gens.append(g)
            span = set(G1.subgroup_closure([*gens]))
        if len(span) == G1.n:
            break
    orders2: dict[int, list[int]] = {}
    for h in range(G2.n):
        orders2.setdefault(G2.order_of(h), []).append(h)

    def close(images: list[int]) -> dict[int, int] | None:
        # build the hom generated by gens -> images, failing on conflicts
        phi = {G1.identity: G2.identity}
        frontier = [G1.identity]
        while frontier:
            x = frontier.pop()
            for g, h in zip(gens[: len(images)], images):
                y = G1.op(x, g)
                fy = G2.op(phi[x], h)
                if y in phi:
                    if phi[y] != fy:
                        return None
                else:
                    phi[y] = fy
                    frontier.append(y)
        return phi

    def extend(images: list[int]) -> dict[int, int] | None:
        if len(images) == len(gens):
            phi = close(images)
            if phi is None or len(phi) != G1.n:
                return None
            vals = set(phi.values())
            if len(vals) != G1.n:
                return None
            for a in range(G1.n):
                for b in range(G1.n):
                    if phi[G1.op(a, b)] != G2.op(phi[a], phi[b]):
                        return None
            return phi
        g = gens[len(images)]
        for h in orders2.get(G1.order_of(g), []):
            out = extend(images + [h])
            if out is not None:
                return out
        return None

    return extend([])
