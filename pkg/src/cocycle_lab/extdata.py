"""A group with a chosen normal subgroup, quotient, and section.

This is the shared input shape for the filtration machinery, the exact
sequences, and the extension-class dictionary.  Everything is revalidated
on construction: normality by conjugation closure, the projection as a
surjective homomorphism with the right kernel, and the section as an
identity-preserving splitting of the projection.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from cocycle_lab.finite.groups import FiniteGroup, GroupTableError


@dataclass
class ExtensionData:
    G: FiniteGroup
    normal: tuple[int, ...]
    quotient: FiniteGroup
    proj: np.ndarray      # G index -> quotient index
    section: np.ndarray   # quotient index -> G index

    @classmethod
    def from_normal(cls, G: FiniteGroup, N) -> "ExtensionData":
        qm = G.quotient(N)
        return cls(
            G=G,
            normal=tuple(sorted(set(int(x) for x in N))),
            quotient=qm.group,
            proj=qm.proj,
            section=qm.section,
        )

    def __post_init__(self):
        G, Q = self.G, self.quotient
        self.normal = tuple(sorted(set(int(x) for x in self.normal)))
        if not G.is_normal(self.normal):
            raise GroupTableError("designated subgroup is not normal")
        self.proj = np.asarray(self.proj, dtype=np.int64)
        self.section = np.asarray(self.section, dtype=np.int64)
        if self.proj.shape != (G.n,) or self.section.shape != (Q.n,):
            raise GroupTableError("projection or section has the wrong length")
        for g in range(G.n):
            for h in range(G.n):
                if self.proj[G.mul[g, h]] != Q.mul[self.proj[g], self.proj[h]]:
                    raise GroupTableError("projection is not a homomorphism")
        if set(int(x) for x in self.proj) != set(range(Q.n)):
            raise GroupTableError("projection is not surjective")
        kernel = {g for g in range(G.n) if self.proj[g] == Q.identity}
        if kernel != set(self.normal):
            raise GroupTableError("projection kernel differs from the subgroup")
        for q in range(Q.n):
            if self.proj[self.section[q]] != q:
                raise GroupTableError("section does not split the projection")
        if self.section[Q.identity] != G.identity:
            raise GroupTableError("section must send identity to identity")
        self._sub = None
        self.key = (G.key, self.normal, self.section.tobytes())

    def with_section(self, section) -> "ExtensionData":
        return replace(self, section=np.asarray(section, dtype=np.int64))

    def random_section(self, rng: np.random.Generator) -> np.ndarray:
        Q = self.quotient
        out = np.zeros(Q.n, dtype=np.int64)
        out[Q.identity] = self.G.identity
        for q in range(Q.n):
            if q == Q.identity:
                continue
            out[q] = int(rng.choice(np.flatnonzero(self.proj == q)))
        return out

    def subgroup(self) -> tuple[FiniteGroup, np.ndarray]:
        """The normal subgroup as a standalone group, plus its embedding."""
        if self._sub is None:
            self._sub = self.G.subgroup_view(self.normal)
        return self._sub

    def in_normal(self, g: int) -> bool:
        return self.proj[g] == self.quotient.identity
