"""Finite groups as fully validated multiplication tables.

Elements are integer indices into a label list.  Construction checks the
whole group contract and reports the first offending triple on failure,
since a silently broken table would poison every computation downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations

import numpy as np


class GroupTableError(ValueError):
    pass


class FiniteGroup:
    """A finite group presented by its complete Cayley table."""

    def __init__(self, labels, mul, *, validate: bool = True):
        self.labels = [str(x) for x in labels]
        mul = np.asarray(mul, dtype=np.int64)
        n = len(self.labels)
        if n == 0:
            raise GroupTableError("empty group")
        if mul.shape != (n, n):
            raise GroupTableError(f"table shape {mul.shape} does not match {n} labels")
        if mul.min() < 0 or mul.max() >= n:
            raise GroupTableError("table entries out of range")
        self.mul = mul
        self.n = n

        ident = None
        rng = np.arange(n)
        for e in range(n):
            if (mul[e] == rng).all() and (mul[:, e] == rng).all():
                ident = e
                break
        if ident is None:
            raise GroupTableError("no two-sided identity element")
        self.identity = int(ident)

        if validate:
            for a in range(n):
                left = mul[mul[a]]      # left[b, c] = (a*b)*c
                right = mul[a][mul]     # right[b, c] = a*(b*c)
                if not (left == right).all():
                    b, c = map(int, np.argwhere(left != right)[0])
                    la, lb, lc = self.labels[a], self.labels[b], self.labels[c]
                    raise GroupTableError(
                        f"associativity fails at ({la}, {lb}, {lc}): "
                        f"({la}*{lb})*{lc} = {self.labels[int(left[b, c])]} but "
                        f"{la}*({lb}*{lc}) = {self.labels[int(right[b, c])]}"
                    )

        inv = np.full(n, -1, dtype=np.int64)
        for g in range(n):
            hits = np.flatnonzero(mul[g] == self.identity)
            if hits.size != 1 or mul[int(hits[0]), g] != self.identity:
                raise GroupTableError(f"element {self.labels[g]} lacks a two-sided inverse")
            inv[g] = hits[0]
        self.inv_table = inv
        self.key = (tuple(self.labels), self.mul.tobytes())

    def __repr__(self):
        return f"FiniteGroup(order={self.n})"

    def op(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inv(self, a: int) -> int:
        return int(self.inv_table[a])

    def conj(self, g: int, x: int) -> int:
        """g x g^{-1}."""
        return int(self.mul[self.mul[g, x], self.inv_table[g]])

    def elements(self) -> range:
        return range(self.n)

    def order_of(self, g: int) -> int:
        k, cur = 1, g
        while cur != self.identity:
            cur = self.op(cur, g)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return (self.mul == self.mul.T).all()

    def center(self) -> tuple[int, ...]:
        return tuple(g for g in range(self.n) if (self.mul[g] == self.mul[:, g]).all())

    def word(self, *letters: int) -> int:
        out = self.identity
        for g in letters:
            out = self.op(out, g)
        return out

    def subgroup_closure(self, gens) -> tuple[int, ...]:
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            cur = frontier.pop()
            for g in gens:
                nxt = self.op(cur, g)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return tuple(sorted(seen))

    def is_subgroup(self, S) -> bool:
        S = set(S)
        if self.identity not in S:
            return False
        return all(self.op(a, b) in S and self.inv(a) in S for a in S for b in S)

    def is_normal(self, S) -> bool:
        S = set(S)
        return self.is_subgroup(S) and all(
            self.conj(g, s) in S for g in range(self.n) for s in S
        )

    def subgroup_view(self, S) -> tuple["FiniteGroup", np.ndarray]:
        """The subgroup on indices S as a standalone group, plus the embedding.

        Returns (H, embed) with embed[i] the parent index of H's element i.
        """
        S = tuple(sorted(set(int(x) for x in S)))
        if not self.is_subgroup(S):
            raise GroupTableError("index set is not a subgroup")
        pos = {g: i for i, g in enumerate(S)}
        hmul = [[pos[self.op(a, b)] for b in S] for a in S]
        H = FiniteGroup([self.labels[g] for g in S], hmul)
        return H, np.array(S, dtype=np.int64)

    def quotient(self, S) -> "QuotientMap":
        """G/S for a normal subgroup S, with projection and a section.

        The canonical section sends the identity coset to the identity and
        every other coset to its smallest member index.
        """
        S = tuple(sorted(set(int(x) for x in S)))
        if not self.is_normal(S):
            raise GroupTableError("index set is not a normal subgroup")
        coset_id = np.full(self.n, -1, dtype=np.int64)
        reps: list[int] = []
        scan = [self.identity] + [g for g in range(self.n) if g != self.identity]
        for g in scan:
            if coset_id[g] < 0:
                cid = len(reps)
                reps.append(g)
                for s_ in S:
                    coset_id[self.mul[g, s_]] = cid
        reps_arr = np.array(reps, dtype=np.int64)
        k = len(reps)
        qmul = np.zeros((k, k), dtype=np.int64)
        for i, gi in enumerate(reps):
            qmul[i] = coset_id[self.mul[gi, reps_arr]]
        labels = ["[" + self.labels[r] + "]" for r in reps]
        Q = FiniteGroup(labels, qmul)
        return QuotientMap(parent=self, group=Q, proj=coset_id, section=reps_arr, normal=S)


@dataclass
class QuotientMap:
    """G -> G/N with a chosen set-theoretic section back."""

    parent: FiniteGroup
    group: FiniteGroup
    proj: np.ndarray      # parent index -> quotient index
    section: np.ndarray   # quotient index -> parent index, identity-preserving
    normal: tuple[int, ...]

    def __post_init__(self):
        G, Q = self.parent, self.group
        for g in range(G.n):
            for h in range(G.n):
                if self.proj[G.mul[g, h]] != Q.mul[self.proj[g], self.proj[h]]:
                    raise GroupTableError("projection is not a homomorphism")
        for q in range(Q.n):
            if self.proj[self.section[q]] != q:
                raise GroupTableError("section does not split the projection")
        if self.section[Q.identity] != G.identity:
            raise GroupTableError("section must send identity to identity")

    def random_section(self, rng: np.random.Generator) -> np.ndarray:
        """A random identity-preserving section of the projection."""
        G, Q = self.parent, self.group
        out = np.zeros(Q.n, dtype=np.int64)
        out[Q.identity] = G.identity
        for q in range(Q.n):
            if q == Q.identity:
                continue
            members = np.flatnonzero(self.proj == q)
            out[q] = int(rng.choice(members))
        return out


def cyclic(n: int, sym: str = "g") -> FiniteGroup:
    labels = ["e"] + [sym if k == 1 else f"{sym}{k}" for k in range(1, n)]
    mul = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return FiniteGroup(labels, mul)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    labels = [f"({a},{b})" for a in G.labels for b in H.labels]
    nH = H.n
    mul = np.zeros((G.n * nH, G.n * nH), dtype=np.int64)
    for a1 in range(G.n):
        for b1 in range(nH):
            row = G.mul[a1][:, None] * nH + H.mul[b1][None, :]
            mul[a1 * nH + b1] = row.reshape(-1)
    return FiniteGroup(labels, mul)


def klein_four() -> FiniteGroup:
    return direct_product(cyclic(2, "a"), cyclic(2, "b"))


def quaternion8() -> FiniteGroup:
    # index = 2*axis + sign, axes 1, i, j, k; sign 1 means negated
    labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (2, 0): (0, 2), (3, 0): (0, 3),
        (1, 1): (1, 0), (2, 2): (1, 0), (3, 3): (1, 0),
        (1, 2): (0, 3), (2, 1): (1, 3),
        (2, 3): (0, 1), (3, 2): (1, 1),
        (3, 1): (0, 2), (1, 3): (1, 2),
    }
    mul = np.zeros((8, 8), dtype=np.int64)
    for a in range(4):
        for sa in range(2):
            for b in range(4):
                for sb in range(2):
                    sgn, ax = base[(a, b)]
                    mul[2 * a + sa, 2 * b + sb] = 2 * ax + ((sa + sb + sgn) % 2)
    return FiniteGroup(labels, mul)


def symmetric3() -> FiniteGroup:
    perms = list(permutations(range(3)))
    cycle_names = {
        (0, 1, 2): "e", (0, 2, 1): "(12)", (1, 0, 2): "(01)",
        (1, 2, 0): "(012)", (2, 0, 1): "(021)", (2, 1, 0): "(02)",
    }
    idx = {p: i for i, p in enumerate(perms)}
    mul = np.zeros((6, 6), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            comp = tuple(p[q[x]] for x in range(3))
            mul[i, j] = idx[comp]
    return FiniteGroup([cycle_names[p] for p in perms], mul)


def group_to_dict(G: FiniteGroup) -> dict:
    return {"labels": list(G.labels), "mul": G.mul.tolist()}


def group_from_dict(d: dict) -> FiniteGroup:
    if not isinstance(d, dict) or "labels" not in d or "mul" not in d:
        raise GroupTableError('group JSON must have "labels" and "mul" keys')
    return FiniteGroup(d["labels"], d["mul"])


def load_group(path) -> FiniteGroup:
    with open(path, "r", encoding="utf-8") as fh:
        return group_from_dict(json.load(fh))


def save_group(G: FiniteGroup, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(group_to_dict(G), fh, indent=1, sort_keys=True)
        fh.write("\n")
