"""Exact linear algebra over Z/m, without ever leaving the ring.

Z/m is not a field for composite m, so plain Gaussian elimination cannot
see subgroup structure (over Z/4 the matrix [2] has kernel {0, 2}).  The
workhorse here is a strong echelon sweep in the style of the Howell form:
unit pivots are preferred when present, extended-gcd row transforms handle
zero-divisor columns, and every zero-divisor pivot spawns an annihilator
"completion" row so that the echelon rows can reduce *every* element of
the row span, including the torsion shadows.  All row operations are
tracked, which is what lets the cohomology layer express a class in terms
of computed generators.

Staying mod m (rather than lifting to Z and running Smith normal form
there) keeps every entry bounded by m; there is no coefficient blowup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as _iproduct

import numpy as np


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    old_r, r = int(a), int(b)
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def modinv(a: int, m: int) -> int:
    g, s, _ = ext_gcd(a % m, m)
    if g != 1:
        raise ValueError(f"{a} is not a unit mod {m}")
    return s % m


def stab_unit(v: int, m: int) -> int:
    """A unit u of Z/m with (u*v) % m == gcd(v, m).

    Existence is the stabilization lemma behind the Howell form.  m is
    small throughout this package, so a direct search is fine.
    """
    v %= m
    g = math.gcd(v, m)
    for u in range(1, m + 1):
        if math.gcd(u, m) == 1 and (u * v) % m == g % m:
            return u
    raise ArithmeticError(f"no stabilizing unit for v={v}, m={m}")


def _as_matrix(A, m: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    return A % m


class ColumnSpan:
    """The subgroup of (Z/m)^a generated by the columns of A, echelonized.

    Provides membership with explicit coefficients (`solve`), generators of
    the kernel of A (coefficient vectors combining to zero), and the order
    of the span.  The echelon keeps a transform row per worksheet row, so
    solving is a single reduction pass.
    """

    def __init__(self, A, m: int):
        A = _as_matrix(A, m)
        self.m = int(m)
        self.ambient, self.ngens = A.shape
        a, k = A.shape

        if m == 1 or k == 0:
            self._W = np.zeros((0, a), np.int64)
            self._T = np.zeros((0, k), np.int64)
            self.pivots: list[tuple[int, int]] = []
            self.kernel = np.eye(k, dtype=np.int64) % m
            self.order = 1
            return

        cap = 2 * k + 8
        W = np.zeros((cap, a), np.int64)
        T = np.zeros((cap, k), np.int64)
        W[:k] = A.T
        T[:k] = np.eye(k, dtype=np.int64)
        nrows = k
        retired = np.zeros(cap, dtype=bool)
        pivots: list[tuple[int, int]] = []

        # ambient coordinates touched by no generator can be skipped;
        # row combinations can never populate them
        cols = np.flatnonzero(W[:k].any(axis=0))

        for j in cols:
            act = np.flatnonzero(~retired[:nrows])
            if act.size == 0:
                break
            vals = W[act, j]
            nz = act[vals != 0]
            if nz.size == 0:
                continue
            units = nz[np.gcd(W[nz, j], m) == 1]
            if units.size:
                piv = int(units[0])
                others = nz[nz != piv]
                if others.size:
                    q = (W[others, j] * modinv(int(W[piv, j]), m)) % m
                    W[others] = (W[others] - q[:, None] * W[piv]) % m
                    T[others] = (T[others] - q[:, None] * T[piv]) % m
            else:
                piv = int(nz[0])
                for i in nz[1:]:
                    i = int(i)
                    b_ = int(W[i, j])
                    if b_ == 0:
                        continue
                    a_ = int(W[piv, j])
                    if b_ % a_ == 0:
                        q = b_ // a_
                        W[i] = (W[i] - q * W[piv]) % m
                        T[i] = (T[i] - q * T[piv]) % m
                    else:
                        g, s, t = ext_gcd(a_, b_)
                        wp, wi = W[piv].copy(), W[i].copy()
                        tp, ti = T[piv].copy(), T[i].copy()
                        W[piv] = (s * wp + t * wi) % m
                        T[piv] = (s * tp + t * ti) % m
                        W[i] = (-(b_ // g) * wp + (a_ // g) * wi) % m
                        T[i] = (-(b_ // g) * tp + (a_ // g) * ti) % m
            retired[piv] = True
            pivots.append((int(j), piv))
            pval = int(W[piv, j])
            ann = m // math.gcd(pval, m)
            if ann != m:
                # zero-divisor pivot: its annihilator multiple still lies in
                # the span with a later leading column, so it must remain
                # available for reduction (this is the Howell completion)
                cw = (ann * W[piv]) % m
                ct = (ann * T[piv]) % m
                if cw.any() or ct.any():
                    if nrows == cap:
                        W = np.vstack([W, np.zeros_like(W)])
                        T = np.vstack([T, np.zeros_like(T)])
                        retired = np.concatenate([retired, np.zeros(cap, bool)])
                        cap *= 2
                    W[nrows] = cw
                    T[nrows] = ct
                    nrows += 1

        leftovers = np.flatnonzero(~retired[:nrows])
        if W[leftovers].any():
            raise ArithmeticError("echelon sweep left a nonzero active row")
        ker = T[leftovers]
        ker = ker[ker.any(axis=1)]
        self._W = W[:nrows]
        self._T = T[:nrows]
        self.pivots = pivots
        self.kernel = ker.T % m  # (ngens, nker); columns generate ker(A)
        order = 1
        for j, ri in pivots:
            order *= m // math.gcd(int(self._W[ri, j]), m)
        self.order = order

    def solve(self, b) -> np.ndarray | None:
        """x with A @ x == b (mod m), or None if b is outside the span."""
        m = self.m
        b = np.asarray(b, dtype=np.int64) % m
        if b.shape != (self.ambient,):
            raise ValueError("rhs has wrong length")
        if m == 1:
            return np.zeros(self.ngens, np.int64)
        x = np.zeros(self.ngens, np.int64)
        rem = b.copy()
        for j, ri in self.pivots:
            v = int(rem[j])
            if v == 0:
                continue
            p = int(self._W[ri, j])
            g = math.gcd(p, m)
            if v % g:
                return None
            mm = m // g
            q = ((v // g) * modinv(p // g, mm)) % mm if mm > 1 else 0
            rem = (rem - q * self._W[ri]) % m
            x = (x + q * self._T[ri]) % m
        if rem.any():
            return None
        return x

    def contains(self, b) -> bool:
        return self.solve(b) is not None


def kernel_basis(A, m: int) -> np.ndarray:
    """Columns generate {x : A @ x == 0 mod m}."""
    return ColumnSpan(A, m).kernel


def snf_mod(A, m: int) -> tuple[list[int], np.ndarray, np.ndarray]:
    """Smith-style diagonalization of A over Z/m with tracked row transform.

    Returns (diag, U, Uinv) where U @ A @ V is diagonal for some invertible
    untracked V, U @ Uinv == I mod m, and diag[i] == gcd(d_i, m) for the
    i-th diagonal entry (rows beyond the column count get m), arranged in
    divisibility order diag[0] | diag[1] | ...  Only the row transform is
    tracked: quotient presentations need the change of basis on the ambient
    coordinates, not on the relation side.
    """
    S = _as_matrix(A, m).copy()
    k, s = S.shape
    U = np.eye(k, dtype=np.int64)
    Ui = np.eye(k, dtype=np.int64)
    if m == 1:
        return [1] * k, U, Ui

    def rswap(i, j):
        S[[i, j]] = S[[j, i]]
        U[[i, j]] = U[[j, i]]
        Ui[:, [i, j]] = Ui[:, [j, i]]

    def raddmul(i, j, c):
        # row_i += c * row_j
        S[i] = (S[i] + c * S[j]) % m
        U[i] = (U[i] + c * U[j]) % m
        Ui[:, j] = (Ui[:, j] - c * Ui[:, i]) % m

    def rpair(i, j, a_, b_):
        # unimodular: rows (i, j) <- (s*ri + t*rj, -(b/g)*ri + (a/g)*rj)
        g, ss, tt = ext_gcd(a_, b_)
        ri, rj = S[i].copy(), S[j].copy()
        ui, uj = U[i].copy(), U[j].copy()
        S[i] = (ss * ri + tt * rj) % m
        U[i] = (ss * ui + tt * uj) % m
        S[j] = (-(b_ // g) * ri + (a_ // g) * rj) % m
        U[j] = (-(b_ // g) * ui + (a_ // g) * uj) % m
        ci, cj = Ui[:, i].copy(), Ui[:, j].copy()
        Ui[:, i] = ((a_ // g) * ci + (b_ // g) * cj) % m
        Ui[:, j] = (-tt * ci + ss * cj) % m

    def rscale(i, u):
        S[i] = (S[i] * u) % m
        U[i] = (U[i] * u) % m
        Ui[:, i] = (Ui[:, i] * modinv(u, m)) % m

    def cswap(i, j):
        S[:, [i, j]] = S[:, [j, i]]

    def caddmul(i, j, c):
        S[:, i] = (S[:, i] + c * S[:, j]) % m

    def cpair(i, j, a_, b_):
        g, ss, tt = ext_gcd(a_, b_)
        ci, cj = S[:, i].copy(), S[:, j].copy()
        S[:, i] = (ss * ci + tt * cj) % m
        S[:, j] = (-(b_ // g) * ci + (a_ // g) * cj) % m

    def clear_at(p):
        # alternate row/column clearing; divisible entries go by pure
        # elimination (never disturbs the pivot), anything else by a gcd
        # transform that strictly shrinks the pivot value, so this stops
        for _ in range(16 * (k + s + 4) * max(m, 4)):
            for i in range(k):
                if i == p or S[i, p] % m == 0:
                    continue
                a_, b_ = int(S[p, p]), int(S[i, p])
                if a_ != 0 and b_ % a_ == 0:
                    raddmul(i, p, -(b_ // a_))
                else:
                    rpair(p, i, a_, b_)
            for j in range(s):
                if j == p or S[p, j] % m == 0:
                    continue
                a_, b_ = int(S[p, p]), int(S[p, j])
                if a_ != 0 and b_ % a_ == 0:
                    caddmul(j, p, -(b_ // a_))
                else:
                    cpair(p, j, a_, b_)
            col_ok = not any(int(S[i, p]) % m for i in range(k) if i != p)
            row_ok = not any(int(S[p, j]) % m for j in range(s) if j != p)
            if col_ok and row_ok:
                return
        raise ArithmeticError("diagonalization did not stabilize")

    rank = min(k, s)
    for p in range(rank):
        block = S[p:, p:]
        nz = np.argwhere(block != 0)
        if nz.size == 0:
            break
        gvals = np.gcd(block[nz[:, 0], nz[:, 1]], m)
        bi, bj = nz[int(np.argmin(gvals))]
        if int(bi):
            rswap(p, p + int(bi))
        if int(bj):
            cswap(p, p + int(bj))
        clear_at(p)

    def dval(i):
        return math.gcd(int(S[i, i]), m) if i < s else m

    # enforce the divisor chain: merge any violating adjacent pair and
    # re-diagonalize the 2x2 block it lives in
    for _ in range(4 * k * k + 16):
        bad = -1
        for i in range(min(k, s) - 1):
            if dval(i + 1) % dval(i):
                bad = i
                break
        if bad < 0:
            break
        caddmul(bad, bad + 1, 1)
        clear_at(bad)
        clear_at(bad + 1)
    else:
        raise ArithmeticError("divisor chain did not stabilize")

    for i in range(rank):
        v = int(S[i, i]) % m
        g = math.gcd(v, m)
        if v and v != g % m:
            rscale(i, stab_unit(v, m))

    diag = [dval(i) for i in range(k)]
    return diag, U % m, Ui % m


class NotInSpan(ValueError):
    pass


class Quotient:
    """span(gens)/span(rels) inside (Z/m)^a, presented as cyclic factors.

    `factors` lists the cyclic orders > 1 in divisibility order, `rep(i)`
    returns an ambient representative of the i-th cyclic generator, and
    `reduce(x)` sends any element of span(gens) to its coordinate tuple,
    killing span(rels) by construction.
    """

    def __init__(self, gens, rels, m: int, *, selfcheck: bool = True):
        gens = _as_matrix(gens, m)
        rels = _as_matrix(rels, m)
        if gens.shape[0] != rels.shape[0]:
            raise ValueError("ambient dimension mismatch")
        self.m = int(m)
        a, k = gens.shape
        self._gens = gens
        self._span = ColumnSpan(gens, m)
        for j in range(rels.shape[1]):
            if not self._span.contains(rels[:, j]):
                raise NotInSpan("relation outside the generator span")
        if m == 1 or k == 0:
            self._U = np.eye(k, dtype=np.int64)
            self._Ui = np.eye(k, dtype=np.int64)
            self._allfac = [1] * k
            self._idx: list[int] = []
            self.factors: tuple[int, ...] = ()
            self.order = 1
            return
        stacked = np.hstack([gens, rels]) if rels.shape[1] else gens
        # coefficient vectors c with gens@c inside span(rels): the full
        # relation lattice of the presentation
        R = kernel_basis(stacked, m)[:k]
        diag, U, Ui = snf_mod(R, m)
        self._U, self._Ui = U, Ui
        self._allfac = diag
        self._idx = [i for i, d in enumerate(diag) if d > 1]
        self.factors = tuple(int(diag[i]) for i in self._idx)
        self.order = 1
        for f in self.factors:
            self.order *= f
        if selfcheck:
            for i in range(len(self.factors)):
                got = self.reduce(self.rep(i))
                want = tuple(1 if j == i else 0 for j in range(len(self.factors)))
                if got != want:
                    raise ArithmeticError("quotient presentation failed self-check")

    def reduce(self, x) -> tuple[int, ...]:
        c = self._span.solve(x)
        if c is None:
            raise NotInSpan("element outside the generator span")
        if not self._idx:
            return ()
        y = (self._U @ c) % self.m
        return tuple(int(y[i]) % self._allfac[i] for i in self._idx)

    def rep(self, i: int) -> np.ndarray:
        c = self._Ui[:, self._idx[i]] % self.m
        return (self._gens @ c) % self.m

    def rep_of(self, coords) -> np.ndarray:
        coords = tuple(coords)
        if len(coords) != len(self.factors):
            raise ValueError("coordinate tuple has wrong length")
        out = np.zeros(self._gens.shape[0], np.int64)
        for i, c in enumerate(coords):
            out = (out + int(c) * self.rep(i)) % self.m
        return out

    def contains(self, x) -> bool:
        return self._span.contains(x)


@dataclass(frozen=True)
class AbelianGroup:
    """A finite abelian group as a product of cyclic factors.

    Elements are coordinate tuples.  Everything here is enumeration-grade:
    the groups fed in are tiny, and enumeration doubles as certification.
    """

    factors: tuple[int, ...]

    @property
    def order(self) -> int:
        n = 1
        for f in self.factors:
            n *= f
        return n

    def zero(self) -> tuple[int, ...]:
        return tuple(0 for _ in self.factors)

    def add(self, x, y) -> tuple[int, ...]:
        return tuple((a + b) % f for a, b, f in zip(x, y, self.factors))

    def neg(self, x) -> tuple[int, ...]:
        return tuple((-a) % f for a, f in zip(x, self.factors))

    def scale(self, k: int, x) -> tuple[int, ...]:
        return tuple((k * a) % f for a, f in zip(x, self.factors))

    def elements(self):
        return (tuple(t) for t in _iproduct(*[range(f) for f in self.factors]))

    def order_of(self, x) -> int:
        n = 1
        for a, f in zip(x, self.factors):
            if a:
                fo = f // math.gcd(a, f)
                n = n * fo // math.gcd(n, fo)
        return n

    def span(self, gens) -> frozenset:
        seen = {self.zero()}
        frontier = [self.zero()]
        gens = [tuple(g) for g in gens]
        while frontier:
            cur = frontier.pop()
            for g in gens:
                nxt = self.add(cur, g)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return frozenset(seen)

    def quotient_order_multiset(self, big: frozenset, small: frozenset) -> list[int]:
        """Sorted element orders of big/small (small must be a subgroup of big).

        The order multiset determines a finite abelian group up to
        isomorphism, so this is how subquotient types get compared.
        """
        if not small <= big:
            raise ValueError("small is not contained in big")
        orders = []
        seen: set = set()
        for x in big:
            if x in seen:
                continue
            seen |= {self.add(x, t) for t in small}
            n = 1
            cur = x
            while cur not in small:
                cur = self.add(cur, x)
                n += 1
            orders.append(n)
        return sorted(orders)


@dataclass
class GroupHom:
    """Homomorphism between AbelianGroups, given by generator images."""

    src: AbelianGroup
    dst: AbelianGroup
    images: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.images) != len(self.src.factors):
            raise ValueError("one image per source generator required")
        for f, img in zip(self.src.factors, self.images):
            if self.dst.scale(f, img) != self.dst.zero():
                raise ValueError("generator image order does not divide source order")

    def apply(self, x) -> tuple[int, ...]:
        out = self.dst.zero()
        for a, img in zip(x, self.images):
            out = self.dst.add(out, self.dst.scale(a, img))
        return out

    def image(self) -> frozenset:
        return self.dst.span(self.images)

    def kernel(self) -> frozenset:
        z = self.dst.zero()
        return frozenset(x for x in self.src.elements() if self.apply(x) == z)
