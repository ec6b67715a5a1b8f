"""Spectral pages computed from the subquotient definition, exactly.

Z_r at (p,q) collects the level-p cochains of degree d = p+q whose
coboundary sits r levels deeper.  The page at (r,p,q) is

    E_r = Z_r / (Z_{r-1} at (p+1, q-1)  +  d Z_{r-1} at (p+1-r, q+r-2)),

and everything here is a kernel or a quotient over Z/m, so page orders
and class representatives are exact, not floating-point.  The degree cap
exists because degree-d tables on an order-n group have (n-1)^(d+1)
coboundary rows; the default cap of 3 is what the bundled group sizes
can afford densely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from cocycle_lab.extdata import ExtensionData
from cocycle_lab.finite.cochains import Cochain, coboundary_matrix, indexer
from cocycle_lab.finite.cohomology import cohomology
from cocycle_lab.finite.modules import CyclicModule
from cocycle_lab.lhs.action import class_action_module
from cocycle_lab.lhs.filtration import support_mask
from cocycle_lab.modarith import AbelianGroup, NotInSpan, Quotient, kernel_basis

DEGREE_CAP = 3

_KERNEL_MEMO: dict = {}
_PAGE_MEMO: dict = {}


class DegreeCapError(ValueError):
    pass


class ComparisonError(AssertionError):
    """An enumerated page disagrees with its closed-form description."""

    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


def _space_key(ext: ExtensionData, module: CyclicModule):
    return (ext.G.key, ext.normal, module.key)


def _masked_kernel(
    ext: ExtensionData, module: CyclicModule, d: int, sup_level: int, bad_level: int
) -> np.ndarray:
    """Generators (as columns, full degree-d coordinates) of the space of
    level-`sup_level` cochains whose coboundary lies at level `bad_level`."""
    sup_eff = min(max(sup_level, 0), d + 1)
    bad_eff = min(max(bad_level, 0), d + 2)
    key = (*_space_key(ext, module), d, sup_eff, bad_eff)
    hit = _KERNEL_MEMO.get(key)
    if hit is not None:
        return hit
    m = module.m
    ambient = indexer(ext.G, d).size
    sup_idx = np.flatnonzero(support_mask(ext, d, sup_eff))
    if sup_idx.size == 0:
        out = np.zeros((ambient, 0), dtype=np.int64)
    else:
        bad_rows = np.flatnonzero(~support_mask(ext, d + 1, bad_eff))
        if bad_rows.size == 0:
            basis = np.eye(sup_idx.size, dtype=np.int64)
        else:
            D = coboundary_matrix(module, d)
            sub = D[np.ix_(bad_rows, sup_idx)] % m
            sub = sub[sub.any(axis=1)]
            if sub.shape[0] > 1:
                sub = np.unique(sub, axis=0)
            if sub.shape[0] == 0:
                basis = np.eye(sup_idx.size, dtype=np.int64)
            else:
                basis = kernel_basis(sub, m)
        out = np.zeros((ambient, basis.shape[1]), dtype=np.int64)
        out[sup_idx] = basis
    out.setflags(write=False)
    _KERNEL_MEMO[key] = out
    return out


def z_generators(
    ext: ExtensionData, module: CyclicModule, r: int, p: int, q: int
) -> np.ndarray:
    """Columns spanning Z_r^{p,q} in full degree-(p+q) coordinates."""
    d = p + q
    if d < 0:
        raise ValueError("total degree must be nonnegative")
    return _masked_kernel(ext, module, d, p, p + r)


@dataclass
class SpectralPage:
    ext: ExtensionData
    module: CyclicModule
    r: int
    p: int
    q: int
    gens: np.ndarray
    quot: Quotient | None
    factors: tuple[int, ...] = field(init=False)
    order: int = field(init=False)

    def __post_init__(self):
        self.factors = () if self.quot is None else self.quot.factors
        self.order = 1 if self.quot is None else self.quot.order
        self._ab = AbelianGroup(self.factors)

    @property
    def degree(self) -> int:
        return self.p + self.q

    def reduce(self, c) -> tuple[int, ...]:
        vec = c.vec if isinstance(c, Cochain) else np.asarray(c, dtype=np.int64)
        if isinstance(c, Cochain) and (
            c.module.key != self.module.key or c.p != self.degree
        ):
            raise ValueError("cochain lives in a different space")
        if self.quot is None:
            if (np.asarray(vec) % self.module.m).any():
                raise NotInSpan("page is trivial but the cochain is not zero")
            return ()
        try:
            return self.quot.reduce(vec)
        except NotInSpan as exc:
            raise NotInSpan(
                f"cochain is not in Z_{self.r} at (p,q)=({self.p},{self.q})"
            ) from exc

    def rep_of(self, coords) -> Cochain:
        if self.quot is None:
            if tuple(coords) != ():
                raise ValueError("trivial page has a single class")
            size = indexer(self.ext.G, max(self.degree, 0)).size
            return Cochain(self.module, self.degree, np.zeros(size, np.int64))
        return Cochain(self.module, self.degree, self.quot.rep_of(coords))

    def rep(self, i: int) -> Cochain:
        return self.rep_of(tuple(1 if j == i else 0 for j in range(len(self.factors))))

    def classes(self):
        return self._ab.elements()

    def order_multiset(self) -> list[int]:
        return sorted(self._ab.order_of(x) for x in self._ab.elements())

    @property
    def abelian(self) -> AbelianGroup:
        return self._ab


def compute_page(
    ext: ExtensionData,
    module: CyclicModule,
    r: int,
    p: int,
    q: int,
    *,
    cap: int = DEGREE_CAP,
) -> SpectralPage:
    """The page at (r, p, q), presented as an exact quotient."""
    if module.group.key != ext.G.key:
        raise ValueError("module does not live on the extension's group")
    if r < 1:
        raise ValueError("pages start at r = 1")
    d = p + q
    if d > cap:
        raise DegreeCapError(f"total degree {d} exceeds the cap {cap}")
    key = (*_space_key(ext, module), r, p, q)
    hit = _PAGE_MEMO.get(key)
    if hit is not None:
        return hit
    if d < 0:
        page = SpectralPage(ext, module, r, p, q, np.zeros((0, 0), np.int64), None)
        _PAGE_MEMO[key] = page
        return page
    m = module.m
    gens = z_generators(ext, module, r, p, q)
    rels = [z_generators(ext, module, r - 1, p + 1, q - 1)]
    if d >= 1:
        below = z_generators(ext, module, r - 1, p + 1 - r, q + r - 2)
        if below.shape[1]:
            rels.append((coboundary_matrix(module, d - 1) @ below) % m)
    rel = np.hstack(rels) if rels else np.zeros((gens.shape[0], 0), np.int64)
    try:
        quot = Quotient(gens, rel, m)
    except NotInSpan as exc:  # pragma: no cover - containment is a theorem
        raise ArithmeticError(
            f"page relations escaped Z_{r} at (p,q)=({p},{q})"
        ) from exc
    page = SpectralPage(ext, module, r, p, q, gens, quot)
    _PAGE_MEMO[key] = page
    return page


def differential(
    ext: ExtensionData,
    module: CyclicModule,
    r: int,
    p: int,
    q: int,
    *,
    cap: int = DEGREE_CAP,
) -> tuple[SpectralPage, SpectralPage, list[tuple]]:
    """d_r out of (p,q): source page, target page, and generator images."""
    src = compute_page(ext, module, r, p, q, cap=cap)
    dst = compute_page(ext, module, r, p + r, q - r + 1, cap=cap)
    images = []
    for i in range(len(src.factors)):
        images.append(dst.reduce(src.rep(i).coboundary()))
    return src, dst, images


def apply_differential(
    src: SpectralPage, dst: SpectralPage, images: list[tuple], coords
) -> tuple:
    out = dst.abelian.zero()
    for a, img in zip(coords, images):
        out = dst.abelian.add(out, dst.abelian.scale(int(a), img))
    return out


def compare_E1_E2(
    ext: ExtensionData,
    module: CyclicModule,
    p: int,
    q: int,
    *,
    cap: int = DEGREE_CAP,
    shuffle_check=None,
) -> dict:
    """Match the enumerated pages at (p,q) against their closed forms.

    E_1 is compared by cardinality with the normalized cochain space
    C^p(Q; H^q(N;A)); E_2 with H^p(Q; H^q(N;A)) by cardinality and, via
    class-order multisets, by isomorphism type.  A mismatch raises; the
    optional shuffle cross-check result is carried as information only.
    """
    hq, mod_q = class_action_module(ext, module, q)
    t = hq.order
    e1 = compute_page(ext, module, 1, p, q, cap=cap)
    expected_e1 = t ** ((ext.quotient.n - 1) ** p) if p >= 0 else 1
    e2 = compute_page(ext, module, 2, p, q, cap=cap)
    if mod_q is None:
        expected_e2_order, expected_e2_multiset = 1, [1]
    else:
        h = cohomology(mod_q, p) if p >= 0 else None
        expected_e2_order = h.order if h else 1
        expected_e2_multiset = h.order_multiset() if h else [1]
    report = {
        "bidegree": [p, q],
        "class_group_order": t,
        "E1_order": e1.order,
        "C_order": expected_e1,
        "E1_match": e1.order == expected_e1,
        "E2_order": e2.order,
        "H_order": expected_e2_order,
        "E2_match": e2.order == expected_e2_order,
        "E2_multiset": e2.order_multiset(),
        "H_multiset": expected_e2_multiset,
        "E2_iso_match": e2.order_multiset() == expected_e2_multiset,
        "shuffle_agrees": None if shuffle_check is None else bool(shuffle_check),
    }
    if not (report["E1_match"] and report["E2_match"] and report["E2_iso_match"]):
        raise ComparisonError(
            f"page mismatch at bidegree ({p},{q}): "
            f"E1 {e1.order} vs {expected_e1}, "
            f"E2 {e2.order} {report['E2_multiset']} vs "
            f"{expected_e2_order} {expected_e2_multiset}",
            report,
        )
    return report


def infinity_report(
    ext: ExtensionData, module: CyclicModule, d: int, *, cap: int = DEGREE_CAP
) -> dict:
    """Stabilized pages against the filtration quotients of H^d(G;A).

    The filtration image F_p H^d is spanned by classes of cocycles lying
    at level p; its successive quotients must match the stabilized pages
    both in order and in class-order multiset.
    """
    if d > cap:
        raise DegreeCapError(f"total degree {d} exceeds the cap {cap}")
    h = cohomology(module, d)
    ab = h.abelian
    spans = []
    for p in range(d + 2):
        cols = z_generators(ext, module, d + 2, p, d - p)
        coords = {h.reduce(Cochain(module, d, col)) for col in cols.T}
        spans.append(ab.span(coords))
    rows = []
    ok = True
    for p in range(d + 1):
        if not spans[p + 1] <= spans[p]:
            raise ArithmeticError("filtration images failed to nest")
        filt = ab.quotient_order_multiset(spans[p], spans[p + 1])
        stable = compute_page(ext, module, d + 2, p, d - p, cap=cap)
        first_stable = max(p + 1, (d - p) + 2)
        early = compute_page(ext, module, first_stable, p, d - p, cap=cap)
        row = {
            "p": p,
            "page_order": stable.order,
            "page_multiset": stable.order_multiset(),
            "filtration_multiset": filt,
            "stabilized_early": early.order == stable.order,
            "match": stable.order_multiset() == filt,
        }
        ok = ok and row["match"] and row["stabilized_early"]
        rows.append(row)
    total = 1
    for row in rows:
        total *= row["page_order"]
    report = {
        "degree": d,
        "H_order": h.order,
        "full_filtration_spans_H": len(spans[0]) == h.order,
        "graded": rows,
        "product_matches_H": total == h.order,
        "match": ok and len(spans[0]) == h.order and total == h.order,
    }
    if not report["match"]:
        raise ComparisonError(f"stabilized pages disagree with H^{d}", report)
    return report
