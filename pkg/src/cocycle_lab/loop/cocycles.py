"""The disk two-cocycle, the winding functional, and the extended product.

The central objects: a real-valued pairing C on maps of the disk whose
coboundary is integral, a winding functional on relative cylinder maps
whose coboundary recovers -C mod 1, and the resulting associative
product on (boundary loop, phase) pairs. All integrals run on the
midpoint-by-trapezoid grids from `grids`, with analytic partials from
the family grammar; a link-logarithm lattice evaluator provides an
independent discretization for cross-checks.

Sign conventions are fixed by orienting the disk by dr then dtheta and
the cylinder by dr, dtheta, dt. Checks of mod-1 identities report the
distance to the nearest integer together with the observed convergence
order across a three-grid ladder, so tolerances can be tied to the
measured rate instead of a bare magic number.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cocycle_lab.loop.families import (
    MapFamily,
    RelativeError,
    conjugate,
    exp_map,
    inverse,
    product,
    relative_defect,
    top_slice,
)
from cocycle_lab.loop.grids import GridSpec, cylinder_nodes, disk_nodes, integrate, tree_sum
from cocycle_lab.loop.quat import qconj, qlog, qmul
from cocycle_lab.report import nearest_int_distance, observed_order

EIGHT_PI_SQ = 8.0 * np.pi**2
RELATIVE_TOLERANCE = 1e-9

METHODS = ("analytic", "lattice")


@dataclass(frozen=True)
class CocycleValue:
    """A quadrature value with a refinement-based error estimate."""

    value: float
    error: float
    grid: tuple[int, ...]


@dataclass(frozen=True)
class CentralElement:
    """A point of the central extension: a disk map and a phase mod 1."""

    family: MapFamily
    phase: float


def _mod1(x: float) -> float:
    return float(x - np.floor(x))


def _dot(x, y):
    return np.sum(x * y, axis=-1)


def _left_vec(q, dq):
    # vector part of q^-1 dq
    return qmul(qconj(q), dq)[..., 1:]


def _right_vec(q, dq):
    # vector part of dq q^-1
    return qmul(dq, qconj(q))[..., 1:]


def _require_disk(*fams):
    for f in fams:
        if f.domain != "disk":
            raise ValueError("this pairing is defined for disk maps")


def _c_analytic(f: MapFamily, g: MapFamily, spec: GridSpec) -> float:
    r, theta, w = disk_nodes(spec)
    qf, df = f.sample({"r": r, "theta": theta})
    qg, dg = g.sample({"r": r, "theta": theta})
    ar = _left_vec(qf, df["r"])
    at = _left_vec(qf, df["theta"])
    br = _right_vec(qg, dg["r"])
    bt = _right_vec(qg, dg["theta"])
    cells = (-2.0 / EIGHT_PI_SQ) * (_dot(ar, bt) - _dot(at, br))
    return integrate(cells, spec.disk_shape, w)


def _c_lattice(f: MapFamily, g: MapFamily, spec: GridSpec) -> float:
    nr, nth = spec.nr, spec.ntheta
    r = (np.arange(nr + 1, dtype=np.float64) / nr)[:, None]
    theta = (2.0 * np.pi / nth) * np.arange(nth, dtype=np.float64)[None, :]
    qf, _ = f.sample({"r": r, "theta": theta})
    qg, _ = g.sample({"r": r, "theta": theta})
    qf = np.broadcast_to(qf, (nr + 1, nth, 4))
    qg = np.broadcast_to(qg, (nr + 1, nth, 4))
    # link logarithms (3-vectors): radial and angular steps carry the
    # cell widths, so no further h factors appear below
    a_r = qlog(qmul(qconj(qf[:-1]), qf[1:]))
    a_t = qlog(qmul(qconj(qf), np.roll(qf, -1, axis=1)))
    b_r = qlog(qmul(qg[1:], qconj(qg[:-1])))
    b_t = qlog(qmul(np.roll(qg, -1, axis=1), qconj(qg)))
    # symmetrize each link pair across its cell
    ar = 0.5 * (a_r + np.roll(a_r, -1, axis=1))
    br = 0.5 * (b_r + np.roll(b_r, -1, axis=1))
    at = 0.5 * (a_t[:-1] + a_t[1:])
    bt = 0.5 * (b_t[:-1] + b_t[1:])
    cells = (-2.0 / EIGHT_PI_SQ) * (_dot(ar, bt) - _dot(at, br))
    return float(tree_sum(cells))


def _c(f, g, spec, method="analytic") -> float:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    _require_disk(f, g)
    fn = _c_analytic if method == "analytic" else _c_lattice
    return fn(f, g, spec)


def mickelsson_C(f: MapFamily, g: MapFamily, spec: GridSpec,
                 method: str = "analytic") -> CocycleValue:
    """The disk pairing (1/8 pi^2) integral of tr(f^-1 df ^ dg g^-1)."""
    value = _c(f, g, spec, method)
    half = _c(f, g, spec.scaled(0.5), method)
    return CocycleValue(value, abs(value - half), (spec.nr, spec.ntheta))


def delta_C(f: MapFamily, g: MapFamily, k: MapFamily, spec: GridSpec,
            method: str = "analytic") -> CocycleValue:
    """Group coboundary C(g,k) - C(fg,k) + C(f,gk) - C(f,g)."""

    def at(s: GridSpec) -> float:
        return (
            _c(g, k, s, method)
            - _c(product(f, g), k, s, method)
            + _c(f, product(g, k), s, method)
            - _c(f, g, s, method)
        )

    value = at(spec)
    half = at(spec.scaled(0.5))
    return CocycleValue(value, abs(value - half), (spec.nr, spec.ntheta))


def maurer_cartan_defect(f: MapFamily, g: MapFamily, spec: GridSpec) -> float:
    """Max violation of the left-log derivative product rule on the grid.

    The left logarithmic derivative of fg equals that of g plus the
    g-conjugate of that of f; the defect should be at roundoff level for
    any family built from the grammar.
    """
    _require_disk(f, g)
    r, theta, _ = disk_nodes(spec)
    coords = {"r": r, "theta": theta}
    qf, df = f.sample(coords)
    qg, dg = g.sample(coords)
    qh, dh = product(f, g).sample(coords)
    worst = 0.0
    for name in ("r", "theta"):
        lhs = qmul(qconj(qh), dh[name])
        inner = qmul(qconj(qf), df[name])
        rhs = qmul(qconj(qg), dg[name]) + qmul(qmul(qconj(qg), inner), qg)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def _require_relative(K: MapFamily) -> None:
    defect = relative_defect(K)
    if defect > RELATIVE_TOLERANCE:
        raise RelativeError(
            f"cylinder map is off the identity by {defect:.3e} on the "
            "bottom or outer wall"
        )


def _lambda_value(K: MapFamily, spec: GridSpec) -> float:
    r, theta, t, w = cylinder_nodes(spec)
    q, dq = K.sample({"r": r, "theta": theta, "t": t})
    a_r = _left_vec(q, dq["r"])
    a_th = _left_vec(q, dq["theta"])
    a_t = _left_vec(q, dq["t"])
    det = _dot(a_r, np.cross(a_th, a_t))
    return integrate(det, spec.cylinder_shape, w) / (2.0 * np.pi**2)


def wzw_Lambda(K: MapFamily, spec: GridSpec, validate: bool = True) -> CocycleValue:
    """The winding functional on relative cylinder maps.

    Reduces to the topological degree on maps that are constant near the
    top, so its value on the built-in winding generator is a unit.
    """
    if K.domain != "cylinder":
        raise ValueError("the winding functional takes cylinder maps")
    if validate:
        _require_relative(K)
    value = _lambda_value(K, spec)
    half = _lambda_value(K, spec.scaled(0.5))
    return CocycleValue(value, abs(value - half), (spec.nr, spec.ntheta, spec.nt))


def _ladder(spec: GridSpec) -> tuple[GridSpec, GridSpec, GridSpec]:
    return (spec.scaled(0.25), spec.scaled(0.5), spec)


def _ladder_report(values_by_grid, specs, cylinder: bool) -> dict:
    nids = [nearest_int_distance(v) for v in values_by_grid]
    shape = (lambda s: s.cylinder_shape) if cylinder else (lambda s: s.disk_shape)
    return {
        "value": values_by_grid[-1],
        "nearest_int_distance": nids[-1],
        "per_grid": list(zip([shape(s) for s in specs], values_by_grid, nids)),
        "grids": [shape(s) for s in specs],
        "observed_order": observed_order(nids, [s.nr for s in specs]),
    }


def coboundary_relation_check(K_g: MapFamily, K_h: MapFamily, spec: GridSpec) -> dict:
    """Check that the winding functional's coboundary cancels C mod 1.

    Evaluates L(K_g) - L(K_g K_h) + L(K_h) + C(g, h) on a three-grid
    ladder, where g and h are the top slices; the combination must
    approach an integer at the quadrature rate.
    """
    _require_relative(K_g)
    _require_relative(K_h)
    g, h = top_slice(K_g), top_slice(K_h)
    both = product(K_g, K_h)
    specs = _ladder(spec)
    values = [
        _lambda_value(K_g, s)
        - _lambda_value(both, s)
        + _lambda_value(K_h, s)
        + _c_analytic(g, h, s)
        for s in specs
    ]
    return _ladder_report(values, specs, cylinder=True)


def eq1_check(g: MapFamily, K_h: MapFamily, spec: GridSpec) -> dict:
    """Check the mixed identity tying C to the winding functional.

    Conjugating a relative cylinder map by a lifted disk map shifts the
    winding functional by two pairing values: with h the top slice of K_h
    and g any disk map, L(g^-1 K_h g) - L(K_h) equals
    C(g^-1 h, g) + C(g^-1, h) up to an integer in the limit.  Both signs
    on the right are fixed by the orientation baked into the pairing; the
    residual decays at second order on smooth inputs.
    """
    _require_disk(g)
    _require_relative(K_h)
    h = top_slice(K_h)
    K_conj = conjugate(K_h, g)
    _require_relative(K_conj)
    g_inv = inverse(g)
    lead = product(g_inv, h)
    specs = _ladder(spec)
    values = [
        _lambda_value(K_conj, s)
        - _lambda_value(K_h, s)
        - _c_analytic(lead, g, s)
        - _c_analytic(g_inv, h, s)
        for s in specs
    ]
    return _ladder_report(values, specs, cylinder=True)


def conjugation_invariance_check(f: MapFamily, g: MapFamily, k: MapFamily,
                                 spec: GridSpec) -> dict:
    """C applied to a simultaneous constant conjugation of both maps.

    The two-form under the integral is invariant when both arguments are
    conjugated by one constant element, so the residual sits at roundoff
    level on any grid.
    """
    _require_disk(f, g, k)
    probe_r = np.array([0.2, 0.5, 0.9])
    probe_th = np.array([0.3, 2.0, 4.4])
    qk, _ = k.sample({"r": probe_r, "theta": probe_th})
    qk = np.broadcast_to(qk, (3, 4))
    if float(np.max(np.abs(qk - qk[0]))) > 1e-12:
        raise ValueError("conjugation invariance needs a constant conjugator")
    base = _c_analytic(f, g, spec)
    moved = _c_analytic(conjugate(f, k), conjugate(g, k), spec)
    return {
        "value": base,
        "conjugated": moved,
        "residual": abs(base - moved),
        "grid": spec.disk_shape,
    }


def kac_moody_product(a: CentralElement, b: CentralElement,
                      spec: GridSpec) -> CentralElement:
    """[f, x][g, y] = [fg, x + y + C(f, g)], phases taken mod 1."""
    value = _c_analytic(a.family, b.family, spec)
    return CentralElement(product(a.family, b.family),
                          _mod1(a.phase + b.phase + value))


def change_representative(a: CentralElement, K_h: MapFamily,
                          spec: GridSpec) -> CentralElement:
    """Slide a along the equivalence (f, x) ~ (fh, x + C(f,h) + L(K_h))."""
    _require_relative(K_h)
    h = top_slice(K_h)
    shift = _c_analytic(a.family, h, spec) + _lambda_value(K_h, spec)
    return CentralElement(product(a.family, h), _mod1(a.phase + shift))


def representative_audit(a: CentralElement, b: CentralElement, K_h: MapFamily,
                         spec: GridSpec, tol: float = 1e-6) -> dict:
    """Well-definedness of the product under a representative change.

    Multiplies a by b twice, once after sliding a across K_h, then
    slides the second product back across the conjugated inverse so both
    answers name the same underlying map. The phase gap is bounded by
    the residuals of the two integral identities it rests on, measured
    on the same grid, plus half-grid error estimates for each integral
    entering the phase arithmetic, plus roundoff.
    """
    p1 = kac_moody_product(a, b, spec)
    a_moved = change_representative(a, K_h, spec)
    p2 = kac_moody_product(a_moved, b, spec)
    K_back = conjugate(inverse(K_h), b.family)
    p2_back = change_representative(p2, K_back, spec)
    defect = nearest_int_distance(p2_back.phase - p1.phase)

    g = b.family
    h = top_slice(K_h)
    g_inv = inverse(g)
    mixed_res = nearest_int_distance(
        _lambda_value(conjugate(K_h, g), spec)
        - _lambda_value(K_h, spec)
        - _c_analytic(product(g_inv, h), g, spec)
        - _c_analytic(g_inv, h, spec)
    )
    pair = product(K_h, K_back)
    cob_res = nearest_int_distance(
        _lambda_value(K_h, spec)
        - _lambda_value(pair, spec)
        + _lambda_value(K_back, spec)
        + _c_analytic(h, top_slice(K_back), spec)
    )
    back_slice = top_slice(K_back)
    budget = sum(term.error for term in (
        mickelsson_C(a.family, g, spec),
        mickelsson_C(a.family, h, spec),
        mickelsson_C(product(a.family, h), g, spec),
        mickelsson_C(product(a.family, h, g), back_slice, spec),
        wzw_Lambda(K_h, spec),
        wzw_Lambda(K_back, spec),
    ))
    threshold = mixed_res + cob_res + budget + tol
    return {
        "defect": defect,
        "threshold": threshold,
        "mixed_identity_residual": mixed_res,
        "coboundary_residual": cob_res,
        "quadrature_budget": budget,
        "ok": defect <= threshold,
        "grid": spec.cylinder_shape,
    }


def _algebra_partials(X, spec: GridSpec):
    r, theta, w = disk_nodes(spec)
    s = X.sample(r, theta)
    shape = spec.disk_shape
    return s, shape, w


def lie_cocycle(X, Y, spec: GridSpec) -> dict:
    """The bilinear pairing (1/4 pi^2) integral of tr(dX ^ dY).

    Returns the disk quadrature, the boundary-circle form of the same
    number, and their gap (a Stokes consistency measure).
    """
    sx, shape, w = _algebra_partials(X, spec)
    sy, _, _ = _algebra_partials(Y, spec)
    cells = _dot(sx["dr"], sy["dtheta"]) - _dot(sx["dtheta"], sy["dr"])
    disk = (-2.0 / (4.0 * np.pi**2)) * integrate(cells, shape, w)

    ncirc = spec.ntheta
    theta = (2.0 * np.pi / ncirc) * np.arange(ncirc, dtype=np.float64)
    bx = X.sample(np.float64(1.0), theta)
    by = Y.sample(np.float64(1.0), theta)
    ring = _dot(bx["val"], by["dtheta"])
    boundary = (-2.0 / (4.0 * np.pi**2)) * (2.0 * np.pi / ncirc) * float(
        tree_sum(np.broadcast_to(ring, (ncirc,)))
    )
    return {
        "disk": disk,
        "boundary": boundary,
        "stokes_gap": abs(disk - boundary),
        "grid": shape,
    }


def infinitesimal_limit_check(X, Y, spec: GridSpec, eps: float = 0.1) -> dict:
    """Second mixed difference of C along one-parameter subgroups.

    The antisymmetrized mixed difference quotient of
    (s, t) -> C(exp(sX), exp(tY)) converges at rate eps^2 to the
    bilinear pairing up to a global orientation sign; the halving ratio
    of the error certifies the rate. The fields must have components
    along at least two algebra axes each, or the cubic Taylor terms of
    the integrand collapse and the eps^2 error coefficient degenerates,
    leaving the ratio meaningless.
    """
    if not 0.0 < eps <= 0.1:
        raise ValueError("step must sit in (0, 0.1]")

    def pair_value(A, B, s, t):
        return _c_analytic(exp_map(A, "disk", s), exp_map(B, "disk", t), spec)

    def mixed(A, B, e):
        return (
            pair_value(A, B, e, e)
            - pair_value(A, B, e, -e)
            - pair_value(A, B, -e, e)
            + pair_value(A, B, -e, -e)
        ) / (4.0 * e * e)

    def antisym(e):
        return mixed(X, Y, e) - mixed(Y, X, e)

    target = lie_cocycle(X, Y, spec)["disk"]
    coarse, fine = antisym(eps), antisym(eps / 2.0)
    sign = 1.0 if abs(fine - target) <= abs(fine + target) else -1.0
    err_coarse = coarse - sign * target
    err_fine = fine - sign * target
    ratio = err_coarse / err_fine if err_fine != 0.0 else float("nan")
    return {
        "value": fine,
        "target": target,
        "sign": sign,
        "residual": abs(err_fine),
        "halving_ratio": ratio,
        "grid": spec.disk_shape,
    }
