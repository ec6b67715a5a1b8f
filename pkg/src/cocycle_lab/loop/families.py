"""Closed-form families of SU(2)-valued maps with exact partials.

A family is a small expression tree over a fixed grammar: exponentials
of Fourier-polynomial scalar fields along algebra axes, pointwise
products, inverses, conjugations, disk-to-cylinder lifts, top slices,
height reparameterizations, and one built-in winding generator. Every
node reports its value together with analytic first partials in the
domain coordinates, so quadrature error is the only error anywhere in
the integrals downstream.

Domains and coordinates: "disk" uses (r, theta) on [0,1] x [0,2pi);
"cylinder" adds t on [0,1]. Cylinder maps meant to stand for maps of the
solid ball keep the whole bottom t = 0 and the whole outer wall r = 1 at
the identity; `relative_defect` measures how far a family is from that.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np

from cocycle_lab.loop.quat import qconj, qmul

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DISK_COORDS = ("r", "theta")
CYLINDER_COORDS = ("r", "theta", "t")


class DomainError(ValueError):
    """Raised when families live on incompatible domains."""


class RelativeError(ValueError):
    """Raised when a cylinder map violates the relative boundary rules."""


@dataclass(frozen=True)
class FieldAtom:
    """coef * r^r_pow * t^t_pow * cos(harmonic * theta + phase)."""

    coef: float
    r_pow: int = 0
    t_pow: int = 0
    harmonic: int = 0
    phase: float = 0.0


def _power(base: np.ndarray, p: int) -> np.ndarray:
    if p == 0:
        return np.ones_like(base)
    return base**p


@dataclass(frozen=True)
class ScalarField:
    """A finite sum of Fourier-polynomial atoms, with exact partials."""

    atoms: tuple[FieldAtom, ...]

    def sample(self, r, theta, t=None) -> dict[str, np.ndarray]:
        if t is None:
            if any(a.t_pow for a in self.atoms):
                raise DomainError("field uses the height coordinate on a disk domain")
            t = np.float64(1.0)
        r = np.asarray(r, dtype=np.float64)
        theta = np.asarray(theta, dtype=np.float64)
        t = np.asarray(t, dtype=np.float64)
        zero = np.zeros(np.broadcast_shapes(r.shape, theta.shape, t.shape))
        out = {"val": zero.copy(), "dr": zero.copy(), "dtheta": zero.copy(),
               "dt": zero.copy()}
        for a in self.atoms:
            rad = _power(r, a.r_pow)
            hgt = _power(t, a.t_pow)
            ang = np.cos(a.harmonic * theta + a.phase)
            out["val"] += a.coef * rad * hgt * ang
            if a.r_pow:
                out["dr"] += a.coef * a.r_pow * _power(r, a.r_pow - 1) * hgt * ang
            if a.t_pow:
                out["dt"] += a.coef * a.t_pow * rad * _power(t, a.t_pow - 1) * ang
            if a.harmonic:
                out["dtheta"] += (
                    -a.coef * a.harmonic * rad * hgt
                    * np.sin(a.harmonic * theta + a.phase)
                )
        return out


@dataclass(frozen=True)
class AlgebraField:
    """An algebra-valued field: a sum of fixed axes times scalar fields."""

    terms: tuple[tuple[tuple[float, float, float], ScalarField], ...]

    def sample(self, r, theta, t=None) -> dict[str, np.ndarray]:
        parts = {}
        for axis, field in self.terms:
            f = field.sample(r, theta, t)
            ax = np.asarray(axis, dtype=np.float64)
            for key in ("val", "dr", "dtheta", "dt"):
                piece = f[key][..., None] * ax
                parts[key] = piece if key not in parts else parts[key] + piece
        if not parts:
            raise ValueError("algebra field needs at least one term")
        return parts


class MapFamily:
    """Base node: a map into SU(2) with analytic first partials.

    sample(coords) returns (q, dq) where q has a trailing axis of length
    4 and dq maps each domain coordinate name to the partial of q.
    """

    domain: str

    def sample(self, coords: dict[str, np.ndarray]):
        raise NotImplementedError

    @property
    def coord_names(self) -> tuple[str, ...]:
        return CYLINDER_COORDS if self.domain == "cylinder" else DISK_COORDS


class _Constant(MapFamily):
    def __init__(self, domain: str, value):
        self.domain = domain
        q = np.asarray(value, dtype=np.float64)
        n = float(np.sqrt(np.sum(q * q)))
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"constant quaternion norm {n} is not 1")
        self._q = q

    def sample(self, coords):
        q = self._q
        zeros = np.zeros(4)
        return q, {name: zeros for name in self.coord_names}


def _sinc(phi):
    return np.sinc(phi / np.pi)


def _sinc_slope_over_phi(phi):
    # (cos(phi) phi - sin(phi)) / phi^3, even and analytic at 0
    small = phi < 1e-3
    safe = np.where(small, 1.0, phi)
    direct = (np.cos(safe) * safe - np.sin(safe)) / safe**3
    series = -1.0 / 3.0 + phi**2 / 30.0
    return np.where(small, series, direct)


class _Exp(MapFamily):
    def __init__(self, field: AlgebraField, domain: str, scale: float = 1.0):
        self.domain = domain
        self.field = field
        self.scale = float(scale)

    def sample(self, coords):
        t = coords.get("t") if self.domain == "cylinder" else None
        f = self.field.sample(coords["r"], coords["theta"], t)
        v = self.scale * f["val"]
        phi = np.sqrt(np.sum(v * v, axis=-1))
        s = _sinc(phi)
        g = _sinc_slope_over_phi(phi)
        q = np.concatenate([np.cos(phi)[..., None], s[..., None] * v], axis=-1)
        dq = {}
        for name in self.coord_names:
            dv = self.scale * f["d" + ("t" if name == "t" else name)]
            radial = np.sum(v * dv, axis=-1)
            dw = -s * radial
            dvec = g[..., None] * radial[..., None] * v + s[..., None] * dv
            dq[name] = np.concatenate([dw[..., None], dvec], axis=-1)
        return q, dq


class _Product(MapFamily):
    def __init__(self, a: MapFamily, b: MapFamily):
        if a.domain != b.domain:
            raise DomainError(f"cannot multiply a {a.domain} map by a {b.domain} map")
        self.domain = a.domain
        self.a, self.b = a, b

    def sample(self, coords):
        qa, da = self.a.sample(coords)
        qb, db = self.b.sample(coords)
        q = qmul(qa, qb)
        dq = {
            name: qmul(da[name], qb) + qmul(qa, db[name])
            for name in self.coord_names
        }
        return q, dq


class _Inverse(MapFamily):
    def __init__(self, a: MapFamily):
        self.domain = a.domain
        self.a = a

    def sample(self, coords):
        qa, da = self.a.sample(coords)
        qi = qconj(qa)
        dq = {
            name: -qmul(qmul(qi, da[name]), qi) for name in self.coord_names
        }
        return qi, dq


class _Lift(MapFamily):
    """A disk map read as a t-independent cylinder map."""

    def __init__(self, a: MapFamily):
        if a.domain != "disk":
            raise DomainError("only disk maps can be lifted to the cylinder")
        self.domain = "cylinder"
        self.a = a

    def sample(self, coords):
        q, da = self.a.sample({"r": coords["r"], "theta": coords["theta"]})
        dq = {"r": da["r"], "theta": da["theta"], "t": np.zeros(4)}
        return q, dq


class _TopSlice(MapFamily):
    """The t = 1 slice of a cylinder map, as a disk map."""

    def __init__(self, a: MapFamily):
        if a.domain != "cylinder":
            raise DomainError("top slices are read off cylinder maps")
        self.domain = "disk"
        self.a = a

    def sample(self, coords):
        full = {"r": coords["r"], "theta": coords["theta"], "t": np.float64(1.0)}
        q, da = self.a.sample(full)
        return q, {"r": da["r"], "theta": da["theta"]}


class _TReparam(MapFamily):
    """Precompose the height with the smoothstep t^2 (3 - 2t)."""

    def __init__(self, a: MapFamily):
        if a.domain != "cylinder":
            raise DomainError("height reparameterization needs a cylinder map")
        self.domain = "cylinder"
        self.a = a

    def sample(self, coords):
        t = np.asarray(coords["t"], dtype=np.float64)
        tau = t * t * (3.0 - 2.0 * t)
        dtau = 6.0 * t * (1.0 - t)
        q, da = self.a.sample({"r": coords["r"], "theta": coords["theta"], "t": tau})
        dq = {"r": da["r"], "theta": da["theta"], "t": da["t"] * dtau[..., None]}
        return q, dq


class _Suspension(MapFamily):
    """The built-in winding generator: a flat radial bump in the solid
    cylinder, equal to the identity outside a ball of radius `radius`
    around the interior point (r, t) = (0, 1/2).

    Inside the ball the map sweeps the angle pi * exp(1 - 1/(1 - s^2))
    along the outward direction, s being the scaled distance; the flat
    profile makes every derivative vanish at the ball's edge. Its degree
    is -1 when mirrored (`flip`), +1 otherwise, and both the bottom and
    the outer wall stay at the identity because the ball misses them.
    """

    def __init__(self, radius: float = 0.45, flip: bool = False):
        if not 0.0 < radius < 0.5:
            raise ValueError("suspension radius must sit inside (0, 0.5)")
        self.domain = "cylinder"
        self.radius = float(radius)
        self.flip = bool(flip)

    def sample(self, coords):
        r = np.asarray(coords["r"], dtype=np.float64)
        theta = np.asarray(coords["theta"], dtype=np.float64)
        t = np.asarray(coords["t"], dtype=np.float64)
        shape = np.broadcast_shapes(r.shape, theta.shape, t.shape)
        r, theta, t = (np.broadcast_to(a, shape) for a in (r, theta, t))

        height = t - 0.5
        d = np.sqrt(r * r + height * height)
        d = np.maximum(d, 1e-300)
        s2 = (d / self.radius) ** 2
        inside = s2 < 1.0
        s2c = np.minimum(s2, 1.0 - 1e-12)
        with np.errstate(under="ignore"):
            amp = np.pi * np.exp(1.0 - 1.0 / (1.0 - s2c))
            # dA/dd = A * (-2 s / (1-s^2)^2) / radius, with s = d/radius
            damp = amp * (-2.0 * np.sqrt(s2c) / (1.0 - s2c) ** 2) / self.radius
        amp = np.where(inside, amp, 0.0)
        damp = np.where(inside, damp, 0.0)

        cos_t, sin_t = np.cos(theta), np.sin(theta)
        p = np.stack([r * cos_t, r * sin_t, height], axis=-1)
        n_hat = p / d[..., None]
        dd = {
            "r": r / d,
            "theta": np.zeros(shape),
            "t": height / d,
        }
        dp = {
            "r": np.stack([cos_t, sin_t, np.zeros(shape)], axis=-1),
            "theta": np.stack([-r * sin_t, r * cos_t, np.zeros(shape)], axis=-1),
            "t": np.stack([np.zeros(shape), np.zeros(shape), np.ones(shape)], axis=-1),
        }

        sin_a, cos_a = np.sin(amp), np.cos(amp)
        q = np.concatenate([cos_a[..., None], sin_a[..., None] * n_hat], axis=-1)
        dq = {}
        for name in CYLINDER_COORDS:
            da = damp * dd[name]
            dn = dp[name] / d[..., None] - p * (dd[name] / (d * d))[..., None]
            dn = np.where(inside[..., None], dn, 0.0)
            dw = -sin_a * da
            dvec = cos_a[..., None] * da[..., None] * n_hat + sin_a[..., None] * dn
            dq[name] = np.concatenate([dw[..., None], dvec], axis=-1)
        if self.flip:
            q = q.copy()
            q[..., 1] = -q[..., 1]
            for name in CYLINDER_COORDS:
                dq[name] = dq[name].copy()
                dq[name][..., 1] = -dq[name][..., 1]
        return q, dq


def constant(domain: str, value=None) -> MapFamily:
    return _Constant(domain, [1.0, 0.0, 0.0, 0.0] if value is None else value)


def exp_map(field: AlgebraField, domain: str, scale: float = 1.0) -> MapFamily:
    return _Exp(field, domain, scale)


def product(a: MapFamily, b: MapFamily, *rest: MapFamily) -> MapFamily:
    out = _Product(a, b)
    for r in rest:
        out = _Product(out, r)
    return out


def inverse(a: MapFamily) -> MapFamily:
    return _Inverse(a)


def lift(a: MapFamily) -> MapFamily:
    return _Lift(a)


def top_slice(a: MapFamily) -> MapFamily:
    return _TopSlice(a)


def t_reparam(a: MapFamily) -> MapFamily:
    return _TReparam(a)


def conjugate(inner: MapFamily, by: MapFamily) -> MapFamily:
    """by^-1 * inner * by, lifting `by` when the inner map is a cylinder map."""
    if by.domain != "disk":
        raise DomainError("conjugation is by a disk map")
    outer = lift(by) if inner.domain == "cylinder" else by
    return product(inverse(outer), inner, outer)


def suspension_generator(radius: float = 0.45, flip: bool = False) -> MapFamily:
    return _Suspension(radius, flip)


def relative_defect(K: MapFamily, nr: int = 24, ntheta: int = 24, nt: int = 8) -> float:
    """Max distance from the identity on the bottom and the outer wall."""
    if K.domain != "cylinder":
        raise DomainError("relative boundary rules apply to cylinder maps")
    r = (np.arange(nr) + 0.5)[:, None] / nr
    theta = 2.0 * np.pi * np.arange(ntheta)[None, :] / ntheta
    ident = np.array([1.0, 0.0, 0.0, 0.0])
    bottom, _ = K.sample({"r": r, "theta": theta, "t": np.float64(0.0)})
    worst = float(np.max(np.abs(bottom - ident)))
    ts = (np.arange(nt) + 0.5)[None, :] / nt
    wall, _ = K.sample(
        {"r": np.float64(1.0), "theta": theta.reshape(-1, 1), "t": ts}
    )
    return max(worst, float(np.max(np.abs(wall - ident))))


def _atoms_from_dicts(entries) -> tuple[FieldAtom, ...]:
    atoms = []
    for e in entries:
        atoms.append(
            FieldAtom(
                coef=float(e["coef"]),
                r_pow=int(e.get("r_pow", 0)),
                t_pow=int(e.get("t_pow", 0)),
                harmonic=int(e.get("harmonic", 0)),
                phase=float(e.get("phase", 0.0)),
            )
        )
    return tuple(atoms)


def _bump_atoms(profile) -> tuple[FieldAtom, ...]:
    # multiply each profile atom by t (1 - r^2)^2 so the bottom and the
    # outer wall stay exactly at the identity
    atoms = []
    for e in profile:
        c = float(e["coef"])
        p = int(e.get("r_pow", 0))
        m = int(e.get("harmonic", 0))
        ph = float(e.get("phase", 0.0))
        for shift, factor in ((0, 1.0), (2, -2.0), (4, 1.0)):
            atoms.append(FieldAtom(c * factor, p + shift, 1, m, ph))
    return tuple(atoms)


def family_from_dict(desc: dict) -> MapFamily:
    """Build a family from its plain-data description (the TOML grammar)."""
    kind = desc.get("kind")
    if kind == "constant":
        return constant(desc["domain"], desc.get("value"))
    if kind == "torus":
        field = ScalarField(_atoms_from_dicts(desc["field"]))
        alg = AlgebraField(((tuple(float(v) for v in desc["axis"]), field),))
        return exp_map(alg, desc["domain"], float(desc.get("scale", 1.0)))
    if kind == "exp":
        terms = tuple(
            (
                tuple(float(v) for v in term["axis"]),
                ScalarField(_atoms_from_dicts(term["field"])),
            )
            for term in desc["terms"]
        )
        return exp_map(AlgebraField(terms), desc["domain"], float(desc.get("scale", 1.0)))
    if kind == "bump":
        if desc.get("domain", "cylinder") != "cylinder":
            raise DomainError("bump families live on the cylinder")
        field = ScalarField(_bump_atoms(desc["profile"]))
        alg = AlgebraField(((tuple(float(v) for v in desc["axis"]), field),))
        return exp_map(alg, "cylinder", float(desc.get("scale", 1.0)))
    if kind == "product":
        factors = [family_from_dict(f) for f in desc["factors"]]
        if len(factors) < 2:
            raise ValueError("product needs at least two factors")
        return product(factors[0], factors[1], *factors[2:])
    if kind == "inverse":
        return inverse(family_from_dict(desc["of"]))
    if kind == "conjugate":
        return conjugate(family_from_dict(desc["of"]), family_from_dict(desc["by"]))
    if kind == "lift":
        return lift(family_from_dict(desc["of"]))
    if kind == "top_slice":
        return top_slice(family_from_dict(desc["of"]))
    if kind == "t_reparam":
        return t_reparam(family_from_dict(desc["of"]))
    if kind == "suspension":
        return suspension_generator(
            float(desc.get("radius", 0.45)), bool(desc.get("flip", False))
        )
    raise ValueError(f"unknown family kind {kind!r}")


def load_family(path) -> MapFamily:
    with open(path, "rb") as fh:
        return family_from_dict(tomllib.load(fh))


HALF_PI = np.pi / 2.0


def builtin_families() -> dict[str, dict]:
    """Plain-data descriptions of the named families used by the checks."""
    return {
        "one-disk": {"kind": "constant", "domain": "disk"},
        "one-cylinder": {"kind": "constant", "domain": "cylinder"},
        # the commuting pair with the closed-form value: both wind along
        # the same axis, with fields 2 pi x and 2 y in Cartesian terms
        "torus-u": {
            "kind": "torus",
            "domain": "disk",
            "axis": [0.0, 0.0, 1.0],
            "field": [{"coef": 2.0 * np.pi, "r_pow": 1, "harmonic": 1, "phase": 0.0}],
        },
        "torus-v": {
            "kind": "torus",
            "domain": "disk",
            "axis": [0.0, 0.0, 1.0],
            "field": [{"coef": 2.0, "r_pow": 1, "harmonic": 1, "phase": -HALF_PI}],
        },
        "disk-f": {
            "kind": "torus",
            "domain": "disk",
            "axis": [1.0, 0.0, 0.0],
            "field": [
                {"coef": 1.1, "r_pow": 1, "harmonic": 1, "phase": 0.0},
                {"coef": 0.4, "r_pow": 2, "harmonic": 2, "phase": 0.7},
            ],
        },
        "disk-g": {
            "kind": "torus",
            "domain": "disk",
            "axis": [0.36, 0.8, 0.48],
            "field": [
                {"coef": 0.9, "r_pow": 1, "harmonic": 1, "phase": -1.2},
                {"coef": 0.3, "r_pow": 2},
                {"coef": 0.35, "r_pow": 3, "harmonic": 3, "phase": 0.3},
            ],
        },
        "disk-k": {
            "kind": "torus",
            "domain": "disk",
            "axis": [0.6, 0.0, 0.8],
            "field": [
                {"coef": 0.8, "r_pow": 1, "harmonic": 1, "phase": 2.1},
                {"coef": 0.3, "r_pow": 2, "harmonic": 2, "phase": -0.5},
            ],
        },
        "bump-g": {
            "kind": "bump",
            "domain": "cylinder",
            "axis": [1.0, 0.0, 0.0],
            "profile": [
                {"coef": 1.3, "r_pow": 1, "harmonic": 1, "phase": 0.0},
                {"coef": 0.5, "r_pow": 2, "harmonic": 2, "phase": -HALF_PI},
            ],
        },
        "bump-h": {
            "kind": "bump",
            "domain": "cylinder",
            "axis": [0.8, 0.6, 0.0],
            "profile": [
                {"coef": 1.1, "r_pow": 1, "harmonic": 1, "phase": -HALF_PI},
                {"coef": 0.45, "r_pow": 3, "harmonic": 3, "phase": 0.0},
            ],
        },
        "suspension": {"kind": "suspension", "domain": "cylinder"},
    }


def reference_algebra_pair() -> tuple[AlgebraField, AlgebraField]:
    """A frozen pair of algebra fields for the derivative-stencil study.

    Both fields mix two non-parallel axes, which keeps the quartic term
    of the stencil expansion generically nonzero. Single-axis fields
    make the pairing exactly bilinear in the step and defeat the
    error-ratio measurement.
    """
    x = AlgebraField((
        ((0.418221353900, -0.692678126793, -0.587612041915), ScalarField((
            FieldAtom(coef=0.057603909696, r_pow=1, harmonic=1,
                      phase=1.389618002026),
            FieldAtom(coef=-0.627368843803, r_pow=2, harmonic=0,
                      phase=2.707033983462)))),
        ((-0.089799846282, -0.422149949526, 0.902067296671), ScalarField((
            FieldAtom(coef=-0.336124966333, r_pow=3, harmonic=1,
                      phase=2.804740572368),
            FieldAtom(coef=-0.736161661886, r_pow=3, harmonic=3,
                      phase=1.536447393866)))),
    ))
    y = AlgebraField((
        ((0.297087931928, -0.604966601104, 0.738751766327), ScalarField((
            FieldAtom(coef=-0.481882977012, r_pow=5, harmonic=3,
                      phase=3.326356039142),
            FieldAtom(coef=-0.224985510042, r_pow=1, harmonic=1,
                      phase=5.724879035447)))),
        ((0.074346749279, -0.961321989592, 0.265202928338), ScalarField((
            FieldAtom(coef=-0.055445217946, r_pow=2, harmonic=2,
                      phase=1.066315072589),
            FieldAtom(coef=-0.687004826760, r_pow=2, harmonic=2,
                      phase=0.105452008759)))),
    ))
    return x, y


def random_algebra_field(rng: np.random.Generator, terms: int = 2) -> AlgebraField:
    """A smooth random algebra field: harmonics m with radial power m or m+2."""
    parts = []
    for _ in range(terms):
        axis = rng.normal(size=3)
        axis /= np.sqrt(np.sum(axis * axis))
        atoms = []
        for _ in range(2):
            m = int(rng.integers(0, 4))
            p = m + 2 * int(rng.integers(0, 2))
            atoms.append(
                FieldAtom(
                    coef=float(rng.uniform(-0.8, 0.8)),
                    r_pow=p,
                    harmonic=m,
                    phase=float(rng.uniform(0.0, 2.0 * np.pi)),
                )
            )
        parts.append((tuple(float(v) for v in axis), ScalarField(tuple(atoms))))
    return AlgebraField(tuple(parts))
