"""Unit-quaternion model of SU(2) and its Lie algebra.

Quaternions are numpy arrays with the last axis of length 4, scalar
component first. Pure quaternions (3-component arrays) stand for the
traceless anti-Hermitian matrices; the identification sends the basis
vector e_a to -i sigma_a, so the matrix trace pairing of two algebra
elements is tr(XY) = -2 (x . y) on components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ANTIPODE_TOLERANCE = 1e-6
UNIT_NORM_TOLERANCE = 1e-12

IDENTITY = np.array([1.0, 0.0, 0.0, 0.0])


class AntipodeError(ValueError):
    """Raised when a logarithm is requested too close to -identity."""


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product, broadcasting over leading axes."""
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def qconj(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=np.float64, copy=True)
    out[..., 1:] = -out[..., 1:]
    return out


def qnorm(a: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(a * a, axis=-1))


def qnormalize(a: np.ndarray) -> np.ndarray:
    return a / qnorm(a)[..., None]


def qexp(v: np.ndarray) -> np.ndarray:
    """Exponential of a pure quaternion (3-component array)."""
    v = np.asarray(v, dtype=np.float64)
    phi = np.sqrt(np.sum(v * v, axis=-1))
    # np.sinc(x) = sin(pi x)/(pi x), so sinc(phi/pi) = sin(phi)/phi at phi = 0 too
    s = np.sinc(phi / np.pi)
    return np.concatenate([np.cos(phi)[..., None], s[..., None] * v], axis=-1)


def qlog(q: np.ndarray) -> np.ndarray:
    """Vector part of the principal logarithm of a unit quaternion.

    Returns a 3-vector v with qexp(v) equal to the input. The branch
    cut sits at the antipode -1; inputs within ANTIPODE_TOLERANCE of it
    are rejected rather than silently wrapped.
    """
    q = np.asarray(q, dtype=np.float64)
    w = q[..., 0]
    vec = q[..., 1:]
    t = np.sqrt(np.sum(vec * vec, axis=-1))
    dist2 = (w + 1.0) ** 2 + t * t
    if np.any(dist2 < ANTIPODE_TOLERANCE**2):
        raise AntipodeError("logarithm requested within 1e-6 of the antipode -1")
    phi = np.arctan2(t, w)
    factor = np.where(t > 1e-300, phi / np.maximum(t, 1e-300), 1.0)
    return factor[..., None] * vec


def to_matrix(q: np.ndarray) -> np.ndarray:
    """Complex 2x2 image of a quaternion under e_a -> -i sigma_a."""
    q = np.asarray(q, dtype=np.float64)
    w, x, y, z = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    m = np.empty(q.shape[:-1] + (2, 2), dtype=np.complex128)
    m[..., 0, 0] = w - 1j * z
    m[..., 0, 1] = -y - 1j * x
    m[..., 1, 0] = y - 1j * x
    m[..., 1, 1] = w + 1j * z
    return m


def trace_pair(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """tr(XY) for pure quaternions: -2 (x . y)."""
    return -2.0 * np.sum(np.asarray(x) * np.asarray(y), axis=-1)


def triple_product_trace(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """tr([A,B]C) for pure quaternions: -4 det(a, b, c)."""
    cross = np.cross(b, c)
    return -4.0 * np.sum(np.asarray(a) * cross, axis=-1)


@dataclass(frozen=True)
class SU2Element:
    """A single group element, validated to unit norm.

    The matrix image is unitary with determinant one; both facts follow
    from the norm constraint and are re-checked in tests rather than on
    every construction.
    """

    w: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        n = self.w**2 + self.x**2 + self.y**2 + self.z**2
        if abs(n - 1.0) > UNIT_NORM_TOLERANCE:
            raise ValueError(f"quaternion norm {np.sqrt(n)} is not 1")

    @property
    def array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def matrix(self) -> np.ndarray:
        return to_matrix(self.array)


@dataclass(frozen=True)
class AlgebraElement:
    """A single Lie algebra element (pure quaternion)."""

    x: float
    y: float
    z: float

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def matrix(self) -> np.ndarray:
        return to_matrix(np.array([0.0, self.x, self.y, self.z]))

    def exp(self) -> SU2Element:
        q = qexp(self.array)
        return SU2Element(*(float(c) for c in q))
