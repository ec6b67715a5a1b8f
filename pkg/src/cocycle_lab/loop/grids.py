"""Quadrature grids and the deterministic reduction.

Disk integrals use the midpoint rule radially and the periodic trapezoid
rule (equal weights) in the angle; cylinder integrals add a midpoint rule
in the height. Circle integrals for the diffeomorphism checks use
Gauss-Legendre nodes. All summation goes through a fixed-shape pairwise
tree, so a value never depends on how the work was split up.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

MIN_RESOLUTION = 8


@dataclass(frozen=True)
class GridSpec:
    """Resolutions for the three domains plus the quadrature rule tag."""

    nr: int = 64
    ntheta: int = 64
    nt: int = 16
    ncircle: int = 64
    rule: str = "midpoint-trapezoid-gauss"

    def __post_init__(self):
        for name in ("nr", "ntheta", "nt", "ncircle"):
            value = getattr(self, name)
            if int(value) != value or value < MIN_RESOLUTION:
                raise ValueError(
                    f"{name} = {value} is below the minimum resolution "
                    f"{MIN_RESOLUTION}"
                )

    def scaled(self, factor: float) -> "GridSpec":
        """A coarser or finer copy, clamped to the minimum resolution."""
        return replace(
            self,
            nr=max(MIN_RESOLUTION, round(self.nr * factor)),
            ntheta=max(MIN_RESOLUTION, round(self.ntheta * factor)),
            nt=max(MIN_RESOLUTION, round(self.nt * factor)),
            ncircle=max(MIN_RESOLUTION, round(self.ncircle * factor)),
        )

    @property
    def disk_shape(self) -> tuple[int, int]:
        return (self.nr, self.ntheta)

    @property
    def cylinder_shape(self) -> tuple[int, int, int]:
        return (self.nr, self.ntheta, self.nt)


def disk_nodes(spec: GridSpec):
    """Midpoint/trapezoid nodes on [0,1] x [0,2pi) plus the cell weight."""
    r = (np.arange(spec.nr) + 0.5)[:, None] / spec.nr
    theta = 2.0 * np.pi * np.arange(spec.ntheta)[None, :] / spec.ntheta
    weight = (1.0 / spec.nr) * (2.0 * np.pi / spec.ntheta)
    return r, theta, weight


def cylinder_nodes(spec: GridSpec):
    r = (np.arange(spec.nr) + 0.5)[:, None, None] / spec.nr
    theta = 2.0 * np.pi * np.arange(spec.ntheta)[None, :, None] / spec.ntheta
    t = (np.arange(spec.nt) + 0.5)[None, None, :] / spec.nt
    weight = (1.0 / spec.nr) * (2.0 * np.pi / spec.ntheta) * (1.0 / spec.nt)
    return r, theta, t, weight


def circle_gauss(n: int):
    """Gauss-Legendre nodes and weights transported to [0, 2pi]."""
    if n < MIN_RESOLUTION:
        raise ValueError(f"circle resolution {n} is below the minimum {MIN_RESOLUTION}")
    x, w = np.polynomial.legendre.leggauss(n)
    return np.pi * (x + 1.0), np.pi * w


def tree_sum(values: np.ndarray) -> float:
    """Pairwise-tree sum over a flattened array.

    The reduction shape depends only on the input size, never on worker
    count or chunking, which keeps repeated runs byte-identical.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        return 0.0
    size = 1
    while size < v.size:
        size *= 2
    if size != v.size:
        v = np.concatenate([v, np.zeros(size - v.size)])
    while v.size > 1:
        v = v[0::2] + v[1::2]
    return float(v[0])


def integrate(integrand: np.ndarray, shape: tuple[int, ...], weight: float) -> float:
    """Weighted tree sum after broadcasting to the full grid shape."""
    full = np.broadcast_to(np.asarray(integrand, dtype=np.float64), shape)
    return tree_sum(full) * weight
