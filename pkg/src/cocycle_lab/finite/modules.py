"""Coefficient modules: Z/m with a group acting by ring units.

Every unit-action assignment is validated as a homomorphism into (Z/m)^*
on construction.  The trivial action is the default and is what the bundled
examples use; the machinery still carries the general case.
"""

from __future__ import annotations

import math

import numpy as np

from cocycle_lab.finite.groups import FiniteGroup


class ModuleError(ValueError):
    pass


class CyclicModule:
    """Z/m as a right module over a finite group, acting by units.

    `units[g]` multiplies a coefficient when g acts: a.g = a * units[g].
    Unit multiplication commutes, so the same table serves left and right
    conventions; the cochain layer fixes where the action is applied.
    """

    def __init__(self, modulus: int, group: FiniteGroup, units=None):
        if modulus < 1:
            raise ModuleError("modulus must be positive")
        self.m = int(modulus)
        self.group = group
        if units is None:
            units = np.ones(group.n, dtype=np.int64)
        units = np.asarray(units, dtype=np.int64) % self.m
        if units.shape != (group.n,):
            raise ModuleError("one unit per group element required")
        for g in range(group.n):
            if math.gcd(int(units[g]), self.m) != 1:
                raise ModuleError(
                    f"action of {group.labels[g]} is {int(units[g])}, not a unit mod {self.m}"
                )
        if units[group.identity] % self.m != 1 % self.m:
            raise ModuleError("identity must act as 1")
        for g in range(group.n):
            for h in range(group.n):
                if (units[g] * units[h]) % self.m != units[group.mul[g, h]] % self.m:
                    raise ModuleError(
                        f"action is not a homomorphism at ({group.labels[g]}, {group.labels[h]})"
                    )
        self.units = units
        self.key = (self.m, group.key, units.tobytes())

    @property
    def is_trivial(self) -> bool:
        return bool((self.units % self.m == 1 % self.m).all())

    def act(self, a: int, g: int) -> int:
        return int((a * self.units[g]) % self.m)

    def unit(self, g: int) -> int:
        return int(self.units[g])

    def invariant_generator(self, subset) -> int:
        """Smallest d with {a : a.n == a for n in subset} == d*(Z/m).

        Any subgroup of Z/m is the ideal of multiples of a divisor, so the
        fixed points of a set of unit multiplications take this shape.
        """
        d = 1
        for g in subset:
            u = int(self.units[g])
            # a*(u-1) == 0 mod m holds exactly for multiples of m/gcd(u-1, m)
            step = self.m // math.gcd(u - 1, self.m)
            d = d * step // math.gcd(d, step)
        if self.m % d:
            raise ModuleError("invariant generator must divide the modulus")
        return d

    def restrict(self, subgroup: FiniteGroup, embed) -> "CyclicModule":
        """The same coefficients as a module over an embedded subgroup."""
        units = self.units[np.asarray(embed, dtype=np.int64)]
        return CyclicModule(self.m, subgroup, units)

    def __repr__(self):
        kind = "trivial" if self.is_trivial else "unit-action"
        return f"CyclicModule(Z/{self.m}, {kind})"
