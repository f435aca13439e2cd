"""Cyclic shift permutations x -> (x + s) mod m and their orbits."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np


class DomainError(ValueError):
    """Raised when an argument lies outside an operation's domain."""


@dataclass(frozen=True)
class Orbit:
    representative: int
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class ShiftPermutation:
    """The permutation ``x -> (x + s) mod m``.

    ``s`` is reduced mod ``m`` on construction, so ``s == m`` and negative
    shifts are accepted and ``s == 0`` is the identity.
    """

    m: int
    s: int = 1

    def __post_init__(self):
        if int(self.m) < 1:
            raise DomainError(f"modulus must be positive, got {self.m}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "s", int(self.s) % self.m)

    @property
    def g(self) -> int:
        """Number of orbits, gcd(m, s) (equal to m when s == 0)."""
        return gcd(self.m, self.s)

    @property
    def d(self) -> int:
        """Order of the permutation, which is also the length of every orbit."""
        return self.m // self.g

    @property
    def is_identity(self) -> bool:
        return self.s == 0

    def __call__(self, x: int) -> int:
        return apply(self, x)

    def as_array(self) -> np.ndarray:
        """Image of every index, ``perm[i] = (i + s) mod m``."""
        return (np.arange(self.m) + self.s) % self.m


def apply(perm: ShiftPermutation, x: int) -> int:
    if not 0 <= x < perm.m:
        raise DomainError(f"index {x} outside [0, {perm.m})")
    return (x + perm.s) % perm.m


def power(perm: ShiftPermutation, k: int) -> ShiftPermutation:
    # k may be negative; Python's % already lands in [0, m)
    return ShiftPermutation(perm.m, (k * perm.s) % perm.m)


def order(perm: ShiftPermutation) -> int:
    return perm.d


def orbit_indices(perm: ShiftPermutation) -> np.ndarray:
    """``(g, d)`` array whose row ``t`` walks the orbit of ``t``.

    Entry ``[t, j]`` is ``(t + j*s) mod m``. Representatives ``0..g-1`` are the
    smallest members of their orbits because every member is congruent to
    ``t`` modulo ``g``.
    """
    g, d = perm.g, perm.d
    return (np.arange(g)[:, None] + perm.s * np.arange(d)[None, :]) % perm.m


def orbits(perm: ShiftPermutation) -> list[Orbit]:
    return [Orbit(int(row[0]), tuple(int(i) for i in row)) for row in orbit_indices(perm)]


def orbit_of(perm: ShiftPermutation, x: int) -> int:
    """Representative of the orbit containing ``x``."""
    if not 0 <= x < perm.m:
        raise DomainError(f"index {x} outside [0, {perm.m})")
    return x % perm.g
