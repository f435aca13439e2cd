"""Generalized permutation matrices ``U(u) = D_u P_s`` stored in O(m)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import shift
from .shift import DomainError, ShiftPermutation


@dataclass(frozen=True, eq=False)
class GenPermMatrix:
    """Row ``i`` holds the single entry ``u[i]`` in column ``(i + s) mod m``."""

    perm: ShiftPermutation
    u: np.ndarray
    prod_u: complex = field(init=False)

    def __post_init__(self):
        u = np.array(self.u, dtype=complex).ravel()
        if u.shape[0] != self.perm.m:
            raise DomainError(f"expected {self.perm.m} weights, got {u.shape[0]}")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "prod_u", complex(np.prod(u)))

    @classmethod
    def build(cls, m: int, s: int, u) -> "GenPermMatrix":
        return cls(ShiftPermutation(m, s), u)

    @property
    def m(self) -> int:
        return self.perm.m

    @property
    def s(self) -> int:
        return self.perm.s

    @property
    def has_zero_weight(self) -> bool:
        return bool(np.any(self.u == 0))

    def __matmul__(self, x):
        return matvec(self, x)

    def __repr__(self):
        return f"GenPermMatrix(m={self.m}, s={self.s}, u={self.u!r})"


@dataclass(frozen=True)
class PowerWeights:
    r: int
    v: np.ndarray


@dataclass(frozen=True)
class OrbitProduct:
    t: int
    j: int
    value: complex


@dataclass(frozen=True, eq=False)
class MatrixPower:
    """``U^k = diag(factor) @ reduced``.

    ``factor`` is constant on every orbit of the shift, so it commutes with
    ``U``. When ``gcd(m, s) == 1`` there is a single orbit and ``factor`` is
    the scalar ``prod_u ** q``, see :attr:`scalar_factor`.
    """

    k: int
    q: int
    factor: np.ndarray
    reduced: GenPermMatrix
    weights: PowerWeights

    @property
    def scalar_factor(self) -> complex | None:
        f = self.factor
        if f.size and np.all(f == f[0]):
            return complex(f[0])
        return None

    def to_dense(self) -> np.ndarray:
        return self.factor[:, None] * to_dense(self.reduced)


def matvec(U: GenPermMatrix, x) -> np.ndarray:
    x = np.asarray(x)
    if x.shape[0] != U.m:
        raise DomainError(f"vector length {x.shape[0]} does not match m={U.m}")
    idx = U.perm.as_array()
    if x.ndim == 1:
        return U.u * x[idx]
    return U.u[:, None] * x[idx]


def to_dense(U: GenPermMatrix) -> np.ndarray:
    m = U.m
    out = np.zeros((m, m), dtype=complex)
    out[np.arange(m), U.perm.as_array()] = U.u
    return out


def to_sparse(U: GenPermMatrix):
    import scipy.sparse as sp

    m = U.m
    return sp.csr_matrix((U.u, (np.arange(m), U.perm.as_array())), shape=(m, m))


def power_weights(U: GenPermMatrix, r: int) -> PowerWeights:
    """Entrywise product ``v_r[i] = u[i] u[i+s] ... u[i+(r-1)s]``."""
    if r < 0:
        raise DomainError("exponent must be nonnegative")
    v = np.ones(U.m, dtype=complex)
    idx = np.arange(U.m)
    for _ in range(r):
        v *= U.u[idx]
        idx = (idx + U.s) % U.m
    return PowerWeights(r, v)


def orbit_cycle_products(U: GenPermMatrix) -> np.ndarray:
    """Full-cycle products ``a_d(t)`` for the ``g`` orbit representatives."""
    return np.prod(U.u[shift.orbit_indices(U.perm)], axis=1)


def power(U: GenPermMatrix, k: int) -> MatrixPower:
    """Closed-form power of ``U``.

    Writes ``k = q*d + r`` with ``d`` the order of the shift. ``U^d`` is the
    diagonal of orbit products, so ``U^k = diag(a_d(orbit)^q) U^r`` with
    ``U^r = D_{v_r} P_{rs}``. For a single orbit ``d == m`` and the factor is
    ``prod_u ** q``.
    """
    if k < 0:
        raise DomainError("exponent must be nonnegative")
    d = U.perm.d
    q, r = divmod(int(k), d)
    per_orbit = orbit_cycle_products(U) ** q
    factor = per_orbit[np.arange(U.m) % U.perm.g]
    weights = power_weights(U, r)
    reduced = GenPermMatrix(shift.power(U.perm, r), weights.v)
    return MatrixPower(int(k), q, factor, reduced, weights)


def orbit_product(U: GenPermMatrix, t: int, j: int) -> OrbitProduct:
    if not 0 <= t < U.perm.g:
        raise DomainError(f"{t} is not an orbit representative (g={U.perm.g})")
    if not 1 <= j <= U.perm.d:
        raise DomainError(f"length {j} outside [1, {U.perm.d}]")
    idx = (t + U.s * np.arange(j)) % U.m
    return OrbitProduct(t, j, complex(np.prod(U.u[idx])))


def walk_product(U: GenPermMatrix, start: int, j: int) -> complex:
    """Product of ``j`` weights met walking the shift from any index ``start``."""
    idx = (start + U.s * np.arange(j)) % U.m
    return complex(np.prod(U.u[idx]))
