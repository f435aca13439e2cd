"""Generalized circulant matrices ``C(u) = sum_r c_r U(u)^r``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from . import genperm
from .genperm import GenPermMatrix
from .shift import DomainError


@dataclass(frozen=True, eq=False)
class CirculantSpec:
    base: GenPermMatrix
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def build(cls, m: int, s: int, u, coeffs) -> "CirculantSpec":
        return cls(GenPermMatrix.build(m, s, u), coeffs)

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __matmul__(self, x):
        return matvec(self, x)


@dataclass(frozen=True, eq=False)
class FoldedSpec:
    """The same matrix written with exactly ``m`` coefficients."""

    base: GenPermMatrix
    coeffs: np.ndarray

    def as_spec(self) -> CirculantSpec:
        return CirculantSpec(self.base, self.coeffs)


def characteristic_polynomial(U: GenPermMatrix) -> np.ndarray:
    """Ascending coefficients of ``prod_t (x^d - a_d(t))``, the char. poly of ``U``."""
    d = U.perm.d
    in_y = P.polyfromroots(genperm.orbit_cycle_products(U))
    out = np.zeros(U.m + 1, dtype=complex)
    out[::d] = in_y
    return out


def fold(spec: CirculantSpec) -> FoldedSpec:
    """Reduce the coefficient list below degree ``m``.

    With a single orbit ``U^m = prod_u I`` and the reduction is
    ``c'_r = sum_j c_{jm+r} prod_u^j``. With several orbits ``U^m`` is only
    diagonal, so the list is reduced modulo the characteristic polynomial of
    ``U`` instead (Cayley-Hamilton); both agree when ``gcd(m, s) == 1``.
    """
    m = spec.m
    c = spec.coeffs
    if spec.base.perm.g == 1:
        return FoldedSpec(spec.base, _fold_scalar(c, m, spec.base.prod_u))
    if c.size <= m:
        out = np.zeros(m, dtype=complex)
        out[: c.size] = c
        return FoldedSpec(spec.base, out)
    _, rem = P.polydiv(c, characteristic_polynomial(spec.base))
    out = np.zeros(m, dtype=complex)
    out[: rem.size] = rem[:m]
    return FoldedSpec(spec.base, out)


def _fold_scalar(c: np.ndarray, period: int, factor) -> np.ndarray:
    q = -(-c.size // period)
    blocks = np.zeros(q * period, dtype=complex)
    blocks[: c.size] = c
    blocks = blocks.reshape(q, period)
    acc = blocks[-1].copy()
    for j in range(q - 2, -1, -1):
        acc = acc * factor + blocks[j]
    return acc


def orbit_coefficients(spec: CirculantSpec) -> np.ndarray:
    """Per-orbit coefficients ``D[r, t]`` with ``C = sum_{r<L} diag(D[r, orbit]) U^r``.

    Uses ``U^d = diag(a_d(orbit))``; ``L = min(k + 1, d)``. Shape ``(L, g)``,
    so memory stays O(m) even for a single long orbit.
    """
    d, g = spec.base.perm.d, spec.base.perm.g
    c = spec.coeffs
    if c.size <= d:
        return np.repeat(c[:, None], g, axis=1)
    cycles = genperm.orbit_cycle_products(spec.base)
    q = -(-c.size // d)
    blocks = np.zeros(q * d, dtype=complex)
    blocks[: c.size] = c
    blocks = blocks.reshape(q, d)
    acc = np.repeat(blocks[-1][:, None], g, axis=1)
    for j in range(q - 2, -1, -1):
        acc = acc * cycles[None, :] + blocks[j][:, None]
    return acc


def _expanded(spec: CirculantSpec):
    coef = orbit_coefficients(spec)
    orbit = np.arange(spec.m) % spec.base.perm.g
    return coef[:, orbit]


def to_dense(spec: CirculantSpec) -> np.ndarray:
    U = spec.base
    m = U.m
    coef = _expanded(spec)
    out = np.zeros((m, m), dtype=complex)
    rows = np.arange(m)
    v = np.ones(m, dtype=complex)
    idx = rows.copy()
    for r in range(coef.shape[0]):
        # shifts r*s are distinct for r < d, so each r fills fresh positions
        out[rows, idx] += coef[r] * v
        v = v * U.u[idx]
        idx = (idx + U.s) % m
    return out


def to_sparse(spec: CirculantSpec):
    import scipy.sparse as sp

    U = spec.base
    m = U.m
    coef = _expanded(spec)
    rows, cols, vals = [], [], []
    v = np.ones(m, dtype=complex)
    idx = np.arange(m)
    for r in range(coef.shape[0]):
        rows.append(np.arange(m))
        cols.append(idx)
        vals.append(coef[r] * v)
        v = v * U.u[idx]
        idx = (idx + U.s) % m
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(m, m)
    )


def frobenius_norm(spec: CirculantSpec) -> float:
    U = spec.base
    coef = _expanded(spec)
    total = 0.0
    v = np.ones(U.m, dtype=complex)
    idx = np.arange(U.m)
    for r in range(coef.shape[0]):
        total += float(np.sum(np.abs(coef[r] * v) ** 2))
        v = v * U.u[idx]
        idx = (idx + U.s) % U.m
    return float(np.sqrt(total))


def matvec(spec: CirculantSpec, x) -> np.ndarray:
    """Horner accumulation of sparse products, O(m * min(k+1, d)).

    The orbit-constant diagonal coefficients commute with ``U``, which is
    what lets them move through the nested products.
    """
    x = np.asarray(x, dtype=complex)
    if x.shape[0] != spec.m:
        raise DomainError(f"vector length {x.shape[0]} does not match m={spec.m}")
    coef = _expanded(spec)
    if x.ndim > 1:
        coef = coef[:, :, None]
    y = coef[-1] * x
    for r in range(coef.shape[0] - 2, -1, -1):
        y = genperm.matvec(spec.base, y) + coef[r] * x
    return y


def trace_power(spec: CirculantSpec, p: int) -> complex:
    if p not in (1, 2, 3):
        raise DomainError("trace_power supports p in {1, 2, 3}")
    return complex(np.trace(np.linalg.matrix_power(to_dense(spec), p)))


def evaluate(spec: CirculantSpec, z, orbit=None) -> np.ndarray:
    """Coefficient polynomial evaluated at points ``z``.

    When every point is an eigenvalue of ``U`` on a known orbit (so that
    ``z**d == a_d(orbit)``), pass ``orbit`` to evaluate the short folded form.
    """
    z = np.asarray(z, dtype=complex)
    if orbit is None or spec.coeffs.size <= spec.base.perm.d:
        c = spec.coeffs
        acc = np.full(z.shape, c[-1], dtype=complex)
        for coeff in c[-2::-1]:
            acc = acc * z + coeff
        return acc
    coef = orbit_coefficients(spec)[:, np.asarray(orbit)]
    acc = coef[-1].copy()
    for r in range(coef.shape[0] - 2, -1, -1):
        acc = acc * z + coef[r]
    return acc
