"""Brute-force certification of eigendecompositions.

Nothing in here knows the closed formulas: the inputs are a matrix (dense or
scipy sparse) and candidate eigenpairs, and the checks are residuals,
Gaussian elimination and traces of dense powers.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import circulant
from .circulant import CirculantSpec
from .shift import DomainError
from .spectral import CaseTag, SpectralDecomposition


@dataclass(frozen=True)
class Tolerances:
    residual: float = 1e-9
    rank_floor: float = 1e-10
    offdiag: float = 1e-10
    trace: float = 1e-8


@dataclass
class VerificationReport:
    max_relative_residual: float
    rank_verdict: bool
    diagonalization_offdiag_norm: float | None
    trace_deltas: tuple[float, float, float]
    passed: bool
    tolerances_used: Tolerances
    case: str = ""
    geometric_multiplicity: int | None = None
    dense_nullity: int | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["trace_deltas"] = list(self.trace_deltas)
        return out


# -- Gaussian elimination ------------------------------------------------------


def lu_partial_pivot(A):
    """Row-pivoted elimination ``P A = L U`` on a copy of ``A``.

    Returns the packed LU array, the row permutation and the pivot moduli.
    Zero columns are skipped rather than divided by, so singular input is
    fine and the pivot list reports the deficiency.
    """
    A = np.array(A, dtype=complex)
    n, ncol = A.shape
    perm = np.arange(n)
    pivots = np.zeros(min(n, ncol))
    for k in range(min(n, ncol)):
        mu = k + int(np.argmax(np.abs(A[k:, k])))
        if mu != k:
            A[[k, mu]] = A[[mu, k]]
            perm[[k, mu]] = perm[[mu, k]]
        piv = A[k, k]
        pivots[k] = abs(piv)
        if piv == 0:
            continue
        A[k + 1 :, k] /= piv
        A[k + 1 :, k + 1 :] -= np.outer(A[k + 1 :, k], A[k, k + 1 :])
    return A, perm, pivots


def rank(A, floor: float = 1e-10) -> int:
    """Pivots above ``floor * ||A||_F``, with full (row and column) pivoting."""
    A = np.array(A, dtype=complex)
    scale = np.linalg.norm(A)
    if scale == 0:
        return 0
    n, ncol = A.shape
    r = 0
    for k in range(min(n, ncol)):
        sub = np.abs(A[k:, k:])
        i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        if sub[i, j] <= floor * scale:
            break
        i += k
        j += k
        A[[k, i]] = A[[i, k]]
        A[:, [k, j]] = A[:, [j, k]]
        A[k + 1 :, k] /= A[k, k]
        A[k + 1 :, k + 1 :] -= np.outer(A[k + 1 :, k], A[k, k + 1 :])
        r += 1
    return r


def is_full_rank(A, floor: float = 1e-10) -> bool:
    """Every partial-pivoting pivot exceeds ``floor * ||A||_F``."""
    A = np.asarray(A)
    if A.shape[0] != A.shape[1]:
        return False
    _, _, pivots = lu_partial_pivot(A)
    return bool(np.all(pivots > floor * np.linalg.norm(A)))


def solve(A, B, floor: float = 1e-10):
    """Solve ``A X = B`` by partial pivoting; raises if a pivot falls under the floor."""
    A = np.asarray(A)
    B = np.asarray(B, dtype=complex)
    lu, perm, pivots = lu_partial_pivot(A)
    if np.any(pivots <= floor * np.linalg.norm(A)):
        raise np.linalg.LinAlgError("matrix is numerically singular")
    n = lu.shape[0]
    vec = B.ndim == 1
    X = B[perm].reshape(n, -1).copy()
    for k in range(n):
        X[k + 1 :] -= np.outer(lu[k + 1 :, k], X[k])
    for k in range(n - 1, -1, -1):
        X[k] /= lu[k, k]
        X[:k] -= np.outer(lu[:k, k], X[k])
    return X[:, 0] if vec else X


# -- checks --------------------------------------------------------------------


def _fro(M) -> float:
    if hasattr(M, "toarray") and not isinstance(M, np.ndarray):
        return float(np.sqrt(np.sum(np.abs(M.data) ** 2)))
    return float(np.linalg.norm(M))


def relative_residuals(M, values, vectors) -> np.ndarray:
    """``||M v - lam v|| / (||M||_F ||v||)`` per column."""
    values = np.asarray(values)
    vectors = np.asarray(vectors)
    if vectors.ndim == 1:
        vectors = vectors[:, None]
        values = values.reshape(1)
    if M.shape[1] != vectors.shape[0] or M.shape[0] != M.shape[1]:
        raise DomainError(f"matrix {M.shape} and vectors {vectors.shape} do not conform")
    if values.size != vectors.shape[1]:
        raise DomainError("one eigenvalue per vector")
    norm_m = _fro(M)
    r = np.linalg.norm(M @ vectors - vectors * values[None, :], axis=0)
    scale = np.linalg.norm(vectors, axis=0) * (norm_m if norm_m > 0 else 1.0)
    return r / scale


def residual_check(M, decomp: SpectralDecomposition, tol: float = 1e-9, indices=None):
    """Largest relative residual over the pairs (or the selected ``indices``)."""
    sel = np.arange(len(decomp)) if indices is None else np.asarray(indices)
    if M.shape[0] != decomp.m:
        raise DomainError(f"matrix order {M.shape[0]} != decomposition size {decomp.m}")
    if sel.size == 0:
        return 0.0, True
    res = relative_residuals(M, decomp.eigenvalues[sel], decomp.columns(sel))
    worst = float(np.max(res))
    return worst, bool(worst <= tol)


def diagonalization_check(M, T, floor: float = 1e-10) -> float | None:
    """``||offdiag(T^-1 M T)||_F / ||M||_F``; None when ``T`` is numerically singular."""
    M = np.asarray(M)
    T = np.asarray(T)
    if T.shape != M.shape:
        raise DomainError(f"T {T.shape} and M {M.shape} differ in shape")
    try:
        X = solve(T, M @ T, floor)
    except np.linalg.LinAlgError:
        return None
    off = X - np.diag(np.diag(X))
    norm_m = np.linalg.norm(M)
    return float(np.linalg.norm(off) / (norm_m if norm_m > 0 else 1.0))


def trace_identity_check(spec: CirculantSpec, decomp: SpectralDecomposition, dense=None):
    """``|sum lam^p - tr(C^p)| / max(1, |tr(C^p)|)`` for p = 1, 2, 3."""
    if decomp.spectrum.size != spec.m:
        raise DomainError("decomposition does not cover m eigenvalues")
    C = circulant.to_dense(spec) if dense is None else dense
    lam = decomp.spectrum
    out = []
    Cp = np.eye(spec.m, dtype=complex)
    for p in (1, 2, 3):
        Cp = Cp @ C
        tr = np.trace(Cp)
        out.append(float(abs(np.sum(lam**p) - tr) / max(1.0, abs(tr))))
    return tuple(out)


def multiset_equal(a, b, tol: float = 1e-10) -> bool:
    """Match every element of ``a`` to a distinct element of ``b`` within ``tol``."""
    a = list(np.asarray(a, dtype=complex))
    b = list(np.asarray(b, dtype=complex))
    if len(a) != len(b):
        return False
    for x in a:
        dist = [abs(x - y) for y in b]
        k = int(np.argmin(dist))
        if dist[k] > tol * max(1.0, abs(x)):
            return False
        b.pop(k)
    return True


def collinearity(a, b) -> float:
    """Distance of ``b`` from the line through ``a``, relative to ``||b||``."""
    a = np.asarray(a)
    b = np.asarray(b)
    coef = np.vdot(a, b) / np.vdot(a, a)
    return float(np.linalg.norm(b - coef * a) / np.linalg.norm(b))


def verify(spec: CirculantSpec, decomp: SpectralDecomposition, tol: Tolerances | None = None) -> VerificationReport:
    tol = tol or Tolerances()
    C = circulant.to_dense(spec)
    res, _ = residual_check(C, decomp, tol.residual)
    T = decomp.vectors
    notes = list(decomp.notes)
    trace = trace_identity_check(spec, decomp, dense=C)
    geo = nullity = None
    offdiag = None
    if decomp.is_complete:
        rank_ok = is_full_rank(T, tol.rank_floor)
        if rank_ok:
            offdiag = diagonalization_check(C, T, tol.rank_floor)
        diag_ok = offdiag is not None and offdiag <= tol.offdiag
    else:
        # defective: the returned vectors must be independent and span the
        # whole eigenspace of c0
        geo = T.shape[1]
        rank_ok = rank(T, tol.rank_floor) == geo if geo else True
        c0 = complex(spec.coeffs[0])
        nullity = spec.m - rank(C - c0 * np.eye(spec.m), tol.rank_floor)
        n_c0 = int(np.sum(np.abs(decomp.eigenvalues - c0) <= tol.residual * max(1.0, abs(c0))))
        diag_ok = n_c0 == nullity
        if not diag_ok:
            notes.append(f"{n_c0} eigenvectors for c0 but dense nullity of C - c0 I is {nullity}")
    passed = bool(
        res <= tol.residual and rank_ok and diag_ok and all(x <= tol.trace for x in trace)
    )
    return VerificationReport(
        max_relative_residual=res,
        rank_verdict=bool(rank_ok),
        diagonalization_offdiag_norm=offdiag,
        trace_deltas=trace,
        passed=passed,
        tolerances_used=tol,
        case=decomp.case.value if isinstance(decomp.case, CaseTag) else str(decomp.case),
        geometric_multiplicity=geo,
        dense_nullity=nullity,
        notes=notes,
    )
