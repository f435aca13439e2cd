"""Closed-form eigendecompositions of ``U(u)`` and ``C(u)``.

Eigenvalues of ``U`` are ``mu_t * omega**p`` where ``mu_t`` is the principal
``d``-th root of the cycle product of orbit ``t`` and ``omega = exp(2 pi i/d)``.
Eigenvectors are written down orbit by orbit, never solved for, so a full
decomposition costs O(m) storage and each column O(m) to generate.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import circulant, genperm, shift
from .circulant import CirculantSpec
from .genperm import GenPermMatrix
from .shift import DomainError

log = logging.getLogger(__name__)

S2_AGREEMENT_TOL = 1e-10


class WrongCaseError(DomainError):
    """The requested formula does not apply to this ``(m, s)``."""


class CaseTag(str, enum.Enum):
    S_EQUALS_1 = "S_EQUALS_1"
    COPRIME = "COPRIME"
    DIVISOR = "DIVISOR"
    GENERAL_ORBIT = "GENERAL_ORBIT"
    DEGENERATE_ZERO_WEIGHT = "DEGENERATE_ZERO_WEIGHT"


@dataclass(frozen=True)
class EigenPair:
    eigenvalue: complex
    eigenvector: np.ndarray
    t: int
    p: int


@dataclass(frozen=True)
class BaseEigenvector:
    """Eigenvector of ``U`` for the principal root, anchored so the last entry is 1."""

    entries: np.ndarray
    eigenvalue: complex
    anchor_index: int
    corrected: bool = False


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Paired eigenvalues and lazily generated eigenvectors.

    ``eigenvalues[i]`` belongs to column ``i`` of :attr:`vectors`; labels
    ``orbit_index``/``phase_index`` give the ``(t, p)`` of each pair (phase
    ``-1`` marks a zero-weight null vector). ``spectrum`` is the full
    algebraic multiset of length ``m``, which differs from ``eigenvalues``
    only on the zero-weight path where the matrix is defective.
    """

    case: CaseTag
    m: int
    omega: complex
    eigenvalues: np.ndarray
    orbit_index: np.ndarray
    phase_index: np.ndarray
    spectrum: np.ndarray
    columns: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    notes: tuple[str, ...] = ()

    def __len__(self):
        return self.eigenvalues.size

    @property
    def is_complete(self) -> bool:
        return self.eigenvalues.size == self.m

    @property
    def vectors(self) -> np.ndarray:
        return self.columns(np.arange(len(self)))

    def vector(self, i: int) -> np.ndarray:
        return self.columns(np.array([i]))[:, 0]

    @property
    def pairs(self) -> list[EigenPair]:
        vecs = self.vectors
        return [
            EigenPair(complex(self.eigenvalues[i]), vecs[:, i], int(self.orbit_index[i]), int(self.phase_index[i]))
            for i in range(len(self))
        ]

    def with_eigenvalues(self, values, spectrum=None, case=None, notes=()) -> "SpectralDecomposition":
        values = np.asarray(values, dtype=complex)
        return SpectralDecomposition(
            case or self.case,
            self.m,
            self.omega,
            values,
            self.orbit_index,
            self.phase_index,
            values if spectrum is None else np.asarray(spectrum, dtype=complex),
            self.columns,
            self.notes + tuple(notes),
        )


def principal_root(z, n: int):
    """The ``n``-th root with argument in ``(-pi/n, pi/n]``."""
    z = np.asarray(z, dtype=complex)
    arg = np.angle(z)
    arg = np.where(arg <= -np.pi, np.pi, arg)
    return np.abs(z) ** (1.0 / n) * np.exp(1j * arg / n)


def unit_roots(n: int) -> np.ndarray:
    """``exp(2 pi i j / n)`` for ``j = 0..n-1``; index with exponents mod n."""
    return np.exp(2j * np.pi * np.arange(n) / n)


def _branch_array(branch, g: int) -> np.ndarray:
    if branch is None:
        return np.zeros(g, dtype=int)
    b = np.broadcast_to(np.asarray(branch, dtype=int), (g,))
    return b.copy()


def orbit_roots(U: GenPermMatrix, branch=None) -> np.ndarray:
    """``mu_t`` per orbit; ``branch[t] = j`` swaps in ``mu_t * omega**j``."""
    d = U.perm.d
    mu = principal_root(genperm.orbit_cycle_products(U), d)
    b = _branch_array(branch, U.perm.g)
    return mu * unit_roots(d)[b % d]


def _require_nonzero(U: GenPermMatrix):
    if U.has_zero_weight:
        raise DomainError("closed-form eigenvectors need every weight nonzero; use decompose()")


def _u_labels(U: GenPermMatrix):
    g, d = U.perm.g, U.perm.d
    t = np.repeat(np.arange(g), d)
    p = np.tile(np.arange(d), g)
    return t, p


def u_eigenvalues(U: GenPermMatrix, branch=None) -> list[tuple[int, int, complex]]:
    _require_nonzero(U)
    t, p, lam = _u_spectrum(U, branch)
    return [(int(a), int(b), complex(c)) for a, b, c in zip(t, p, lam)]


def _u_spectrum(U: GenPermMatrix, branch=None):
    t, p = _u_labels(U)
    mu = orbit_roots(U, branch)
    lam = mu[t] * unit_roots(U.perm.d)[p]
    return t, p, lam


def c_eigenvalues(spec: CirculantSpec, branch=None) -> list[tuple[int, int, complex]]:
    _require_nonzero(spec.base)
    t, p, lam = _u_spectrum(spec.base, branch)
    vals = circulant.evaluate(spec, lam, orbit=t)
    return [(int(a), int(b), complex(c)) for a, b, c in zip(t, p, vals)]


# -- single orbit: s = 1 and gcd(s, m) = 1 ------------------------------------


def base_eigenvector_coprime(U: GenPermMatrix, branch: int = 0) -> BaseEigenvector:
    """Solve ``U T = lam T`` around the single cycle from the anchor ``T[m-1] = 1``.

    Row ``i`` reads ``u_i T[i+s] = lam T[i]``, so walking forward from the
    anchor each step multiplies by ``lam / u_i``.
    """
    if U.perm.g != 1:
        raise WrongCaseError(f"gcd(m, s) = {U.perm.g}, need 1")
    _require_nonzero(U)
    m = U.m
    lam = complex(orbit_roots(U, branch)[0])
    walk = (m - 1 + U.s * np.arange(m)) % m
    ratios = lam / U.u[walk[:-1]]
    entries = np.empty(m, dtype=complex)
    entries[walk[0]] = 1.0
    entries[walk[1:]] = np.cumprod(ratios)
    return BaseEigenvector(entries, lam, m - 1)


def s2_closed_form(U: GenPermMatrix) -> BaseEigenvector:
    """Explicit entries of the anchored eigenvector for ``s = 2``, ``m`` odd.

    Written 1-based as in the classical statement, with ``u_0 = 1`` and empty
    products equal to 1::

        t_{2l}   = lam^l / (u_{2(l-1)} * u_2 u_4 ... u_{2(l-2)} * u_m)
        t_{2l+1} = lam^((m+2l+1)/2)
                   / (u_1 u_3 ... u_{2l-1} * u_2 u_4 ... u_{m-5} * u_{m-3} u_{m-1} u_m)
    """
    m = U.m
    if U.s != 2 or m % 2 == 0:
        raise WrongCaseError(f"closed form needs s = 2 and m odd, got m={m}, s={U.s}")
    _require_nonzero(U)
    lam = complex(principal_root(U.prod_u, m))

    def w(i):  # 1-based weight, u_0 = 1
        return 1.0 if i == 0 else U.u[i - 1]

    def prod(indices):
        out = 1.0 + 0j
        for i in indices:
            out *= w(i)
        return out

    t = np.empty(m + 1, dtype=complex)
    t[m] = 1.0
    for l in range(1, (m - 1) // 2 + 1):
        t[2 * l] = lam**l / (w(2 * (l - 1)) * prod(range(2, 2 * (l - 2) + 1, 2)) * w(m))
    tail = prod(range(2, m - 5 + 1, 2)) * w(m - 3) * w(m - 1) * w(m)
    for l in range(0, (m - 3) // 2 + 1):
        t[2 * l + 1] = lam ** ((m + 2 * l + 1) // 2) / (prod(range(1, 2 * l, 2)) * tail)
    return BaseEigenvector(t[1:], lam, m - 1)


def _validated_s2(U: GenPermMatrix) -> tuple[BaseEigenvector, str | None]:
    recursive = base_eigenvector_coprime(U)
    closed = s2_closed_form(U)
    err = np.max(np.abs(closed.entries - recursive.entries)) / max(np.max(np.abs(recursive.entries)), 1e-300)
    if not np.isfinite(err) or err > S2_AGREEMENT_TOL:
        note = f"s=2 closed form disagreed with recursive solve (rel. err {err:.3e}); using recursive result"
        log.warning(note)
        return BaseEigenvector(recursive.entries, recursive.eigenvalue, recursive.anchor_index, corrected=True), note
    return closed, None


def _single_cycle(U: GenPermMatrix, base: BaseEigenvector, case: CaseTag, notes=()) -> SpectralDecomposition:
    """Columns ``base[i] * omega^((i+1) j)``; column ``j`` has eigenvalue ``lam omega^(js)``.

    Returned in ``(t, p)`` order, so pair ``p`` uses column ``j = p / s mod m``.
    """
    m, s = U.m, U.s
    roots = unit_roots(m)
    p = np.arange(m)
    s_inv = pow(s, -1, m) if m > 1 else 0
    cols = (p * s_inv) % m
    x = base.entries
    exps = np.arange(1, m + 1)

    def columns(sel):
        j = cols[np.asarray(sel)]
        return x[:, None] * roots[(exps[:, None] * j[None, :]) % m]

    lam = base.eigenvalue * roots[p]
    return SpectralDecomposition(
        case, m, complex(roots[1 % m]), lam, np.zeros(m, dtype=int), p, lam, columns, tuple(notes)
    )


def eigenvectors_s1(U: GenPermMatrix, branch: int = 0) -> SpectralDecomposition:
    if U.s != 1 % U.m:
        raise WrongCaseError(f"need s = 1, got s = {U.s}")
    return _single_cycle(U, base_eigenvector_coprime(U, branch), CaseTag.S_EQUALS_1)


def eigenvectors_coprime(U: GenPermMatrix, branch: int = 0, use_s2_formula: bool = True) -> SpectralDecomposition:
    if U.perm.g != 1:
        raise WrongCaseError(f"gcd(m, s) = {U.perm.g}, need 1")
    notes = []
    if use_s2_formula and U.s == 2 and U.m % 2 == 1 and branch == 0:
        base, note = _validated_s2(U)
        if note:
            notes.append(note)
    else:
        base = base_eigenvector_coprime(U, branch)
    return _single_cycle(U, base, CaseTag.COPRIME, notes)


# -- several orbits ------------------------------------------------------------


def _orbit_tables(U: GenPermMatrix, branch=None):
    """Orbit index table and ``mu_t^j / a_j(t)`` along each orbit."""
    orb = shift.orbit_indices(U.perm)
    mu = orbit_roots(U, branch)
    g, d = orb.shape
    scale = np.ones((g, d), dtype=complex)
    if d > 1:
        scale[:, 1:] = np.cumprod(mu[:, None] / U.u[orb[:, :-1]], axis=1)
    return orb, mu, scale


def _orbit_decomposition(U: GenPermMatrix, case: CaseTag, extra_phase: bool, branch=None) -> SpectralDecomposition:
    _require_nonzero(U)
    m, d = U.m, U.perm.d
    orb, mu, scale = _orbit_tables(U, branch)
    t, p = _u_labels(U)
    roots = unit_roots(d)
    j = np.arange(d)

    def columns(sel):
        sel = np.asarray(sel)
        out = np.zeros((m, sel.size), dtype=complex)
        for c, i in enumerate(sel):
            ti, pi = t[i], p[i]
            shift_exp = j + 1 if extra_phase else j
            out[orb[ti], c] = scale[ti] * roots[(shift_exp * pi) % d]
        return out

    lam = mu[t] * roots[p]
    return SpectralDecomposition(case, m, complex(roots[1 % d]), lam, t, p, lam, columns)


def eigenvectors_divisor(U: GenPermMatrix, branch=None) -> SpectralDecomposition:
    """Block layout for ``s | m``: column ``(t, l)`` has ``omega^((p+1) l) mu_t^p / a_p(t)``
    at index ``t + p s``."""
    if U.s == 0 or U.m % U.s:
        raise WrongCaseError(f"s = {U.s} does not divide m = {U.m}")
    return _orbit_decomposition(U, CaseTag.DIVISOR, extra_phase=True, branch=branch)


def eigenvectors_general_orbit(U: GenPermMatrix, branch=None) -> SpectralDecomposition:
    """Any ``s``: column ``(t, p)`` has ``(mu_t omega^p)^j / a_j(t)`` at the j-th orbit member."""
    return _orbit_decomposition(U, CaseTag.GENERAL_ORBIT, extra_phase=False, branch=branch)


# -- dispatch ------------------------------------------------------------------

POLICIES = ("auto", "s1", "coprime", "divisor", "general")


def u_decompose(U: GenPermMatrix, policy: str = "auto", branch=None) -> SpectralDecomposition:
    """Eigendecomposition of ``U`` itself for nonzero weights."""
    _require_nonzero(U)
    if policy == "auto":
        if U.s == 1 % U.m and U.m > 1:
            policy = "s1"
        elif U.perm.g == 1:
            policy = "coprime"
        elif U.s and U.m % U.s == 0:
            policy = "divisor"
        else:
            policy = "general"
    b0 = int(_branch_array(branch, U.perm.g)[0])
    if policy == "s1":
        return eigenvectors_s1(U, b0)
    if policy == "coprime":
        return eigenvectors_coprime(U, b0)
    if policy == "divisor":
        return eigenvectors_divisor(U, branch)
    if policy == "general":
        return eigenvectors_general_orbit(U, branch)
    raise DomainError(f"unknown policy {policy!r}; choose from {POLICIES}")


def decompose(spec: CirculantSpec, policy: str = "auto", branch=None) -> SpectralDecomposition:
    """Eigenpairs of ``C(u)``: the eigenvectors of ``U`` with the coefficient
    polynomial applied to the paired eigenvalues."""
    U = spec.base
    if U.has_zero_weight:
        return _degenerate(spec, branch)
    dec = u_decompose(U, policy, branch)
    vals = circulant.evaluate(spec, dec.eigenvalues, orbit=dec.orbit_index)
    return dec.with_eigenvalues(vals)


def _degenerate(spec: CirculantSpec, branch=None) -> SpectralDecomposition:
    """Zero weights: every orbit containing a zero is a nilpotent block of ``U``.

    On such an orbit ``C`` has the single eigenvalue ``c_0`` (multiplicity d).
    Writing ``C - c_0 I = U^r0 (c_r0 + c_{r0+1} U + ...)`` with ``r0`` the first
    nonzero coefficient past ``c_0``, the second factor is invertible there, so
    the null vectors are the ``e_j`` killed by ``U^r0``. For ``r0 = 1`` that is
    ``e_{i+s}`` for every zero weight ``u_i``. Orbits without zeros keep their
    closed-form pairs.
    """
    U = spec.base
    m, g, d = U.m, U.perm.g, U.perm.d
    c0 = complex(spec.coeffs[0])
    orb = shift.orbit_indices(U.perm)
    dead = np.any(U.u[orb] == 0, axis=1)
    nz = np.flatnonzero(spec.coeffs[1:] != 0)
    r0 = int(nz[0]) + 1 if nz.size else None

    roots = unit_roots(d)
    mu_full = np.zeros(g, dtype=complex)
    scale = np.ones((g, d), dtype=complex)
    live = ~dead
    if live.any():
        a = np.prod(U.u[orb[live]], axis=1)
        mu = principal_root(a, d) * roots[_branch_array(branch, g)[live] % d]
        mu_full[live] = mu
        if d > 1:
            scale[live, 1:] = np.cumprod(mu[:, None] / U.u[orb[live][:, :-1]], axis=1)

    t_lab, p_lab, vals, spectrum = [], [], [], []
    specs = []  # (kind, payload) per column
    for t in range(g):
        if dead[t]:
            spectrum.extend([c0] * d)
            for j in orb[t]:
                if r0 is None or genperm.walk_product(U, (j - r0 * U.s) % m, r0) == 0:
                    t_lab.append(t)
                    p_lab.append(-1)
                    vals.append(c0)
                    specs.append(("e", int(j)))
        else:
            lam = mu_full[t] * roots
            ev = circulant.evaluate(spec, lam, orbit=np.full(d, t))
            spectrum.extend(ev)
            for p in range(d):
                t_lab.append(t)
                p_lab.append(p)
                vals.append(ev[p])
                specs.append(("o", (t, p)))

    jj = np.arange(d)

    def columns(sel):
        sel = np.asarray(sel)
        out = np.zeros((m, sel.size), dtype=complex)
        for c, i in enumerate(sel):
            kind, payload = specs[i]
            if kind == "e":
                out[payload, c] = 1.0
            else:
                t, p = payload
                out[orb[t], c] = scale[t] * roots[(jj * p) % d]
        return out

    note = (
        f"zero weights at {np.flatnonzero(U.u == 0).tolist()}; eigenvalue c0 on "
        f"{int(dead.sum())} of {g} orbit(s), geometric basis of size {sum(1 for k, _ in specs if k == 'e')}"
    )
    return SpectralDecomposition(
        CaseTag.DEGENERATE_ZERO_WEIGHT,
        m,
        complex(roots[1 % d]),
        np.asarray(vals, dtype=complex),
        np.asarray(t_lab, dtype=int),
        np.asarray(p_lab, dtype=int),
        np.asarray(spectrum, dtype=complex),
        columns,
        (note,),
    )
