"""Fully second-order systems and their directional pencils.

A system is given by constant N x N blocks ``coeffs[a, b]`` multiplying
``d_a d_b phi`` together with a foliation covector ``n``.  For a unit spatial
direction ``khat`` the time-time block ``A``, the mixed block ``B`` and the
space-space block ``C`` give the monic quadratic pencil

    S(lam) = lam^2 1 + lam A^-1 B + A^-1 C

and its companion linearisation ``M(lam) = lam 1 + m0``.  Perturbations are
taken proportional to ``exp(lam t + k.x)``, i.e. the covector fed to the
principal part is ``l = lam n + k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotFullySecondOrder, SingularGauge
from .matcore import DEFAULT_TOL, Tolerances, as_matrix, det_poly, numerical_rank

CONVENTION_NOTE = (
    "Modes are proportional to exp(lam*t + k.x); the principal part is evaluated "
    "on l = lam*n + k with k purely spatial. Eigenvalues lam solve det S(lam) = 0 "
    "for S(lam) = lam^2 + lam*A^-1 B + A^-1 C."
)


def _unit_spatial(khat, spatial_dim: int) -> np.ndarray:
    k = np.atleast_1d(np.asarray(khat, dtype=float))
    if k.shape != (spatial_dim,):
        raise ValueError(f"khat must have {spatial_dim} components, got shape {k.shape}")
    norm = np.linalg.norm(k)
    if not np.isfinite(norm) or abs(norm - 1.0) > 1e-10:
        raise ValueError(f"khat must be a Euclidean unit vector, |khat| = {norm!r}")
    return k


@dataclass(frozen=True, eq=False)
class SecondOrderSystem:
    """Constant-coefficient principal part of a fully second-order system.

    ``coeffs`` has shape ``(d, d, N, N)``; it is symmetrised over the first
    two indices on construction because only the symmetric part multiplies
    ``d_a d_b``.  ``n`` defaults to ``(1, 0, ..., 0)``.
    """

    coeffs: np.ndarray
    n: np.ndarray | None = None
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 4 or c.shape[0] != c.shape[1] or c.shape[2] != c.shape[3]:
            raise ValueError(f"coeffs must have shape (d, d, N, N), got {c.shape}")
        if c.shape[0] < 2 or c.shape[2] < 1:
            raise ValueError("need d >= 2 and N >= 1")
        if not np.all(np.isfinite(c)):
            raise ValueError("coeffs contain non-finite entries")
        c = 0.5 * (c + c.transpose(1, 0, 2, 3))
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

        d = c.shape[0]
        if self.n is None:
            n = np.zeros(d)
            n[0] = 1.0
        else:
            n = np.array(self.n, dtype=float).ravel()
        if n.shape != (d,) or not np.all(np.isfinite(n)) or not np.any(n):
            raise ValueError(f"n must be a nonzero finite {d}-covector")
        n.setflags(write=False)
        object.__setattr__(self, "n", n)

        a = self.contract(n, n)
        if numerical_rank(a, self.tol) < self.N:
            raise NotFullySecondOrder(
                "time-time block coeffs[a,b] n_a n_b is numerically singular")

    @property
    def d(self) -> int:
        return self.coeffs.shape[0]

    @property
    def N(self) -> int:
        return self.coeffs.shape[2]

    @property
    def spatial_dim(self) -> int:
        return self.d - 1

    def contract(self, u, w) -> np.ndarray:
        """``coeffs[a, b] u_a w_b`` for (possibly complex) covectors."""
        return np.einsum("abij,a,b->ij", self.coeffs, np.asarray(u), np.asarray(w))

    def symbol(self, l) -> np.ndarray:
        return self.contract(l, l)

    def spatial_covector(self, khat) -> np.ndarray:
        k = np.zeros(self.d)
        k[1:] = _unit_spatial(khat, self.spatial_dim)
        return k

    def scaled(self, factor: float) -> "SecondOrderSystem":
        return SecondOrderSystem(self.coeffs * factor, self.n, self.tol)


@dataclass(frozen=True, eq=False)
class QuadraticPencil:
    """Monic pencil ``S(lam) = lam^2 1 + lam bt + ct`` for one direction."""

    bt: np.ndarray
    ct: np.ndarray
    khat: np.ndarray | None = None

    def __post_init__(self):
        bt = as_matrix(self.bt, square=True)
        ct = as_matrix(self.ct, square=True)
        if bt.shape != ct.shape:
            raise ValueError("bt and ct must have the same shape")
        object.__setattr__(self, "bt", bt)
        object.__setattr__(self, "ct", ct)
        if self.khat is not None:
            object.__setattr__(self, "khat", np.asarray(self.khat, dtype=float).ravel())

    @property
    def N(self) -> int:
        return self.bt.shape[0]

    def __call__(self, lam) -> np.ndarray:
        return lam * lam * np.eye(self.N) + lam * self.bt + self.ct

    def scale_at(self, lam) -> float:
        """Reference magnitude of the three terms of ``S(lam)``, at least 1
        (like every other scale here, so values below ``tol`` count as zero)."""
        a = abs(lam)
        return max(1.0, a * a + a * np.linalg.norm(self.bt, 2) + np.linalg.norm(self.ct, 2))

    @property
    def scale(self) -> float:
        return max(1.0, np.linalg.norm(self.bt, 2), np.linalg.norm(self.ct, 2))


@dataclass(frozen=True, eq=False)
class CompanionPencil:
    """First-order pencil ``M(lam) = lam 1 + m0`` with
    ``m0 = [[0, -1], [ct, bt]]``."""

    m0: np.ndarray

    def __post_init__(self):
        m0 = as_matrix(self.m0, square=True)
        if m0.shape[0] % 2:
            raise ValueError("companion matrix must have even size")
        n = m0.shape[0] // 2
        if np.any(m0[:n, :n] != 0) or np.any(m0[:n, n:] != -np.eye(n)):
            raise ValueError("companion matrix must have top blocks [0, -1]")
        object.__setattr__(self, "m0", m0)

    @property
    def N(self) -> int:
        return self.m0.shape[0] // 2

    def __call__(self, lam) -> np.ndarray:
        return lam * np.eye(2 * self.N) + self.m0


def decompose(system: SecondOrderSystem, khat) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Blocks ``A, B, C`` with ``coeffs(l, l) = lam^2 A + lam B + C`` at ``l = lam n + k``."""
    k = system.spatial_covector(khat)
    n = system.n
    a = system.contract(n, n)
    # k has no time component, so the first index only runs over space.
    b = 2.0 * system.contract(k, n)
    c = system.contract(k, k)
    if numerical_rank(a, system.tol) < system.N:
        raise NotFullySecondOrder("time-time block is numerically singular")
    return a, b, c


def build_quadratic(system: SecondOrderSystem, khat) -> QuadraticPencil:
    a, b, c = decompose(system, khat)
    bt = np.linalg.solve(a, b)
    ct = np.linalg.solve(a, c)
    return QuadraticPencil(bt, ct, np.atleast_1d(np.asarray(khat, dtype=float)))


def build_companion(p: QuadraticPencil) -> CompanionPencil:
    n = p.N
    m0 = np.zeros((2 * n, 2 * n))
    m0[:n, n:] = -np.eye(n)
    m0[n:, :n] = p.ct
    m0[n:, n:] = p.bt
    return CompanionPencil(m0)


def _contract_spatial(mats, khat, order: int) -> np.ndarray:
    m = np.asarray(mats, dtype=float)
    k = np.asarray(khat, dtype=float).ravel()
    for _ in range(order):
        m = np.tensordot(k, m, axes=(0, 0))
    return m


def build_from_ft2s(a1, a2, b1, b2, khat, tol: Tolerances = DEFAULT_TOL) -> QuadraticPencil:
    """Pencil of the first-order-in-time, second-order-in-space system

        dt v = A1^i d_i v + A2 w,    dt w = B1^ij d_i d_j v + B2^i d_i w.

    ``a1`` and ``b2`` have shape ``(d-1, N, N)``, ``b1`` has shape
    ``(d-1, d-1, N, N)``.
    """
    a2 = as_matrix(a2, square=True)
    if numerical_rank(a2, tol) < a2.shape[0]:
        raise SingularGauge("A2 is numerically singular")
    a1k = _contract_spatial(a1, khat, 1)
    b2k = _contract_spatial(b2, khat, 1)
    b1kk = _contract_spatial(b1, khat, 2)
    conj = a2 @ b2k @ np.linalg.inv(a2)
    bt = -(a1k + conj)
    ct = conj @ a1k - a2 @ b1kk
    return QuadraticPencil(bt, ct, np.atleast_1d(np.asarray(khat, dtype=float)))


def ft2s_companion(a1, a2, b1, b2, khat):
    """First-order pencil of the same system, as ``lam -> M(lam)``."""
    a2 = as_matrix(a2, square=True)
    a1k = _contract_spatial(a1, khat, 1)
    b2k = _contract_spatial(b2, khat, 1)
    b1kk = _contract_spatial(b1, khat, 2)
    n = a2.shape[0]
    eye = np.eye(n)

    def evaluate(lam):
        return np.block([[lam * eye - a1k, -a2], [-b1kk, lam * eye - b2k]])

    return evaluate


def det_identity_residual(p: QuadraticPencil, tol: Tolerances = DEFAULT_TOL) -> float:
    """Max coefficient difference between ``det M(lam)`` and ``det S(lam)``.

    Meaningful against ``residual_tol * (1 + max |coefficient|)``.
    """
    comp = build_companion(p)
    deg = 2 * p.N
    pm = det_poly(comp, deg, tol)
    ps = det_poly(p, deg, tol)
    return float(np.max(np.abs(pm.coef - ps.coef)))
