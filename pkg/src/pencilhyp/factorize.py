"""Diagonalising transformation of the companion pencil and the product form
``S(lam) = (lam - A2)(lam - A1)``.

Notation: ``V1`` holds N eigenvectors of ``S`` (eigenvalues ``D1``), the
remaining N eigenvectors are ``V1 @ Q`` (eigenvalues ``D2``).  Then

    P = [[V1, V1 Q], [V1 D1, V1 Q D2]]

diagonalises ``M(lam)`` and, with ``V2 = V1 (D1 Q - Q D2)``,
``A1 = V1 D1 V1^-1`` and ``A2 = V2 D2 V2^-1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .eigenstruct import SpectralData, reality_check, spectrum
from .errors import (ComplexSpeeds, Defective, NoAdmissiblePartition, Singular, ZeroSpeed)
from .matcore import (DEFAULT_TOL, Tolerances, group_eigenvalues, inverse, kernel_basis,
                      numerical_rank, spectral_norm)
from .pencil import QuadraticPencil, build_companion

NORM_NAMES = ("v1", "q", "qd2_minus_d1q", "v1_inv", "qd2_minus_d1q_inv")

# Partition attempts beyond the first pivoted choice when N > 4.
MAX_PARTITIONS = 200


@dataclass(frozen=True, eq=False)
class PencilFactorization:
    v1: np.ndarray
    q: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    v2: np.ndarray
    p: np.ndarray
    residuals: dict = field(default_factory=dict)
    path: str = "general"

    @property
    def N(self) -> int:
        return self.v1.shape[0]

    @property
    def coupling(self) -> np.ndarray:
        """``Q D2 - D1 Q``."""
        return self.q * self.d2[None, :] - self.d1[:, None] * self.q

    def uniformity_norms(self) -> dict:
        """The five norms bounding ``P`` and ``P^-1``."""
        x = self.coupling
        out = {"v1": spectral_norm(self.v1), "q": spectral_norm(self.q),
               "qd2_minus_d1q": spectral_norm(x)}
        for name, m in (("v1_inv", self.v1), ("qd2_minus_d1q_inv", x)):
            s = np.linalg.svd(m, compute_uv=False)
            out[name] = float(1.0 / s[-1]) if s[-1] > 0 else np.inf
        return out


def _realify(m: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(m) and np.all(np.abs(m.imag) <= 1e-13 * max(1.0, np.abs(m).max())):
        return m.real.copy()
    return m


def _coupling(q, d1, d2):
    return d1[:, None] * q - q * d2[None, :]


def _partition_is_admissible(v1, coupling, tol: Tolerances) -> bool:
    n = v1.shape[0]
    return numerical_rank(v1, tol) == n and numerical_rank(coupling, tol) == n


def select_eigenbasis(sd: SpectralData, tol: Tolerances = DEFAULT_TOL):
    """Split the 2N eigenvectors of ``S`` into ``V1`` and ``V1 Q``.

    The first N pivots of a column-pivoted QR of all candidate eigenvectors
    give ``V1``; if ``D1 Q - Q D2`` turns out singular, further partitions are
    tried in pivot order (all of them when N <= 4).  Columns keep the order of
    the spectral data (eigenvalues descending).
    """
    if not sd.diagonalizable:
        bad = ", ".join(f"{z.real:.6g} (q={q}, s={s})" for z, q, s in sd.defect_pairs())
        raise Defective(f"defective eigenvalues: {bad}")
    ok, max_imag = reality_check(sd, tol)
    if not ok:
        raise ComplexSpeeds(f"non-real eigenvalues (max |Im| = {max_imag:.3e})")

    cols, vals = [], []
    for z, k in zip(sd.real_eigenvalues(), sd.kernels):
        for c in k.T:
            cols.append(_realify(np.asarray(c)))
            vals.append(z)
    cand = np.column_stack(cols)
    vals = np.array(vals)
    n = cand.shape[0]
    if cand.shape[1] != 2 * n:
        raise Defective("eigenvector count differs from 2N")

    _, _, piv = scipy.linalg.qr(cand, pivoting=True, mode="economic")
    combos = itertools.combinations(range(2 * n), n)
    if n > 4:
        combos = itertools.islice(combos, MAX_PARTITIONS + 1)
    for chosen in combos:
        first = np.sort(piv[list(chosen)])
        rest = np.setdiff1d(np.arange(2 * n), first)
        v1 = cand[:, first]
        if numerical_rank(v1, tol) < n:
            continue
        q = np.linalg.solve(v1, cand[:, rest])
        d1, d2 = vals[first], vals[rest]
        if _partition_is_admissible(v1, _coupling(q, d1, d2), tol):
            return v1, q, d1, d2
    raise NoAdmissiblePartition("no eigenvector partition gives invertible V1 and D1 Q - Q D2")


def build_factors(v1, q, d1, d2, tol: Tolerances = DEFAULT_TOL):
    """``A1 = V1 D1 V1^-1`` and ``A2 = V2 D2 V2^-1`` with ``V2 = V1 (D1 Q - Q D2)``."""
    v1inv = inverse(v1, tol)
    v2 = v1 @ _coupling(q, d1, d2)
    v2inv = inverse(v2, tol)
    a1 = (v1 * d1[None, :]) @ v1inv
    a2 = (v2 * d2[None, :]) @ v2inv
    return _realify(a1), _realify(a2)


def build_p(f: PencilFactorization) -> np.ndarray:
    v1q = f.v1 @ f.q
    return np.block([[f.v1, v1q], [f.v1 * f.d1[None, :], v1q * f.d2[None, :]]])


def _sample_lambdas(scale: float, count: int = 5, seed: int = 20240229) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(-2.0, 2.0, count) * scale


def verify_factorization(p: QuadraticPencil, f: PencilFactorization) -> dict:
    """Relative residuals of ``A^-1 C = A2 A1``, ``A^-1 B = -(A1 + A2)`` and of
    the product form at five sample points."""
    scale = p.scale
    res = {
        "ct_product": float(np.linalg.norm(p.ct - f.a2 @ f.a1, 2) / scale),
        "bt_sum": float(np.linalg.norm(p.bt + f.a1 + f.a2, 2) / scale),
    }
    eye = np.eye(p.N)
    worst = 0.0
    for lam in _sample_lambdas(scale):
        diff = p(lam) - (lam * eye - f.a2) @ (lam * eye - f.a1)
        worst = max(worst, float(np.linalg.norm(diff, 2) / p.scale_at(lam)))
    res["product_form"] = worst
    return res


def verify_p(p: QuadraticPencil, f: PencilFactorization, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Residual of ``M(lam) P = P blockdiag(lam - D1, lam - D2)`` and of the
    determinant factorisation ``det P = det(V1)^2 det(Q D2 - D1 Q)``."""
    pm = f.p
    if numerical_rank(pm, tol) < pm.shape[0]:
        raise Singular("P is numerically singular")
    comp = build_companion(p)
    d = np.concatenate([f.d1, f.d2])
    pnorm = spectral_norm(pm)
    worst = 0.0
    for lam in _sample_lambdas(p.scale):
        lhs = comp(lam) @ pm
        rhs = pm * (lam - d)[None, :]
        ref = max(1.0, spectral_norm(comp(lam))) * pnorm
        worst = max(worst, float(np.linalg.norm(lhs - rhs, 2) / ref))
    det_p = np.linalg.det(pm)
    det_blocks = np.linalg.det(f.v1) ** 2 * np.linalg.det(f.coupling)
    det_res = abs(det_p - det_blocks) / max(abs(det_p), abs(det_blocks), np.finfo(float).tiny)
    return {"similarity": worst, "det_p": float(det_res)}


def _assemble(p: QuadraticPencil, v1, q, d1, d2, a1, a2, tol, path) -> PencilFactorization:
    v2 = v1 @ _coupling(q, d1, d2)
    f = PencilFactorization(v1, q, np.asarray(d1, float), np.asarray(d2, float), a1, a2, v2,
                            np.zeros((0, 0)), {}, path)
    object.__setattr__(f, "p", build_p(f))
    res = verify_factorization(p, f)
    res.update(verify_p(p, f, tol))
    object.__setattr__(f, "residuals", res)
    return f


def factorize_general(p: QuadraticPencil, sd: SpectralData | None = None,
                      tol: Tolerances = DEFAULT_TOL) -> PencilFactorization:
    sd = spectrum(p, tol) if sd is None else sd
    v1, q, d1, d2 = select_eigenbasis(sd, tol)
    a1, a2 = build_factors(v1, q, d1, d2, tol)
    return _assemble(p, v1, q, d1, d2, a1, a2, tol, "general")


def b_zero_path(p: QuadraticPencil, tol: Tolerances = DEFAULT_TOL) -> PencilFactorization:
    """Factorisation when the mixed block vanishes.

    Diagonalises ``-A^-1 C = V1 D1^2 V1^-1`` with positive speeds ``D1``;
    then ``Q = 1``, ``D2 = -D1`` and ``A1 = -A2 = V1 D1 V1^-1``.
    """
    if np.linalg.norm(p.bt, 2) > tol.residual_tol * p.scale:
        raise ValueError("b_zero_path needs a vanishing mixed block")
    minus_c = -p.ct
    w = np.linalg.eigvals(minus_c)
    scale = max(1.0, float(np.max(np.abs(w))))
    if np.any(np.abs(w.imag) > tol.imag_tol * (1.0 + np.abs(w))):
        raise ComplexSpeeds("-A^-1 C has non-real eigenvalues")
    groups = group_eigenvalues(w.real, tol, scale)
    speeds2, cols = [], []
    for g in sorted(groups, key=lambda g: -g.representative.real):
        mu = g.representative.real
        if mu <= 0 or np.sqrt(mu) <= tol.cluster_tol * scale:
            raise ZeroSpeed(f"-A^-1 C has eigenvalue {mu:.3e} which is not positive")
        k = kernel_basis(minus_c - mu * np.eye(p.N), tol, scale=scale)
        if k.shape[1] < g.size:
            raise Defective(f"-A^-1 C is not diagonalisable at {mu:.6g}")
        cols.append(k[:, :g.size])
        speeds2.extend([mu] * g.size)
    v1 = np.column_stack(cols)
    d1 = np.sqrt(np.array(speeds2))
    d2 = -d1
    q = np.eye(p.N)
    v1inv = inverse(v1, tol)
    a1 = (v1 * d1[None, :]) @ v1inv
    return _assemble(p, v1, q, d1, d2, a1, -a1, tol, "b_zero")


def factorize(p: QuadraticPencil, tol: Tolerances = DEFAULT_TOL,
              sd: SpectralData | None = None) -> PencilFactorization:
    """Factorise ``S``, taking the mixed-block-free shortcut when it applies."""
    if np.linalg.norm(p.bt, 2) <= tol.residual_tol * p.scale:
        return b_zero_path(p, tol)
    return factorize_general(p, sd, tol)
