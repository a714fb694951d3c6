"""Eigenvalues, multiplicities and kernels of a quadratic pencil."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CorrespondenceViolation, SpectralInconsistency
from .matcore import (DEFAULT_TOL, Cluster, Tolerances, det_poly, eig, group_eigenvalues,
                      kernel_basis, merge_clusters, root_multiplicity, singular_values)
from .pencil import QuadraticPencil, build_companion


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Distinct eigenvalues of ``S`` with multiplicities and kernel bases.

    ``eigenvalues`` are ordered by decreasing real part (then imaginary part).
    ``spreads`` holds, per eigenvalue, the largest distance of a computed
    companion eigenvalue from the group representative; ``gap`` is the
    smallest distance between two distinct representatives.
    """

    eigenvalues: np.ndarray
    alg_mult: tuple[int, ...]
    geo_mult: tuple[int, ...]
    kernels: tuple[np.ndarray, ...]
    raw: np.ndarray = field(repr=False, default=None)
    spreads: tuple[float, ...] = ()
    gap: float = np.inf
    scale: float = 1.0
    marginal: bool = False

    def __post_init__(self):
        n2 = sum(self.alg_mult)
        if self.raw is not None and n2 != len(self.raw):
            raise SpectralInconsistency("algebraic multiplicities do not sum to 2N")
        for q, s in zip(self.alg_mult, self.geo_mult):
            if not 1 <= s <= q:
                raise SpectralInconsistency(f"geometric multiplicity {s} outside [1, {q}]")

    @property
    def count(self) -> int:
        return len(self.eigenvalues)

    @property
    def diagonalizable(self) -> bool:
        return all(q == s for q, s in zip(self.alg_mult, self.geo_mult))

    @property
    def simple(self) -> bool:
        return all(q == 1 for q in self.alg_mult)

    @property
    def max_imag(self) -> float:
        if self.count == 0:
            return 0.0
        return float(np.max(np.abs(np.imag(self.eigenvalues))))

    def expanded(self) -> np.ndarray:
        """Representatives repeated by algebraic multiplicity."""
        return np.repeat(self.eigenvalues, self.alg_mult)

    def real_eigenvalues(self) -> np.ndarray:
        return np.real(self.eigenvalues).astype(float)

    def defect_pairs(self):
        return [(complex(e), q, s) for e, q, s in
                zip(self.eigenvalues, self.alg_mult, self.geo_mult) if s < q]


def _is_real(z: complex, tol: Tolerances) -> bool:
    return abs(z.imag) <= tol.imag_tol * (1.0 + abs(z))


def _evaluation_point(z: complex, tol: Tolerances):
    return z.real if _is_real(z, tol) else z


def _sort_key(z: complex):
    return (-round(z.real, 12), -round(z.imag, 12))


def spectrum(p: QuadraticPencil, tol: Tolerances = DEFAULT_TOL) -> SpectralData:
    """Spectral data of ``S`` from the eigenvalues of the companion matrix.

    Kernels (and hence geometric multiplicities) are taken from ``S`` itself.
    A group whose kernel is larger than its size cannot be right; it is merged
    with its nearest neighbour, which can only happen when rounding has pushed
    a multiple eigenvalue apart by more than the grouping radius.
    """
    comp = build_companion(p)
    raw, vecs = eig(-comp.m0)
    scale = max(1.0, float(np.max(np.abs(raw)))) if raw.size else 1.0

    def near_defective(mu: complex, members: tuple) -> bool:
        # Rounding splits a Jordan block into eigenvalues whose spread times
        # eigenvector angle is tiny; distinct close eigenvalues fail this.
        idx = list(members)
        spread = float(np.max(np.abs(raw[idx] - mu)))
        angle = singular_values(vecs[:, idx])[-1]
        if spread * angle > tol.defect_tol * scale:
            return False
        sigma = _evaluation_point(mu, tol)
        return kernel_basis(p(sigma), tol, scale=p.scale_at(sigma), canonical=False).shape[1] > 0

    groups: list[Cluster] = group_eigenvalues(raw, tol, scale, accept=near_defective)

    while True:
        kernels = []
        restart = False
        for idx, g in enumerate(groups):
            sigma = _evaluation_point(g.representative, tol)
            k = kernel_basis(p(sigma), tol, scale=p.scale_at(sigma))
            s = k.shape[1]
            if s == 0:
                raise SpectralInconsistency(
                    f"S has trivial kernel at computed eigenvalue {g.representative:.6g}")
            if s > g.size and len(groups) > 1:
                reps = np.array([h.representative for h in groups])
                dist = np.abs(reps - g.representative)
                dist[idx] = np.inf
                groups = merge_clusters(raw, groups, idx, int(np.argmin(dist)))
                restart = True
                break
            kernels.append(k)
        if not restart:
            break

    order = sorted(range(len(groups)), key=lambda i: _sort_key(groups[i].representative))
    eigenvalues = np.array([groups[i].representative for i in order], dtype=complex)
    alg = tuple(groups[i].size for i in order)
    kern = tuple(kernels[i] for i in order)
    geo = tuple(k.shape[1] for k in kern)
    spreads = tuple(float(np.max(np.abs(raw[list(groups[i].members)] - groups[i].representative)))
                    for i in order)
    if len(eigenvalues) > 1:
        diff = np.abs(eigenvalues[:, None] - eigenvalues[None, :])
        gap = float(np.min(diff[~np.eye(len(eigenvalues), dtype=bool)]))
    else:
        gap = np.inf
    marginal = gap < 10.0 * tol.cluster_tol * scale
    return SpectralData(eigenvalues, alg, geo, kern, raw, spreads, gap, scale, marginal)


def reality_check(sd: SpectralData, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, float]:
    """Whether every eigenvalue is real at ``imag_tol``, and the largest imaginary part."""
    ok = all(_is_real(complex(z), tol) for z in sd.eigenvalues)
    return ok, sd.max_imag


def polynomial_multiplicities(p: QuadraticPencil, sd: SpectralData,
                              tol: Tolerances = DEFAULT_TOL) -> list[int]:
    """Root multiplicities of ``det S`` at each representative (cross-check)."""
    poly = det_poly(p, 2 * p.N, tol)
    # A looser threshold: the representative of a defective group is only
    # accurate to a fraction of the grouping radius.
    loose = tol.with_(residual_tol=max(tol.residual_tol, 1e3 * max(sd.spreads, default=0.0)))
    return [root_multiplicity(poly, complex(_evaluation_point(complex(z), tol)), loose)
            for z in sd.eigenvalues]


@dataclass(frozen=True)
class CorrespondenceReport:
    sigma: complex
    dim_m: int
    dim_s: int
    stacked_residual: float
    form_residual: float
    ambiguous: bool = False


def _rank_window(m, tol: Tolerances, scale: float) -> tuple[int, int]:
    """Kernel dimensions at a tenth and ten times the rank cutoff."""
    s = singular_values(m)
    ref = max(s[0] if s.size else 0.0, scale)
    lo = int(np.sum(s <= 0.1 * tol.rank_tol * ref))
    hi = int(np.sum(s <= 10.0 * tol.rank_tol * ref))
    return lo + (m.shape[1] - s.size), hi + (m.shape[1] - s.size)


def kernel_correspondence(p: QuadraticPencil, sigma, tol: Tolerances = DEFAULT_TOL
                          ) -> CorrespondenceReport:
    """Compare ``ker M(sigma)`` with ``ker S(sigma)``.

    ``stacked_residual`` is the largest relative residual of ``M(sigma)``
    applied to ``[v; sigma v]`` for ``v`` in ``ker S(sigma)``;
    ``form_residual`` measures how far kernel vectors of ``M(sigma)`` are
    from that stacked form with ``v`` annihilated by ``S(sigma)``.
    """
    sigma = _evaluation_point(complex(sigma), tol)
    comp = build_companion(p)
    n = p.N
    s_mat = p(sigma)
    m_mat = comp(sigma)
    s_scale = p.scale_at(sigma)
    m_scale = abs(sigma) + np.linalg.norm(comp.m0, 2)
    ks = kernel_basis(s_mat, tol, scale=s_scale)
    km = kernel_basis(m_mat, tol, scale=m_scale)

    stacked = 0.0
    for v in ks.T:
        u = np.concatenate([v, sigma * v])
        r = np.linalg.norm(m_mat @ u) / (np.linalg.norm(u) * m_scale)
        stacked = max(stacked, float(r))
    form = 0.0
    for u in km.T:
        x, y = u[:n], u[n:]
        nu = np.linalg.norm(u)
        r1 = np.linalg.norm(y - sigma * x) / nu
        r2 = np.linalg.norm(s_mat @ x) / (nu * s_scale)
        form = max(form, float(r1), float(r2))

    dim_s, dim_m = ks.shape[1], km.shape[1]
    ambiguous = False
    if dim_s != dim_m:
        lo_s, hi_s = _rank_window(s_mat, tol, s_scale)
        lo_m, hi_m = _rank_window(m_mat, tol, m_scale)
        if max(lo_s, lo_m) > min(hi_s, hi_m):
            raise CorrespondenceViolation(
                f"dim ker M = {dim_m} but dim ker S = {dim_s} at sigma = {sigma:.6g}")
        ambiguous = True
    return CorrespondenceReport(complex(sigma), dim_m, dim_s, stacked, form, ambiguous)
