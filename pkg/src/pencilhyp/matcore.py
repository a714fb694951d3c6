"""Dense linear-algebra kernels used throughout the package.

Matrices are plain ``numpy.ndarray`` objects; polynomials are
``numpy.polynomial.Polynomial`` instances (ascending coefficients).
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
from numpy.polynomial import Polynomial

from .errors import DegreeExceeded, NonConvergence, Singular

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds.

    ``rank_tol`` is a relative singular-value cutoff, ``cluster_tol`` the
    radius for grouping eigenvalues, ``imag_tol`` the admissible imaginary
    part relative to ``1 + |lambda|``, ``residual_tol`` the bound for matrix
    identity residuals and ``cond_cap`` the alarm level for the uniformity
    norms.  ``defect_tol`` is the backward-error level used to recognise
    eigenvalues that float64 splits apart because they are defective.
    """

    rank_tol: float = 1e-9
    cluster_tol: float = 1e-6
    imag_tol: float = 1e-8
    residual_tol: float = 1e-8
    cond_cap: float = 1e8
    defect_tol: float = 1e-10

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"tolerance {f.name} must be finite and > 0, got {value!r}")

    def with_(self, **changes) -> "Tolerances":
        return replace(self, **changes)


DEFAULT_TOL = Tolerances()


def as_matrix(m, square: bool = False) -> np.ndarray:
    """Validate ``m`` as a finite 2-D array and return it as ndarray."""
    a = np.asarray(m)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if not np.iscomplexobj(a):
        a = a.astype(float, copy=False)
    return a


def eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and unit-norm right eigenvectors (as columns)."""
    a = as_matrix(m, square=True)
    try:
        w, v = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NonConvergence(str(exc)) from exc
    norms = np.linalg.norm(v, axis=0)
    norms[norms == 0] = 1.0
    return w, v / norms


def singular_values(m) -> np.ndarray:
    a = as_matrix(m)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def _cutoff(s: np.ndarray, tol: Tolerances, scale: float | None) -> float:
    ref = s[0] if s.size else 0.0
    if scale is not None:
        ref = max(ref, scale)
    return tol.rank_tol * ref


def numerical_rank(m, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> int:
    """Number of singular values above ``rank_tol`` times the largest one.

    ``scale`` optionally supplies a reference norm so that a matrix which is
    entirely rounding noise (relative to the problem it came from) has rank 0.
    """
    s = singular_values(m)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > _cutoff(s, tol, scale)))


def canonical_basis(k: np.ndarray) -> np.ndarray:
    """Basis-independent orthonormal basis for the column span of ``k``.

    Pivot rows are chosen by pivoted QR, the span is rewritten so it equals
    the identity on those rows (sorted), and then orthonormalised in order.
    """
    n, s = k.shape
    if s == 0:
        return k
    _, _, piv = scipy.linalg.qr(k.conj().T, pivoting=True, mode="economic")
    rows = np.sort(piv[:s])
    b = k @ np.linalg.inv(k[rows, :])
    q, r = np.linalg.qr(b)
    d = np.diag(r)
    phase = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    q = q * phase
    if not np.iscomplexobj(k):
        q = q.real
    return q


def kernel_basis(m, tol: Tolerances = DEFAULT_TOL, scale: float | None = None,
                 canonical: bool = True) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical null space of ``m``."""
    a = as_matrix(m)
    ncols = a.shape[1]
    if a.size == 0:
        return np.eye(ncols, dtype=a.dtype)
    u, s, vh = np.linalg.svd(a)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(s > _cutoff(s, tol, scale)))
    k = vh[rank:].conj().T
    if canonical:
        k = canonical_basis(k)
    return k


def spectral_norm(m) -> float:
    a = as_matrix(m)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def inverse(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    a = as_matrix(m, square=True)
    if numerical_rank(a, tol) < a.shape[0]:
        raise Singular(f"matrix of size {a.shape[0]} is numerically singular")
    return np.linalg.inv(a)


def condition_number(m) -> float:
    s = singular_values(m)
    if s.size == 0:
        return 1.0
    if s[-1] == 0.0:
        return np.inf
    return float(s[0] / s[-1])


# -- polynomials ---------------------------------------------------------------

def det_poly(pencil_eval: Callable[[complex], np.ndarray], degree_bound: int,
             tol: Tolerances = DEFAULT_TOL, radius: float = 1.0,
             holdout: int = 3) -> Polynomial:
    """Recover ``lambda -> det(pencil_eval(lambda))`` as a polynomial.

    The determinant is sampled at ``degree_bound + 1 + holdout`` equally
    spaced points on the circle ``|lambda| = radius`` and the coefficients
    are read off with an FFT, which stays well conditioned at high degree.
    The ``holdout`` surplus coefficients and one off-circle point check that
    the degree bound was honest.
    """
    if degree_bound < 0:
        raise ValueError("degree_bound must be >= 0")
    npts = degree_bound + 1
    m = npts + max(holdout, 1)
    z = radius * np.exp(2j * np.pi * np.arange(m) / m)
    y = np.array([np.linalg.det(as_matrix(pencil_eval(zi), square=True)) for zi in z])
    scaled = np.fft.fft(y) / m
    ymax = max(1.0, float(np.max(np.abs(y))))
    excess = float(np.max(np.abs(scaled[npts:])))
    if excess > tol.residual_tol * ymax:
        raise DegreeExceeded(f"determinant is not a polynomial of degree <= {degree_bound} "
                             f"(surplus coefficient {excess:.3e})")
    coef = scaled[:npts] / radius ** np.arange(npts)

    x0 = 0.5371 * radius
    m0 = as_matrix(pencil_eval(x0), square=True)
    if not np.iscomplexobj(m0):
        coef = coef.real
    poly = Polynomial(coef)
    got = np.linalg.det(m0)
    scale = max(ymax, float(np.sum(np.abs(coef) * x0 ** np.arange(npts))))
    if abs(poly(x0) - got) > tol.residual_tol * scale:
        raise DegreeExceeded(
            f"determinant is not a polynomial of degree <= {degree_bound} "
            f"(check residual {abs(poly(x0) - got):.3e} at {x0:.4g})")
    return poly


def trim_poly(poly: Polynomial, tol: Tolerances = DEFAULT_TOL) -> Polynomial:
    coef = np.asarray(poly.coef)
    cap = np.max(np.abs(coef)) if coef.size else 0.0
    keep = len(coef)
    while keep > 1 and abs(coef[keep - 1]) <= tol.residual_tol * cap:
        keep -= 1
    return Polynomial(coef[:keep])


def root_multiplicity(poly: Polynomial, sigma: complex, tol: Tolerances = DEFAULT_TOL) -> int:
    """Multiplicity of ``sigma`` as a root, read off the Taylor coefficients.

    Used as a cross-check on eigenvalue clustering: coefficients of
    ``p(x + sigma)`` below ``residual_tol`` (relative) count as zero.
    """
    coef = np.asarray(poly.coef, dtype=complex)
    deg = len(coef) - 1
    shifted = np.zeros(deg + 1, dtype=complex)
    # Taylor coefficients via repeated synthetic division.
    work = coef.copy()
    for j in range(deg + 1):
        acc = np.zeros(len(work) - 1, dtype=complex)
        r = work[-1]
        for i in range(len(work) - 2, -1, -1):
            acc[i] = r
            r = work[i] + sigma * r
        shifted[j] = r
        work = acc
        if work.size == 0:
            break
    scale = np.sum(np.abs(coef) * (1.0 + abs(sigma)) ** np.arange(deg + 1))
    mult = 0
    while mult <= deg and abs(shifted[mult]) <= tol.residual_tol * scale:
        mult += 1
    return mult


# -- eigenvalue grouping -------------------------------------------------------

@dataclass(frozen=True)
class Cluster:
    representative: complex
    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


def _make_cluster(values: np.ndarray, members: Sequence[int]) -> Cluster:
    members = tuple(sorted(members))
    return Cluster(complex(np.mean(values[list(members)])), members)


def _order_key(c: Cluster):
    return (round(c.representative.real, 12), round(c.representative.imag, 12), c.members)


def cluster(values, tol: Tolerances = DEFAULT_TOL, radius: float | None = None) -> list[Cluster]:
    """Single-linkage grouping of ``values`` at ``cluster_tol`` (or ``radius``).

    The representative of a group is the mean of its members.  Groups are
    returned sorted by representative (real part, then imaginary part).
    """
    vals = np.asarray(values, dtype=complex).ravel()
    n = vals.size
    if n == 0:
        return []
    if not np.all(np.isfinite(vals)):
        raise ValueError("cannot cluster non-finite values")
    r = tol.cluster_tol if radius is None else radius
    order = np.lexsort((vals.imag, vals.real))
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a_pos in range(n):
        i = order[a_pos]
        for b_pos in range(a_pos + 1, n):
            j = order[b_pos]
            if vals[j].real - vals[i].real > r:
                break
            if abs(vals[i] - vals[j]) <= r:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted((_make_cluster(vals, g) for g in groups.values()), key=_order_key)


def jordan_radius(size: int, tol: Tolerances) -> float:
    """Spread a cluster of ``size`` computed eigenvalues may have and still be
    read as one defective eigenvalue, relative to the spectrum scale.

    A Jordan block of size ``m`` is split by about ``eps**(1/m)``; the radius
    uses ``defect_tol`` in place of ``eps`` and stops growing at ``m = 3``.
    """
    if size < 2:
        return 0.0
    return max(tol.cluster_tol, tol.defect_tol ** (1.0 / min(size, 3)))


def _spread(vals: np.ndarray, members) -> float:
    sub = vals[list(members)]
    return float(np.max(np.abs(sub - sub.mean())))


def merge_clusters(values, groups: list[Cluster], a: int, b: int) -> list[Cluster]:
    vals = np.asarray(values, dtype=complex).ravel()
    merged = _make_cluster(vals, groups[a].members + groups[b].members)
    rest = [g for k, g in enumerate(groups) if k not in (a, b)]
    return sorted(rest + [merged], key=_order_key)


def group_eigenvalues(values, tol: Tolerances = DEFAULT_TOL, scale: float = 1.0,
                      accept: Callable[[complex, tuple], bool] | None = None) -> list[Cluster]:
    """Cluster computed eigenvalues, tolerating the splitting of defective ones.

    Starts from single-linkage groups at ``cluster_tol * scale`` and then
    merges neighbouring groups whenever the union stays within
    ``jordan_radius(size) * scale`` of its mean.  Float64 eigensolvers split an
    eigenvalue with a Jordan block of size ``m`` by roughly ``eps**(1/m)``, so
    without this step a defective double root looks like two nearby (or even
    complex) simple roots.  ``accept(mean, members)`` can veto a merge, e.g. when
    the merged representative is visibly not an eigenvalue.
    """
    vals = np.asarray(values, dtype=complex).ravel()
    groups = cluster(vals, tol, radius=tol.cluster_tol * scale)
    while len(groups) > 1:
        reps = np.array([g.representative for g in groups])
        candidates = {}
        for seed in range(len(groups)):
            nearest = np.argsort(np.abs(reps - reps[seed]), kind="stable")
            members: tuple[int, ...] = groups[nearest[0]].members
            for count in range(2, len(groups) + 1):
                members = members + groups[nearest[count - 1]].members
                spread = _spread(vals, members)
                limit = jordan_radius(len(members), tol) * scale
                if spread > limit:
                    continue
                chosen = frozenset(int(i) for i in nearest[:count])
                key = (-len(members), spread / limit, min(chosen))
                if chosen not in candidates or key < candidates[chosen]:
                    candidates[chosen] = key
        merged = None
        for chosen, _ in sorted(candidates.items(), key=lambda item: item[1]):
            union = tuple(i for k in sorted(chosen) for i in groups[k].members)
            cand = _make_cluster(vals, union)
            if accept is None or accept(cand.representative, cand.members):
                merged = (chosen, cand)
                break
        if merged is None:
            break
        chosen, cand = merged
        groups = sorted([g for k, g in enumerate(groups) if k not in chosen] + [cand],
                        key=_order_key)
    return groups
