"""Per-direction hyperbolicity verdicts and scans over the sphere of directions."""
from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .eigenstruct import SpectralData, reality_check, spectrum
from .errors import PencilError, UnsupportedDimension
from .factorize import NORM_NAMES, PencilFactorization, factorize
from .matcore import DEFAULT_TOL, Tolerances
from .pencil import CONVENTION_NOTE, SecondOrderSystem, build_quadratic


class HypClass(enum.IntEnum):
    """Ordered from weakest to strongest."""

    NON_HYPERBOLIC = 0
    WEAK = 1
    STRONG = 2
    STRICT = 3

    @property
    def label(self) -> str:
        return {0: "NonHyperbolic", 1: "WeaklyHyperbolic",
                2: "StronglyHyperbolic", 3: "StrictlyHyperbolic"}[int(self)]


class WeakReason(enum.Enum):
    MULTIPLICITY_GAP = "MultiplicityGap"
    UNIFORMITY_BLOWUP = "UniformityBlowup"


@dataclass(frozen=True, eq=False)
class DirectionVerdict:
    khat: np.ndarray
    cls: HypClass
    spectral: SpectralData
    reason: WeakReason | None = None
    max_imag: float = 0.0
    uniformity: dict | None = None
    factorization: PencilFactorization | None = field(default=None, repr=False)
    factor_error: str | None = None

    @property
    def gap(self) -> float:
        return self.spectral.gap

    @property
    def marginal(self) -> bool:
        return self.spectral.marginal

    @property
    def label(self) -> str:
        if self.cls == HypClass.WEAK and self.reason is not None:
            return f"{self.cls.label}({self.reason.value})"
        return self.cls.label


def classify_direction(system: SecondOrderSystem, khat, tol: Tolerances = DEFAULT_TOL,
                       with_factorization: bool = True) -> DirectionVerdict:
    """Verdict for one unit spatial direction.

    Uniformity norms come from the factorisation and are recorded for strong
    directions without affecting the per-direction class.
    """
    khat = np.atleast_1d(np.asarray(khat, dtype=float))
    p = build_quadratic(system, khat)
    sd = spectrum(p, tol)
    ok, max_imag = reality_check(sd, tol)
    if not ok:
        return DirectionVerdict(khat, HypClass.NON_HYPERBOLIC, sd, max_imag=max_imag)
    if not sd.diagonalizable:
        return DirectionVerdict(khat, HypClass.WEAK, sd, WeakReason.MULTIPLICITY_GAP, max_imag)
    cls = HypClass.STRICT if sd.simple else HypClass.STRONG
    if not with_factorization:
        return DirectionVerdict(khat, cls, sd, max_imag=max_imag)
    try:
        f = factorize(p, tol, sd)
    except PencilError as exc:
        norms = {name: np.inf for name in NORM_NAMES}
        return DirectionVerdict(khat, cls, sd, None, max_imag, norms, None,
                                f"{type(exc).__name__}: {exc}")
    return DirectionVerdict(khat, cls, sd, None, max_imag, f.uniformity_norms(), f)


def sample_directions(spatial_dim: int, count: int = 64, scheme: str = "default",
                      seed: int = 0) -> np.ndarray:
    """Unit spatial directions, one per row.

    One spatial dimension gives both signs; two give equally spaced angles;
    three give a Fibonacci lattice.  ``scheme="random"`` draws Gaussian
    directions (any dimension), seeded for reproducibility.
    """
    if spatial_dim < 1:
        raise ValueError("spatial_dim must be >= 1")
    if count < 1:
        raise ValueError("count must be >= 1")
    if scheme == "random":
        rng = np.random.default_rng(seed)
        x = rng.standard_normal((count, spatial_dim))
        return x / np.linalg.norm(x, axis=1, keepdims=True)
    if scheme not in ("default", "lattice"):
        raise ValueError(f"unknown sampling scheme {scheme!r}")
    if spatial_dim == 1:
        return np.array([[1.0], [-1.0]])
    if spatial_dim == 2:
        theta = 2.0 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if spatial_dim == 3:
        i = np.arange(count) + 0.5
        z = 1.0 - 2.0 * i / count
        r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        phi = np.pi * (3.0 - np.sqrt(5.0)) * np.arange(count)
        x = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
        return x / np.linalg.norm(x, axis=1, keepdims=True)
    raise UnsupportedDimension(
        f"lattice sampling supports up to 3 spatial dimensions, got {spatial_dim}; "
        "use scheme='random'")


def thread_count() -> int:
    cap = os.environ.get("PENCILHYP_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return max(1, n)


@dataclass(eq=False)
class SphereReport:
    scheme: str
    count: int
    verdicts: list
    worst_norms: dict
    worst_directions: dict
    verdict: HypClass
    reason: WeakReason | None = None
    convention_note: str = CONVENTION_NOTE
    growth: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        if self.verdict == HypClass.WEAK and self.reason is not None:
            return f"{self.verdict.label}({self.reason.value})"
        return self.verdict.label

    @property
    def marginal_directions(self) -> list[int]:
        return [i for i, v in enumerate(self.verdicts) if v.marginal]


def _run_directions(system, directions, tol, threads):
    def work(k):
        return classify_direction(system, k, tol)

    if threads <= 1 or len(directions) < 2:
        return [work(k) for k in directions]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, list(directions)))


def _worst(verdicts):
    worst = {name: 0.0 for name in NORM_NAMES}
    where = {name: None for name in NORM_NAMES}
    for v in verdicts:
        if v.uniformity is None:
            continue
        for name in NORM_NAMES:
            val = v.uniformity[name]
            if where[name] is None or val > worst[name]:
                worst[name] = val
                where[name] = v.khat
    return worst, where


def _aggregate(verdicts, worst, tol):
    if not verdicts:
        raise ValueError("no directions to aggregate")
    weakest = min(verdicts, key=lambda v: v.cls)
    cls, reason = weakest.cls, weakest.reason
    if cls >= HypClass.STRONG and any(val > tol.cond_cap for val in worst.values()):
        cls, reason = HypClass.WEAK, WeakReason.UNIFORMITY_BLOWUP
    return cls, reason


def uniformity_scan(system: SecondOrderSystem, directions, tol: Tolerances = DEFAULT_TOL,
                    scheme: str = "explicit", threads: int | None = None) -> SphereReport:
    """Classify every sampled direction and take maxima of the uniformity norms."""
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    threads = thread_count() if threads is None else threads
    verdicts = _run_directions(system, directions, tol, threads)
    worst, where = _worst(verdicts)
    cls, reason = _aggregate(verdicts, worst, tol)
    return SphereReport(scheme, len(verdicts), verdicts, worst, where, cls, reason)


@dataclass(frozen=True)
class ScanConfig:
    count: int = 64
    scheme: str = "default"
    directions: tuple | None = None
    refine: bool = True
    refine_factor: int = 4
    growth_threshold: float = 10.0
    seed: int = 0
    tol: Tolerances = DEFAULT_TOL
    threads: int | None = None


def classify_system(system: SecondOrderSystem, config: ScanConfig = ScanConfig()) -> SphereReport:
    """Sample directions, scan, and test the uniformity norms under refinement.

    With refinement the final report covers the base samples together with a
    ``refine_factor`` times denser set, so refining can only lower the class.
    A norm growing by ``growth_threshold`` or more between the base set and
    the union counts as a blow-up.
    """
    tol = config.tol
    if config.directions is not None:
        dirs = np.atleast_2d(np.asarray(config.directions, dtype=float))
        return uniformity_scan(system, dirs, tol, "explicit", config.threads)

    base_dirs = sample_directions(system.spatial_dim, config.count, config.scheme, config.seed)
    base = uniformity_scan(system, base_dirs, tol, config.scheme, config.threads)
    if not config.refine or system.spatial_dim == 1:
        return base
    fine_dirs = sample_directions(system.spatial_dim, config.count * config.refine_factor,
                                  config.scheme, config.seed + 1)
    fine = uniformity_scan(system, fine_dirs, tol, config.scheme, config.threads)
    verdicts = base.verdicts + fine.verdicts
    worst, where = _worst(verdicts)
    cls, reason = _aggregate(verdicts, worst, tol)
    growth = {}
    for name in NORM_NAMES:
        b, u = base.worst_norms[name], worst[name]
        if not np.isfinite(b):
            growth[name] = 1.0
        elif b > 0:
            growth[name] = float(u / b)
        else:
            growth[name] = 1.0 if u == 0 else np.inf
    if cls >= HypClass.STRONG and any(g >= config.growth_threshold for g in growth.values()):
        cls, reason = HypClass.WEAK, WeakReason.UNIFORMITY_BLOWUP
    return SphereReport(config.scheme, len(verdicts), verdicts, worst, where, cls, reason,
                        growth=growth)
