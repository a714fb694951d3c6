"""Hyperbolicity analysis of fully second-order PDE systems through their
quadratic matrix pencils."""
from .classify import (DirectionVerdict, HypClass, ScanConfig, SphereReport, WeakReason,
                       classify_direction, classify_system, sample_directions, uniformity_scan)
from .eigenstruct import SpectralData, kernel_correspondence, reality_check, spectrum
from .errors import *  # noqa: F401,F403
from .factorize import (PencilFactorization, b_zero_path, build_factors, build_p, factorize,
                        select_eigenbasis, verify_factorization, verify_p)
from .matcore import Tolerances
from .pencil import (CompanionPencil, QuadraticPencil, SecondOrderSystem, build_companion,
                     build_from_ft2s, build_quadratic, decompose, det_identity_residual)

__version__ = "0.1.0"
