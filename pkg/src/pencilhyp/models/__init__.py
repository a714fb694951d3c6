"""Ready-made systems: the almost-wave equation, wave equations, squared
first-order operators and gauge-fixed electrodynamics (``maxwell``)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..matcore import DEFAULT_TOL, Tolerances, condition_number, eig
from ..pencil import SecondOrderSystem


def almost_wave(a: float, b: float) -> SecondOrderSystem:
    """``(dt^2 - (a + b) dt dx + a b dx^2) phi = 0``; at ``k_x = 1`` the pencil
    is ``(lam - a)(lam - b)``."""
    a, b = float(a), float(b)
    if not (np.isfinite(a) and np.isfinite(b)):
        raise ValueError("a and b must be finite")
    c = np.zeros((2, 2, 1, 1))
    c[0, 0] = 1.0
    c[0, 1] = c[1, 0] = -(a + b) / 2.0
    c[1, 1] = a * b
    return SecondOrderSystem(c)


def wave(speeds=(1.0,), components: int = 1) -> SecondOrderSystem:
    """``dt^2 phi = sum_i c_i^2 d_i^2 phi`` for each of ``components`` fields.

    One speed per spatial dimension; a zero speed makes the operator
    degenerate along that axis.
    """
    speeds = np.atleast_1d(np.asarray(speeds, dtype=float))
    d = speeds.size + 1
    eye = np.eye(components)
    c = np.zeros((d, d, components, components))
    c[0, 0] = eye
    for i, s in enumerate(speeds, start=1):
        c[i, i] = -(s * s) * eye
    return SecondOrderSystem(c)


def repeated_operator(bmats) -> SecondOrderSystem:
    """Principal part of ``(1 dt + B^i d_i)^2``.

    ``bmats`` has shape ``(d-1, N, N)`` (a scalar or a single matrix is taken
    as one spatial dimension).
    """
    b = np.asarray(bmats, dtype=float)
    if b.ndim == 0:
        b = b.reshape(1, 1, 1)
    elif b.ndim == 2:
        b = b[None]
    if b.ndim != 3 or b.shape[1] != b.shape[2]:
        raise ValueError(f"bmats must have shape (d-1, N, N), got {b.shape}")
    sdim, n = b.shape[0], b.shape[1]
    c = np.zeros((sdim + 1, sdim + 1, n, n))
    c[0, 0] = np.eye(n)
    for i in range(sdim):
        c[0, i + 1] = c[i + 1, 0] = b[i]
        for j in range(sdim):
            c[i + 1, j + 1] = 0.5 * (b[i] @ b[j] + b[j] @ b[i])
    return SecondOrderSystem(c)


@dataclass(frozen=True)
class FirstOrderCheck:
    eigenvalues: np.ndarray
    condition: float
    real: bool
    diagonalizable: bool

    @property
    def strongly_hyperbolic(self) -> bool:
        return self.real and self.diagonalizable


def first_order_check(bmats, khat, tol: Tolerances = DEFAULT_TOL) -> FirstOrderCheck:
    """Diagonalise ``B^i khat_i`` for the first-order operator ``dt + B^i d_i``."""
    b = np.asarray(bmats, dtype=float)
    if b.ndim == 2:
        b = b[None]
    bk = np.tensordot(np.atleast_1d(np.asarray(khat, dtype=float)), b, axes=(0, 0))
    w, v = eig(bk)
    cond = condition_number(v)
    real = bool(np.all(np.abs(w.imag) <= tol.imag_tol * (1.0 + np.abs(w))))
    return FirstOrderCheck(w, cond, real, cond < tol.cond_cap)
