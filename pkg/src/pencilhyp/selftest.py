"""Regression checks on the worked examples, runnable without pytest."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classify import HypClass, classify_direction
from .eigenstruct import spectrum
from .factorize import factorize
from .matcore import DEFAULT_TOL
from .models import almost_wave, repeated_operator, wave
from .models import maxwell as mx
from .pencil import build_quadratic


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def _almost_wave_strict():
    p = build_quadratic(almost_wave(2, 3), [1.0])
    sd = spectrum(p)
    f = factorize(p, DEFAULT_TOL, sd)
    ok = (np.allclose(sd.eigenvalues, [3, 2], atol=1e-10) and sd.alg_mult == (1, 1)
          and np.allclose([f.v1[0, 0], f.q[0, 0], f.d1[0], f.d2[0]], [1, 1, 3, 2], atol=1e-10))
    return ok, f"eigenvalues={sd.eigenvalues.real.tolist()} V1={f.v1[0, 0]:.3g} Q={f.q[0, 0]:.3g}"


def _almost_wave_weak():
    v = classify_direction(almost_wave(2, 2), [1.0])
    sd = v.spectral
    ok = v.cls == HypClass.WEAK and sd.alg_mult == (2,) and sd.geo_mult == (1,)
    return ok, f"{v.label} q={sd.alg_mult} s={sd.geo_mult}"


def _wave_strong():
    v = classify_direction(wave([1.0]), [1.0])
    return v.cls >= HypClass.STRONG, v.label


def _repeated_weak():
    v = classify_direction(repeated_operator(np.diag([1.0, 2.0])), [1.0])
    sd = v.spectral
    ok = v.cls == HypClass.WEAK and sd.alg_mult == (2, 2) and sd.geo_mult == (1, 1)
    return ok, f"{v.label} eigenvalues={np.round(sd.eigenvalues.real, 12).tolist()}"


def _maxwell(cfg, k, expect_cls, expect_alg=None):
    v = classify_direction(mx.maxwell_system(cfg), k)
    sd = v.spectral
    ok = (v.cls >= HypClass.STRONG) if expect_cls == HypClass.STRONG else v.cls == expect_cls
    if expect_alg is not None:
        ok = ok and sorted(sd.alg_mult) == sorted(expect_alg)
    return ok, f"{v.label} q={sd.alg_mult} s={sd.geo_mult}"


CHECKS = {
    "almost_wave(2,3) strict, V1=Q=1, D1=3, D2=2": _almost_wave_strict,
    "almost_wave(2,2) weak, q=2, s=1": _almost_wave_weak,
    "scalar wave strong": _wave_strong,
    "squared operator diag(1,2) weak": _repeated_weak,
    "maxwell all-Minkowski strong, q=s=4": lambda: _maxwell(
        mx.minkowski_config(), [1, 0, 0], HypClass.STRONG, (4, 4)),
    "maxwell separated cones strong": lambda: _maxwell(
        mx.separated_cones_config(), [0.6, 0.0, 0.8], HypClass.STRONG, (2, 2, 1, 1, 1, 1)),
    "maxwell shared ghat/gtilde cone weak": lambda: _maxwell(
        mx.shared_hat_tilde_config(), [1, 0, 0], HypClass.WEAK),
    "maxwell degenerate ghat weak": lambda: _maxwell(
        mx.degenerate_hat_config(), [0, 0, 1], HypClass.WEAK),
}


def run_selftest() -> list[Check]:
    out = []
    for name, fn in CHECKS.items():
        try:
            ok, detail = fn()
        except Exception as exc:  # report, keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(Check(name, bool(ok), detail))
    return out
