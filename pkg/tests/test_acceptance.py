"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL criterion N`` line; the lines are printed
in the pytest terminal summary and when this file is run as a script.
"""
import numpy as np
import pytest
from numpy.polynomial import Polynomial
from scipy.optimize import linear_sum_assignment

from conftest import random_khat, random_system, well_conditioned
from pencilhyp.classify import (HypClass, ScanConfig, classify_direction, classify_system,
                                sample_directions, uniformity_scan)
from pencilhyp.eigenstruct import kernel_correspondence, spectrum
from pencilhyp.errors import Defective
from pencilhyp.factorize import build_factors, factorize
from pencilhyp.matcore import det_poly
from pencilhyp.models import almost_wave, repeated_operator, wave
from pencilhyp.models import maxwell as mx
from pencilhyp.pencil import QuadraticPencil, SecondOrderSystem, build_companion, build_quadratic

RESULTS = {}


def record(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    RESULTS[number] = line
    print(line)
    assert ok, line


def test_criterion_1_determinant_identity():
    rng = np.random.default_rng(1001)
    worst = 0.0
    for _ in range(100):
        n, d = int(rng.integers(1, 7)), int(rng.integers(2, 5))
        p = build_quadratic(random_system(rng, n, d), random_khat(rng, d - 1))
        comp = build_companion(p)
        pm = det_poly(comp, 2 * n)
        ps = det_poly(p, 2 * n)
        ref = max(np.max(np.abs(pm.coef)), np.max(np.abs(ps.coef)))
        worst = max(worst, float(np.max(np.abs(pm.coef - ps.coef)) / ref))
    record(1, worst <= 1e-8, f"det M = det S over 100 systems, worst relative coefficient "
                             f"difference {worst:.2e} (limit 1e-8)")


def _correspondence_pencils(rng):
    for _ in range(150):
        n, d = int(rng.integers(1, 7)), int(rng.integers(2, 5))
        yield build_quadratic(random_system(rng, n, d), random_khat(rng, d - 1))
    for i in range(50):
        # Multiple eigenvalues: squared first-order symbols (defective) and
        # symbols with a repeated semisimple speed.
        n = int(rng.integers(2, 5))
        v = well_conditioned(rng, n, 50)
        mu = rng.uniform(-2, 2, n)
        mu[1] = mu[0]
        bk = v @ np.diag(mu) @ np.linalg.inv(v)
        if i % 2:
            yield QuadraticPencil(2 * bk, bk @ bk)
        else:
            yield QuadraticPencil(np.zeros((n, n)), -(bk @ bk))


def test_criterion_2_kernel_correspondence():
    rng = np.random.default_rng(1002)
    worst, mismatches, points = 0.0, 0, 0
    for p in _correspondence_pencils(rng):
        for z in spectrum(p).eigenvalues:
            rep = kernel_correspondence(p, z)
            points += 1
            mismatches += rep.dim_m != rep.dim_s
            worst = max(worst, rep.stacked_residual, rep.form_residual)
    record(2, mismatches == 0 and worst <= 1e-8,
           f"{points} eigenvalues over 200 pencils, {mismatches} kernel dimension "
           f"mismatches, worst stacked residual {worst:.2e} (limit 1e-8)")


def test_criterion_3_almost_wave():
    strict = classify_direction(almost_wave(2, 3), [1.0])
    f = strict.factorization
    sd = strict.spectral
    ok_strict = (strict.cls == HypClass.STRICT
                 and np.allclose(np.sort(sd.eigenvalues.real), [2.0, 3.0], atol=1e-10, rtol=0)
                 and np.allclose([f.v1[0, 0], f.q[0, 0]], [1.0, 1.0], atol=1e-10, rtol=0)
                 and abs(abs(f.coupling[0, 0]) - 1.0) <= 1e-10)
    weak = classify_direction(almost_wave(2, 2), [1.0])
    wd = weak.spectral
    ok_weak = (weak.cls == HypClass.WEAK and wd.alg_mult == (2,) and wd.geo_mult == (1,)
               and abs(wd.eigenvalues[0] - 2.0) <= 1e-10)
    record(3, ok_strict and ok_weak,
           f"(2,3): {strict.label}, eigenvalues {np.round(sd.eigenvalues.real, 12).tolist()}, "
           f"V1={f.v1[0, 0]:.12g}, Q={f.q[0, 0]:.12g}, |D1Q-QD2|={abs(f.coupling[0, 0]):.12g}; "
           f"(2,2): {weak.label}, q={wd.alg_mult}, s={wd.geo_mult}, "
           f"eigenvalue {wd.eigenvalues[0].real:.12g}")


def test_criterion_4_squared_operators():
    rng = np.random.default_rng(1004)
    bad, directions, checked = [], 0, 0
    for trial in range(50):
        n, sdim = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        v = well_conditioned(rng, n, 100)
        bs = np.array([v @ np.diag(rng.uniform(-2, 2, n)) @ np.linalg.inv(v)
                       for _ in range(sdim)])
        sys_ = repeated_operator(bs)
        rep = classify_system(sys_, ScanConfig(count=16))
        for verdict in rep.verdicts:
            directions += 1
            sd = verdict.spectral
            mu = np.sort(np.linalg.eigvals(np.tensordot(verdict.khat, bs, 1)).real)
            distinct = n == 1 or np.min(np.diff(mu)) >= 1e-2
            ok = verdict.cls == HypClass.WEAK
            if distinct:
                checked += 1
                ok = ok and all(q == 2 * s for q, s in zip(sd.alg_mult, sd.geo_mult))
            try:
                factorize(build_quadratic(sys_, verdict.khat), sd=sd)
                ok = False
            except Defective:
                pass
            if not ok:
                bad.append((trial, verdict.label, sd.alg_mult, sd.geo_mult))
    record(4, not bad, f"{directions} directions over 50 systems all weak with Defective "
                       f"factorisation; s = q/2 at {checked} well-separated directions; "
                       f"{len(bad)} failures")


def test_criterion_5_round_trip():
    rng = np.random.default_rng(1005)
    worst_alg, worst_sim, cases = 0.0, 0.0, 0
    while cases < 100:
        n = int(rng.integers(1, 6))
        v1, q = well_conditioned(rng, n, 1e3), well_conditioned(rng, n, 1e3)
        d = rng.uniform(-3, 3, 2 * n)
        if n > 1 and np.min(np.diff(np.sort(d))) < 0.05:
            continue
        d1, d2 = d[:n], d[n:]
        coupling = d1[:, None] * q - q * d2[None, :]
        if np.linalg.svd(coupling, compute_uv=False)[-1] < 1e-2 * np.linalg.norm(coupling, 2):
            continue
        cases += 1
        a1, a2 = build_factors(v1, q, d1, d2)
        p = QuadraticPencil(-(a1 + a2), a2 @ a1)
        f = factorize(p)
        scale = p.scale
        worst_alg = max(worst_alg, np.linalg.norm(f.a2 @ f.a1 - p.ct, 2) / scale,
                        np.linalg.norm(f.a1 + f.a2 + p.bt, 2) / scale)
        comp = build_companion(p)
        dd = np.concatenate([f.d1, f.d2])
        pnorm = np.linalg.norm(f.p, 2)
        for lam in rng.uniform(-3, 3, 5):
            diff = comp(lam) @ f.p - f.p * (lam - dd)[None, :]
            worst_sim = max(worst_sim, np.linalg.norm(diff, 2)
                            / (max(1.0, np.linalg.norm(comp(lam), 2)) * pnorm))
    record(5, worst_alg <= 1e-6 and worst_sim <= 1e-6,
           f"100 factor sets, worst A2A1/A1+A2 residual {worst_alg:.2e}, worst M(lam)P "
           f"identity residual {worst_sim:.2e} (limit 1e-6)")


def test_criterion_6_vanishing_mixed_block():
    rng = np.random.default_rng(1006)
    ok_pos = True
    for i in range(20):
        n = int(rng.integers(1, 5))
        a = well_conditioned(rng, n, 20)
        speeds2 = rng.uniform(0.5, 4.0, n)
        if i % 2 and n > 1:
            speeds2[1] = speeds2[0]
        c = np.zeros((2, 2, n, n))
        c[0, 0] = a
        c[1, 1] = -a @ np.diag(speeds2)
        sys_ = SecondOrderSystem(c)
        v = classify_direction(sys_, [1.0])
        f = v.factorization
        ok_pos &= (v.cls >= HypClass.STRONG and f is not None and f.path == "b_zero"
                   and np.allclose(f.q, np.eye(n)) and np.allclose(f.d2, -f.d1))
    degenerate = wave([1.0, 0.0])
    weak = classify_direction(degenerate, [0.0, 1.0])
    thetas = np.linspace(0.05, np.pi / 2 - 0.05, 24)
    scan = uniformity_scan(degenerate, np.column_stack([np.cos(thetas), np.sin(thetas)]))
    errs = [abs(v.uniformity["qd2_minus_d1q_inv"] * 2.0 * abs(v.khat[0]) - 1.0)
            for v in scan.verdicts]
    worst = max(errs)
    record(6, ok_pos and weak.cls == HypClass.WEAK and worst <= 0.05,
           f"20 positive diagonal systems strong with Q=1, D2=-D1: {ok_pos}; "
           f"dt^2-dx^2 at (0,1): {weak.label}; |(QD2-D1Q)^-1| vs 1/(2|kx|) worst "
           f"relative error {worst:.2e} over 24 directions (limit 5%)")


def test_criterion_7_maxwell_closed_forms():
    rng = np.random.default_rng(7)
    dirs = sample_directions(3, 16)
    worst_e, worst_c = 0.0, 0.0
    for c in range(200):
        cfg = mx.random_config(rng, antisymmetric=0.3 if c % 2 else 0.0)
        sys_ = mx.maxwell_system(cfg)
        for k in dirs:
            p = build_quadratic(sys_, k)
            raw = spectrum(p).raw
            ana = mx.maxwell_eigenvalues(cfg, k).with_multiplicity()
            cost = np.abs(raw[:, None] - ana[None, :])
            r, cc = linear_sum_assignment(cost)
            worst_e = max(worst_e, float(np.max(cost[r, cc])))
            pn = det_poly(p, 8)
            pa = mx.det_product(cfg, k)
            worst_c = max(worst_c, float(np.max(np.abs(pn.coef - pa.coef))
                                         / np.max(np.abs(pa.coef))))
    record(7, worst_e <= 1e-8 and worst_c <= 1e-7,
           f"200 configs x 16 directions, worst eigenvalue error {worst_e:.2e} (limit 1e-8), "
           f"worst relative determinant coefficient error {worst_c:.2e} (limit 1e-7)")


def test_criterion_8_maxwell_cases():
    mink = classify_direction(mx.maxwell_system(mx.minkowski_config()), [0.6, 0.0, 0.8])
    md = mink.spectral
    ok_mink = (mink.cls == HypClass.STRONG and md.alg_mult == (4, 4) and md.geo_mult == (4, 4)
               and np.allclose(md.eigenvalues, [1.0, -1.0], atol=1e-10))
    sep = classify_direction(mx.maxwell_system(mx.separated_cones_config()), [0.6, 0.0, 0.8])
    ok_sep = sep.cls >= HypClass.STRONG and sorted(sep.spectral.alg_mult) == [1, 1, 1, 1, 2, 2]
    cfg4 = mx.shared_hat_tilde_config()
    k4 = [1.0, 0.0, 0.0]
    weak = classify_direction(mx.maxwell_system(cfg4), k4)
    wd = weak.spectral
    shared = mx.maxwell_eigenvalues(cfg4, k4).hat_plus
    i = int(np.argmin(np.abs(wd.eigenvalues - shared)))
    block = mx.maxwell_block_structure(cfg4, k4)
    ok4 = (weak.cls == HypClass.WEAK and (wd.alg_mult[i], wd.geo_mult[i]) == (2, 1)
           and block.case == "Case4" and block.product_residual <= 1e-8
           and block.coupling_det <= 1e-8)
    record(8, ok_mink and ok_sep and ok4,
           f"Minkowski {mink.label} q={md.alg_mult} s={md.geo_mult}; separated cones "
           f"{sep.label} q={sep.spectral.alg_mult}; shared cone {weak.label} with q=2, "
           f"s={wd.geo_mult[i]} at {shared:.6g}, product residual {block.product_residual:.2e}, "
           f"|det V1(D1Q-QD2)| = {block.coupling_det:.2e}")


def test_criterion_9_degenerate_signature():
    v = classify_direction(mx.maxwell_system(mx.degenerate_hat_config()), [0.0, 0.0, 1.0])
    sd = v.spectral
    i = int(np.argmin(np.abs(sd.eigenvalues)))
    ok = (v.cls == HypClass.WEAK and abs(sd.eigenvalues[i]) <= 1e-7
          and (sd.alg_mult[i], sd.geo_mult[i]) == (2, 1))
    record(9, ok, f"ghat signature (-,+,+,0) along z: {v.label}, root "
                  f"{sd.eigenvalues[i].real:.2e} with q={sd.alg_mult[i]}, s={sd.geo_mult[i]}")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s"]))
