import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import Polynomial
from scipy.spatial.transform import Rotation

from conftest import random_khat, random_system
from pencilhyp.errors import NotFullySecondOrder, SingularGauge
from pencilhyp.matcore import det_poly
from pencilhyp.pencil import (CompanionPencil, SecondOrderSystem, build_companion,
                              build_from_ft2s, build_quadratic, decompose,
                              det_identity_residual, ft2s_companion)

seeds = st.integers(0, 2**32 - 1)


def test_coefficients_are_symmetrised():
    rng = np.random.default_rng(0)
    c = rng.standard_normal((3, 3, 2, 2))
    c[0, 0] += 3 * np.eye(2)
    sym = SecondOrderSystem(c)
    assert np.allclose(sym.coeffs, sym.coeffs.transpose(1, 0, 2, 3))
    l = rng.standard_normal(3)
    direct = np.einsum("abij,a,b->ij", c, l, l)
    assert np.allclose(sym.symbol(l), direct)


def test_singular_time_block_is_rejected():
    c = np.zeros((2, 2, 2, 2))
    c[0, 0] = np.diag([1.0, 0.0])
    c[1, 1] = np.eye(2)
    with pytest.raises(NotFullySecondOrder):
        SecondOrderSystem(c)


def test_decompose_reproduces_symbol():
    rng = np.random.default_rng(1)
    sys_ = random_system(rng, 3, 4)
    k = random_khat(rng, 3)
    a, b, c = decompose(sys_, k)
    kc = sys_.spatial_covector(k)
    for lam in (0.0, 0.7, -1.3):
        assert np.allclose(sys_.symbol(lam * sys_.n + kc), lam * lam * a + lam * b + c)


def test_non_unit_direction_is_rejected():
    sys_ = random_system(np.random.default_rng(2), 2, 3)
    with pytest.raises(ValueError):
        build_quadratic(sys_, [1.0, 1.0])


@settings(max_examples=30, deadline=None)
@given(seed=seeds, n=st.integers(1, 6), d=st.integers(2, 4))
def test_det_companion_equals_det_pencil(seed, n, d):
    # Three routes: det_poly on M, det_poly on S, characteristic polynomial of -m0.
    rng = np.random.default_rng(seed)
    p = build_quadratic(random_system(rng, n, d), random_khat(rng, d - 1))
    comp = build_companion(p)
    pm = det_poly(comp, 2 * n)
    ps = det_poly(p, 2 * n)
    charpoly = Polynomial(np.poly(-comp.m0)[::-1].real)
    ref = max(1.0, np.max(np.abs(charpoly.coef)))
    assert np.max(np.abs(pm.coef - ps.coef)) <= 1e-8 * ref
    assert np.max(np.abs(ps.coef - charpoly.coef)) <= 1e-8 * ref
    assert det_identity_residual(p) <= 1e-8 * ref


@settings(max_examples=20, deadline=None)
@given(seed=seeds, factor=st.floats(0.01, 100.0))
def test_scaling_leaves_pencil_unchanged(seed, factor):
    rng = np.random.default_rng(seed)
    sys_ = random_system(rng, 3, 3)
    k = random_khat(rng, 2)
    p, q = build_quadratic(sys_, k), build_quadratic(sys_.scaled(factor), k)
    assert np.allclose(p.bt, q.bt, atol=1e-10 * p.scale)
    assert np.allclose(p.ct, q.ct, atol=1e-10 * p.scale)


@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_rotation_covariance(seed):
    rng = np.random.default_rng(seed)
    sys_ = random_system(rng, 2, 4)
    r = Rotation.random(random_state=seed % 2**31).as_matrix()
    lam = np.eye(4)
    lam[1:, 1:] = r
    rotated = SecondOrderSystem(np.einsum("ac,bd,cdij->abij", lam, lam, sys_.coeffs))
    k = random_khat(rng, 3)
    p, q = build_quadratic(sys_, k), build_quadratic(rotated, r @ k)
    assert np.allclose(p.bt, q.bt, atol=1e-10 * p.scale)
    assert np.allclose(p.ct, q.ct, atol=1e-10 * p.scale)


def test_companion_layout_validation():
    with pytest.raises(ValueError):
        CompanionPencil(np.eye(3))
    with pytest.raises(ValueError):
        CompanionPencil(np.eye(4))


def test_companion_eigenvalues_are_pencil_roots():
    rng = np.random.default_rng(3)
    p = build_quadratic(random_system(rng, 3, 3), random_khat(rng, 2))
    w = np.linalg.eigvals(-build_companion(p).m0)
    for z in w:
        s = np.linalg.svd(p(z), compute_uv=False)
        assert s[-1] <= 1e-9 * p.scale_at(z)


def _ft2s(rng, n, sdim):
    a1 = rng.standard_normal((sdim, n, n))
    a2 = rng.standard_normal((n, n)) + 2 * np.eye(n)
    b1 = rng.standard_normal((sdim, sdim, n, n))
    b2 = rng.standard_normal((sdim, n, n))
    return a1, a2, b1, b2


@settings(max_examples=25, deadline=None)
@given(seed=seeds, n=st.integers(1, 4), sdim=st.integers(1, 3))
def test_ft2s_pencil_matches_first_order_route(seed, n, sdim):
    rng = np.random.default_rng(seed)
    a1, a2, b1, b2 = _ft2s(rng, n, sdim)
    k = random_khat(rng, sdim)
    p = build_from_ft2s(a1, a2, b1, b2, k)
    first = ft2s_companion(a1, a2, b1, b2, k)
    # Eigenvalues of the first-order block matrix, compared as a determinant.
    ps = det_poly(p, 2 * n)
    pf = det_poly(first, 2 * n)
    ref = max(1.0, np.max(np.abs(ps.coef)))
    assert np.max(np.abs(ps.coef - pf.coef)) <= 1e-8 * ref


def test_ft2s_singular_gauge():
    rng = np.random.default_rng(4)
    a1, _, b1, b2 = _ft2s(rng, 2, 1)
    with pytest.raises(SingularGauge):
        build_from_ft2s(a1, np.array([[1.0, 1.0], [1.0, 1.0]]), b1, b2, [1.0])
