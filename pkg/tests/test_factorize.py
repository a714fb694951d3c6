import numpy as np
import pytest

from conftest import well_conditioned
from pencilhyp.eigenstruct import spectrum
from pencilhyp.errors import ComplexSpeeds, Defective, ZeroSpeed
from pencilhyp.factorize import (NORM_NAMES, b_zero_path, build_factors, factorize,
                                 select_eigenbasis, verify_factorization)
from pencilhyp.models import almost_wave, wave
from pencilhyp.pencil import QuadraticPencil, build_companion, build_quadratic


def random_factor_data(rng, n):
    v1 = well_conditioned(rng, n, 1e3)
    q = well_conditioned(rng, n, 1e3)
    d1 = rng.uniform(1.0, 3.0, n)
    d2 = rng.uniform(-3.0, -1.0, n)
    return v1, q, d1, d2


def pencil_from(v1, q, d1, d2):
    a1, a2 = build_factors(v1, q, d1, d2)
    return QuadraticPencil(-(a1 + a2), a2 @ a1), a1, a2


def test_almost_wave_factors():
    p = build_quadratic(almost_wave(2, 3), [1.0])
    f = factorize(p)
    assert f.path == "general"
    assert np.allclose([f.v1[0, 0], f.q[0, 0], f.d1[0], f.d2[0]], [1, 1, 3, 2])
    assert np.allclose(f.a1, [[3.0]]) and np.allclose(f.a2, [[2.0]])
    assert abs(f.coupling[0, 0]) == pytest.approx(1.0)
    assert np.allclose(f.p, [[1, 1], [3, 2]])


def test_round_trip_random_factors():
    rng = np.random.default_rng(11)
    for _ in range(30):
        n = int(rng.integers(1, 5))
        v1, q, d1, d2 = random_factor_data(rng, n)
        p, a1, a2 = pencil_from(v1, q, d1, d2)
        f = factorize(p)
        scale = p.scale
        assert np.linalg.norm(f.a2 @ f.a1 - p.ct, 2) <= 1e-6 * scale
        assert np.linalg.norm(f.a1 + f.a2 + p.bt, 2) <= 1e-6 * scale
        res = verify_factorization(p, f)
        assert res["product_form"] <= 1e-8
        assert f.residuals["similarity"] <= 1e-8
        comp = build_companion(p)
        d = np.concatenate([f.d1, f.d2])
        for lam in (0.3, -1.1):
            assert np.allclose(comp(lam) @ f.p, f.p * (lam - d)[None, :],
                               atol=1e-8 * np.linalg.norm(f.p, 2) * scale)


def test_factorization_changes_with_partition_but_not_product():
    rng = np.random.default_rng(12)
    v1, q, d1, d2 = random_factor_data(rng, 2)
    p, a1, a2 = pencil_from(v1, q, d1, d2)
    f = factorize(p)
    for lam in (0.5, 2.0):
        lhs = p(lam)
        rhs = (lam * np.eye(2) - f.a2) @ (lam * np.eye(2) - f.a1)
        assert np.allclose(lhs, rhs, atol=1e-10 * p.scale_at(lam))


def test_defective_pencil_cannot_be_factorised():
    p = build_quadratic(almost_wave(2, 2), [1.0])
    with pytest.raises(Defective):
        factorize(p)


def test_complex_speeds():
    p = QuadraticPencil([[1.0]], [[1.0]])
    with pytest.raises(ComplexSpeeds):
        select_eigenbasis(spectrum(p))


def test_b_zero_path_on_wave():
    p = build_quadratic(wave([1.0, 2.0], components=2), [0.6, 0.8])
    f = factorize(p)
    assert f.path == "b_zero"
    assert np.allclose(f.q, np.eye(2)) and np.allclose(f.d2, -f.d1)
    speed = np.hypot(0.6, 1.6)
    assert np.allclose(f.d1, [speed, speed])
    assert np.allclose(f.a2, -f.a1)
    assert set(f.uniformity_norms()) == set(NORM_NAMES)


def test_b_zero_coupling_norm_closed_form():
    # d_t^2 - d_x^2 in two space dimensions: |(Q D2 - D1 Q)^-1| = 1/(2|kx|).
    sys_ = wave([1.0, 0.0])
    for theta in (0.1, 0.7, 1.3):
        k = [np.cos(theta), np.sin(theta)]
        f = factorize(build_quadratic(sys_, k))
        want = 1.0 / (2.0 * abs(np.cos(theta)))
        assert f.uniformity_norms()["qd2_minus_d1q_inv"] == pytest.approx(want, rel=1e-8)


def test_b_zero_failures():
    with pytest.raises(ZeroSpeed):
        b_zero_path(build_quadratic(wave([1.0, 0.0]), [0.0, 1.0]))
    with pytest.raises(ComplexSpeeds):
        b_zero_path(QuadraticPencil(np.zeros((2, 2)), [[0.0, 1.0], [-1.0, 0.0]]))
    with pytest.raises(ZeroSpeed):
        b_zero_path(QuadraticPencil([[0.0]], [[1.0]]))
