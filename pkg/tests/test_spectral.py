import math

import numpy as np
import pytest

from draws import case_params
from dqwalk.decompose import PairParams, grover_family_matrix, grover_family_params, lift_coin, pair_from_params, random_pair_params
from dqwalk.spectral import (
    Lemma2Case,
    char_poly_grover_family,
    char_poly_numeric,
    classify_lemma2,
    eigen_system_grover_family,
    fourier_coin,
    grover_eigenvalues,
    grover_log_derivatives,
    grover_p,
    grover_projections,
    has_pm1_eigenvalues,
    lemma2_conditions,
    momentum_grid,
)

S = 1 / math.sqrt(2)


def test_fourier_coin_phases():
    m = grover_family_matrix(0.7)
    np.testing.assert_array_equal(fourier_coin(m, 0.0), m)
    np.testing.assert_allclose(fourier_coin(m, math.pi), -m, atol=1e-15)
    u = fourier_coin(m, 0.3)
    np.testing.assert_allclose(u[0], np.exp(0.3j) * m[0])
    np.testing.assert_allclose(u[1], np.exp(-0.3j) * m[1])
    np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-14)


def test_fourier_coin_at_half_pi():
    u = fourier_coin(grover_family_matrix(math.pi / 2), math.pi / 2)
    vals = np.linalg.eigvals(u)
    expected = [1, -1, 1j * math.sqrt(1), -1j]  # p cos k = 0 at k = pi/2
    for z in expected:
        assert np.min(np.abs(vals - z)) < 1e-12


def test_char_poly_numeric_against_roots():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    cp = char_poly_numeric(m)
    np.testing.assert_allclose(cp.coeffs, np.poly(np.linalg.eigvals(m)), atol=1e-10)


def test_char_poly_closed_form_matches_determinant():
    rng = np.random.default_rng(11)
    for _ in range(10):
        p = random_pair_params(rng)
        coin = lift_coin(pair_from_params(p))
        for k in np.linspace(-math.pi, math.pi, 32, endpoint=False):
            closed = char_poly_grover_family(p, k)
            assert closed.coeffs[0] == 1 and closed.coeffs[4] == -1
            np.testing.assert_allclose(closed.coeffs, char_poly_numeric(fourier_coin(coin, k)).coeffs, atol=1e-9)
    p = random_pair_params(rng)
    np.testing.assert_allclose(
        char_poly_grover_family(p, 0.7).coeffs,
        char_poly_numeric(fourier_coin(lift_coin(pair_from_params(p)), 0.7)).coeffs,
        atol=1e-9,
    )


def test_char_poly_quadratic_coefficient():
    p = random_pair_params(np.random.default_rng(1))
    assert char_poly_grover_family(p, 0.0).coeffs[2] == 0
    for k in np.linspace(-3, 3, 13):
        assert char_poly_grover_family(grover_family_params(0.9), k).coeffs[2] == pytest.approx(0, abs=1e-15)


def test_classify_examples():
    assert classify_lemma2(grover_family_params(0.2)) == Lemma2Case.CASE3
    assert classify_lemma2(PairParams(math.pi / 2, 0, 1, 0.6, 0.8)) == Lemma2Case.CASE1
    assert classify_lemma2(random_pair_params(np.random.default_rng(5))) == Lemma2Case.NONE


@pytest.mark.parametrize("case", ["case1", "case2", "case3", "case4"])
def test_constructed_cases_are_recognized(case):
    rng = np.random.default_rng(hash(case) % 2**32)
    for _ in range(10):
        p = case_params(rng, case)
        p.validate()
        assert classify_lemma2(p) == Lemma2Case(case)
        assert lemma2_conditions(p).holds(1e-10)


def test_grover_family_has_pm1_on_grid():
    ok, dp, dm = has_pm1_eigenvalues(grover_family_matrix(1.1))
    assert ok and dp < 1e-12 and dm < 1e-12
    ok, dp, dm = has_pm1_eigenvalues(lift_coin(pair_from_params(random_pair_params(np.random.default_rng(2)))))
    assert not ok and max(dp, dm) > 1e-8


def test_eigenvalues_at_half_pi():
    assert grover_p(math.pi / 2) == pytest.approx(-S)
    es = eigen_system_grover_family(math.pi / 2, 0.0)
    assert es.values[2] == pytest.approx(complex(-S, S), abs=1e-15)
    assert es.values[3] == pytest.approx(complex(-S, -S), abs=1e-15)
    np.testing.assert_allclose(es.log_derivatives, 0, atol=1e-15)


def test_p_zero_degeneracy():
    for k in np.linspace(-3, 3, 7):
        vals = grover_eigenvalues(math.pi / 4, k)
        np.testing.assert_allclose(vals, [1, -1, 1j, -1j], atol=1e-15)
        np.testing.assert_allclose(grover_log_derivatives(math.pi / 4, k), 0, atol=1e-15)


@pytest.mark.parametrize("delta", [0.3, math.pi / 2, -math.pi / 6, 2.5, math.pi / 4, 3 * math.pi / 4, -math.pi / 4, -3 * math.pi / 4, 0.0])
def test_eigen_system_residuals_and_orthonormality(delta):
    coin = grover_family_matrix(delta)
    for k in np.concatenate([momentum_grid(64), [0.0, math.pi / 2, -math.pi]]):
        es = eigen_system_grover_family(delta, k)
        assert np.max(es.residuals(coin)) <= 1e-9
        np.testing.assert_allclose(np.abs(es.values), 1, atol=1e-12)
        np.testing.assert_allclose(es.vectors.conj().T @ es.vectors, np.eye(4), atol=1e-9)
        np.testing.assert_allclose(es.values[:2], [1, -1], atol=1e-9)


@pytest.mark.parametrize("delta", [0.3, -math.pi / 6, 2.5])
def test_log_derivatives_match_phase_derivative(delta):
    # D lambda / lambda = i lambda'/lambda = -d(arg lambda)/dk, by central differences
    h = 1e-6
    for k in np.linspace(-3, 3, 11):
        lp = grover_eigenvalues(delta, k + h)
        lm = grover_eigenvalues(delta, k - h)
        fd = -np.angle(lp / lm) / (2 * h)
        np.testing.assert_allclose(grover_log_derivatives(delta, k), fd, atol=1e-7)


def test_projections_sum_to_norm():
    rng = np.random.default_rng(9)
    phi = rng.normal(size=4) + 1j * rng.normal(size=4)
    phi /= np.linalg.norm(phi)
    ks = np.linspace(-math.pi, math.pi, 101)
    for delta in (0.3, -math.pi / 6, 3 * math.pi / 4):
        w = grover_projections(delta, phi, ks)
        assert np.all(w > -1e-12)
        np.testing.assert_allclose(w.sum(axis=1), 1, atol=1e-12)
        for i in (0, 37, 100):
            es = eigen_system_grover_family(delta, ks[i])
            np.testing.assert_allclose(w[i], np.abs(es.vectors.conj().T @ phi) ** 2, atol=1e-9)
