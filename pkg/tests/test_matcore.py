import numpy as np
import pytest
from hypothesis import given, strategies as st

from qig.matcore import (DomainError, PositivityError, TraceError, ValidationError, as_hermitian,
                         center, frechet_derivative, haar_unitary, matrix_function, mix_to_floor,
                         random_density, random_hermitian, spectral_decompose, trace_norm,
                         trial_seed, validate_density)
from strategies import dims, seeds

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


def test_pauli_x_spectrum():
    w, U = spectral_decompose(PAULI_X)
    np.testing.assert_allclose(w, [-1, 1], atol=1e-15)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(2), atol=1e-12)


def test_diagonal_spectrum_and_basis():
    w, U = spectral_decompose(np.diag([1.0, 2.0, 3.0]))
    np.testing.assert_allclose(w, [1, 2, 3])
    np.testing.assert_allclose(np.abs(U), np.eye(3), atol=1e-15)


def test_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        spectral_decompose(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValidationError):
        as_hermitian(np.ones((2, 3)))
    with pytest.raises(ValidationError):
        as_hermitian(np.array([[np.nan, 0], [0, 1]]))


def test_hermitian_tolerance_scales_with_size():
    H = np.diag([1e6, 1.0]).astype(complex)
    H[0, 1] = 1e-8
    as_hermitian(H)     # 1e-8 asymmetry on entries of size 1e6 is roundoff


@given(seeds, dims)
def test_reconstruction(seed, n):
    H = random_hermitian(n, np.random.default_rng(seed))
    sd = spectral_decompose(H)
    assert np.all(np.diff(sd.eigenvalues) >= 0)
    assert np.linalg.norm(sd.reconstruct() - H) <= 1e-10 * np.linalg.norm(H)
    np.testing.assert_allclose(sd.basis.conj().T @ sd.basis, np.eye(n), atol=1e-12)


def test_matrix_function_examples():
    np.testing.assert_allclose(matrix_function(PAULI_X, np.square), np.eye(2), atol=1e-14)
    e = np.e
    np.testing.assert_allclose(matrix_function(np.diag([e, e * e]), np.log), np.diag([1.0, 2.0]),
                               atol=1e-14)
    with pytest.raises(DomainError):
        matrix_function(np.diag([1.0, -1.0]), np.log)


@given(seeds, dims)
def test_exp_log_roundtrip(seed, n):
    H = random_hermitian(n, np.random.default_rng(seed))
    back = matrix_function(matrix_function(H, np.exp), np.log)
    assert np.linalg.norm(back - H) <= 1e-10 * max(1, np.linalg.norm(H))


@given(seeds, dims, st.lists(st.floats(-2, 2), min_size=4, max_size=4))
def test_cubic_polynomials(seed, n, c):
    H = random_hermitian(n, np.random.default_rng(seed))
    direct = c[0] * np.eye(n) + c[1] * H + c[2] * H @ H + c[3] * H @ H @ H
    via = matrix_function(H, lambda w: c[0] + c[1] * w + c[2] * w**2 + c[3] * w**3)
    assert np.linalg.norm(via - direct) <= 1e-10 * max(1.0, np.linalg.norm(direct))


@given(seeds, dims)
def test_frechet_derivative_matches_differences(seed, n):
    rng = np.random.default_rng(seed)
    H, E = random_hermitian(n, rng), random_hermitian(n, rng)
    h = 1e-6
    fd = (matrix_function(H + h * E, np.exp) - matrix_function(H - h * E, np.exp)) / (2 * h)
    exact = frechet_derivative(H, E, np.exp, np.exp)
    assert np.linalg.norm(fd - exact) <= 1e-6 * np.linalg.norm(exact)


def test_frechet_derivative_degenerate_spectrum():
    E = random_hermitian(3, np.random.default_rng(0))
    # at H = 0, d exp = E exactly
    np.testing.assert_allclose(frechet_derivative(np.zeros((3, 3)), E, np.exp, np.exp), E,
                               atol=1e-14)


def test_trace_norm_examples():
    assert trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0)
    assert trace_norm(np.diag([1.0, 0.0]) - np.diag([0.0, 1.0])) == pytest.approx(2.0)


@given(seeds, dims)
def test_trace_norm_triangle(seed, n):
    rng = np.random.default_rng(seed)
    A, B = random_hermitian(n, rng), random_hermitian(n, rng)
    assert trace_norm(A + B) <= trace_norm(A) + trace_norm(B) + 1e-10
    assert trace_norm(A) == pytest.approx(np.abs(np.linalg.eigvalsh(A)).sum(), rel=1e-12)


def test_validate_density_examples():
    validate_density(np.diag([0.5, 0.5]))
    with pytest.raises(TraceError):
        validate_density(np.diag([0.7, 0.4]))
    with pytest.raises(PositivityError):
        validate_density(np.diag([1.2, -0.2]))


def test_random_density_contract():
    rho = random_density(2, 42)
    validate_density(rho, floor=1e-6)
    np.testing.assert_array_equal(random_density(3, 7), random_density(3, 7))
    assert np.linalg.norm(random_density(3, 1) - random_density(3, 2)) > 0
    with pytest.raises(ValueError):
        random_density(0, 1)


@given(seeds, dims)
def test_random_density_invariants(seed, n):
    rho = random_density(n, seed)
    w = spectral_decompose(rho).eigenvalues
    assert abs(w.sum() - 1) < 1e-10
    assert w[0] >= 1e-3 - 1e-15


@given(seeds, dims)
def test_haar_unitary(seed, n):
    U = haar_unitary(n, np.random.default_rng(seed))
    np.testing.assert_allclose(U.conj().T @ U, np.eye(n), atol=1e-12)


def test_mix_to_floor():
    rho = np.diag([1.0, 0.0]).astype(complex)
    mixed, w = mix_to_floor(rho, 1e-3)
    assert np.linalg.eigvalsh(mixed)[0] == pytest.approx(1e-3)
    assert 0 < w < 1
    same, w0 = mix_to_floor(np.eye(2) / 2, 1e-3)
    assert w0 == 0.0
    with pytest.raises(ValueError):
        mix_to_floor(rho, 0.6)


def test_trial_seed_is_stable_and_distinct():
    assert trial_seed(7, 3) == trial_seed(7, 3)
    assert len({trial_seed(7, i) for i in range(1000)}) == 1000
    assert trial_seed(7, 0) != trial_seed(8, 0)


def test_center():
    rho = np.diag([0.75, 0.25])
    Z = np.diag([1.0, -1.0])
    Xc, mean = center(rho, Z)
    assert mean == pytest.approx(0.5)
    assert abs(np.trace(rho @ Xc)) < 1e-15
