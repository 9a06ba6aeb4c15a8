import numpy as np
import pytest
from hypothesis import given, strategies as st

from qig import channels as ch
from qig.classical import f_divergence, pinsker_gap, shifted
from qig.matcore import DomainError, ValidationError, haar_unitary, random_density, random_hermitian
from qig.quasient import (basis_diagonal, generalized_covariance, lieb_functional,
                          modular_superoperator, quantum_pinsker_gap, quasi_entropy,
                          quasi_entropy_oracle, relative_entropy, relative_modular_data,
                          symmetrized_covariance)
from qig.stdfunc import alpha_divergence, registry, sld, standard_registry, xlogx
from oracles import alpha_entropy, umegaki
from strategies import state_pair

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
REGISTRY = registry()

# frozen values from the scipy logm / fractional-power oracles
RHO1 = random_density(3, 11)
RHO2 = random_density(3, 12)
UMEGAKI_FROZEN = 1.3328521506826254
ALPHA_HALF_FROZEN = 1.2987900542541388


def test_frozen_relative_entropies():
    assert relative_entropy(RHO1, RHO2) == pytest.approx(UMEGAKI_FROZEN, abs=1e-11)
    assert relative_entropy(RHO1, RHO2, "alpha:0.5") == pytest.approx(ALPHA_HALF_FROZEN, abs=1e-11)
    assert quasi_entropy(RHO1, RHO2, None, xlogx()) == pytest.approx(UMEGAKI_FROZEN, abs=1e-11)


def test_equal_states():
    rho = random_density(3, 5)
    for f in REGISTRY:
        expected = 1.0 if f.is_standard else 0.0
        assert quasi_entropy(rho, rho, None, f) == pytest.approx(expected, abs=1e-12)
    assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-12)
    assert relative_entropy(rho, rho, 0.3) == pytest.approx(0.0, abs=1e-12)


def test_commuting_reduces_to_classical():
    p, q = np.array([0.2, 0.3, 0.5]), np.array([0.6, 0.1, 0.3])
    for f in REGISTRY:
        if not f.is_standard:
            assert quasi_entropy(np.diag(p), np.diag(q), None, f) == pytest.approx(
                f_divergence(p, q, f), abs=1e-13)
    assert relative_entropy(np.diag(p), np.diag(q)) == pytest.approx(
        f_divergence(p, q, xlogx()), abs=1e-13)
    assert relative_entropy(np.diag(p), np.diag(q), "alpha:0.5") == pytest.approx(
        f_divergence(p, q, alpha_divergence(0.5)), abs=1e-13)


def test_oracle_structure():
    r1, r2 = random_density(2, 1), random_density(2, 2)
    D = modular_superoperator(r1, r2)
    assert D.shape == (4, 4)
    p, q, _ = relative_modular_data(r1, r2)
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(D)), np.sort((p[:, None] / q).ravel()),
                               rtol=1e-12)
    with pytest.raises(ValueError):
        quasi_entropy_oracle(np.eye(9) / 9, np.eye(9) / 9, None, sld())


@given(state_pair())
def test_closed_form_matches_oracle(pair):
    r1, r2, rng = pair
    n = r1.shape[0]
    A = random_hermitian(n, rng) + 1j * random_hermitian(n, rng)
    for f in REGISTRY:
        for op in (None, A):
            closed = quasi_entropy(r1, r2, op, f)
            oracle = quasi_entropy_oracle(r1, r2, op, f)
            assert closed == pytest.approx(oracle, rel=1e-10, abs=1e-11)


@given(state_pair())
def test_modular_data_invariants(pair):
    r1, r2, rng = pair
    A = random_hermitian(r1.shape[0], rng)
    p, q, B = relative_modular_data(r1, r2, A)
    assert abs(p.sum() - 1) < 1e-10 and abs(q.sum() - 1) < 1e-10
    assert np.linalg.norm(B) == pytest.approx(np.linalg.norm(A), rel=1e-10)


@given(state_pair())
def test_relative_entropy_variants_match_quasi(pair):
    r1, r2, _ = pair
    assert relative_entropy(r1, r2) == pytest.approx(quasi_entropy(r1, r2, None, xlogx()),
                                                     abs=1e-10)
    assert relative_entropy(r1, r2) == pytest.approx(umegaki(r1, r2), abs=1e-10)
    for a in (0.3, 0.5, 0.7):
        s = relative_entropy(r1, r2, a)
        assert s == pytest.approx(quasi_entropy(r1, r2, None, alpha_divergence(a)), abs=1e-10)
        assert s == pytest.approx(alpha_entropy(r1, r2, a), abs=1e-10)


def test_small_alpha_limit_swaps_arguments():
    r1, r2 = random_density(3, 21), random_density(3, 22)
    small = relative_entropy(r1, r2, 1e-4)
    assert small == pytest.approx(relative_entropy(r2, r1), abs=1e-3)
    assert abs(small - relative_entropy(r1, r2)) > 1e-2


def test_domain_errors():
    with pytest.raises(ValidationError):
        quasi_entropy(np.diag([1.0, 0.0]), np.eye(2) / 2, None, sld())
    with pytest.raises(ValueError):
        relative_entropy(RHO1, RHO2, "renyi:2")
    with pytest.raises(ValueError):
        relative_entropy(RHO1, RHO2, 1.0)


def test_covariance_examples():
    rho = np.eye(2) / 2
    for f in standard_registry():
        assert generalized_covariance(rho, PAULI_X, PAULI_X, f) == pytest.approx(1.0, abs=1e-14)
    p = np.diag([0.2, 0.3, 0.5])
    A, B = np.diag([1.0, -2.0, 0.5]), np.diag([0.3, 1.0, 2.0])
    expected = np.trace(p @ A @ B) - np.trace(p @ A) * np.trace(p @ B)
    for f in standard_registry():
        assert generalized_covariance(p, A, B, f) == pytest.approx(expected, abs=1e-14)


@given(state_pair())
def test_sld_covariance_is_symmetrized(pair):
    r, _, rng = pair
    n = r.shape[0]
    A = random_hermitian(n, rng) + 1j * random_hermitian(n, rng)
    B = random_hermitian(n, rng)
    assert generalized_covariance(r, A, B, sld()) == pytest.approx(symmetrized_covariance(r, A, B),
                                                                   abs=1e-12)


@given(state_pair())
def test_covariance_hermitian_symmetry(pair):
    r, _, rng = pair
    n = r.shape[0]
    A, B = random_hermitian(n, rng), random_hermitian(n, rng) + 1j * random_hermitian(n, rng)
    for f in standard_registry():
        ab = generalized_covariance(r, A, B, f)
        ba = generalized_covariance(r, B, A, f)
        assert ab == pytest.approx(np.conj(ba), abs=1e-12)


def test_quantum_pinsker_examples():
    rho = random_density(3, 4)
    assert quantum_pinsker_gap(rho, rho) == pytest.approx(0.0, abs=1e-12)
    p, q = np.array([0.1, 0.4, 0.5]), np.array([0.3, 0.3, 0.4])
    assert quantum_pinsker_gap(np.diag(p), np.diag(q)) == pytest.approx(pinsker_gap(p, q),
                                                                        abs=1e-13)


@given(state_pair())
def test_quantum_pinsker_random(pair):
    r1, r2, _ = pair
    assert quantum_pinsker_gap(r1, r2) >= -1e-10


@given(state_pair(), st.floats(0.05, 0.95))
def test_joint_convexity_and_concavity(pair, lam):
    r1, r2, rng = pair
    s1, s2 = random_density(r1.shape[0], rng), random_density(r1.shape[0], rng)
    mix1, mix2 = lam * r1 + (1 - lam) * s1, lam * r2 + (1 - lam) * s2
    for f in REGISTRY:
        mixed = quasi_entropy(mix1, mix2, None, f)
        avg = lam * quasi_entropy(r1, r2, None, f) + (1 - lam) * quasi_entropy(s1, s2, None, f)
        if f.is_standard:
            assert mixed >= avg - 1e-9
        else:
            assert mixed <= avg + 1e-9


@given(state_pair(), st.sampled_from([0.3, 0.5, 0.7]))
def test_lieb_concavity(pair, a):
    r1, r2, rng = pair
    n = r1.shape[0]
    A = random_hermitian(n, rng) + 1j * random_hermitian(n, rng)
    mid = lieb_functional((r1 + r2) / 2, A, a)
    assert mid >= (lieb_functional(r1, A, a) + lieb_functional(r2, A, a)) / 2 - 1e-9


@given(state_pair())
def test_basis_diagonal_below_quantum(pair):
    r1, r2, rng = pair
    n = r1.shape[0]
    for _ in range(20):
        U = haar_unitary(n, rng)
        p, q = basis_diagonal(r1, U), basis_diagonal(r2, U)
        for f in REGISTRY:
            if not f.is_standard:
                assert f_divergence(p, q, f) <= quasi_entropy(r1, r2, None, f) + 1e-9


@given(state_pair(), st.sampled_from([-1.0, 0.5, 3.0]))
def test_linear_shift_leaves_divergence(pair, c):
    r1, r2, _ = pair
    for f in REGISTRY:
        if not f.is_standard:
            assert quasi_entropy(r1, r2, None, shifted(f, c)) == pytest.approx(
                quasi_entropy(r1, r2, None, f), abs=1e-11)


def test_pinched_pair_is_classical():
    rng = np.random.default_rng(3)
    U = haar_unitary(3, rng)
    pin = ch.full_pinching(U)
    r1, r2 = pin(random_density(3, rng)), pin(random_density(3, rng))
    p, q = basis_diagonal(r1, U), basis_diagonal(r2, U)
    for f in REGISTRY:
        if not f.is_standard:
            assert quasi_entropy(r1, r2, None, f) == pytest.approx(f_divergence(p, q, f), abs=1e-11)


def test_undefined_generator_raises():
    from qig.stdfunc import StandardFunction
    pole = StandardFunction("sqrt(-t)", lambda t: np.sqrt(-t), 0.0)
    with pytest.raises(DomainError):
        quasi_entropy(RHO1, RHO2, None, pole)
