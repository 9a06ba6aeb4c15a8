import numpy as np
import pytest
from hypothesis import given, strategies as st

from qig.matcore import random_density, random_hermitian
from qig.quasient import symmetrized_covariance
from qig.stdfunc import (hansen_extremal, harmonic, kubo_mori, sld, standard_registry, wyd, xlogx)
from qig.uncertainty import (cov_gram, gibi_grid_min, gibi_margin, gram_domination_check,
                             gram_pair, hermitian_det, skew_form, skew_gram,
                             skew_gram_commutator, uncertainty_residual)
from strategies import seeds

STANDARD = standard_registry()
REGULAR = [f for f in STANDARD if f.at_zero > 0] + [hansen_extremal(0.4)]
PAULI = [np.array([[0, 1], [1, 0]], dtype=complex), np.array([[0, -1j], [1j, 0]]),
         np.diag([1.0, -1.0]).astype(complex)]


def test_maximally_mixed_qubit():
    rho = np.eye(2) / 2
    for g in STANDARD:
        np.testing.assert_allclose(cov_gram(rho, g, PAULI), np.eye(3), atol=1e-14)
    for f in STANDARD:
        np.testing.assert_allclose(skew_gram(rho, f, PAULI), 0, atol=1e-15)
    assert uncertainty_residual(rho, sld(), sld(), PAULI[:2]) == pytest.approx(1.0)


def test_commuting_observables_have_no_skew():
    rho = np.diag([0.1, 0.3, 0.6])
    ops = [np.diag([1.0, 2.0, -1.0]), np.diag([0.0, 1.0, 4.0])]
    for f in STANDARD:
        np.testing.assert_allclose(skew_gram(rho, f, ops), 0, atol=1e-14)
    expected = np.array([[symmetrized_covariance(rho, a, b) for b in ops] for a in ops])
    np.testing.assert_allclose(cov_gram(rho, sld(), ops), expected, atol=1e-14)


def test_km_skew_vanishes():
    rho = random_density(3, 1)
    ops = [random_hermitian(3, np.random.default_rng(i)) for i in range(2)]
    np.testing.assert_allclose(skew_gram(rho, kubo_mori(), ops), 0, atol=1e-13)


def test_wy_skew_closed_form():
    rho = random_density(3, 2)
    X = random_hermitian(3, np.random.default_rng(2))
    Xc = X - np.trace(rho @ X).real * np.eye(3)
    w, V = np.linalg.eigh(rho)
    root = (V * np.sqrt(w)) @ V.conj().T
    C = root @ Xc - Xc @ root
    expected = -0.5 * np.trace(C @ C).real
    assert skew_form(rho, wyd(0.5), Xc, Xc).real == pytest.approx(expected, rel=1e-10)


@given(seeds, st.sampled_from([2, 3]), st.integers(1, 3))
def test_skew_gram_matches_commutator_oracle(seed, n, k):
    rng = np.random.default_rng(seed)
    rho = random_density(n, rng)
    ops = [random_hermitian(n, rng) for _ in range(k)]
    for f in REGULAR:
        a, b = skew_gram(rho, f, ops), skew_gram_commutator(rho, f, ops)
        np.testing.assert_allclose(a, b, atol=1e-10 * max(1, np.abs(b).max()))


@given(seeds, st.sampled_from([2, 3, 4]), st.integers(1, 3))
def test_uncertainty_and_domination(seed, n, k):
    rng = np.random.default_rng(seed)
    rho = random_density(n, rng)
    ops = [random_hermitian(n, rng) for _ in range(k)]
    for f in REGULAR:
        for g in REGULAR:
            pair = gram_pair(rho, f, g, ops)
            scale = max(1.0, np.abs(pair.cov).max()) ** k
            assert uncertainty_residual(rho, f, g, ops) >= -1e-10 * scale
            assert gram_domination_check(pair.cov, pair.skew) >= -1e-10 * scale


def test_gram_hermitian_and_psd():
    rho = random_density(3, 4)
    ops = [random_hermitian(3, np.random.default_rng(i + 10)) for i in range(3)]
    pair = gram_pair(rho, wyd(0.5), sld(), ops)
    for G in (pair.cov, pair.skew):
        np.testing.assert_allclose(G, G.conj().T, atol=1e-15)
        assert np.linalg.eigvalsh(G)[0] >= -1e-12


def test_hermitian_det():
    G = np.array([[2.0, 1j], [-1j, 3.0]])
    assert hermitian_det(G) == pytest.approx(5.0)


def test_residual_rejects_nonstandard():
    rho = random_density(2, 5)
    with pytest.raises(ValueError):
        uncertainty_residual(rho, xlogx(), sld(), PAULI[:1])


def test_gibi_margin():
    assert gibi_margin(sld(), sld(), 1.0) == pytest.approx(1.0)
    x = np.array([0.5, 2.0])
    f = sld()
    np.testing.assert_allclose(gibi_margin(f, f, x), ((1 + x) / 2) ** 2 - 0.25 * (x - 1) ** 2)
    for f in STANDARD:
        for g in STANDARD:
            assert gibi_grid_min(f, g) >= -1e-12
    assert gibi_margin(kubo_mori(), harmonic(), 3.0) > 0
    with pytest.raises(ValueError):
        gibi_margin(sld(), sld(), 0.0)
