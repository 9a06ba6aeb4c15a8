"""Quantum quasi-entropies, relative entropies and generalized covariances.

The closed forms work in the two eigenbases of ``rho1 = U diag(p) U*`` and
``rho2 = V diag(q) V*``. With ``B = U* A V`` the quasi-entropy is

    S_f^A(rho1 || rho2) = sum_ij f(p_i / q_j) q_j |B_ij|^2,

row index ``i`` belonging to ``rho1``. The oracle evaluates the same
quantity by building the relative modular operator ``X -> rho1 X rho2^-1``
as an explicit ``n^2 x n^2`` matrix.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .matcore import (DomainError, ValidationError, as_hermitian, as_square,
                      matrix_function, spectral_decompose, trace_norm)
from .stdfunc import StandardFunction

ORACLE_MAX_DIM = 8


class RelativeModularData(NamedTuple):
    p: np.ndarray
    q: np.ndarray
    B: np.ndarray


def positive_spectrum(rho):
    """Eigen-decomposition of a positive definite matrix (trace not enforced)."""
    w, U = spectral_decompose(rho)
    if w[0] <= 0:
        raise ValidationError(f"matrix is not positive definite (min eigenvalue {w[0]:.3e})")
    return w, U


def _operator(A, n):
    if A is None:
        return np.eye(n, dtype=complex)
    A = as_square(A)
    if A.shape[0] != n:
        raise ValidationError("operator dimension does not match the states")
    return A


def relative_modular_data(rho1, rho2, A=None) -> RelativeModularData:
    p, U = positive_spectrum(rho1)
    q, V = positive_spectrum(rho2)
    if p.size != q.size:
        raise ValidationError("states have different dimensions")
    A = _operator(A, p.size)
    return RelativeModularData(p, q, U.conj().T @ A @ V)


def _apply(f, x):
    with np.errstate(all="ignore"):
        v = np.asarray(f(x), dtype=float)
    if not np.all(np.isfinite(v)):
        raise DomainError(f"{getattr(f, 'name', f)} is not finite on the ratio spectrum")
    return v


def quasi_entropy(rho1, rho2, A=None, f: StandardFunction = None) -> float:
    """Quasi-entropy ``<A rho2^1/2, f(Delta(rho1/rho2)) A rho2^1/2>``.

    ``A`` defaults to the identity and may be any complex matrix.
    """
    if f is None:
        raise TypeError("a generating function f is required")
    p, q, B = relative_modular_data(rho1, rho2, A)
    ratios = p[:, None] / q[None, :]
    return float(np.sum(_apply(f, ratios) * q[None, :] * np.abs(B) ** 2))


def modular_superoperator(rho1, rho2) -> np.ndarray:
    """Matrix of ``X -> rho1 X rho2^{-1}`` acting on column-stacked ``vec X``."""
    r1 = as_hermitian(rho1)
    r2inv = np.linalg.inv(as_hermitian(rho2))
    # vec(A X B) = (B^T kron A) vec X
    D = np.kron(r2inv.T, r1)
    return (D + D.conj().T) / 2


def quasi_entropy_oracle(rho1, rho2, A=None, f: StandardFunction = None) -> float:
    """Literal evaluation of the quasi-entropy through the superoperator."""
    r1 = as_hermitian(rho1)
    n = r1.shape[0]
    if n > ORACLE_MAX_DIM:
        raise ValueError(f"oracle limited to dimension {ORACLE_MAX_DIM}")
    A = _operator(A, n)
    fD = matrix_function(modular_superoperator(rho1, rho2), f)
    x = (A @ matrix_function(rho2, np.sqrt)).reshape(-1, order="F")
    return float(np.real(np.vdot(x, fD @ x)))


def relative_entropy(rho1, rho2, variant: str | float = "umegaki") -> float:
    """Relative entropy of two invertible densities.

    ``variant="umegaki"`` gives ``Tr rho1 (log rho1 - log rho2)``.
    ``variant="alpha:a"`` (or a float ``a``) gives the degree-``a`` entropy
    ``(1 - Tr rho1^a rho2^(1-a)) / (a (1-a))``, which equals the
    quasi-entropy of ``(1 - t^a)/(a(1-a))``; as ``a -> 0`` it tends to the
    Umegaki entropy with the arguments swapped.
    """
    positive_spectrum(rho1)
    positive_spectrum(rho2)
    if variant == "umegaki":
        L1 = matrix_function(rho1, np.log)
        L2 = matrix_function(rho2, np.log)
        return float(np.real(np.trace(rho1 @ (L1 - L2))))
    if isinstance(variant, str):
        if not variant.startswith("alpha:"):
            raise ValueError(f"unknown relative entropy variant {variant!r}")
        a = float(variant.split(":", 1)[1])
    else:
        a = float(variant)
    if a in (0.0, 1.0):
        raise ValueError("alpha must differ from 0 and 1")
    P1 = matrix_function(rho1, lambda w: w**a)
    P2 = matrix_function(rho2, lambda w: w ** (1 - a))
    return float((1 - np.real(np.trace(P1 @ P2))) / (a * (1 - a)))


def generalized_covariance(rho, A, B, f: StandardFunction) -> complex:
    """``qCov^f_rho(A, B) = <A rho^1/2, f(Delta) B rho^1/2> - Tr(rho A*) Tr(rho B)``."""
    lam, U = positive_spectrum(rho)
    n = lam.size
    A = _operator(A, n)
    B = _operator(B, n)
    Ap = U.conj().T @ A @ U
    Bp = U.conj().T @ B @ U
    w = _apply(f, lam[:, None] / lam[None, :]) * lam[None, :]
    val = np.sum(w * Ap.conj() * Bp)
    return complex(val - np.trace(rho @ A.conj().T) * np.trace(rho @ B))


def symmetrized_covariance(rho, A, B) -> complex:
    """``Tr rho (A*B + BA*)/2 - Tr(rho A*) Tr(rho B)`` by direct products."""
    As = np.asarray(A).conj().T
    return complex(0.5 * np.trace(rho @ (As @ B + B @ As))
                   - np.trace(rho @ As) * np.trace(rho @ B))


def quantum_pinsker_gap(rho1, rho2) -> float:
    """``2 S(rho1||rho2) - ||rho1 - rho2||_1^2``; nonnegative for densities."""
    s = relative_entropy(rho1, rho2)
    t = trace_norm(as_hermitian(rho1) - as_hermitian(rho2))
    return 2 * s - t * t


def lieb_functional(rho, A, a: float) -> float:
    """``Tr A rho^a A* rho^(1-a)`` (concave in ``rho``)."""
    Pa = matrix_function(rho, lambda w: w**a)
    Pb = matrix_function(rho, lambda w: w ** (1 - a))
    return float(np.real(np.trace(A @ Pa @ A.conj().T @ Pb)))


def basis_diagonal(rho, U) -> np.ndarray:
    """Diagonal of ``rho`` in the orthonormal basis given by the columns of ``U``."""
    return np.real(np.einsum("ji,jk,ki->i", U.conj(), rho, U))

