"""Monotone quantum Fisher metrics and their companions.

Everything here is diagonal in the eigenbasis of the foot point
``rho = U diag(lam) U*``: the superoperator ``J_rho`` multiplies the
``(i, j)`` entry by the mean kernel ``c(lam_i, lam_j) = lam_i f(lam_j/lam_i)``.
The metric is ``gamma(A, B) = sum conj(A_ij) B_ij / c_ij`` and the quadratic
cost is ``phi[A, B] = sum conj(A_ij) c_ij B_ij``. States only need to be
positive definite; the trace is not enforced so that unnormalized flows
can reuse the same kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np
from scipy import integrate, linalg

from .matcore import ValidationError, as_hermitian, as_square, center, commutator
from .quasient import (generalized_covariance, positive_spectrum, quasi_entropy,
                       symmetrized_covariance)
from .stdfunc import StandardFunction, tilde_transform

DEGENERATE_RTOL = 1e-8
_KM_SERIES = 1e-4


class StepError(ValueError):
    """A finite-difference or integration step left the positive cone."""


@dataclass(frozen=True)
class MeanKernel:
    """Two-variable mean ``c(x, y) = x f(y/x)`` generated by a standard function.

    ``MeanKernel.flat()`` is the constant kernel ``c = 1``: ``J`` is then the
    identity and the cost is the Hilbert-Schmidt inner product.
    """

    name: str
    f: StandardFunction | None = None

    @classmethod
    def of(cls, f: "StandardFunction | MeanKernel") -> "MeanKernel":
        if isinstance(f, MeanKernel):
            return f
        if not f.is_standard:
            raise ValueError(f"{f.name} does not generate a mean kernel")
        return cls(f.name, f)

    @classmethod
    def flat(cls) -> "MeanKernel":
        return cls("hilbert-schmidt", None)

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.f is None:
            return np.ones(np.broadcast(x, y).shape)
        with np.errstate(all="ignore"):
            c = x * self.f(y / x)
        if self.name == "km":
            s = (y - x) / (x + y)
            # log mean = m / (1 + s^2/3 + s^4/5 + ...)
            series = (x + y) / 2 / (1 + s**2 / 3 + s**4 / 5)
            c = np.where(np.abs(s) < _KM_SERIES, series, c)
        near = np.abs(x - y) <= DEGENERATE_RTOL * np.maximum(x, y)
        return np.where(near, (x + y) / 2, c)

    def matrix(self, lam: np.ndarray) -> np.ndarray:
        K = self(lam[:, None], lam[None, :])
        return (K + K.T) / 2


def _frame(rho, kernel):
    lam, U = positive_spectrum(rho)
    return lam, U, MeanKernel.of(kernel).matrix(lam)


def _rotate_in(U, A):
    return U.conj().T @ as_square(A) @ U


def apply_J(rho, f, A) -> np.ndarray:
    """``J_rho(A) = R^1/2 f(L R^-1) R^1/2 (A)``."""
    lam, U, K = _frame(rho, f)
    return U @ (K * _rotate_in(U, A)) @ U.conj().T


def apply_J_inverse(rho, f, A) -> np.ndarray:
    lam, U, K = _frame(rho, f)
    return U @ (_rotate_in(U, A) / K) @ U.conj().T


def fisher_metric(rho, f, A, B=None) -> complex:
    """Monotone metric ``gamma^f_rho(A, B) = Tr A* J_rho^-1(B)``."""
    lam, U, K = _frame(rho, f)
    Ap = _rotate_in(U, A)
    Bp = Ap if B is None else _rotate_in(U, B)
    return complex(np.sum(Ap.conj() * Bp / K))


def quadratic_cost(rho, f, A, B=None) -> complex:
    """Quadratic cost ``phi_rho[A, B] = Tr A* J_rho(B)``."""
    lam, U, K = _frame(rho, f)
    Ap = _rotate_in(U, A)
    Bp = Ap if B is None else _rotate_in(U, B)
    return complex(np.sum(Ap.conj() * K * Bp))


def sld(rho, A) -> np.ndarray:
    """Symmetric logarithmic derivative: Hermitian ``L`` with ``rho L + L rho = 2A``."""
    lam, U = positive_spectrum(rho)
    Ap = _rotate_in(U, as_hermitian(A))
    L = U @ (2 * Ap / (lam[:, None] + lam[None, :])) @ U.conj().T
    return (L + L.conj().T) / 2


def commutator_tangent(rho, X) -> np.ndarray:
    """``i [rho, X]``."""
    return 1j * commutator(np.asarray(rho, dtype=complex), np.asarray(X, dtype=complex))


def skew_information(rho, f: StandardFunction, X) -> float:
    """``(f(0)/2) gamma^f(i[rho, X], i[rho, X])``."""
    lam, U, K = _frame(rho, f)
    Xp = _rotate_in(U, as_hermitian(X))
    d2 = (lam[:, None] - lam[None, :]) ** 2
    return float(f.at_zero / 2 * np.sum(d2 * np.abs(Xp) ** 2 / K))


@dataclass
class TildeGap:
    gap: float
    lhs: float
    rhs: float
    shift: float


def tilde_identity_gap(rho, f: StandardFunction, X) -> TildeGap:
    """Compare ``f(0) gamma^f(i[rho,X], i[rho,X])`` with ``2 Cov - 2 qCov^f~``.

    ``X`` is centered to ``Tr rho X = 0`` first; the applied shift is
    reported. The left side goes through the metric of the commutator, the
    right side through two generalized covariances.
    """
    X = as_hermitian(X)
    Xc, shift = center(rho, X)
    C = commutator_tangent(rho, Xc)
    lhs = f.at_zero * fisher_metric(rho, f, C).real
    cov = symmetrized_covariance(rho, Xc, Xc)
    qcov = generalized_covariance(rho, Xc, Xc, tilde_transform(f))
    rhs = 2 * cov.real - 2 * qcov.real
    return TildeGap(abs(lhs - rhs), lhs, rhs, shift.real)


def hessian_fd(rho, X, F: StandardFunction, h: float = 1e-4) -> float:
    """Mixed central difference of ``(t, s) -> S_F(rho + t C, rho + s C)``.

    ``C = i[rho, X]`` with ``X`` centered. Uses the 4-point stencil
    ``(S(h,h) - S(h,-h) - S(-h,h) + S(-h,-h)) / 4h^2``.
    """
    X, _ = center(rho, as_hermitian(X))
    C = commutator_tangent(rho, X)
    plus, minus = rho + h * C, rho - h * C
    for M in (plus, minus):
        if np.linalg.eigvalsh((M + M.conj().T) / 2)[0] <= 0:
            raise StepError(f"step h={h:g} leaves the positive cone")

    def S(a, b):
        return quasi_entropy(a, b, None, F)

    return (S(plus, plus) - S(plus, minus) - S(minus, plus) + S(minus, minus)) / (4 * h * h)


def hessian_exact(rho, X, f: StandardFunction) -> float:
    """``f(0) gamma^f(i[rho,X], i[rho,X])`` for centered ``X``."""
    X, _ = center(rho, as_hermitian(X))
    return f.at_zero * fisher_metric(rho, f, commutator_tangent(rho, X)).real


def hessian_mismatch(rho, X, f: StandardFunction, h: float = 1e-4) -> float:
    """Relative mismatch between the finite-difference Hessian of ``S_f~`` and ``f(0) gamma^f``."""
    exact = hessian_exact(rho, X, f)
    fd = hessian_fd(rho, X, tilde_transform(f), h)
    return abs(fd - exact) / max(abs(exact), 1e-300)


def alpha_hessian_kernel(u, a: float):
    """Weight ``g_a(u)`` of the degree-``a`` Hessian in exponential coordinates.

    Trapezoid of unit mass on ``[0, 1]``; ``g_a = g_{1-a}``.
    """
    a = float(a)
    if not 0 < a < 1:
        raise ValueError("a must lie in (0, 1)")
    u = np.asarray(u, dtype=float)
    if np.any(u < 0) or np.any(u > 1):
        raise ValueError("u must lie in [0, 1]")
    b = min(a, 1 - a)
    val = np.minimum(np.minimum(u, b), 1 - u) / (b * (1 - b))
    return val if val.ndim else float(val)


def tangent_decompose(rho, A, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Split a traceless Hermitian tangent into commuting and commutator parts.

    In the eigenbasis of ``rho`` the commuting part is the block diagonal
    over (numerically) equal eigenvalues; the remainder lies in
    ``{i[rho, B]}``.
    """
    A = as_hermitian(A)
    if abs(np.trace(A)) > 1e-12 * max(1.0, np.abs(A).max()):
        raise ValidationError("tangent vectors must be traceless")
    lam, U = positive_spectrum(rho)
    same = np.abs(lam[:, None] - lam[None, :]) <= tol * lam.max()
    Ap = _rotate_in(U, A)
    Aq = U @ np.where(same, Ap, 0) @ U.conj().T
    Aq = (Aq + Aq.conj().T) / 2
    return Aq, A - Aq


def commutator_generator(rho, C, tol: float = 1e-10) -> np.ndarray:
    """Hermitian ``B`` with ``i [rho, B] = C`` for ``C`` in the commutator subspace."""
    lam, U = positive_spectrum(rho)
    d = lam[:, None] - lam[None, :]
    same = np.abs(d) <= tol * lam.max()
    Cp = _rotate_in(U, C)
    Bp = np.where(same, 0, Cp / np.where(same, 1, 1j * d))
    B = U @ Bp @ U.conj().T
    return (B + B.conj().T) / 2


# -- independent oracles -----------------------------------------------------

def km_inverse_quadrature(rho, A, epsabs: float = 1e-11) -> np.ndarray:
    """``int_0^inf (rho + t)^-1 A (rho + t)^-1 dt`` by adaptive quadrature."""
    rho = np.asarray(rho, dtype=complex)
    A = np.asarray(A, dtype=complex)
    n = rho.shape[0]
    I = np.eye(n)

    def integrand(t):
        R = np.linalg.inv(rho + t * I)
        return (R @ A @ R).ravel()

    val, _ = integrate.quad_vec(integrand, 0, np.inf, epsabs=epsabs, epsrel=1e-11, limit=2000)
    return val.reshape(n, n)


def sld_inverse_quadrature(rho, A, epsabs: float = 1e-11) -> np.ndarray:
    """``int_0^inf exp(-t rho/2) A exp(-t rho/2) dt`` by adaptive quadrature."""
    rho = np.asarray(rho, dtype=complex)
    A = np.asarray(A, dtype=complex)
    n = rho.shape[0]

    def integrand(t):
        E = linalg.expm(-t * rho / 2)
        return (E @ A @ E).ravel()

    val, _ = integrate.quad_vec(integrand, 0, np.inf, epsabs=epsabs, epsrel=1e-11, limit=2000)
    return val.reshape(n, n)


def km_cost_quadrature(rho, A, B) -> complex:
    """``int_0^1 Tr A* rho^t B rho^(1-t) dt`` with scipy's fractional powers."""
    rho = np.asarray(rho, dtype=complex)
    As = np.asarray(A, dtype=complex).conj().T
    B = np.asarray(B, dtype=complex)

    def integrand(t):
        v = np.trace(As @ linalg.fractional_matrix_power(rho, t) @ B
                     @ linalg.fractional_matrix_power(rho, 1 - t))
        return np.array([v.real, v.imag])

    val, _ = integrate.quad_vec(integrand, 0, 1, epsabs=1e-13, epsrel=1e-12)
    return complex(val[0], val[1])


def wyd_commutator_form(rho, B, beta: float) -> float:
    """``-Tr([rho^b, B][rho^(1-b), B]) / (b (1-b))`` from matrix powers."""
    rho = np.asarray(rho, dtype=complex)
    Pb = linalg.fractional_matrix_power(rho, beta)
    Pc = linalg.fractional_matrix_power(rho, 1 - beta)
    return float(-np.trace(commutator(Pb, B) @ commutator(Pc, B)).real / (beta * (1 - beta)))


def metric_gram(rho, f, basis: list[np.ndarray]) -> np.ndarray:
    """Gram matrix ``[gamma(b_i, b_j)]`` over a list of tangents."""
    m = len(basis)
    G = np.empty((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            G[i, j] = fisher_metric(rho, f, basis[i], basis[j])
    return G


def traceless_hermitian_basis(n: int) -> list[np.ndarray]:
    """Orthonormal (Hilbert-Schmidt) basis of traceless Hermitian ``n x n`` matrices."""
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n), dtype=complex)
            E[i, j] = E[j, i] = 1 / np.sqrt(2)
            out.append(E)
            F = np.zeros((n, n), dtype=complex)
            F[i, j], F[j, i] = -1j / np.sqrt(2), 1j / np.sqrt(2)
            out.append(F)
    for k in range(1, n):
        d = np.zeros(n)
        d[:k] = 1
        d[k] = -k
        out.append(np.diag(d / np.linalg.norm(d)).astype(complex))
    return out

