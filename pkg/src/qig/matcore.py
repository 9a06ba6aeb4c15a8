"""Hermitian spectral calculus and seeded random matrix generation.

Matrices are plain :class:`numpy.ndarray` objects with complex dtype. The
validators in this module return normalized copies (exactly Hermitian,
complex128) and raise subclasses of :class:`ValidationError` otherwise.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-10
DEFAULT_FLOOR = 1e-8
# random states are kept away from the boundary so that kernels stay
# well conditioned in randomized trials
RANDOM_FLOOR = 1e-3


class ValidationError(ValueError):
    """Input matrix or vector violates a structural requirement."""


class TraceError(ValidationError):
    pass


class PositivityError(ValidationError):
    pass


class DomainError(ValueError):
    """A scalar function is undefined on part of a spectrum."""


class Spectral(NamedTuple):
    eigenvalues: np.ndarray
    basis: np.ndarray

    def reconstruct(self) -> np.ndarray:
        U = self.basis
        return (U * self.eigenvalues) @ U.conj().T


def as_square(M) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix has non-finite entries")
    return A


def as_hermitian(H, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Validate Hermiticity and return the exactly Hermitian part.

    The tolerance scales with ``max(1, max|H_ij|)`` so that large but
    legitimately Hermitian matrices (e.g. ``exp(H)``) are not rejected for
    roundoff.
    """
    A = as_square(H)
    scale = max(1.0, float(np.max(np.abs(A), initial=0.0)))
    err = float(np.max(np.abs(A - A.conj().T), initial=0.0))
    if err > atol * scale:
        raise ValidationError(f"matrix is not Hermitian (asymmetry {err:.3e})")
    return (A + A.conj().T) / 2


def spectral_decompose(H) -> Spectral:
    """Eigen-decomposition ``H = U diag(w) U*`` with ascending ``w``."""
    A = as_hermitian(H)
    w, U = np.linalg.eigh(A)
    return Spectral(w, U)


def matrix_function(H, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply the scalar map ``f`` to the spectrum of the Hermitian ``H``."""
    w, U = spectral_decompose(H)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(w))
    if fw.shape != w.shape or not np.all(np.isfinite(fw)):
        raise DomainError(f"function undefined on spectrum {w}")
    return (U * fw) @ U.conj().T


def frechet_derivative(H, E, f, fprime) -> np.ndarray:
    """Directional derivative ``d/dt f(H + tE)`` at ``t = 0``.

    Uses the Daleckii-Krein formula: in the eigenbasis of ``H`` the
    derivative is the Hadamard product of ``E`` with the first divided
    differences of ``f``.
    """
    w, U = spectral_decompose(H)
    Ep = U.conj().T @ np.asarray(E, dtype=complex) @ U
    dw = w[:, None] - w[None, :]
    fw = f(w)
    close = np.abs(dw) <= 1e-12 * np.maximum(1.0, np.abs(w)[:, None])
    with np.errstate(all="ignore"):
        dd = np.where(close, 0.0, (fw[:, None] - fw[None, :]) / np.where(close, 1.0, dw))
    mid = (w[:, None] + w[None, :]) / 2
    dd = np.where(close, fprime(mid), dd)
    return U @ (dd * Ep) @ U.conj().T


def trace_norm(A) -> float:
    return float(np.sum(np.abs(spectral_decompose(A).eigenvalues)))


def validate_density(M, floor: float = DEFAULT_FLOOR) -> np.ndarray:
    """Return ``M`` as a validated density matrix.

    Raises
    ------
    TraceError
        if the trace differs from 1 by more than ``1e-10``.
    PositivityError
        if the smallest eigenvalue lies below ``floor``.
    """
    H = as_hermitian(M)
    tr = np.trace(H).real
    if abs(tr - 1.0) > TRACE_ATOL:
        raise TraceError(f"trace {tr!r} differs from 1")
    lmin = np.linalg.eigvalsh(H)[0]
    if lmin < floor:
        raise PositivityError(f"smallest eigenvalue {lmin:.3e} below floor {floor:.1e}")
    return H


def mix_to_floor(rho: np.ndarray, floor: float) -> tuple[np.ndarray, float]:
    """Mix ``rho`` with ``I/n`` just enough to lift its spectrum to ``floor``.

    Returns the mixed state and the identity weight that was used (0 when
    nothing was needed).
    """
    n = rho.shape[0]
    if floor >= 1.0 / n:
        raise ValueError("floor must be below 1/n")
    lmin = np.linalg.eigvalsh(rho)[0]
    if lmin >= floor:
        return rho, 0.0
    w = (floor - lmin) / (1.0 / n - lmin)
    return (1 - w) * rho + w * np.eye(n) / n, float(w)


def commutator(A, B) -> np.ndarray:
    return A @ B - B @ A


def frobenius_rel(A, B) -> float:
    """Relative Frobenius distance ``||A-B|| / max(||B||, 1e-300)``."""
    return float(np.linalg.norm(A - B) / max(np.linalg.norm(B), 1e-300))


# -- randomness --------------------------------------------------------------

def trial_seed(master: int, index: int) -> int:
    """Derive the 64-bit seed of trial ``index`` from a master seed.

    The mixing is ``numpy.random.SeedSequence((master, index))``; the first
    64-bit word of its state is the trial seed. Trials are therefore
    independent of each other and of how they are scheduled.
    """
    ss = np.random.SeedSequence((int(master) & (2**64 - 1), int(index)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def ginibre(rows: int, cols: int, rng) -> np.ndarray:
    rng = as_rng(rng)
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_hermitian(dim: int, rng) -> np.ndarray:
    """GUE draw: symmetrized complex Gaussian matrix."""
    G = ginibre(dim, dim, rng)
    return (G + G.conj().T) / 2


def haar_unitary(dim: int, rng) -> np.ndarray:
    """Haar unitary via QR of a Ginibre matrix with phase-fixed diagonal."""
    Q, R = np.linalg.qr(ginibre(dim, dim, rng))
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_density(dim: int, seed=None, floor: float = RANDOM_FLOOR) -> np.ndarray:
    """Seeded invertible density ``G G* / Tr G G*`` lifted to ``floor``."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    G = ginibre(dim, dim, seed)
    rho = G @ G.conj().T
    rho = rho / np.trace(rho).real
    rho = (rho + rho.conj().T) / 2
    if dim == 1:
        return np.ones((1, 1), dtype=complex)
    rho, _ = mix_to_floor(rho, floor)
    return rho


def random_traceless(dim: int, rng) -> np.ndarray:
    H = random_hermitian(dim, rng)
    return H - np.trace(H).real / dim * np.eye(dim)


def center(rho, X) -> tuple[np.ndarray, float]:
    """Shift ``X`` by a multiple of the identity so that ``Tr rho X = 0``.

    Returns the centered operator and the subtracted expectation value.
    """
    mean = np.trace(rho @ X)
    return X - mean * np.eye(X.shape[0]), complex(mean)
