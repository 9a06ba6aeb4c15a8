"""CPTP coarse-grainings in Kraus form and the monotonicity harness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .classical import validate_partition
from .fisher import fisher_metric
from .matcore import ValidationError, as_hermitian, as_rng, ginibre, haar_unitary, mix_to_floor
from .quasient import quasi_entropy
from .stdfunc import StandardFunction

TP_ATOL = 1e-10
OUTPUT_FLOOR = 1e-12
REFLOOR_WEIGHT = 1e-10


@dataclass(frozen=True)
class QuantumChannel:
    """Completely positive trace-preserving map ``rho -> sum K rho K*``."""

    kraus: tuple

    def __post_init__(self):
        ks = tuple(np.asarray(K, dtype=complex) for K in self.kraus)
        if not ks:
            raise ValidationError("a channel needs at least one Kraus operator")
        shape = ks[0].shape
        if any(K.ndim != 2 or K.shape != shape for K in ks):
            raise ValidationError("Kraus operators must share one dout x din shape")
        object.__setattr__(self, "kraus", ks)
        err = np.abs(self.tp_defect()).max()
        if err > TP_ATOL:
            raise ValidationError(f"Kraus family is not trace preserving (defect {err:.2e})")

    @property
    def din(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dout(self) -> int:
        return self.kraus[0].shape[0]

    def tp_defect(self) -> np.ndarray:
        return sum(K.conj().T @ K for K in self.kraus) - np.eye(self.kraus[0].shape[1])

    def __call__(self, rho):
        return apply(self, rho)


def apply(ch: QuantumChannel, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.din, ch.din):
        raise ValidationError(f"channel expects {ch.din}x{ch.din} input, got {rho.shape}")
    out = sum(K @ rho @ K.conj().T for K in ch.kraus)
    return (out + out.conj().T) / 2


def adjoint_apply(ch: QuantumChannel, A) -> np.ndarray:
    """Hilbert-Schmidt dual ``A -> sum K* A K`` (unital)."""
    A = np.asarray(A, dtype=complex)
    if A.shape != (ch.dout, ch.dout):
        raise ValidationError(f"adjoint expects {ch.dout}x{ch.dout} input, got {A.shape}")
    return sum(K.conj().T @ A @ K for K in ch.kraus)


@dataclass
class ChannelOutput:
    rho: np.ndarray
    refloored: bool
    min_eigenvalue: float


def apply_checked(ch: QuantumChannel, rho, floor: float = OUTPUT_FLOOR) -> ChannelOutput:
    """Apply ``ch`` and re-floor the output by mixing with ``I/n`` if needed.

    The output is flagged when its smallest eigenvalue fell below ``floor``;
    it is then mixed with the maximally mixed state at weight ``1e-10`` (or
    more, if that is not enough to restore invertibility).
    """
    out = apply(ch, rho)
    lmin = float(np.linalg.eigvalsh(out)[0])
    if lmin >= floor:
        return ChannelOutput(out, False, lmin)
    n = out.shape[0]
    mixed = (1 - REFLOOR_WEIGHT) * out + REFLOOR_WEIGHT * np.eye(n) / n
    mixed, _ = mix_to_floor(mixed, min(floor, 0.5 / n))
    return ChannelOutput(mixed, True, lmin)


def identity_channel(n: int) -> QuantumChannel:
    return QuantumChannel((np.eye(n),))


def unitary_channel(U) -> QuantumChannel:
    return QuantumChannel((np.asarray(U, dtype=complex),))


def depolarizing(n: int) -> QuantumChannel:
    """Complete depolarization ``rho -> I/n`` from the matrix units ``E_ij / sqrt n``."""
    ks = []
    for i in range(n):
        for j in range(n):
            E = np.zeros((n, n), dtype=complex)
            E[i, j] = 1 / np.sqrt(n)
            ks.append(E)
    return QuantumChannel(tuple(ks))


def random_channel(din: int, dout: int, kraus_count: int, seed=None) -> QuantumChannel:
    """Kraus blocks of a Haar-random isometry ``C^din -> C^(dout * kraus_count)``."""
    if kraus_count < 1:
        raise ValueError("kraus_count must be >= 1")
    N = dout * kraus_count
    if N < din:
        raise ValueError("dout * kraus_count must be at least din")
    V = haar_unitary(N, as_rng(seed))[:, :din]
    return QuantumChannel(tuple(V[k * dout:(k + 1) * dout] for k in range(kraus_count)))


def pinching(basis, blocks: Sequence[Sequence[int]]) -> QuantumChannel:
    """Projection onto the block-diagonal algebra of ``blocks`` in ``basis``."""
    U = np.asarray(basis, dtype=complex)
    n = U.shape[0]
    if U.shape != (n, n) or np.abs(U.conj().T @ U - np.eye(n)).max() > 1e-10:
        raise ValidationError("basis must be a unitary matrix")
    blocks = validate_partition(blocks, n)
    return QuantumChannel(tuple(U[:, b] @ U[:, b].conj().T for b in blocks))


def full_pinching(basis) -> QuantumChannel:
    n = np.asarray(basis).shape[0]
    return pinching(basis, [[i] for i in range(n)])


def partial_trace(sys_dims: tuple[int, int], which: str = "second") -> QuantumChannel:
    """Reduction of a ``d1 x d2`` bipartite system onto one factor."""
    d1, d2 = (int(d) for d in sys_dims)
    if which not in ("first", "second"):
        raise ValueError("which must be 'first' or 'second'")
    ks = []
    keep, drop = (d1, d2) if which == "second" else (d2, d1)
    for k in range(drop):
        bra = np.zeros((1, drop))
        bra[0, k] = 1
        ks.append(np.kron(np.eye(keep), bra) if which == "second" else np.kron(bra, np.eye(keep)))
    return QuantumChannel(tuple(ks))


def measurement_channel(povm: Sequence[np.ndarray]) -> QuantumChannel:
    """``rho -> diag(Tr rho F_1, ..., Tr rho F_k)`` for a POVM ``{F_j}``."""
    Fs = [as_hermitian(F) for F in povm]
    n, k = Fs[0].shape[0], len(Fs)
    ks = []
    for j, F in enumerate(Fs):
        w, V = np.linalg.eigh(F)
        if w[0] < -1e-12:
            raise ValidationError("POVM elements must be positive")
        root = (V * np.sqrt(np.clip(w, 0, None))) @ V.conj().T
        for l in range(n):
            K = np.zeros((k, n), dtype=complex)
            K[j] = root[l]
            ks.append(K)
    return QuantumChannel(tuple(ks))


def random_povm(n: int, outcomes: int, seed=None) -> list[np.ndarray]:
    rng = as_rng(seed)
    Gs = [G @ G.conj().T for G in (ginibre(n, n, rng) for _ in range(outcomes))]
    S = sum(Gs)
    w, V = np.linalg.eigh(S)
    Sm = (V / np.sqrt(w)) @ V.conj().T
    return [Sm @ G @ Sm for G in Gs]


# -- monotonicity harness ----------------------------------------------------

def monotonicity_gap(quantity: str, inputs, f: StandardFunction, ch: QuantumChannel):
    """Signed gap that is nonnegative whenever monotonicity holds.

    ``quantity``:

    ``"quasi"``
        ``inputs = (rho1, rho2)`` or ``(rho1, rho2, A)``. For a convex
        generator the gap is ``S_f(rho1||rho2) - S_f(ch(rho1)||ch(rho2))``
        (identity ``A`` only). For a standard function it is
        ``S^A_f(ch(rho1), ch(rho2)) - S^{ch*(A)}_f(rho1, rho2)`` with ``A``
        acting on the output space (identity by default).
    ``"fisher"``
        ``inputs = (rho, A)``; gap ``gamma_rho(A, A) - gamma_ch(rho)(ch(A), ch(A))``.
    ``"fishermatrix"``
        ``inputs = (model, theta)``; smallest eigenvalue of the difference
        of the Fisher information matrices before and after ``ch``.
    """
    if quantity == "quasi":
        rho1, rho2 = inputs[0], inputs[1]
        A = inputs[2] if len(inputs) > 2 else None
        s1, s2 = apply_checked(ch, rho1).rho, apply_checked(ch, rho2).rho
        if f.is_standard:
            Aout = np.eye(ch.dout, dtype=complex) if A is None else np.asarray(A, dtype=complex)
            return (quasi_entropy(s1, s2, Aout, f)
                    - quasi_entropy(rho1, rho2, adjoint_apply(ch, Aout), f))
        if A is not None:
            raise ValueError("convex generators are compared with A = I only")
        return quasi_entropy(rho1, rho2, None, f) - quasi_entropy(s1, s2, None, f)
    if quantity == "fisher":
        rho, A = inputs
        out = apply_checked(ch, rho).rho
        return (fisher_metric(rho, f, A).real
                - fisher_metric(out, f, apply(ch, A)).real)
    if quantity == "fishermatrix":
        from .estimation import fisher_matrix, pushforward
        model, theta = inputs
        I1 = fisher_matrix(model, theta, f)
        I2 = fisher_matrix(pushforward(model, ch), theta, f)
        D = I1 - I2
        return float(np.linalg.eigvalsh((D + D.conj().T) / 2)[0])
    raise ValueError(f"unknown quantity {quantity!r}")
