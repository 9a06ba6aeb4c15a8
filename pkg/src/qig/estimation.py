"""Quantum statistical models, Fisher information matrices and Cramer-Rao bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .fisher import MeanKernel, StepError, apply_J, apply_J_inverse, fisher_metric, quadratic_cost
from .matcore import (ValidationError, as_hermitian, as_rng, frechet_derivative, haar_unitary,
                      matrix_function, random_density, random_traceless, validate_density)

FD_STEP = 1e-5
CONDITION_FLOOR = 1e-10


class ConditioningError(ValueError):
    """The Fisher information matrix is numerically singular."""


@dataclass(frozen=True)
class StatisticalModel:
    """A smooth family ``theta -> rho(theta)`` of invertible densities.

    ``tangent_at(theta, i)`` returns the partial derivative along
    ``theta_i``; without it central differences with step ``fd_step`` are
    used.
    """

    dim: int
    m: int
    state_at: Callable[[np.ndarray], np.ndarray]
    tangent_at: Callable[[np.ndarray, int], np.ndarray] | None = None
    name: str = "model"
    fd_step: float = FD_STEP

    def state(self, theta) -> np.ndarray:
        return validate_density(self.state_at(_theta(theta, self.m)), floor=1e-14)

    def tangent(self, theta, i: int, richardson: bool = False) -> np.ndarray:
        theta = _theta(theta, self.m)
        if self.tangent_at is not None:
            return as_hermitian(self.tangent_at(theta, i))
        d = _central(lambda t: self.state_at(t), theta, i, self.fd_step)
        if richardson:
            d = (4 * _central(lambda t: self.state_at(t), theta, i, self.fd_step / 2) - d) / 3
        d = (d + d.conj().T) / 2
        # states are normalized, so the exact tangent is traceless
        return d - np.trace(d).real / self.dim * np.eye(self.dim)

    def tangents(self, theta) -> list[np.ndarray]:
        return [self.tangent(theta, i) for i in range(self.m)]


def _theta(theta, m):
    t = np.atleast_1d(np.asarray(theta, dtype=float))
    if t.shape != (m,):
        raise ValueError(f"expected {m} parameters, got {t.shape}")
    return t


def _central(func, theta, i, h):
    e = np.zeros_like(theta)
    e[i] = h
    return (np.asarray(func(theta + e)) - np.asarray(func(theta - e))) / (2 * h)


# -- built-in families -------------------------------------------------------

def affine_family(rho, generators: Sequence[np.ndarray]) -> StatisticalModel:
    """``rho + sum_i theta_i B_i`` with traceless Hermitian ``B_i``."""
    rho = as_hermitian(rho)
    Bs = [as_hermitian(B) for B in generators]
    for B in Bs:
        if abs(np.trace(B)) > 1e-12:
            raise ValidationError("generators must be traceless")
    return StatisticalModel(
        rho.shape[0], len(Bs),
        lambda t: rho + sum(ti * B for ti, B in zip(t, Bs)),
        lambda t, i: Bs[i], name="affine")


def sld_exp_family(rho0, T) -> StatisticalModel:
    """``D(theta) / Tr D(theta)`` with ``D(theta) = e^(theta T/2) rho0 e^(theta T/2)``."""
    rho0 = as_hermitian(rho0)
    T = as_hermitian(T)

    def D(t):
        E = matrix_function(t[0] * T / 2, np.exp)
        return E @ rho0 @ E

    def state(t):
        d = D(t)
        return d / np.trace(d).real

    def tangent(t, i):
        d = D(t)
        dd = (T @ d + d @ T) / 2
        tr = np.trace(d).real
        return dd / tr - d * np.trace(dd).real / tr**2

    return StatisticalModel(rho0.shape[0], 1, state, tangent, name="sld-exp")


def km_exp_family(H, T) -> StatisticalModel:
    """``exp(H + theta T) / Tr exp(H + theta T)``."""
    H = as_hermitian(H)
    T = as_hermitian(T)

    def state(t):
        E = matrix_function(H + t[0] * T, np.exp)
        return E / np.trace(E).real

    def tangent(t, i):
        G = H + t[0] * T
        E = matrix_function(G, np.exp)
        dE = frechet_derivative(G, T, np.exp, np.exp)
        tr = np.trace(E).real
        return dE / tr - E * np.trace(dE).real / tr**2

    return StatisticalModel(H.shape[0], 1, state, tangent, name="km-exp")


def unitary_family(rho0, hamiltonians: Sequence[np.ndarray]) -> StatisticalModel:
    """``U(theta) rho0 U(theta)*`` with ``U = exp(-i sum theta_k H_k)``; tangents by differences."""
    rho0 = as_hermitian(rho0)
    Hs = [as_hermitian(H) for H in hamiltonians]

    def state(t):
        G = sum(ti * H for ti, H in zip(t, Hs))
        w, V = np.linalg.eigh(G)
        U = (V * np.exp(-1j * w)) @ V.conj().T
        r = U @ rho0 @ U.conj().T
        return (r + r.conj().T) / 2

    return StatisticalModel(rho0.shape[0], len(Hs), state, None, name="unitary")


def mixture_family(states: Sequence[np.ndarray]) -> StatisticalModel:
    """``rho_0 + sum theta_i (rho_i - rho_0)``; convex-combination coordinates."""
    base = as_hermitian(states[0])
    return affine_family(base, [as_hermitian(s) - base for s in states[1:]])


def pushforward(model: StatisticalModel, ch) -> StatisticalModel:
    """Image family ``theta -> ch(rho(theta))`` with tangents ``ch(d rho)``."""
    from .channels import apply, apply_checked

    def tangent(t, i):
        return apply(ch, model.tangent(t, i))

    return StatisticalModel(ch.dout, model.m, lambda t: apply_checked(ch, model.state_at(t)).rho,
                            tangent, name=f"{model.name}->channel")


def random_model(dim: int, m: int, seed=None, kind: str = "affine") -> StatisticalModel:
    """Seeded model, well inside the state space for ``|theta| <= 0.5``."""
    rng = as_rng(seed)
    rho = random_density(dim, rng)
    if kind == "affine":
        lmin = np.linalg.eigvalsh(rho)[0]
        Bs = []
        for _ in range(m):
            B = random_traceless(dim, rng)
            Bs.append(B * lmin / (m * np.abs(np.linalg.eigvalsh(B)).max()))
        return affine_family(rho, Bs)
    if kind == "unitary":
        return unitary_family(rho, [random_traceless(dim, rng) for _ in range(m)])
    raise ValueError(f"unknown model kind {kind!r}")


# -- scores, Fisher matrices, Cramer-Rao -------------------------------------

def scores(model: StatisticalModel, theta, f) -> list[np.ndarray]:
    """Score operators ``L_i = J_rho^-1(d_i rho)``."""
    rho = model.state(theta)
    return [apply_J_inverse(rho, f, D) for D in model.tangents(theta)]


def fisher_matrix(model: StatisticalModel, theta, f) -> np.ndarray:
    """``I_ij = Tr L_i J(L_j)``, real symmetric for Hermitian tangents."""
    rho = model.state(theta)
    Ls = scores(model, theta, f)
    m = model.m
    I = np.empty((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            I[i, j] = quadratic_cost(rho, f, Ls[i], Ls[j])
    I = (I + I.conj().T) / 2
    return I.real


def fisher_matrix_from_metric(model: StatisticalModel, theta, f) -> np.ndarray:
    rho = model.state(theta)
    Ds = model.tangents(theta)
    G = np.array([[fisher_metric(rho, f, a, b) for b in Ds] for a in Ds])
    return ((G + G.conj().T) / 2).real


def classical_fisher(p, dp) -> np.ndarray:
    """``sum_x dp_i(x) dp_j(x) / p(x)`` for a probability vector and its derivatives."""
    p = np.asarray(p, dtype=float)
    dp = np.atleast_2d(np.asarray(dp, dtype=float))
    return (dp / p) @ dp.T


@dataclass
class CramerRao:
    residual: np.ndarray
    cost: np.ndarray
    fisher: np.ndarray
    jacobian: np.ndarray

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.residual)[0])

    @property
    def norm(self) -> float:
        return float(np.abs(self.residual).max())


def cost_matrix(rho, f, ops: Sequence[np.ndarray], centered: bool = True) -> np.ndarray:
    """``[phi[A_i, A_j]]``; with ``centered`` each ``A_i`` is shifted to zero mean."""
    n = rho.shape[0]
    if centered:
        ops = [A - np.trace(rho @ A).real * np.eye(n) for A in ops]
    m = len(ops)
    C = np.array([[quadratic_cost(rho, f, ops[i], ops[j]) for j in range(m)] for i in range(m)])
    return (C + C.conj().T) / 2


def cramer_rao_residual(model: StatisticalModel, est: Sequence[np.ndarray], theta, f,
                        centered: bool = True) -> CramerRao:
    """Residual ``phi[A] - (I + B) J^-1 (I + B)*`` of the matrix Cramer-Rao bound.

    ``(I + B)_ij = d_j Tr rho(theta) A_i`` (estimator along rows, parameter
    along columns). ``f`` may be a standard function or a :class:`MeanKernel`
    such as ``MeanKernel.flat()`` for the Hilbert-Schmidt cost.
    """
    est = [as_hermitian(A) for A in est]
    if len(est) != model.m:
        raise ValueError("need one estimator per parameter")
    rho = model.state(theta)
    Ds = model.tangents(theta)
    J = fisher_matrix(model, theta, f)
    jmin = np.linalg.eigvalsh(J)[0]
    if jmin <= CONDITION_FLOOR:
        raise ConditioningError(f"Fisher matrix is singular (min eigenvalue {jmin:.3e})")
    M = np.array([[np.trace(D @ A).real for D in Ds] for A in est])
    cost = cost_matrix(rho, f, est, centered)
    res = cost - M @ np.linalg.solve(J, M.T)
    res = (res + res.conj().T) / 2
    return CramerRao(res, cost, J, M)


def locally_unbiased_check(model: StatisticalModel, A, theta0=0.0, h: float = FD_STEP) -> float:
    """Central-difference derivative of ``Tr rho(theta) A`` for a scalar model."""
    if model.m != 1:
        raise ValueError("locally unbiased check needs a one-parameter model")
    A = as_hermitian(A)
    t = _theta(theta0, 1)
    return float(_central(lambda s: np.trace(model.state_at(s) @ A).real, t, 0, h))


# -- exponential families as ODE solutions -----------------------------------

@dataclass
class EvolutionPath:
    thetas: np.ndarray
    D: list = field(repr=False)
    rho: list = field(repr=False)
    subdivisions: int = 0


def _rk4(D, h, T, kernel):
    k1 = apply_J(D, kernel, T)
    k2 = apply_J(D + h / 2 * k1, kernel, T)
    k3 = apply_J(D + h / 2 * k2, kernel, T)
    k4 = apply_J(D + h * k3, kernel, T)
    out = D + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return (out + out.conj().T) / 2


def exp_family_evolve(rho0, T, theta_max: float, f, steps: int = 200,
                      local_tol: float = 1e-8, max_depth: int = 12) -> EvolutionPath:
    """Integrate ``dD/dtheta = J_D(T)``, ``D(0) = rho0`` on a uniform grid.

    Classic fourth-order Runge-Kutta. Each grid step is compared with two
    half steps; when the difference exceeds ``local_tol`` (relative) or
    positivity is lost, the step is halved recursively.
    """
    if steps < 100:
        raise ValueError("steps must be >= 100")
    kernel = MeanKernel.of(f)
    T = as_hermitian(T)
    D = as_hermitian(rho0)
    if np.linalg.eigvalsh(D)[0] <= 0:
        raise ValidationError("initial point must be positive definite")
    h = theta_max / steps
    count = 0

    def attempt(D, h):
        try:
            full = _rk4(D, h, T, kernel)
            half = _rk4(_rk4(D, h / 2, T, kernel), h / 2, T, kernel)
        except ValidationError:
            return None
        if np.linalg.eigvalsh(half)[0] <= 0:
            return None
        err = np.linalg.norm(half - full) / 15 / max(np.linalg.norm(half), 1e-300)
        return half if err <= local_tol else None

    def advance(D, h, depth):
        nonlocal count
        out = attempt(D, h)
        if out is not None:
            return out
        if depth >= max_depth:
            raise StepError(f"step {h:.3e} still fails after {max_depth} halvings")
        count += 1
        return advance(advance(D, h / 2, depth + 1), h / 2, depth + 1)

    Ds = [D]
    for _ in range(steps):
        D = advance(D, h, 0)
        Ds.append(D)
    thetas = np.linspace(0.0, theta_max, steps + 1)
    return EvolutionPath(thetas, Ds, [d / np.trace(d).real for d in Ds], count)


def sld_exp_closed_form(rho0, T, theta: float) -> np.ndarray:
    E = matrix_function(theta * as_hermitian(T) / 2, np.exp)
    return E @ as_hermitian(rho0) @ E


def random_centered_generator(rho, rng, normalize: bool = True) -> np.ndarray:
    """Random ``T`` with ``Tr rho T = 0`` and, optionally, ``Tr rho T^2 = 1``."""
    n = rho.shape[0]
    T = random_traceless(n, rng)
    T = T - np.trace(rho @ T).real * np.eye(n)
    if normalize:
        T = T / np.sqrt(np.trace(rho @ T @ T).real)
    return T


def haar_state_family(dim: int, seed=None):
    """Random density together with a Haar basis; handy for pinching trials."""
    rng = as_rng(seed)
    return random_density(dim, rng), haar_unitary(dim, rng)
