"""Determinant uncertainty relation between covariance and skew-information Grams."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fisher import commutator_tangent, fisher_metric
from .matcore import as_hermitian, center
from .quasient import generalized_covariance, symmetrized_covariance
from .stdfunc import StandardFunction, log_grid, tilde_transform

GRAM_SLACK = 1e-10


@dataclass
class GramPair:
    """``cov[i, j] = qCov^g(X_i, X_j)`` and ``skew[i, j] = 2 g(0) I^f(X_i, X_j)``."""

    cov: np.ndarray
    skew: np.ndarray


def _hermitize(G):
    return (G + G.conj().T) / 2


def _centered(rho, ops):
    return [center(rho, as_hermitian(X))[0] for X in ops]


def cov_gram(rho, g: StandardFunction, ops: Sequence[np.ndarray]) -> np.ndarray:
    ops = _centered(rho, ops)
    G = np.array([[generalized_covariance(rho, a, b, g) for b in ops] for a in ops])
    return _hermitize(G)


def skew_form(rho, f: StandardFunction, X, Y) -> complex:
    """``I^f(X, Y) = Cov(X, Y) - qCov^f~(X, Y)`` for centered ``X, Y``."""
    return symmetrized_covariance(rho, X, Y) - generalized_covariance(rho, X, Y, tilde_transform(f))


def skew_gram(rho, f: StandardFunction, ops: Sequence[np.ndarray], scale: float = 1.0) -> np.ndarray:
    ops = _centered(rho, ops)
    G = np.array([[skew_form(rho, f, a, b) for b in ops] for a in ops])
    return scale * _hermitize(G)


def skew_gram_commutator(rho, f: StandardFunction, ops: Sequence[np.ndarray],
                         scale: float = 1.0) -> np.ndarray:
    """Oracle: ``(f(0)/2) gamma^f(i[rho, X_i], i[rho, X_j])`` through the metric."""
    cs = [commutator_tangent(rho, X) for X in _centered(rho, ops)]
    G = np.array([[fisher_metric(rho, f, a, b) for b in cs] for a in cs])
    return scale * f.at_zero / 2 * _hermitize(G)


def gram_pair(rho, f: StandardFunction, g: StandardFunction, ops) -> GramPair:
    return GramPair(cov_gram(rho, g, ops), skew_gram(rho, f, ops, 2 * g.at_zero))


def hermitian_det(G) -> float:
    """Determinant as the product of eigenvalues of a Hermitian matrix."""
    return float(np.prod(np.linalg.eigvalsh(_hermitize(np.asarray(G)))))


def uncertainty_residual(rho, f: StandardFunction, g: StandardFunction, ops) -> float:
    """``det[qCov^g(X_i, X_j)] - det[2 g(0) I^f(X_i, X_j)]``; nonnegative in theory."""
    for h in (f, g):
        if not h.is_standard:
            raise ValueError(f"{h.name} is not a standard function")
    pair = gram_pair(rho, f, g, ops)
    return hermitian_det(pair.cov) - hermitian_det(pair.skew)


def gibi_margin(f: StandardFunction, g: StandardFunction, x) -> np.ndarray | float:
    """``f(x) g(x) - f(0) g(0) (x - 1)^2``."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("x must be positive")
    out = f(x) * g(x) - f.at_zero * g.at_zero * (x - 1) ** 2
    return float(out) if out.ndim == 0 else out


def gibi_grid_min(f: StandardFunction, g: StandardFunction, size: int = 2001) -> float:
    return float(np.min(gibi_margin(f, g, log_grid(size))))


def gram_domination_check(cov, skew) -> float:
    """Smallest eigenvalue of ``cov - skew``."""
    return float(np.linalg.eigvalsh(_hermitize(np.asarray(cov) - np.asarray(skew)))[0])
