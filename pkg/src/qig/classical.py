"""Csiszar f-divergences of finite probability vectors and coarse-graining."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .matcore import as_rng
from .stdfunc import Orientation, StandardFunction, alpha_divergence, xlogx

PROB_ATOL = 1e-12


def as_probability(p) -> np.ndarray:
    v = np.asarray(p, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("probability vector must be one-dimensional and non-empty")
    if not np.all(np.isfinite(v)) or np.any(v < 0):
        raise ValueError("probability vector needs finite nonnegative entries")
    if abs(v.sum() - 1.0) > PROB_ATOL:
        raise ValueError(f"probability vector sums to {v.sum()!r}")
    return v


def _convex(name, func, at_zero, slope) -> StandardFunction:
    return StandardFunction(name, func, float(at_zero), Orientation.CONVEX, float(slope))


def kl() -> StandardFunction:
    return xlogx()


def variational() -> StandardFunction:
    """``|t-1|``; gives the variational distance ``sum |p-q|``."""
    return _convex("variational", lambda t: np.abs(t - 1), 1.0, 1.0)


def hellinger() -> StandardFunction:
    """``(1 - sqrt t)^2 / 2``.

    Note the evaluated divergence is ``sum (sqrt p - sqrt q)^2 / 2``.
    """
    return _convex("hellinger", lambda t: (1 - np.sqrt(t)) ** 2 / 2, 0.5, 0.5)


def csiszar_fujisawa(s: float) -> StandardFunction:
    """``(1 + x - x^s - x^(1-s)) / (s (1-s))`` for ``0 < s != 1``."""
    s = float(s)
    if s <= 0 or s == 1:
        raise ValueError("s must satisfy 0 < s != 1")
    c = 1.0 / (s * (1 - s))
    lim = c if s < 1 else np.inf
    return _convex(f"fs:{s:g}", lambda x: c * (1 + x - x**s - x ** (1 - s)), lim, lim)


def osterreicher_vajda(beta: float) -> StandardFunction:
    """Symmetric family ``f_beta`` of Osterreicher and Vajda, ``beta > 0``."""
    beta = float(beta)
    if beta <= 0:
        raise ValueError("beta must be positive")
    if beta == 1:
        def f(x):
            xl = np.where(x == 0, 0.0, x * np.log(np.where(x == 0, 1.0, x)))
            return (1 + x) * np.log(2) + xl - (1 + x) * np.log1p(x)

        return _convex("ov:1", f, np.log(2), np.log(2))
    c = 1.0 / (1 - 1 / beta)
    lim = c * (1 - 2 ** (1 / beta - 1))
    return _convex(f"ov:{beta:g}",
                   lambda x: c * ((1 + x**beta) ** (1 / beta) - 2 ** (1 / beta - 1) * (1 + x)),
                   lim, lim)


def shifted(f: StandardFunction, c: float) -> StandardFunction:
    """``f(t) + c (t - 1)``, which leaves every f-divergence unchanged."""
    return StandardFunction(f"{f.name}+{c:g}(t-1)", lambda t: f(t) + c * (t - 1),
                            f.at_zero - c, f.orientation, f.slope_at_inf + c)


def conjugate(f: StandardFunction) -> StandardFunction:
    """``f*(x) = x f(1/x)``; satisfies ``D_f(p||q) = D_f*(q||p)``."""
    def fs(x):
        with np.errstate(divide="ignore"):
            inv = np.where(x == 0, 1.0, 1.0 / np.where(x == 0, 1.0, x))
        return np.where(x == 0, f.slope_at_inf, x * f(inv))

    return StandardFunction(f"conj({f.name})", fs, f.slope_at_inf, f.orientation, f.at_zero)


def divergence_registry() -> list[StandardFunction]:
    return [kl(), variational(), hellinger(), alpha_divergence(0.5), alpha_divergence(0.3),
            csiszar_fujisawa(0.5), csiszar_fujisawa(2.0), osterreicher_vajda(0.5),
            osterreicher_vajda(1.0), osterreicher_vajda(2.0)]


def f_divergence(p, q, f: StandardFunction) -> float:
    """``D_f(p||q) = sum_x q(x) f(p(x)/q(x))`` with the zero conventions.

    Terms with ``p = q = 0`` vanish; ``q = 0 < p`` contributes
    ``p * lim f(t)/t`` and ``p = 0 < q`` contributes ``q * f(0+)``. An
    infinite limit yields ``inf`` rather than an exception.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise ValueError("p and q must be vectors of equal length")
    both = (p > 0) & (q > 0)
    total = 0.0
    if np.any(both):
        total += float(np.sum(q[both] * f(p[both] / q[both])))
    only_p = (p > 0) & (q == 0)
    if np.any(only_p):
        total += float(np.sum(p[only_p])) * f.slope_at_inf
    only_q = (p == 0) & (q > 0)
    if np.any(only_q):
        total += float(np.sum(q[only_q])) * f.at_zero
    return total


def validate_partition(blocks: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """Check that ``blocks`` (0-based indices) partition ``range(n)``."""
    seen: set[int] = set()
    out = []
    for b in blocks:
        b = [int(i) for i in b]
        if not b:
            raise ValueError("empty block in partition")
        if any(i < 0 or i >= n for i in b) or seen.intersection(b) or len(set(b)) != len(b):
            raise ValueError("blocks must be disjoint subsets of range(n)")
        seen.update(b)
        out.append(b)
    if len(seen) != n:
        raise ValueError("partition does not cover the index set")
    return out


def coarse_grain(p, blocks: Sequence[Sequence[int]]) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    blocks = validate_partition(blocks, p.size)
    return np.array([p[b].sum() for b in blocks])


def random_partition(n: int, rng) -> list[list[int]]:
    rng = as_rng(rng)
    k = int(rng.integers(1, n + 1))
    labels = rng.permutation(np.concatenate([np.arange(k), rng.integers(0, k, n - k)]))
    return [list(np.flatnonzero(labels == j)) for j in range(k)]


def random_probability(n: int, rng, zeros: bool = False) -> np.ndarray:
    """Dirichlet(1) vector; with ``zeros`` some entries may be set to zero."""
    rng = as_rng(rng)
    v = rng.dirichlet(np.ones(n))
    if zeros and n > 1:
        mask = rng.random(n) < 0.25
        mask[rng.integers(n)] = False
        v = np.where(mask, 0.0, v)
        v /= v.sum()
    return v


def pinsker_gap(p, q) -> float:
    """``2 D(p||q) - (sum |p - q|)^2``; ``inf`` when the divergence is."""
    d = f_divergence(p, q, kl())
    if not np.isfinite(d):
        return np.inf
    v = float(np.sum(np.abs(np.asarray(p) - np.asarray(q))))
    return 2 * d - v * v
