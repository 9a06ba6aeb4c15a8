"""Standard operator monotone functions and their algebra.

A *standard* function ``f`` on ``(0, inf)`` is operator monotone with
``f(1) = 1`` and ``x f(1/x) = f(x)``. Standard functions generate monotone
metrics and generalized covariances; convex generators such as ``x log x``
generate divergences instead. Both kinds are represented by
:class:`StandardFunction`, told apart by :class:`Orientation`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

_NEAR_ONE = 1e-6


class Orientation(enum.Enum):
    MONOTONE = "monotone-increasing-standard"
    CONVEX = "divergence-convex"


@dataclass(frozen=True)
class StandardFunction:
    """A scalar function on the positive half line with analytic metadata.

    Attributes
    ----------
    name : str
        Selector-style identifier (``"sld"``, ``"wyd:0.5"``, ...).
    func : callable
        Vectorized map on positive arrays.
    at_zero : float
        The limit ``f(0+)`` (may be ``inf`` for divergence generators).
    orientation : Orientation
        ``MONOTONE`` for metric generators, ``CONVEX`` for divergence
        generators.
    slope_at_inf : float
        The limit of ``f(t)/t`` as ``t -> inf``; needed by the zero
        conventions of the classical f-divergence.
    """

    name: str
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    at_zero: float
    orientation: Orientation = Orientation.MONOTONE
    slope_at_inf: float = float("nan")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            return self.func(x)

    @property
    def is_standard(self) -> bool:
        return self.orientation is Orientation.MONOTONE


def _standard(name, func, at_zero) -> StandardFunction:
    # x f(1/x) = f(x) makes the slope at infinity equal to f(0)
    return StandardFunction(name, func, float(at_zero), Orientation.MONOTONE, float(at_zero))


def _patch_near_one(x, values, eps=1e-10):
    # every standard function has f(1) = 1 and f'(1) = 1/2
    near = np.abs(x - 1.0) < eps
    if np.any(near):
        values = np.where(near, 1.0 + (x - 1.0) / 2, values)
    return values


# -- registry ----------------------------------------------------------------

def sld() -> StandardFunction:
    """Arithmetic mean ``(1+t)/2``: the symmetric logarithmic derivative."""
    return _standard("sld", lambda t: (1 + t) / 2, 0.5)


def harmonic() -> StandardFunction:
    return _standard("harmonic", lambda t: 2 * t / (1 + t), 0.0)


def _km(t):
    u = t - 1.0
    small = np.abs(u) < _NEAR_ONE
    safe = np.where(small, 2.0, t)
    val = (safe - 1.0) / np.log(safe)
    # x/log(1+x) = 1 + x/2 - x^2/12 + ...
    series = 1.0 + u / 2 - u**2 / 12
    return np.where(small, series, val)


def kubo_mori() -> StandardFunction:
    """Logarithmic mean generator ``(t-1)/log t``."""
    return _standard("km", _km, 0.0)


def wyd(beta: float) -> StandardFunction:
    """Wigner-Yanase-Dyson function ``b(1-b)(t-1)^2 / ((t^b-1)(t^(1-b)-1))``."""
    beta = float(beta)
    if not 0 < abs(beta) < 1:
        raise ValueError("WYD parameter must satisfy 0 < |beta| < 1")

    def f(t):
        lt = np.log(t)
        den = np.expm1(beta * lt) * np.expm1((1 - beta) * lt)
        safe = np.where(den == 0, 1.0, den)
        return _patch_near_one(t, beta * (1 - beta) * (t - 1) ** 2 / safe)

    return _standard(f"wyd:{beta:g}", f, beta * (1 - beta) if beta > 0 else 0.0)


def geometric() -> StandardFunction:
    """``sqrt(t)``, whose mean kernel is ``sqrt(xy)``."""
    return _standard("sqrt", np.sqrt, 0.0)


def alpha_divergence(a: float) -> StandardFunction:
    """Degree-``a`` generator ``(1 - t^a) / (a (1-a))`` (convex)."""
    a = float(a)
    if a in (0.0, 1.0):
        raise ValueError("alpha must differ from 0 and 1")
    c = 1.0 / (a * (1 - a))
    at_zero = c if a > 0 else np.inf
    slope = 0.0 if a < 1 else np.inf
    return StandardFunction(f"alpha:{a:g}", lambda t: c * (1 - t**a), at_zero,
                            Orientation.CONVEX, slope)


def xlogx() -> StandardFunction:
    """Umegaki / Kullback-Leibler generator ``t log t``."""
    def f(t):
        return np.where(t == 0, 0.0, t * np.log(np.where(t == 0, 1.0, t)))

    return StandardFunction("xlogx", f, 0.0, Orientation.CONVEX, np.inf)


def registry() -> list[StandardFunction]:
    """The fixed function set exercised by the certification suites."""
    return [sld(), harmonic(), kubo_mori(), wyd(0.5), wyd(0.25), geometric(),
            alpha_divergence(0.5), alpha_divergence(0.3), xlogx()]


def standard_registry() -> list[StandardFunction]:
    return [f for f in registry() if f.is_standard]


def convex_registry() -> list[StandardFunction]:
    return [f for f in registry() if not f.is_standard]


# -- transforms --------------------------------------------------------------

def tilde_transform(f: StandardFunction) -> StandardFunction:
    """``f~(x) = ((x+1) - (x-1)^2 f(0)/f(x)) / 2``; standard whenever ``f`` is."""
    if not f.is_standard:
        raise ValueError(f"{f.name} is not a standard function")
    f0 = f.at_zero

    def ft(x):
        return 0.5 * ((x + 1) - (x - 1) ** 2 * f0 / f(x))

    return _standard(f"tilde({f.name})", ft, 0.0 if f0 > 0 else 0.5)


def extremal_reciprocal(lam: float, x):
    """Extremal kernel ``g_lam(x)``; reciprocal of a standard function."""
    x = np.asarray(x, dtype=float)
    return (1 + lam) / 2 * (1 / (x + lam) + 1 / (1 + x * lam))


def hansen_extremal(lam: float) -> StandardFunction:
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")
    return _standard(f"extremal:{lam:g}",
                     lambda x: 1.0 / extremal_reciprocal(lam, x),
                     2 * lam / (1 + lam) ** 2)


def hansen_mixture(nodes, weights) -> StandardFunction:
    """Standard function with ``1/f = sum_k w_k g_{nodes_k}``."""
    nodes = np.asarray(nodes, dtype=float).ravel()
    weights = np.asarray(weights, dtype=float).ravel()
    if nodes.shape != weights.shape or nodes.size == 0:
        raise ValueError("nodes and weights must be non-empty and of equal length")
    if np.any(nodes < 0) or np.any(nodes > 1):
        raise ValueError("nodes must lie in [0, 1]")
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be a probability vector")

    def f(x):
        x = np.asarray(x, dtype=float)
        g = sum(w * extremal_reciprocal(lam, x) for lam, w in zip(nodes, weights))
        return 1.0 / g

    if np.any((nodes == 0) & (weights > 0)):
        f0 = 0.0
    else:
        live = weights > 0
        g0 = np.sum(weights[live] * (1 + nodes[live]) ** 2 / (2 * nodes[live]))
        f0 = 1.0 / g0
    name = "mixture(" + ",".join(f"{lam:g}:{w:g}" for lam, w in zip(nodes, weights)) + ")"
    return _standard(name, f, f0)


# -- certification -----------------------------------------------------------

@dataclass
class Check:
    passed: bool
    worst: float
    note: str = ""


@dataclass
class StandardReport:
    name: str
    checks: dict[str, Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, c in self.checks.items() if not c.passed]


def log_grid(size: int, lo: float = 1e-4, hi: float = 1e4) -> np.ndarray:
    return np.logspace(np.log10(lo), np.log10(hi), size)


def loewner_matrix(f, x: np.ndarray) -> np.ndarray:
    """First divided differences ``[(f(x_i)-f(x_j))/(x_i-x_j)]``.

    The diagonal holds ``f'(x_i)`` from a central difference.
    """
    fx = f(x)
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    L = (fx[:, None] - fx[None, :]) / dx
    h = 1e-5 * x
    np.fill_diagonal(L, (f(x + h) - f(x - h)) / (2 * h))
    return (L + L.T) / 2


def check_standard(f: StandardFunction, grid_size: int = 200, loewner_order: int = 4,
                   draws: int = 50, seed: int = 0, tol: float = 1e-10) -> StandardReport:
    """Numerically certify the defining properties of a standard function.

    The Loewner test is only a necessary condition for operator
    monotonicity: it checks positivity of Loewner matrices at ``draws``
    random point sets of size ``loewner_order`` drawn log-uniformly from
    ``[1e-2, 1e2]``. Symmetry and the mean bounds are checked with a
    relative tolerance, scaled by ``max(1, f(x))``.
    """
    if grid_size < 10:
        raise ValueError("grid_size must be >= 10")
    if not 2 <= loewner_order <= 8:
        raise ValueError("loewner_order must lie in 2..8")
    x = log_grid(grid_size)
    fx = f(x)
    scale = np.maximum(1.0, np.abs(fx))
    checks: dict[str, Check] = {}

    e1 = abs(float(f(np.array([1.0]))[0]) - 1.0)
    checks["unit"] = Check(e1 <= tol, e1)

    sym = np.abs(x * f(1 / x) - fx) / scale
    checks["symmetry"] = Check(bool(np.all(sym <= tol)), float(np.max(sym)))

    lower = (2 * x / (x + 1) - fx) / scale
    upper = (fx - (1 + x) / 2) / scale
    worst = float(max(lower.max(), upper.max()))
    checks["mean_bounds"] = Check(worst <= tol, worst)

    drops = (fx[:-1] - fx[1:]) / scale[1:]
    checks["monotone"] = Check(bool(np.all(drops <= tol)), float(drops.max()))

    rng = np.random.default_rng(seed)
    lmin = np.inf
    for _ in range(draws):
        while True:
            pts = np.sort(np.exp(rng.uniform(np.log(1e-2), np.log(1e2), loewner_order)))
            if np.all(np.diff(pts) > 1e-3 * pts[1:]):
                break
        lmin = min(lmin, float(np.linalg.eigvalsh(loewner_matrix(f, pts))[0]))
    checks["loewner"] = Check(lmin >= -1e-8, lmin, "necessary condition")
    return StandardReport(f.name, checks)
