"""Seeded verification suites, one per acceptance criterion.

Each trial draws its own generator from ``trial_seed(master, index)``, so the
per-trial values, and hence the reduced worst values, do not depend on how
the trials are spread over worker processes.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import partial
from typing import Callable

import numpy as np

from . import channels as ch
from .classical import (coarse_grain, divergence_registry, f_divergence, pinsker_gap,
                        random_partition, random_probability)
from .estimation import (ConditioningError, classical_fisher, cramer_rao_residual,
                         exp_family_evolve, fisher_matrix, km_exp_family, pushforward,
                         random_centered_generator, random_model, sld_exp_closed_form,
                         sld_exp_family, affine_family)
from .fisher import (MeanKernel, StepError, fisher_metric, hessian_exact, hessian_fd,
                     hessian_mismatch, km_cost_quadrature, skew_information,
                     tilde_identity_gap)
from .matcore import (DomainError, ValidationError, frobenius_rel, haar_unitary,
                      matrix_function, random_density, random_hermitian, random_traceless,
                      trial_seed)
from .quasient import quantum_pinsker_gap, quasi_entropy, quasi_entropy_oracle
from .selectors import parse_function
from .stdfunc import (check_standard, hansen_extremal, hansen_mixture, harmonic, kubo_mori,
                      registry, sld, standard_registry, tilde_transform, wyd)
from .uncertainty import gibi_grid_min, gram_domination_check, gram_pair, hermitian_det

LOWER, UPPER = "min", "max"


@dataclass(frozen=True)
class SuiteConfig:
    """Parameters of one verification run.

    ``functions`` holds selector strings; ``None`` means the suite default.
    ``tol`` overrides every check tolerance of the suite when given.
    """

    suite: str
    trials: int | None = None
    dims: tuple = (2, 3, 4)
    seed: int = 0
    tol: float | None = None
    functions: tuple | None = None
    quantity: str = "quasi"
    m: tuple = (1, 2, 3)
    jobs: int = 1

    def __post_init__(self):
        if self.trials is not None and self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if not self.dims or min(self.dims) < 2:
            raise ValueError("dimensions must be >= 2")
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from {sorted(SUITES)}")


@dataclass(frozen=True)
class Suite:
    name: str
    criterion: int
    checks: dict                      # name -> (direction, default tolerance)
    trial: Callable | None
    default_trials: int
    static: Callable | None = None    # seed-independent checks run once


@dataclass
class CheckResult:
    direction: str
    tol: float
    worst: float
    trial: int | None
    seed: int | None
    passed: bool


@dataclass
class SuiteReport:
    suite: str
    criterion: int
    trials: int
    seed: int
    checks: dict
    errors: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.errors and all(c.passed for c in self.checks.values())

    def worst_values(self) -> dict:
        return {k: c.worst for k, c in self.checks.items()}

    def to_doc(self) -> dict:
        doc = asdict(self)
        doc["passed"] = self.passed
        return json_safe(doc)


def json_safe(obj):
    """Replace non-finite floats by strings so reports stay strict JSON."""
    if isinstance(obj, dict):
        return {k: json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


# -- helpers ----------------------------------------------------------------

def _functions(cfg, default):
    if cfg.functions is None:
        return default()
    return [parse_function(s) for s in cfg.functions]


def _dim(cfg, rng):
    return int(rng.choice(cfg.dims))


def _random_channel(n, rng):
    kind = int(rng.integers(4))
    if kind == 1:
        return ch.pinching(haar_unitary(n, rng), random_partition(n, rng))
    if kind == 2 and n == 4:
        return ch.partial_trace((2, 2), "second" if rng.random() < 0.5 else "first")
    if kind == 3:
        return ch.measurement_channel(ch.random_povm(n, int(rng.integers(2, 5)), rng))
    dout = int(rng.integers(2, 5))
    k = max(int(rng.integers(1, 4)), -(-n // dout))
    return ch.random_channel(n, dout, k, rng)


def _rel(a, b, scale):
    return abs(a - b) / max(abs(scale), 1e-300)


# -- criterion 1: oracle equivalence -----------------------------------------

def _trial_oracle(cfg, rng):
    n = _dim(cfg, rng)
    r1, r2 = random_density(n, rng), random_density(n, rng)
    A = None if rng.random() < 0.5 else random_hermitian(n, rng) + 1j * random_hermitian(n, rng)
    worst = 0.0
    for f in _functions(cfg, registry):
        closed = quasi_entropy(r1, r2, A, f)
        oracle = quasi_entropy_oracle(r1, r2, A, f)
        # scale: the same sum with absolute values of every term
        scale = quasi_entropy(r1, r2, A, _absolute(f))
        worst = max(worst, _rel(closed, oracle, scale))
    return {"relative_error": worst}


def _absolute(f):
    from .stdfunc import StandardFunction
    return StandardFunction(f"|{f.name}|", lambda t: np.abs(f(t)), abs(f.at_zero), f.orientation)


# -- criterion 2: classical monotonicity --------------------------------------

def _signed_difference(big, small):
    if math.isinf(big) and math.isinf(small):
        return 0.0 if big == small else -math.inf
    return big - small


def _trial_classical(cfg, rng):
    n = int(rng.integers(2, 9))
    p = random_probability(n, rng, zeros=True)
    q = random_probability(n, rng, zeros=True)
    blocks = random_partition(n, rng)
    pa, qa = coarse_grain(p, blocks), coarse_grain(q, blocks)
    gap = min(_signed_difference(f_divergence(p, q, f), f_divergence(pa, qa, f))
              for f in _functions(cfg, divergence_registry))
    return {"gap": gap}


# -- criterion 3: quantum monotonicity ---------------------------------------

def _trial_monotonicity(cfg, rng):
    n = _dim(cfg, rng)
    fs = _functions(cfg, registry if cfg.quantity == "quasi" else standard_registry)
    channel = _random_channel(n, rng)
    r1, r2 = random_density(n, rng), random_density(n, rng)
    out = {}
    if cfg.quantity == "quasi":
        A = random_hermitian(channel.dout, rng) if rng.random() < 0.5 else None
        gaps = [ch.monotonicity_gap("quasi", (r1, r2, A) if f.is_standard else (r1, r2), f, channel)
                for f in fs]
        # pinching in the common eigenbasis leaves commuting pairs untouched
        U = haar_unitary(n, rng)
        c1 = (U * np.diag(random_density(n, rng)).real) @ U.conj().T
        c2 = (U * np.diag(random_density(n, rng)).real) @ U.conj().T
        pin = ch.full_pinching(U)
        out["commuting_equality"] = max(abs(ch.monotonicity_gap("quasi", (c1, c2), f, pin))
                                        for f in fs)
    elif cfg.quantity == "fisher":
        X = random_traceless(n, rng)
        gaps = [ch.monotonicity_gap("fisher", (r1, X), f, channel) for f in fs]
    elif cfg.quantity == "fishermatrix":
        model = random_model(n, int(rng.choice(cfg.m)), rng)
        gaps = [ch.monotonicity_gap("fishermatrix", (model, np.zeros(model.m)), f, channel)
                for f in fs]
    else:
        raise ValueError(f"unknown quantity {cfg.quantity!r}")
    out["gap"] = min(gaps)
    return out


# -- criterion 4: Pinsker ----------------------------------------------------

def _trial_pinsker(cfg, rng):
    n = int(rng.integers(2, 9))
    p = random_probability(n, rng, zeros=True)
    q = random_probability(n, rng)
    d = _dim(cfg, rng)
    return {"classical_gap": pinsker_gap(p, q),
            "quantum_gap": quantum_pinsker_gap(random_density(d, rng), random_density(d, rng))}


# -- criterion 5: fixtures ---------------------------------------------------

FIXTURE_STATE = np.diag([0.75, 0.25]).astype(complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


def _static_fixtures(cfg):
    g_sld = fisher_metric(FIXTURE_STATE, sld(), PAULI_X).real
    g_km = fisher_metric(FIXTURE_STATE, kubo_mori(), PAULI_X).real
    wy = skew_information(FIXTURE_STATE, wyd(0.5), PAULI_X)
    return {"sld_metric": abs(g_sld - 4.0),
            "km_metric": abs(g_km - 4 * math.log(3)),
            "wy_skew": abs(wy - (math.sqrt(3) / 2 - 0.5) ** 2)}


# -- criterion 6: the f-tilde program -----------------------------------------

def _trial_tilde(cfg, rng):
    n = _dim(cfg, rng)
    rho = random_density(n, rng)
    X = random_hermitian(n, rng)
    fs = _functions(cfg, standard_registry)
    gap = max(tilde_identity_gap(rho, f, X).gap for f in fs)
    out = {"identity_gap": gap}
    # for f(0) = 0 both sides of the Hessian identity vanish identically
    regular = [f for f in fs if f.at_zero > 0]
    if regular:
        f = regular[int(rng.integers(len(regular)))]
        out["hessian_relative"] = hessian_mismatch(rho, X, f, 1e-4)
    return out


HESSIAN_STEPS = (4e-3, 2e-3, 1e-3)


def hessian_orders(rho, X, f, steps=HESSIAN_STEPS) -> list[float]:
    """Observed orders ``log2(err(h) / err(h/2))`` of the mixed difference."""
    exact = hessian_exact(rho, X, f)
    F = tilde_transform(f)
    errs = [abs(hessian_fd(rho, X, F, h) - exact) for h in steps]
    return [math.log2(a / b) for a, b in zip(errs, errs[1:])]


def _static_tilde(cfg):
    fs = _functions(cfg, standard_registry)
    failures = sum(not check_standard(tilde_transform(f)).passed for f in fs)
    rng = np.random.default_rng(trial_seed(cfg.seed, 10**9))
    rho = random_density(3, rng, floor=0.05)
    X = random_hermitian(3, rng)
    orders = [o for f in fs if f.at_zero > 0 for o in hessian_orders(rho, X, f)] or [2.0]
    return {"tilde_not_standard": float(failures),
            "hessian_order_deviation": max(abs(o - 2) for o in orders)}


# -- criterion 7: metric ordering --------------------------------------------

def _trial_ordering(cfg, rng):
    n = _dim(cfg, rng)
    rho = random_density(n, rng)
    A = random_traceless(n, rng)
    k = int(rng.integers(1, 5))
    extra = [hansen_mixture(rng.random(k), rng.dirichlet(np.ones(k))),
             hansen_extremal(float(rng.random()))]
    lo = fisher_metric(rho, sld(), A).real
    hi = fisher_metric(rho, harmonic(), A).real
    scale = max(1.0, hi)
    gap = min(min(fisher_metric(rho, f, A).real - lo, hi - fisher_metric(rho, f, A).real) / scale
              for f in _functions(cfg, standard_registry) + extra)
    return {"envelope_gap": gap}


# -- criterion 8: Cramer-Rao ---------------------------------------------------

def _trial_cramer_rao(cfg, rng):
    n = _dim(cfg, rng)
    m = int(rng.choice(cfg.m))
    model = random_model(n, m, rng, kind="affine" if rng.random() < 0.5 else "unitary")
    est = [random_hermitian(n, rng) for _ in range(m)]
    fs = _functions(cfg, standard_registry)
    f = fs[int(rng.integers(len(fs)))]
    theta = rng.uniform(-0.5, 0.5, m) if model.name == "affine" else np.zeros(m)
    try:
        res = cramer_rao_residual(model, est, theta, f).min_eigenvalue
    except ConditioningError:
        res = 0.0   # degenerate draw, no bound to test
    out = {"residual_min_eig": res}
    out.update(_cramer_rao_equalities(n, rng))
    return out


def _cramer_rao_equalities(n, rng):
    rho = random_density(n, rng)
    B = random_traceless(n, rng)
    hs = cramer_rao_residual(affine_family(rho, [B]), [B / np.trace(B @ B).real], 0.0,
                             MeanKernel.flat(), centered=False).norm
    T = random_centered_generator(rho, rng)
    sld_eq = cramer_rao_residual(sld_exp_family(rho, T), [T], 0.0, sld()).norm
    H = random_hermitian(n, rng)
    km_rho = matrix_function(H, np.exp)
    km_rho /= np.trace(km_rho).real
    T = random_centered_generator(km_rho, rng, normalize=False)
    A = T / km_cost_quadrature(km_rho, T, T).real
    km_eq = cramer_rao_residual(km_exp_family(H, T), [A], 0.0, kubo_mori()).norm
    return {"affine_hs_equality": hs, "sld_exp_equality": sld_eq, "km_exp_equality": km_eq}


# -- criterion 9: exponential-family ODE --------------------------------------

EVOLVE_THETA = 0.5
EVOLVE_STEPS = 200


def _trial_evolve(cfg, rng):
    n = _dim(cfg, rng)
    rho = random_density(n, rng)
    T = random_hermitian(n, rng)
    path = exp_family_evolve(rho, T, EVOLVE_THETA, sld(), EVOLVE_STEPS)
    sld_err = frobenius_rel(path.D[-1], sld_exp_closed_form(rho, T, EVOLVE_THETA))
    H = random_hermitian(n, rng)
    path = exp_family_evolve(matrix_function(H, np.exp), T, EVOLVE_THETA, kubo_mori(), EVOLVE_STEPS)
    km_err = frobenius_rel(path.D[-1], matrix_function(H + EVOLVE_THETA * T, np.exp))
    U = haar_unitary(n, rng)
    w = np.diag(rho).real
    t = rng.standard_normal(n)
    rho_c = (U * w) @ U.conj().T
    T_c = (U * t) @ U.conj().T
    fs = _functions(cfg, standard_registry)
    f = fs[int(rng.integers(len(fs)))]
    path = exp_family_evolve(rho_c, T_c, EVOLVE_THETA, f, EVOLVE_STEPS)
    exact = (U * (np.exp(EVOLVE_THETA * t) * w)) @ U.conj().T
    return {"sld_relative": sld_err, "km_relative": km_err,
            "commuting_relative": frobenius_rel(path.D[-1], exact)}


# -- criterion 10: Fisher-matrix monotonicity and measurements ----------------

def _trial_fishermatrix(cfg, rng):
    out = _trial_monotonicity(replace(cfg, quantity="fishermatrix"), rng)
    n = _dim(cfg, rng)
    model = random_model(n, int(rng.choice(cfg.m)), rng)
    theta = np.zeros(model.m)
    meas = ch.measurement_channel(ch.random_povm(n, int(rng.integers(2, 6)), rng))
    image = pushforward(model, meas)
    p = np.diag(image.state(theta)).real
    dp = np.array([np.diag(D).real for D in image.tangents(theta)])
    classical = classical_fisher(p, dp)
    transported = fisher_matrix(image, theta, sld())
    quantum = fisher_matrix(model, theta, sld())
    out["classical_agreement"] = float(np.abs(transported - classical).max())
    out["sld_dominance"] = float(np.linalg.eigvalsh(quantum - classical)[0])
    return out


# -- criterion 11: determinant uncertainty ------------------------------------

def _trial_uncertainty(cfg, rng):
    n = _dim(cfg, rng)
    m = int(rng.choice(cfg.m))
    rho = random_density(n, rng)
    ops = [random_hermitian(n, rng) for _ in range(m)]
    fs = _functions(cfg, standard_registry)
    f, g = fs[int(rng.integers(len(fs)))], fs[int(rng.integers(len(fs)))]
    pair = gram_pair(rho, f, g, ops)
    return {"residual": hermitian_det(pair.cov) - hermitian_det(pair.skew),
            "gram_domination": gram_domination_check(pair.cov, pair.skew)}


def _static_uncertainty(cfg):
    fs = _functions(cfg, standard_registry)
    return {"gibi_margin": min(gibi_grid_min(f, g) for f in fs for g in fs)}


# -- registry ----------------------------------------------------------------

SUITES: dict[str, Suite] = {s.name: s for s in [
    Suite("oracle", 1, {"relative_error": (UPPER, 1e-10)}, _trial_oracle, 200),
    Suite("classical", 2, {"gap": (LOWER, -1e-12)}, _trial_classical, 500),
    Suite("monotonicity", 3, {"gap": (LOWER, -1e-9), "commuting_equality": (UPPER, 1e-10)},
          _trial_monotonicity, 500),
    Suite("pinsker", 4, {"classical_gap": (LOWER, -1e-10), "quantum_gap": (LOWER, -1e-10)},
          _trial_pinsker, 500),
    Suite("fixtures", 5, {"sld_metric": (UPPER, 1e-10), "km_metric": (UPPER, 1e-10),
                          "wy_skew": (UPPER, 1e-6)}, None, 1, _static_fixtures),
    Suite("tilde", 6, {"identity_gap": (UPPER, 1e-9), "hessian_relative": (UPPER, 1e-3),
                       "tilde_not_standard": (UPPER, 0.0),
                       "hessian_order_deviation": (UPPER, 0.1)},
          _trial_tilde, 200, _static_tilde),
    Suite("ordering", 7, {"envelope_gap": (LOWER, -1e-11)}, _trial_ordering, 200),
    Suite("cramer-rao", 8, {"residual_min_eig": (LOWER, -1e-8),
                            "affine_hs_equality": (UPPER, 1e-8),
                            "sld_exp_equality": (UPPER, 1e-8),
                            "km_exp_equality": (UPPER, 1e-6)}, _trial_cramer_rao, 200),
    Suite("evolve", 9, {"sld_relative": (UPPER, 1e-6), "km_relative": (UPPER, 1e-6),
                        "commuting_relative": (UPPER, 1e-8)}, _trial_evolve, 20),
    Suite("fishermatrix", 10, {"gap": (LOWER, -1e-9), "classical_agreement": (UPPER, 1e-9),
                               "sld_dominance": (LOWER, -1e-9)}, _trial_fishermatrix, 200),
    Suite("uncertainty", 11, {"residual": (LOWER, -1e-10), "gram_domination": (LOWER, -1e-10),
                              "gibi_margin": (LOWER, -1e-12)},
          _trial_uncertainty, 500, _static_uncertainty),
]}

# criterion 12 compares reruns of the suites above
DETERMINISM_CRITERION = 12
ALL_SUITES = tuple(SUITES) + ("determinism",)

_RECOVERABLE = (ValidationError, DomainError, StepError, ConditioningError, np.linalg.LinAlgError)


def run_trial(cfg: SuiteConfig, index: int) -> tuple[int, dict | None, str | None]:
    suite = SUITES[cfg.suite]
    rng = np.random.default_rng(trial_seed(cfg.seed, index))
    try:
        return index, suite.trial(cfg, rng), None
    except _RECOVERABLE as exc:
        return index, None, f"{type(exc).__name__}: {exc}"


def _passes(direction, tol, value):
    if math.isnan(value):
        return False
    return value >= tol if direction == LOWER else value <= tol


def run_suite(cfg: SuiteConfig) -> SuiteReport:
    """Run every trial and reduce each check to its worst value.

    Ties keep the lowest trial index. Lower-bound checks store negative
    tolerances (``value >= -tol``); ``cfg.tol`` replaces their magnitude.
    """
    start = time.perf_counter()
    suite = SUITES[cfg.suite]
    trials = cfg.trials or suite.default_trials
    results = []
    errors = []
    if suite.trial is not None:
        if cfg.jobs > 1:
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                results = list(pool.map(partial(run_trial, cfg), range(trials),
                                        chunksize=max(1, trials // (4 * cfg.jobs))))
        else:
            results = [run_trial(cfg, i) for i in range(trials)]
    for index, _, err in results:
        if err is not None:
            errors.append({"trial": index, "seed": trial_seed(cfg.seed, index), "error": err})
    static = suite.static(cfg) if suite.static is not None else {}

    checks = {}
    for name, (direction, default) in suite.checks.items():
        tol = default if cfg.tol is None else math.copysign(cfg.tol, default if default else 1.0)
        if name in static:
            worst, where = float(static[name]), None
        else:
            worst, where = (math.inf if direction == LOWER else -math.inf), None
            for index, values, err in results:
                if values is None or name not in values:
                    continue
                v = float(values[name])
                if math.isnan(v):
                    worst, where = v, index
                    break
                if v < worst if direction == LOWER else v > worst:
                    worst, where = v, index
        seed = None if where is None else trial_seed(cfg.seed, where)
        checks[name] = CheckResult(direction, tol, worst, where, seed,
                                   _passes(direction, tol, worst))
    return SuiteReport(cfg.suite, suite.criterion, trials if suite.trial else 0, cfg.seed,
                       checks, errors, time.perf_counter() - start)


def determinism_report(cfg: SuiteConfig, suites=None, trials: int = 20,
                       jobs: int = 2) -> dict:
    """Rerun suites serially and with ``jobs`` workers; compare worst values bit for bit."""
    start = time.perf_counter()
    mismatches = {}
    for name in suites or SUITES:
        base = replace(cfg, suite=name, trials=min(trials, cfg.trials or trials), tol=None)
        a = run_suite(replace(base, jobs=1)).worst_values()
        b = run_suite(replace(base, jobs=max(2, jobs))).worst_values()
        c = run_suite(replace(base, jobs=1)).worst_values()
        diff = [k for k in a if not (_same(a[k], b[k]) and _same(a[k], c[k]))]
        if diff:
            mismatches[name] = diff
    return {"suite": "determinism", "criterion": DETERMINISM_CRITERION,
            "compared": list(suites or SUITES), "mismatches": mismatches,
            "passed": not mismatches, "seed": cfg.seed,
            "wall_time": time.perf_counter() - start}


def _same(x, y):
    return np.float64(x).tobytes() == np.float64(y).tobytes()
