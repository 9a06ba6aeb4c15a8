"""Command-line front end: ``qig <command> [options]``.

Exit codes: 0 on success or a passing verification, 1 when a verification
finds a violation, 2 on input or validation errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from .classical import as_probability, f_divergence
from .estimation import (ConditioningError, affine_family, cramer_rao_residual, exp_family_evolve,
                         km_exp_family, random_centered_generator, sld_exp_family)
from .fileio import matrix_to_doc, read_matrix, read_model, read_probability
from .fisher import MeanKernel, StepError, fisher_metric, km_cost_quadrature, quadratic_cost, skew_information
from .matcore import (DomainError, ValidationError, as_hermitian, as_rng, matrix_function,
                      random_density, random_hermitian, random_traceless, validate_density)
from .quasient import generalized_covariance, quasi_entropy
from .selectors import SELECTOR_HELP, parse_function
from .verify import ALL_SUITES, SUITES, SuiteConfig, determinism_report, json_safe, run_suite

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2
LN2 = math.log(2)


class InputError(Exception):
    pass


def _function(text):
    try:
        return parse_function(text)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _kernel(text):
    """Selector for metric commands; ``hs`` is the flat Hilbert-Schmidt kernel."""
    return MeanKernel.flat() if text == "hs" else _function(text)


def _state(path):
    return validate_density(read_matrix(path))


def _complex_doc(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _dims(text):
    try:
        if "-" in text:
            lo, hi = (int(v) for v in text.split("-", 1))
            return tuple(range(lo, hi + 1))
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}") from None


def _floats(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def _positive(kind):
    def parse(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError("must be positive")
        return v
    return parse


def _scale(args):
    return 1 / LN2 if args.bits else 1.0


# -- commands ----------------------------------------------------------------

def cmd_divergence(args):
    p = as_probability(read_probability(args.p))
    q = as_probability(read_probability(args.q))
    if p.size != q.size:
        raise InputError("p and q have different lengths")
    f = _function(args.f)
    return {"value": f_divergence(p, q, f) * _scale(args), "function": f.name,
            "unit": "bits" if args.bits else "nats"}, EXIT_OK


def cmd_quasi(args):
    f = _function(args.f)
    A = read_matrix(args.A) if args.A else None
    value = quasi_entropy(_state(args.rho1), _state(args.rho2), A, f)
    return {"value": value * _scale(args), "function": f.name,
            "unit": "bits" if args.bits else "nats"}, EXIT_OK


def _basis_doc(rho):
    w, U = np.linalg.eigh(rho)
    return {"eigenvalues": w.tolist(), "vectors": matrix_to_doc(U)}


def cmd_metric(args):
    rho = _state(args.rho)
    A = as_hermitian(read_matrix(args.A))
    B = as_hermitian(read_matrix(args.B)) if args.B else None
    if args.command == "skew":
        f = _function(args.f)
        if not f.is_standard:
            raise InputError(f"{f.name} is not a standard function")
        value = skew_information(rho, f, A)
        kernel = f.name
    else:
        k = _kernel(args.f)
        op = fisher_metric if args.command == "fisher" else quadratic_cost
        value = op(rho, k, A, B)
        kernel = k.name
    return {"value": _complex_doc(value), "kernel": kernel, "basis": _basis_doc(rho)}, EXIT_OK


def cmd_covariance(args):
    rho = _state(args.rho)
    A = read_matrix(args.A)
    B = read_matrix(args.B) if args.B else A
    f = _function(args.f)
    return {"value": _complex_doc(generalized_covariance(rho, A, B, f)),
            "function": f.name}, EXIT_OK


def _builtin_model(name, dim, rng):
    """Seeded instances of the equality cases, with their natural estimator."""
    rho = random_density(dim, rng)
    if name == "affine":
        B = random_traceless(dim, rng)
        return affine_family(rho, [B]), [B / np.trace(B @ B).real]
    if name == "sld-exp":
        T = random_centered_generator(rho, rng)
        return sld_exp_family(rho, T), [T]
    if name == "km-exp":
        H = random_hermitian(dim, rng)
        kr = matrix_function(H, np.exp)
        kr /= np.trace(kr).real
        T = random_centered_generator(kr, rng, normalize=False)
        return km_exp_family(H, T), [T / km_cost_quadrature(kr, T, T).real]
    raise InputError(f"unknown model {name!r}; use affine, sld-exp, km-exp or file:<model.json>")


def cmd_cramer_rao(args):
    if args.model.startswith("file:"):
        model, est = read_model(args.model[5:])
        if est is None:
            raise InputError("model document lists no estimators")
    else:
        model, est = _builtin_model(args.model, args.dim, as_rng(args.seed))
    theta = args.theta if args.theta is not None else [0.0] * model.m
    if len(theta) != model.m:
        raise InputError(f"model has {model.m} parameters, got {len(theta)} values")
    kernel = _kernel(args.f)
    try:
        res = cramer_rao_residual(model, est, np.array(theta), kernel, centered=not args.uncentered)
    except ConditioningError as exc:
        raise InputError(str(exc)) from exc
    ok = res.min_eigenvalue >= -args.tol
    return {"model": model.name, "kernel": kernel.name, "theta": theta,
            "residual": res.residual.real.tolist(), "min_eigenvalue": res.min_eigenvalue,
            "fisher": res.fisher.tolist(), "cost": res.cost.real.tolist(),
            "jacobian": res.jacobian.tolist(), "tol": args.tol,
            "passed": ok}, EXIT_OK if ok else EXIT_VIOLATION


def cmd_evolve(args):
    rng = as_rng(args.seed)
    rho0 = _state(args.rho) if args.rho else random_density(args.dim, rng)
    n = rho0.shape[0]
    T = as_hermitian(read_matrix(args.T)) if args.T else random_hermitian(n, rng)
    if T.shape != rho0.shape:
        raise InputError("generator and initial state differ in dimension")
    f = _kernel(args.f)
    path = exp_family_evolve(rho0, T, args.theta_max, f, args.steps)
    return {"kernel": getattr(f, "name", str(f)), "theta_max": args.theta_max, "steps": args.steps,
            "subdivisions": path.subdivisions, "trace": float(np.trace(path.D[-1]).real),
            "D": matrix_to_doc(path.D[-1]), "rho": matrix_to_doc(path.rho[-1])}, EXIT_OK


def cmd_verify(args):
    functions = tuple(args.f.split(",")) if args.f else None
    if functions:
        for s in functions:
            _function(s)
    base = dict(trials=args.trials, dims=args.dim, seed=args.seed, tol=args.tol,
                functions=functions, quantity=args.quantity, m=args.m, jobs=args.jobs)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports = []
    if args.suite != "determinism":
        for name in names:
            try:
                cfg = SuiteConfig(name, **base)
            except ValueError as exc:
                raise InputError(str(exc)) from exc
            reports.append(run_suite(cfg).to_doc())
    if args.suite in ("determinism", "all"):
        cfg = SuiteConfig("oracle", **{**base, "trials": None})
        reports.append(determinism_report(cfg, trials=args.trials or 20, jobs=max(2, args.jobs)))
    passed = all(r["passed"] for r in reports)
    return {"suites": reports, "passed": passed}, EXIT_OK if passed else EXIT_VIOLATION


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    common.add_argument("--out", help="also write the report to this file")
    common.add_argument("--bits", action="store_true", help="report logarithmic values in bits")

    parser = argparse.ArgumentParser(prog="qig", description="Quasi-entropies and monotone metrics.")
    sub = parser.add_subparsers(dest="command", required=True)
    fhelp = f"function selector: {SELECTOR_HELP}"

    p = sub.add_parser("divergence", parents=[common], help="classical f-divergence")
    p.add_argument("--f", required=True, help=fhelp)
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.set_defaults(handler=cmd_divergence)

    p = sub.add_parser("quasi", parents=[common], help="quantum quasi-entropy")
    p.add_argument("--f", required=True, help=fhelp)
    p.add_argument("--rho1", required=True)
    p.add_argument("--rho2", required=True)
    p.add_argument("--A")
    p.set_defaults(handler=cmd_quasi)

    for name, text in (("fisher", "monotone metric"), ("cost", "quadratic cost"),
                       ("skew", "skew information")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--f", required=True, help=fhelp + " (or hs for fisher/cost)")
        p.add_argument("--rho", required=True)
        p.add_argument("--A", required=True)
        p.add_argument("--B")
        p.set_defaults(handler=cmd_metric)

    p = sub.add_parser("covariance", parents=[common], help="generalized covariance")
    p.add_argument("--f", required=True, help=fhelp)
    p.add_argument("--rho", required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--B")
    p.set_defaults(handler=cmd_covariance)

    p = sub.add_parser("cramer-rao", parents=[common], help="Cramer-Rao residual")
    p.add_argument("--model", required=True, help="affine, sld-exp, km-exp or file:<model.json>")
    p.add_argument("--f", required=True, help=fhelp + " or hs")
    p.add_argument("--theta", type=_floats)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--tol", type=_positive(float), default=1e-8)
    p.add_argument("--uncentered", action="store_true",
                   help="do not subtract expectation values in the cost")
    p.set_defaults(handler=cmd_cramer_rao)

    p = sub.add_parser("evolve", parents=[common], help="integrate dD/dtheta = J_D(T)")
    p.add_argument("--f", required=True, help=fhelp)
    p.add_argument("--rho")
    p.add_argument("--T")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--theta-max", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=200)
    p.set_defaults(handler=cmd_evolve)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=list(ALL_SUITES) + ["all"])
    p.add_argument("--trials", type=_positive(int))
    p.add_argument("--dim", type=_dims, default=(2, 3, 4), help="e.g. 3, 2-4 or 2,4")
    p.add_argument("--m", type=_dims, default=(1, 2, 3), help="parameter counts, e.g. 2 or 1-3")
    p.add_argument("--tol", type=_positive(float))
    p.add_argument("--f", help="comma-separated selectors (default: suite registry)")
    p.add_argument("--quantity", choices=["quasi", "fisher", "fishermatrix"], default="quasi")
    p.add_argument("--jobs", type=_positive(int), default=1)
    p.set_defaults(handler=cmd_verify)
    return parser


def run(argv=None) -> tuple[int, dict, str | None]:
    """Parse ``argv``, execute, and return ``(exit code, report, --out path)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        body, code = args.handler(args)
    except (InputError, ValidationError, DomainError, StepError, ValueError) as exc:
        body, code = {"error": f"{type(exc).__name__}: {exc}"}, EXIT_INPUT
    report = {"command": ["qig"] + argv, "seed": args.seed, "exit_code": code,
              **body, "wall_time": time.perf_counter() - start}
    return code, json_safe(report), args.out


def main(argv=None) -> int:
    try:
        code, report, out = run(argv)
    except SystemExit as exc:       # argparse usage errors exit with 2
        return int(exc.code or 0)
    text = json.dumps(report, sort_keys=True, indent=2)
    print(text)
    if "error" in report:
        print(report["error"], file=sys.stderr)
    if out:
        Path(out).write_text(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
