"""Step-size study of the finite-difference Hessian of S_{f~} along unitary orbits.

For each standard function with f(0) > 0 prints the absolute error of the
mixed difference against f(0) gamma^f(i[rho,X], i[rho,X]) and the observed
order between consecutive steps. Below roughly 5e-4 roundoff takes over.
"""

import argparse
import math

import numpy as np

from qig.fisher import hessian_exact, hessian_fd
from qig.matcore import random_density, random_hermitian
from qig.stdfunc import standard_registry, tilde_transform


def main():
    parser = argparse.ArgumentParser(description="finite-difference Hessian convergence")
    parser.add_argument("--dim", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--floor", type=float, default=0.05)
    parser.add_argument("--steps", type=float, nargs="*",
                        default=[3.2e-2, 1.6e-2, 8e-3, 4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4, 1.25e-4])
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    rho = random_density(args.dim, rng, floor=args.floor)
    X = random_hermitian(args.dim, rng)
    for f in standard_registry():
        if f.at_zero <= 0:
            continue
        exact = hessian_exact(rho, X, f)
        F = tilde_transform(f)
        print(f"{f.name}  exact={exact:.12g}")
        prev = None
        for h in args.steps:
            err = abs(hessian_fd(rho, X, F, h) - exact)
            order = "" if prev is None or err == 0 else f"{math.log2(prev / err):6.2f}"
            print(f"  h={h:<9.3g} err={err:.3e} {order}")
            prev = err


if __name__ == "__main__":
    main()
