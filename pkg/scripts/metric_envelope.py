"""Where monotone metrics sit between the SLD and harmonic envelopes.

Samples seeded (rho, A) pairs and prints, per standard function, the mean
and extreme normalized position
(gamma^f - gamma^sld) / (gamma^harmonic - gamma^sld) in [0, 1].
"""

import argparse

import numpy as np

from qig.fisher import fisher_metric
from qig.matcore import random_density, random_traceless, trial_seed
from qig.stdfunc import hansen_extremal, harmonic, sld, standard_registry


def main():
    parser = argparse.ArgumentParser(description="normalized position inside the metric envelope")
    parser.add_argument("--dim", type=int, default=3)
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    fs = standard_registry() + [hansen_extremal(lam) for lam in (0.25, 0.5, 0.75)]
    pos = {f.name: [] for f in fs}
    for i in range(args.trials):
        rng = np.random.default_rng(trial_seed(args.seed, i))
        rho = random_density(args.dim, rng)
        A = random_traceless(args.dim, rng)
        lo = fisher_metric(rho, sld(), A).real
        hi = fisher_metric(rho, harmonic(), A).real
        if hi - lo < 1e-12 * hi:
            continue
        for f in fs:
            pos[f.name].append((fisher_metric(rho, f, A).real - lo) / (hi - lo))
    print(f"{'function':16s} {'mean':>8s} {'min':>8s} {'max':>8s}")
    for name, v in pos.items():
        v = np.array(v)
        print(f"{name:16s} {v.mean():8.4f} {v.min():8.4f} {v.max():8.4f}")


if __name__ == "__main__":
    main()
