"""Run every verification suite and write one JSON report.

    python3 scripts/run_suites.py --seed 0 --jobs 4 --out results/suites.json
"""

import argparse
import json
from pathlib import Path

from qig.verify import SUITES, SuiteConfig, determinism_report, run_suite


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--scale", type=float, default=1.0,
                        help="multiply every default trial count")
    parser.add_argument("--suites", nargs="*", default=list(SUITES), choices=list(SUITES))
    parser.add_argument("--determinism-trials", type=int, default=20)
    parser.add_argument("--out", type=Path)
    args = parser.parse_args()

    reports = []
    for name in args.suites:
        trials = max(1, round(SUITES[name].default_trials * args.scale))
        rep = run_suite(SuiteConfig(name, trials=trials, seed=args.seed, jobs=args.jobs))
        print(f"{name:13s} {'pass' if rep.passed else 'FAIL'}  {rep.wall_time:6.1f}s  "
              + "  ".join(f"{k}={v:.3e}" for k, v in rep.worst_values().items()))
        reports.append(rep.to_doc())
    det = determinism_report(SuiteConfig("oracle", seed=args.seed), suites=args.suites,
                             trials=args.determinism_trials, jobs=max(2, args.jobs))
    print(f"{'determinism':13s} {'pass' if det['passed'] else 'FAIL'}  {det['wall_time']:6.1f}s")
    reports.append(det)

    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(json.dumps({"seed": args.seed, "suites": reports}, indent=2))


if __name__ == "__main__":
    main()
