"""Convergence of the second-order expansion against the numerical solver.

    python scripts/convergence_study.py --coeff a3=0.1 --kappa 1 2 3 6
"""

import argparse
import sys

from cwlap.oracle_solver import convergence_study
from cwlap.width_body import parse_coeffs


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--coeff", default="a3=0.1")
    parser.add_argument("--kappa", type=int, nargs="+", default=[1, 2, 3, 6])
    parser.add_argument("--eps", type=float, nargs="+", default=[0.04, 0.02, 0.01])
    args = parser.parse_args()
    coeffs = parse_coeffs(args.coeff)
    for kappa in args.kappa:
        study = convergence_study(coeffs, kappa, args.eps)
        print(f"# kappa={kappa}")
        sys.stdout.write(study.to_csv())


if __name__ == "__main__":
    main()
