"""lambda_1 and lambda_3 of random constant-width bodies next to the disk values."""

import argparse

import numpy as np

from cwlap import bessel
from cwlap.oracle_solver import solve_index
from cwlap.width_body import ConstantWidthBody, epsilon_max, random_coeffs


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=5)
    parser.add_argument("--eps", type=float, default=0.05)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    lam1 = bessel.bessel_zero(0, 1) ** 2
    lam3 = bessel.bessel_zero(1, 1) ** 2
    print("coeffs,lambda1-disk,lambda3-disk")
    done = 0
    while done < args.count:
        coeffs = random_coeffs(rng)
        if not args.eps < epsilon_max(coeffs):
            continue
        body = ConstantWidthBody(coeffs, args.eps)
        print(f'"{coeffs.format()}",{solve_index(body, 1) - lam1:.3e},{solve_index(body, 3) - lam3:.3e}')
        done += 1


if __name__ == "__main__":
    main()
