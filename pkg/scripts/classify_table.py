"""Classification of the first disk eigenvalues with their witnesses."""

import argparse
from collections import defaultdict

from cwlap.certify import classify


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-kappa", type=int, default=50)
    args = parser.parse_args()
    groups = defaultdict(list)
    for row in classify(args.max_kappa):
        groups[row.verdict].append(row.kappa)
        print(f"{row.kappa:3d}  ({row.m},{row.p}) {row.branch:6s} {row.verdict:12s} {row.witness}")
    print()
    for verdict, kappas in groups.items():
        print(f"{verdict}: {kappas}")


if __name__ == "__main__":
    main()
