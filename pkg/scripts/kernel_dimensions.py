#!/usr/bin/env python3
"""Tabulate the kernel of the realization map on endomorphism spaces.

For each word and each realization dimension n, print the size of the
matching basis, the rank of the realized map, and the kernel dimension.

Usage: python scripts/kernel_dimensions.py [--words uu uuu uuuu] [--n 2 3]
"""
from __future__ import annotations

import argparse
import sys

from curcat.incarnate import IncarnationConfig, kernel_of_incarnation


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--words", nargs="+", default=["uu", "uuu", "uuuu"])
    parser.add_argument("--n", nargs="+", type=int, default=[2, 3])
    args = parser.parse_args()
    print(f"{'word':>6} {'n':>3} {'basis':>6} {'rank':>6} {'kernel':>7}")
    for text in args.words:
        flavor = "unoriented" if "s" in text else "oriented"
        for n in args.n:
            result = kernel_of_incarnation(text, text, IncarnationConfig(n, flavor))
            print(
                f"{text:>6} {n:>3} {result.hom_dimension:>6} "
                f"{result.rank:>6} {result.kernel_dimension:>7}"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
