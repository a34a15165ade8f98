#!/usr/bin/env python3
"""Recompute every headline value and compare it with the stored manifest.

Usage: python scripts/reproduce_all.py [--degree-bound N] [--json]
"""
from __future__ import annotations

import argparse
import json
import sys

from curcat.manifest import run_reproductions


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--degree-bound", type=int, default=2)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()
    reports = run_reproductions(degree_bound=args.degree_bound)
    ok = all(report["status"] == "pass" for report in reports)
    if args.json:
        print(json.dumps({"reproductions": reports}, indent=2, sort_keys=True))
        return 0 if ok else 1
    for report in reports:
        print(f"[{report['reproduction']}] {report['status']}")
        for check in report["checks"]:
            print(
                f"  {check['status'].upper():>4}  {check['key']} "
                f"expected={check['expected']!r} computed={check['computed']!r}"
            )
    print("all reproductions passed" if ok else "SOME REPRODUCTIONS FAILED")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
