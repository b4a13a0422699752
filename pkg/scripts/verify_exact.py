#!/usr/bin/env python3
"""Run every exact identity suite on an enumerable disk and print the summary.

Usage: python scripts/verify_exact.py [delta]
"""

import sys
import time

from hexperc import DiskDomain, build_lattice_approximation
from hexperc.verify import run_verify


def main():
    delta = float(sys.argv[1]) if len(sys.argv) > 1 else 0.24
    t0 = time.time()
    dom = build_lattice_approximation(DiskDomain(0j, 1.0), delta)
    a = dom.nearest_midpoint(1 + 0j, on_boundary=True)
    b = dom.nearest_midpoint(-1 + 0j, on_boundary=True)
    result = run_verify(dom, a, b)
    for check in result.checks:
        print(f"{check.status.upper():4s}  {check.name:24s} worst={check.worst_residual:g}  {check.detail}")
    print(f"\n{dom.n_cells} hexagons, {time.time() - t0:.1f} s, passed={result.passed}")
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())
