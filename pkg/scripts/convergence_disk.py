#!/usr/bin/env python3
"""Mesh sweep of the interface left-right difference against its conformal limit.

Runs the antipodal configuration with the observation point at 0.5i and
prints one row per mesh, scored against both the ideal-point limit and the
limit at the positions the marks snapped to.

Usage: python scripts/convergence_disk.py [samples] [seed]
"""

import sys

from hexperc import (
    DiskDomain,
    build_lattice_approximation,
    pair_probabilities_mc,
    passage_difference_limit,
)


def main():
    samples = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 11
    ideal = passage_difference_limit(1, -1, 0.5j, 0.5j)
    print(f"limit at the ideal points: {ideal:+.6f}")
    print("delta    cells   mc_diff    stderr   gap_ideal  gap_snapped")
    for delta in (1 / 10, 1 / 20, 1 / 40):
        dom = build_lattice_approximation(DiskDomain(0j, 1.0), delta)
        a = dom.nearest_midpoint(1 + 0j, on_boundary=True)
        b = dom.nearest_midpoint(-1 + 0j, on_boundary=True)
        u = dom.nearest_midpoint(0.5j)
        snapped = passage_difference_limit(
            a.position / abs(a.position), b.position / abs(b.position),
            u.position, u.position)
        rep = pair_probabilities_mc(dom, a, b, u, u, samples, seed=seed)
        print(f"{delta:.4f}  {dom.n_cells:5d}  {rep.diff:+.5f}  {rep.stderr_diff:.5f}"
              f"   {abs(rep.diff - ideal):.5f}    {abs(rep.diff - snapped):.5f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
