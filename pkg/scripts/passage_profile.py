#!/usr/bin/env python3
"""Passage probability of the disk centre as a function of the mark separation.

Sweeps the angular distance between the two interface endpoints and compares
the Monte Carlo estimate with the closed form.

Usage: python scripts/passage_profile.py [delta] [samples]
"""

import cmath
import math
import sys

from hexperc import (
    DiskDomain,
    build_lattice_approximation,
    schramm_formula,
    surrounding_probability_mc,
)


def main():
    delta = float(sys.argv[1]) if len(sys.argv) > 1 else 1 / 30
    samples = int(sys.argv[2]) if len(sys.argv) > 2 else 50_000
    dom = build_lattice_approximation(DiskDomain(0j, 1.0), delta)
    print(f"{dom.n_cells} hexagons at delta={delta:g}")
    print("theta     closed_form  mc_passage  gap")
    for theta in (0.5, 1.0, math.pi / 2, math.pi, 4.0, 5.5):
        a = dom.nearest_midpoint(cmath.exp(1j * theta), on_boundary=True)
        b = dom.nearest_midpoint(1 + 0j, on_boundary=True)
        rep = surrounding_probability_mc(dom, a, b, 0j, samples, seed=3)
        closed = schramm_formula(theta)
        print(f"{theta:.4f}   {closed:.5f}      {rep.p_left:.5f}   {abs(rep.p_left - closed):.5f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
