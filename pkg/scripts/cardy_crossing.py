#!/usr/bin/env python3
"""Crossing probability across a sweep of boundary cross-ratios.

For each position of the fourth mark, estimates the blue crossing between
the opposite boundary arcs and compares it with the closed form.

Usage: python scripts/cardy_crossing.py [delta] [samples]
"""

import cmath
import math
import sys

from hexperc import (
    DiskDomain,
    build_lattice_approximation,
    cardy_formula,
    crossing_probability_mc,
    disk_to_halfplane,
)


def main():
    delta = float(sys.argv[1]) if len(sys.argv) > 1 else 1 / 30
    samples = int(sys.argv[2]) if len(sys.argv) > 2 else 50_000
    dom = build_lattice_approximation(DiskDomain(0j, 1.0), delta)
    print(f"{dom.n_cells} hexagons at delta={delta:g}")
    print("u_angle    eta     closed_form  mc_crossing  gap")
    a_ang, b_ang, v_ang = 0.0, 90.0, 180.0
    a_pt, b_pt, v_pt = (cmath.exp(1j * math.radians(t)) for t in (a_ang, b_ang, v_ang))
    for u_ang in (215.0, 245.0, 270.0, 300.0, 330.0):
        u_pt = cmath.exp(1j * math.radians(u_ang))
        eta = (disk_to_halfplane(u_pt, a_pt, b_pt) / disk_to_halfplane(v_pt, a_pt, b_pt)).real
        closed = cardy_formula(min(1.0, max(0.0, eta)))
        a = dom.nearest_midpoint(a_pt, on_boundary=True)
        b = dom.nearest_midpoint(b_pt, on_boundary=True)
        v = dom.nearest_midpoint(v_pt, on_boundary=True)
        u = dom.nearest_midpoint(u_pt, on_boundary=True)
        rep = crossing_probability_mc(dom, a, b, v, u, samples, seed=5)
        print(f"{u_ang:7.1f}  {eta:.4f}   {closed:.5f}      {rep.p_left:.5f}   "
              f"{abs(rep.p_left - closed):.5f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
