#!/usr/bin/env python3
"""Map decrease-dominance regions over two corpus landscapes.

Every point of a sublevel set falls into one of a few labels: the
gradient dominates the optimality gap (R1_1 / R1_2 depending on the
exponent that certifies it), the negative curvature dominates (R2_1
through R2_3), neither does (Outside), or the point already sits below
the reference value (BelowRef).  This script renders the partition as
ASCII strips and grids, the plot-free twin of a region figure.

Run: python3 demos/region_maps.py [--res-1d 121] [--res-2d 41]
"""

import argparse

import numpy as np

from regionopt import Region, RegionParams, get_objective, region_scan

GLYPH = {
    Region.R1_1: "g",
    Region.R1_2: "G",
    Region.R2_1: "c",
    Region.R2_2: "C",
    Region.R2_3: "X",
    Region.OUTSIDE: ".",
    Region.BELOW_REF: "-",
    Region.UNKNOWN: "?",
}
LEGEND = (
    "legend: G/g gradient dominates (strong/weak exponent), "
    "X/C/c curvature dominates (strong to weak), . outside, - below reference"
)


def strip_1d(name, kappa, f_ref, resolution):
    obj = get_objective(name)
    scan = region_scan(obj, resolution, RegionParams(kappa=kappa, f_ref=f_ref))
    xs = scan.points[:, 0]
    print(f"\n{name}: kappa={kappa} f_ref={f_ref} on [{xs[0]:g}, {xs[-1]:g}]")
    print("".join(GLYPH[lab] for lab in scan.labels))
    ticks = np.linspace(xs[0], xs[-1], 7)
    print(" ".join(f"{t:g}" for t in ticks), "(axis ticks)")
    print("counts:", scan.counts())


def grid_2d(name, kappa, f_ref, resolution):
    obj = get_objective(name)
    scan = region_scan(obj, resolution, RegionParams(kappa=kappa, f_ref=f_ref))
    print(f"\n{name}: kappa={kappa} f_ref={f_ref}, {resolution}x{resolution} grid")
    # points iterate with the second axis fastest; print one row per x0
    for i in range(resolution):
        row = scan.labels[i * resolution : (i + 1) * resolution]
        print("".join(GLYPH[lab] for lab in row))
    print("counts:", scan.counts())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--res-1d", type=int, default=121)
    ap.add_argument("--res-2d", type=int, default=41)
    args = ap.parse_args()

    print(LEGEND)
    # 1-D piecewise landscape: a pocket around the shallow kink escapes
    # both tests, the rest of the domain is gradient-dominated
    strip_1d("fig1", kappa=0.05, f_ref=-0.5, resolution=args.res_1d)
    # pure saddle: curvature carries the certificate near the origin,
    # the gradient takes over away from it
    grid_2d("saddle2d", kappa=0.5, f_ref=0.0, resolution=args.res_2d)
    # strongly convex quadratic: one label everywhere
    strip_1d("pl_noncvx", kappa=0.35, f_ref=0.0, resolution=args.res_1d)


if __name__ == "__main__":
    main()
