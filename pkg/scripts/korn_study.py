"""Discrete Korn constant under mesh refinement and quadrature change on the preset surfaces."""

import argparse
import csv
import sys

from cosserat_shell import geometry
from cosserat_shell.fem import generate_mesh, korn_constant

PRESETS = {
    "plane": geometry.plane(),
    "sphere_cap": geometry.sphere(1.0),
    "cylinder": geometry.cylinder(2.0),
    "saddle": geometry.saddle(0.5),
}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16])
    p.add_argument("--degrees", type=int, nargs="+", default=[4, 7])
    p.add_argument("--out", default=None)
    args = p.parse_args(argv)

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(fh)
    writer.writerow(["surface", "n", "quad_degree", "ndofs", "korn_constant", "method"])
    for name, chart in PRESETS.items():
        for n in args.sizes:
            mesh = generate_mesh(chart.domain, n, n)
            for deg in args.degrees:
                res = korn_constant(mesh, chart, quad_degree=deg)
                writer.writerow([name, n, deg, res.ndof, f"{res.constant:.12g}", res.method])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
