"""Tabulate the H5 and H3 admissibility regions over a (h, kappa) grid.

Writes one CSV row per grid point with the verdicts and the H3 path that succeeded.
"""

import argparse
import csv
import sys

import numpy as np

from cosserat_shell.admissibility import check_h3, check_h5
from cosserat_shell.energy import MaterialParams


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--h-max", type=float, default=0.5)
    p.add_argument("--kappa-max", type=float, default=10.0)
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--muc", type=float, default=0.3)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--out", default=None)
    args = p.parse_args(argv)

    mat = MaterialParams(mu=1.0, lam=1.0, muc=args.muc, Lc=0.1, b1=1.0, b2=1.0, b3=1.0)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(fh)
    writer.writerow(["h", "kappa", "h_kappa", "h5_ok", "h3_ok", "h3_path"])
    for h in np.linspace(args.h_max / args.n, args.h_max, args.n):
        for kappa in np.linspace(0.0, args.kappa_max, args.n + 1):
            ok3, path = check_h3(h, kappa, mat, strict=args.strict)
            writer.writerow([f"{h:.6g}", f"{kappa:.6g}", f"{h * kappa:.6g}",
                             int(check_h5(h, kappa)), int(ok3), path if ok3 else ""])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
