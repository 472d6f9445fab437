"""Energy convergence on the clamped plane under a smooth pressure.

Usage: python scripts/run_convergence.py [--levels 4] [--base 8] [--out convergence.csv]
"""

import argparse
import sys

import numpy as np

from cosserat_shell import geometry
from cosserat_shell.energy import MaterialParams
from cosserat_shell.fem import LoadSpec, convergence_study
from cosserat_shell.fem.convergence import CSV_HEADER


def sinsin(x):
    s = np.sin(np.pi * x[..., 0]) * np.sin(np.pi * x[..., 1])
    return s[..., None] * np.array([0.0, 0.0, 1.0])


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--base", type=int, default=8)
    p.add_argument("--h", type=float, default=0.1)
    p.add_argument("--order", default="H5", choices=["H3", "H5"])
    p.add_argument("--out", default=None)
    args = p.parse_args(argv)

    mat = MaterialParams(mu=1.0, lam=1.0, muc=0.3, Lc=0.1, b1=1.0, b2=1.0, b3=1.0)
    rows = convergence_study(geometry.plane(), mat, args.h, LoadSpec(f=sinsin),
                             levels=args.levels, base=args.base, order=args.order)
    text = CSV_HEADER + "\n" + "".join(r.to_csv() + "\n" for r in rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


if __name__ == "__main__":
    main()
