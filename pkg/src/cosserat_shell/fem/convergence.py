"""Energy convergence under uniform nested refinement."""

import math
from dataclasses import dataclass
from typing import Optional

from .assembly import assemble
from .mesh import generate_mesh
from .solvers import energy, solve


@dataclass(frozen=True)
class ConvergenceRow:
    level: int
    n: int
    ndofs: int
    energy: float
    rate: Optional[float]  # from this level and the two before it

    def to_csv(self):
        rate = "" if self.rate is None else f"{self.rate:.6f}"
        return f"{self.level},{self.n},{self.ndofs},{self.energy:.17g},{rate}"


CSV_HEADER = "level,n,ndofs,energy,rate"


def richardson_rate(e0, e1, e2):
    """``log2((e1 - e0) / (e2 - e1))`` for meshes halved between levels."""
    d1, d2 = e1 - e0, e2 - e1
    if d1 == 0 or d2 == 0 or (d1 > 0) != (d2 > 0):
        return None
    return math.log2(d1 / d2)


def convergence_study(chart, mat, h, loads, levels=4, base=8, order="H5",
                      weak_form_factor=1.0, method="direct", tol=1e-12, quad_degree=4,
                      override=False):
    """Solve on ``base * 2**l`` meshes, ``l < levels``; energies are ``B(u_l, u_l)``."""
    rows, energies = [], []
    for level in range(levels):
        n = base * 2**level
        mesh = generate_mesh(chart.domain, n, n)
        system = assemble(mesh, chart, mat, h, order, loads, weak_form_factor,
                          quad_degree=quad_degree, override=override)
        field = solve(system, tol=tol, method=method)
        energies.append(energy(system, field))
        rate = richardson_rate(*energies[-3:]) if level >= 2 else None
        rows.append(ConvergenceRow(level, n, len(system.free), energies[-1], rate))
    return rows
