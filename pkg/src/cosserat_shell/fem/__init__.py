from .assembly import (AssembledSystem, FieldDOFs, LoadSpec, ReducedSystem, apply_dirichlet,
                       assemble, assemble_rhs, deformed_points, field_energy, korn_matrices,
                       worker_count)
from .convergence import ConvergenceRow, convergence_study, richardson_rate
from .mesh import Mesh, dump_mesh, generate_mesh, load_mesh
from .quadrature import triangle_rule
from .solvers import KornResult, energy, korn_constant, pcg, solve, spd_probe
