"""Linear solvers and spectral diagnostics for the reduced system."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import DefinitenessError, DiagnosticError, PreconditionError, SolverError
from .assembly import apply_dirichlet, expand, korn_matrices

DENSE_LIMIT = 2000


def pcg(A, b, tol=1e-10, max_iter=None, x0=None):
    """Jacobi-preconditioned CG on ``A x = b``.

    Raises :class:`DefinitenessError` as soon as a search direction with
    ``p.Ap <= 0`` shows up, and :class:`SolverError` when ``max_iter`` is hit.
    Returns ``(x, relative_residual, iterations)``.
    """
    n = len(b)
    max_iter = 10 * n if max_iter is None else max_iter
    bnorm = np.linalg.norm(b)
    if bnorm == 0:
        return np.zeros(n), 0.0, 0
    d = A.diagonal()
    if np.any(d <= 0):
        raise DefinitenessError("non-positive diagonal entry", residual=1.0, iterations=0)
    Minv = 1.0 / d
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    r = b - A @ x
    z = Minv * r
    p = z.copy()
    rz = r @ z
    rel = np.linalg.norm(r) / bnorm
    for k in range(1, max_iter + 1):
        if rel <= tol:
            return x, rel, k - 1
        Ap = A @ p
        curv = p @ Ap
        if not curv > 0:
            raise DefinitenessError(f"negative curvature direction at iteration {k}",
                                    residual=rel, iterations=k)
        step = rz / curv
        x += step * p
        r -= step * Ap
        rel = np.linalg.norm(r) / bnorm
        z = Minv * r
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    # recompute the true residual before giving up
    rel = np.linalg.norm(b - A @ x) / bnorm
    if rel <= tol:
        return x, rel, max_iter
    raise SolverError(f"CG did not converge in {max_iter} iterations (residual {rel:.3e})",
                      residual=rel, iterations=max_iter)


def direct(A, b):
    x = spla.spsolve(sp.csc_matrix(A), b) if sp.issparse(A) else np.linalg.solve(A, b)
    x = np.atleast_1d(x)
    bnorm = np.linalg.norm(b)
    rel = np.linalg.norm(b - A @ x) / bnorm if bnorm else 0.0
    if not np.all(np.isfinite(x)):
        raise SolverError("direct solve produced non-finite values", residual=np.inf)
    return x, rel, 0


def solve(system, tol=1e-10, max_iter=None, method="cg"):
    """Solve the Dirichlet-reduced system and return the full nodal field."""
    red = apply_dirichlet(system)
    if red.matrix.shape[0] == 0:
        raise PreconditionError("reduced system is empty (no interior nodes)")
    if method == "cg":
        x, rel, it = pcg(red.matrix, red.rhs, tol=tol, max_iter=max_iter)
    elif method == "direct":
        x, rel, it = direct(red.matrix, red.rhs)
    else:
        raise ValueError(f"unknown solver method {method!r}")
    return expand(red, x, residual=rel, iterations=it)


def energy(system, field):
    """``B(u, u) = u.M u / weak_form_factor`` for a full nodal field."""
    x = field.vector()
    return float(x @ (system.matrix @ x)) / system.weak_form_factor


def spd_probe(system, num_eigs=1):
    """Smallest eigenvalues of the reduced matrix (shift-invert Lanczos about 0).

    Small systems use a dense symmetric eigensolve.
    """
    A = apply_dirichlet(system).matrix
    n = A.shape[0]
    if n == 0:
        raise PreconditionError("reduced system is empty")
    try:
        if n <= max(num_eigs + 1, 64):
            return np.linalg.eigvalsh(A.toarray())[:num_eigs]
        vals = spla.eigsh(A.tocsc(), k=num_eigs, sigma=0.0, which="LM",
                          return_eigenvectors=False)
    except (spla.ArpackError, spla.ArpackNoConvergence, RuntimeError) as exc:
        raise DiagnosticError(f"eigen-solve broke down: {exc}") from exc
    return np.sort(vals)


@dataclass(frozen=True)
class KornResult:
    constant: float
    ndof: int
    method: str


def korn_constant(mesh, chart, quad_degree=4, dense_limit=DENSE_LIMIT):
    """Smallest ``c`` with ``A x = c B x`` on the Dirichlet-reduced P1 space."""
    if len(mesh.interior_nodes) == 0:
        raise PreconditionError("Korn constant needs at least one interior node")
    A, B = korn_matrices(mesh, chart, quad_degree)
    n = A.shape[0]
    try:
        if n <= dense_limit:
            c = sla.eigh(A.toarray(), B.toarray(), eigvals_only=True, subset_by_index=[0, 0])[0]
            method = "dense"
        else:
            c = spla.eigsh(A.tocsc(), k=1, M=B.tocsc(), sigma=0.0, which="LM",
                           return_eigenvectors=False)[0]
            method = "shift-invert"
    except (sla.LinAlgError, spla.ArpackError, spla.ArpackNoConvergence) as exc:
        raise DiagnosticError(f"generalized eigen-solve broke down: {exc}") from exc
    if not c > 0:
        raise DiagnosticError(f"non-positive Korn constant {c:.3e}")
    return KornResult(constant=float(c), ndof=n, method=method)
