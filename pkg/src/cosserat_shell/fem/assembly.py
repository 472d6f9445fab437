"""P1 assembly of the linear shell system.

Every node carries six dofs in the order ``v1 v2 v3 t1 t2 t3``; the global
index of component ``c`` at node ``k`` is ``6*k + c``.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
import scipy.sparse as sp

from ..admissibility import assess
from ..algebra import anti
from ..energy import ModelOrder, density, density_matrix
from ..errors import AdmissibilityError
from ..geometry import evaluate_jet, fundamental_forms, kappa_sup
from ..shell_tensors import build_tensors
from ..strains import DisplacementJet, strain_state
from .quadrature import triangle_rule

DOFS_PER_NODE = 6
CHUNK = 1024
_REF_GRAD = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])
_ANTI_E = anti(np.eye(3))  # _ANTI_E[c] = Anti(e_c)

LoadField = Union[Callable, np.ndarray, tuple, list, None]


def worker_count():
    """Worker threads for the element loop, capped by ``COSSERAT_SHELL_THREADS``."""
    env = os.environ.get("COSSERAT_SHELL_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), cap))
        except ValueError:
            return 1
    return cap


@dataclass(frozen=True)
class LoadSpec:
    """Surface force ``f`` and couple ``c`` densities; constants or callables of ``x (n, 2)``."""

    f: LoadField = None
    c: LoadField = None

    @staticmethod
    def _eval(g, x):
        if g is None:
            return np.zeros(x.shape[:-1] + (3,))
        if callable(g):
            return np.asarray(g(x), dtype=float).reshape(x.shape[:-1] + (3,))
        return np.broadcast_to(np.asarray(g, dtype=float), x.shape[:-1] + (3,))

    def force(self, x):
        return self._eval(self.f, x)

    def couple(self, x):
        return self._eval(self.c, x)

    def scaled(self, s):
        def sc(g):
            if g is None:
                return None
            if callable(g):
                return lambda x: s * np.asarray(g(x), dtype=float)
            return s * np.asarray(g, dtype=float)
        return LoadSpec(sc(self.f), sc(self.c))


@dataclass
class AssembledSystem:
    matrix: sp.csr_matrix
    rhs: np.ndarray
    constrained: np.ndarray
    mesh: object
    weak_form_factor: float = 1.0
    meta: dict = field(default_factory=dict)

    @property
    def ndof(self):
        return self.matrix.shape[0]

    @property
    def free(self):
        return np.setdiff1d(np.arange(self.ndof), self.constrained)

    def dof(self, node, comp):
        return DOFS_PER_NODE * node + comp

    @property
    def dof_map(self):
        return np.arange(self.ndof).reshape(-1, DOFS_PER_NODE)


@dataclass(frozen=True)
class ReducedSystem:
    matrix: sp.csr_matrix
    rhs: np.ndarray
    free: np.ndarray
    parent: AssembledSystem


@dataclass
class FieldDOFs:
    values: np.ndarray  # (n_nodes, 6)
    residual: float = 0.0
    iterations: int = 0

    @property
    def v(self):
        return self.values[:, :3]

    @property
    def theta(self):
        return self.values[:, 3:]

    def vector(self):
        return self.values.ravel()

    @classmethod
    def from_vector(cls, x, **kw):
        return cls(np.asarray(x, dtype=float).reshape(-1, DOFS_PER_NODE), **kw)


# --- element geometry ---------------------------------------------------------


@dataclass(frozen=True)
class _ElementBatch:
    area: np.ndarray  # (ne,)
    grads: np.ndarray  # (ne, 3, 2) parameter gradients of the hat functions
    phi: np.ndarray  # (nq, 3) hat function values at quadrature points
    weights: np.ndarray  # (nq,)
    x: np.ndarray  # (ne, nq, 2)


def _element_batch(mesh, elems, degree):
    pts, w = triangle_rule(degree)
    p = mesh.nodes[mesh.triangles[elems]]  # (ne, 3, 2)
    J = np.stack([p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]], axis=-1)  # columns
    det = J[:, 0, 0] * J[:, 1, 1] - J[:, 0, 1] * J[:, 1, 0]
    grads = _REF_GRAD @ np.linalg.inv(J)
    phi = np.stack([1 - pts[:, 0] - pts[:, 1], pts[:, 0], pts[:, 1]], axis=-1)
    x = p[:, :1, :] + np.einsum("eij,qj->eqi", J, pts)
    return _ElementBatch(area=0.5 * np.abs(det), grads=grads, phi=phi, weights=w, x=x)


def _geometry_at(chart, x):
    shape = x.shape[:-1]
    jet = evaluate_jet(chart, x.reshape(-1, 2))
    tensors = build_tensors(jet)
    forms = fundamental_forms(jet)
    return jet, tensors, forms, shape


def strain_operator(batch, tensors):
    """Map of the 18 element dofs to ``[vec E, vec K]`` at each quadrature point.

    Shape ``(ne, nq, 18, 18)``. For ``v`` along ``e_c`` at node ``a`` the strain is
    ``E = e_c (grad phi_a)^T Ginv[:2]``; for ``theta`` along ``e_c`` it is
    ``E = -phi_a Anti(e_c) A`` and ``K = e_c (grad phi_a)^T Ginv[:2]``.
    """
    ne, nq = batch.x.shape[:2]
    Gt = tensors.invGradTheta[..., :2, :].reshape(ne, nq, 2, 3)
    A = tensors.A.reshape(ne, nq, 3, 3)
    g = np.einsum("eab,eqbj->eqaj", batch.grads, Gt)  # (ne, nq, 3 nodes, 3)
    eye = np.eye(3)
    S = np.zeros((ne, nq, 18, 18))
    # columns: node a, component c -> 6a + c
    Ev = np.einsum("ic,eqaj->eqijac", eye, g)  # (ne,nq,3,3,a,c)
    Et = -np.einsum("qa,cik,eqkj->eqijac", batch.phi, _ANTI_E, A)
    Kt = Ev
    S4 = S.reshape(ne, nq, 2, 9, 3, 6)
    S4[:, :, 0, :, :, :3] = Ev.reshape(ne, nq, 9, 3, 3)
    S4[:, :, 0, :, :, 3:] = Et.reshape(ne, nq, 9, 3, 3)
    S4[:, :, 1, :, :, 3:] = Kt.reshape(ne, nq, 9, 3, 3)
    return S


def gradient_operator(batch):
    """Map of element dofs to ``[vec grad v, vec grad theta]`` (12 rows)."""
    ne = len(batch.area)
    G = np.zeros((ne, 2, 3, 2, 3, 6))
    g = np.swapaxes(batch.grads, 1, 2)  # (ne, beta, a)
    for c in range(3):
        G[:, 0, c, :, :, c] = g
        G[:, 1, c, :, :, 3 + c] = g
    return G.reshape(ne, 12, 18)


def _symmetrize_upper(K):
    U = np.triu(K)
    return U + np.swapaxes(np.triu(K, 1), -1, -2)


def _element_stiffness(mesh, chart, elems, kind, h, mat, order, factor, degree):
    b = _element_batch(mesh, elems, degree)
    _, tensors, forms, shape = _geometry_at(chart, b.x)
    wq = b.area[:, None] * b.weights[None, :]  # (ne, nq)
    if kind == "stiffness":
        S = strain_operator(b, tensors)
        D = density_matrix(tensors, forms, h, mat, order).reshape(shape + (18, 18))
        w = factor * wq * tensors.detTheta.reshape(shape)
        Ke = np.einsum("eq,eqki,eqkl,eqlj->eij", w, S, D, S, optimize=True)
    elif kind == "korn_a":
        S = strain_operator(b, tensors)
        w = wq * tensors.detTheta.reshape(shape)
        Ke = np.einsum("eq,eqki,eqkj->eij", w, S, S, optimize=True)
    elif kind == "korn_b":
        Gop = gradient_operator(b)
        Ke = b.area[:, None, None] * np.einsum("eki,ekj->eij", Gop, Gop)
    else:
        raise ValueError(kind)
    return _symmetrize_upper(Ke)


def _element_dofs(mesh, elems):
    nodes = mesh.triangles[elems]
    return (DOFS_PER_NODE * nodes[:, :, None] + np.arange(DOFS_PER_NODE)).reshape(-1, 18)


def _upper_triplets(dofs, Ke):
    I = np.broadcast_to(dofs[:, :, None], Ke.shape)
    J = np.broadcast_to(dofs[:, None, :], Ke.shape)
    keep = I <= J
    return I[keep], J[keep], Ke[keep]


def _chunks(n):
    return [np.arange(s, min(s + CHUNK, n)) for s in range(0, n, CHUNK)]


def _global_matrix(mesh, chart, kind, h=None, mat=None, order=ModelOrder.H5, factor=1.0,
                   degree=4, threads=None):
    ndof = DOFS_PER_NODE * mesh.n_nodes
    chunks = _chunks(len(mesh.triangles))

    def work(elems):
        Ke = _element_stiffness(mesh, chart, elems, kind, h, mat, order, factor, degree)
        return _upper_triplets(_element_dofs(mesh, elems), Ke)

    threads = worker_count() if threads is None else threads
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, chunks))  # map preserves chunk order
    else:
        parts = [work(c) for c in chunks]
    rows = np.concatenate([p[0] for p in parts])
    cols = np.concatenate([p[1] for p in parts])
    vals = np.concatenate([p[2] for p in parts])
    U = sp.coo_matrix((vals, (rows, cols)), shape=(ndof, ndof)).tocsr()
    M = U + sp.triu(U, k=1).T
    return M.tocsr()


def assemble_rhs(mesh, chart, loads, degree=4, weight_loads_by_det=False):
    ndof = DOFS_PER_NODE * mesh.n_nodes
    rhs = np.zeros(ndof)
    if loads is None or (loads.f is None and loads.c is None):
        return rhs
    for elems in _chunks(len(mesh.triangles)):
        b = _element_batch(mesh, elems, degree)
        ne, nq = b.x.shape[:2]
        w = b.area[:, None] * b.weights[None, :]
        if weight_loads_by_det:
            _, tensors, _, shape = _geometry_at(chart, b.x)
            w = w * tensors.detTheta.reshape(shape)
        f = loads.force(b.x.reshape(-1, 2)).reshape(ne, nq, 3)
        c = loads.couple(b.x.reshape(-1, 2)).reshape(ne, nq, 3)
        fc = np.concatenate([f, c], axis=-1)  # (ne, nq, 6)
        Fe = np.einsum("eq,qa,eqc->eac", w, b.phi, fc).reshape(ne, 18)
        np.add.at(rhs, _element_dofs(mesh, elems).ravel(), Fe.ravel())
    return rhs


def assemble(mesh, chart, mat, h, order=ModelOrder.H5, loads=None, weak_form_factor=1.0,
             quad_degree=4, weight_loads_by_det=False, override=False, strict=False,
             kappa_grid=64, threads=None):
    """Assemble ``weak_form_factor * B(u, w) = Pi(w)`` on the P1 space.

    Admissibility of ``(h, kappa, material, order)`` is checked first; a failure
    raises :class:`AdmissibilityError` unless ``override`` is set.
    """
    order = ModelOrder(order)
    if not h > 0:
        raise ValueError("thickness h must be positive")
    report = assess(h, kappa_sup(chart, kappa_grid), mat, order, strict=strict)
    if not report.admissible and not override:
        raise AdmissibilityError("; ".join(report.messages) or
                                 f"h*kappa={report.hk:.6g} fails the thickness condition")
    M = _global_matrix(mesh, chart, "stiffness", h, mat, order, weak_form_factor,
                       quad_degree, threads)
    rhs = assemble_rhs(mesh, chart, loads, quad_degree, weight_loads_by_det)
    constrained = (DOFS_PER_NODE * mesh.boundary_nodes[:, None] + np.arange(6)).ravel()
    return AssembledSystem(matrix=M, rhs=rhs, constrained=constrained, mesh=mesh,
                           weak_form_factor=weak_form_factor,
                           meta={"report": report, "order": order.value, "h": h})


def apply_dirichlet(system):
    free = system.free
    A = system.matrix[free][:, free].tocsr()
    return ReducedSystem(matrix=A, rhs=system.rhs[free], free=free, parent=system)


def expand(reduced, x_free, **kw):
    x = np.zeros(reduced.parent.ndof)
    x[reduced.free] = x_free
    return FieldDOFs.from_vector(x, **kw)


def korn_matrices(mesh, chart, quad_degree=4, threads=None):
    """Dirichlet-reduced ``(A, B)``: strain energy ``int |E|^2+|K|^2 det`` and ``H^1`` seminorm."""
    A = _global_matrix(mesh, chart, "korn_a", degree=quad_degree, threads=threads)
    B = _global_matrix(mesh, chart, "korn_b", degree=quad_degree, threads=threads)
    free = np.setdiff1d(np.arange(A.shape[0]),
                        (DOFS_PER_NODE * mesh.boundary_nodes[:, None] + np.arange(6)).ravel())
    return A[free][:, free].tocsr(), B[free][:, free].tocsr()


def field_energy(mesh, chart, field_dofs, mat, h, order=ModelOrder.H5, quad_degree=4):
    """``int density(E, K) det(grad Theta) da`` of a P1 field, via pointwise strains."""
    vals = field_dofs.values if isinstance(field_dofs, FieldDOFs) else np.asarray(field_dofs)
    total = 0.0
    for elems in _chunks(len(mesh.triangles)):
        b = _element_batch(mesh, elems, quad_degree)
        jet, tensors, forms, shape = _geometry_at(chart, b.x)
        nv = vals[mesh.triangles[elems]]  # (ne, 3, 6)
        at_q = np.einsum("qa,eac->eqc", b.phi, nv)
        grad = np.einsum("eac,eab->ecb", nv, b.grads)  # (ne, 6, 2)
        nq = b.x.shape[1]
        grad = np.broadcast_to(grad[:, None], (len(elems), nq, 6, 2))
        disp = DisplacementJet(
            v=at_q[..., :3].reshape(-1, 3), dv=grad[..., :3, :].reshape(-1, 3, 2),
            theta=at_q[..., 3:].reshape(-1, 3), dtheta=grad[..., 3:, :].reshape(-1, 3, 2),
        )
        st = strain_state(jet, tensors, disp)
        w = density(st.E, st.K, tensors, forms, h, mat, order).reshape(shape)
        wq = b.area[:, None] * b.weights[None, :] * tensors.detTheta.reshape(shape)
        total += float(np.sum(wq * w))
    return total


def deformed_points(mesh, chart, field_dofs):
    jet = evaluate_jet(chart, mesh.nodes)
    return jet.y0 + field_dofs.v
