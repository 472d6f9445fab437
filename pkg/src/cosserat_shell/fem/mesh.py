"""Structured triangulations of the parameter rectangle."""

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class Mesh:
    nodes: np.ndarray  # (n, 2)
    triangles: np.ndarray  # (m, 3), counter-clockwise
    boundary_nodes: np.ndarray  # sorted node indices on the rectangle boundary

    @property
    def n_nodes(self):
        return len(self.nodes)

    @property
    def interior_nodes(self):
        return np.setdiff1d(np.arange(self.n_nodes), self.boundary_nodes)

    def signed_areas(self):
        p = self.nodes[self.triangles]
        d1, d2 = p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    def boundary_edges(self):
        edges = np.sort(self.triangles[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2), axis=1)
        uniq, counts = np.unique(edges, axis=0, return_counts=True)
        return uniq[counts == 1]


def generate_mesh(domain, nx, ny):
    """Union-jack triangulation: cell ``(i, j)`` is split along ``/`` when ``i+j`` is even.

    Node ``(i, j)`` has index ``j*(nx+1) + i``. Halving the mesh size gives a
    nested mesh, since every coarse diagonal is a union of fine diagonals.
    """
    (a, b), (c, d) = domain
    if not (b > a and d > c):
        raise DomainError(f"degenerate rectangle {domain}")
    if nx < 1 or ny < 1:
        raise ValueError("nx and ny must be >= 1")
    xs, ys = np.linspace(a, b, nx + 1), np.linspace(c, d, ny + 1)
    X1, X2 = np.meshgrid(xs, ys, indexing="xy")
    nodes = np.stack([X1.ravel(), X2.ravel()], axis=-1)

    tris = []
    for j in range(ny):
        for i in range(nx):
            n00 = j * (nx + 1) + i
            n10, n01, n11 = n00 + 1, n00 + nx + 1, n00 + nx + 2
            if (i + j) % 2 == 0:
                tris += [(n00, n10, n11), (n00, n11, n01)]
            else:
                tris += [(n00, n10, n01), (n10, n11, n01)]
    I, J = np.meshgrid(np.arange(nx + 1), np.arange(ny + 1), indexing="xy")
    on_boundary = (I == 0) | (I == nx) | (J == 0) | (J == ny)
    return Mesh(nodes=nodes, triangles=np.array(tris, dtype=np.int64),
                boundary_nodes=np.flatnonzero(on_boundary.ravel()))


def dump_mesh(mesh):
    lines = [f"nodes {mesh.n_nodes}"]
    lines += [f"{x:.17g} {y:.17g}" for x, y in mesh.nodes]
    lines.append(f"triangles {len(mesh.triangles)}")
    lines += [f"{p} {q} {r}" for p, q, r in mesh.triangles]
    lines.append(f"boundary {len(mesh.boundary_nodes)}")
    lines += [str(k) for k in mesh.boundary_nodes]
    return "\n".join(lines) + "\n"


def load_mesh(text):
    it = iter(text.splitlines())
    sections = {}
    for header in it:
        if not header.strip():
            continue
        name, count = header.split()
        sections[name] = [next(it).split() for _ in range(int(count))]
    return Mesh(
        nodes=np.array(sections["nodes"], dtype=float).reshape(-1, 2),
        triangles=np.array(sections["triangles"], dtype=np.int64).reshape(-1, 3),
        boundary_nodes=np.array(sections.get("boundary", []), dtype=np.int64).ravel(),
    )
