"""Midsurface charts and their differential geometry.

A chart ``y0 : omega -> R^3`` is evaluated to a :class:`SurfaceJet` holding the
point, the tangent frame ``(a1 | a2)``, the unit normal and first derivatives
of the normal. Built-in charts (plane, cylinder, sphere, graph) are
differentiated analytically; user maps are differentiated by central
differences.

Sign conventions: ``I = dy0^T dy0``, ``II = -dy0^T dn0``, ``L = I^{-1} II``,
``2H = tr L`` and ``Kg = det L``. With the outward normal on the unit sphere
this gives ``L = -1`` and ``H = -1``.

Every function accepts either a single point ``x`` of shape ``(2,)`` or a
batch of shape ``(n, 2)``; array fields of the results then carry the same
leading dimension.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, RegularityError

REGULARITY_TOL = 1e-12
FD_STEP = 1e-5
FD_STEP_SECOND = 1e-4

Rectangle = tuple[tuple[float, float], tuple[float, float]]


@dataclass(frozen=True)
class ChartSpec:
    """Parametrized midsurface over a rectangle.

    Parameters
    ----------
    kind : {"plane", "cylinder", "sphere", "graph", "user"}
    params : dict
        ``radius`` for cylinder/sphere. For graphs, ``poly`` is a tuple of
        ``(i, j, c)`` terms contributing ``c * x1**i * x2**j`` and ``trig`` a
        tuple of ``(a, k1, k2, phase)`` terms contributing
        ``a * sin(k1*x1 + k2*x2 + phase)`` to the height.
    domain : ((x1_min, x1_max), (x2_min, x2_max))
    func : callable, optional
        For ``kind="user"``: maps points of shape ``(..., 2)`` to ``(..., 3)``.
    """

    kind: str
    params: dict = field(default_factory=dict)
    domain: Rectangle = ((0.0, 1.0), (0.0, 1.0))
    func: Optional[Callable] = field(default=None, compare=False)

    def __post_init__(self):
        (a, b), (c, d) = self.domain
        if not (b > a and d > c):
            raise DomainError(f"degenerate rectangle {self.domain}")
        if self.kind not in ("plane", "cylinder", "sphere", "graph", "user"):
            raise ValueError(f"unknown chart kind {self.kind!r}")
        if self.kind in ("cylinder", "sphere") and not self.params.get("radius", 0) > 0:
            raise ValueError(f"{self.kind} chart needs a positive radius")
        if self.kind == "user" and self.func is None:
            raise ValueError("user chart needs func")

    @property
    def diameter(self):
        (a, b), (c, d) = self.domain
        return float(np.hypot(b - a, d - c))

    @property
    def is_flat(self):
        return self.kind == "plane"


def plane(domain=((0.0, 1.0), (0.0, 1.0))):
    return ChartSpec("plane", {}, domain)


def cylinder(radius, domain=((-0.5, 0.5), (0.0, 1.0))):
    return ChartSpec("cylinder", {"radius": float(radius)}, domain)


def sphere(radius=1.0, domain=((-0.5, 0.5), (-0.5, 0.5))):
    return ChartSpec("sphere", {"radius": float(radius)}, domain)


def graph(poly=(), trig=(), domain=((-1.0, 1.0), (-1.0, 1.0))):
    poly = tuple((int(i), int(j), float(c)) for i, j, c in poly)
    trig = tuple(tuple(float(t) for t in term) for term in trig)
    return ChartSpec("graph", {"poly": poly, "trig": trig}, domain)


def saddle(scale=0.5, domain=((-1.0, 1.0), (-1.0, 1.0))):
    """Hyperbolic paraboloid ``x3 = scale*(x1^2 - x2^2)``."""
    return graph(poly=((2, 0, scale), (0, 2, -scale)), domain=domain)


def user_chart(func, domain):
    return ChartSpec("user", {}, domain, func)


@dataclass(frozen=True)
class SurfaceJet:
    y0: np.ndarray  # (..., 3)
    dy0: np.ndarray  # (..., 3, 2)
    n0: np.ndarray  # (..., 3)
    dn0: np.ndarray  # (..., 3, 2)
    d2y0: np.ndarray  # (..., 3, 2, 2)


@dataclass(frozen=True)
class FundamentalForms:
    I: np.ndarray
    II: np.ndarray
    L: np.ndarray
    H: np.ndarray
    Kg: np.ndarray


@dataclass(frozen=True)
class ChristoffelSymbols:
    gamma: np.ndarray  # gamma[..., g, a, b] = Gamma^g_{ab}


# --- chart evaluation -------------------------------------------------------


def _check_domain(chart, x):
    (a, b), (c, d) = chart.domain
    tol = 1e-12 * max(1.0, chart.diameter)
    x1, x2 = x[..., 0], x[..., 1]
    bad = (x1 < a - tol) | (x1 > b + tol) | (x2 < c - tol) | (x2 > d + tol)
    if np.any(bad):
        raise DomainError(f"point(s) outside chart domain {chart.domain}")


def _analytic_derivatives(chart, x):
    """Return y0 (...,3), dy0 (...,3,2), d2y0 (...,3,2,2) for built-in charts."""
    x1, x2 = x[..., 0], x[..., 1]
    shape = x.shape[:-1]
    y = np.zeros(shape + (3,))
    dy = np.zeros(shape + (3, 2))
    d2 = np.zeros(shape + (3, 2, 2))
    kind = chart.kind
    if kind == "plane":
        y[..., 0], y[..., 1] = x1, x2
        dy[..., 0, 0] = 1.0
        dy[..., 1, 1] = 1.0
    elif kind == "cylinder":
        R = chart.params["radius"]
        c, s = np.cos(x1), np.sin(x1)
        y[..., 0], y[..., 1], y[..., 2] = R * c, R * s, x2
        dy[..., 0, 0], dy[..., 1, 0] = -R * s, R * c
        dy[..., 2, 1] = 1.0
        d2[..., 0, 0, 0], d2[..., 1, 0, 0] = -R * c, -R * s
    elif kind == "sphere":
        R = chart.params["radius"]
        c1, s1, c2, s2 = np.cos(x1), np.sin(x1), np.cos(x2), np.sin(x2)
        y[..., 0], y[..., 1], y[..., 2] = R * c1 * c2, R * s1 * c2, R * s2
        dy[..., 0, 0], dy[..., 1, 0] = -R * s1 * c2, R * c1 * c2
        dy[..., 0, 1], dy[..., 1, 1], dy[..., 2, 1] = -R * c1 * s2, -R * s1 * s2, R * c2
        d2[..., 0, 0, 0], d2[..., 1, 0, 0] = -R * c1 * c2, -R * s1 * c2
        d2[..., 0, 0, 1] = d2[..., 0, 1, 0] = R * s1 * s2
        d2[..., 1, 0, 1] = d2[..., 1, 1, 0] = -R * c1 * s2
        d2[..., 0, 1, 1], d2[..., 1, 1, 1], d2[..., 2, 1, 1] = -R * c1 * c2, -R * s1 * c2, -R * s2
    elif kind == "graph":
        f = np.zeros(shape)
        f1, f2 = np.zeros(shape), np.zeros(shape)
        f11, f12, f22 = np.zeros(shape), np.zeros(shape), np.zeros(shape)
        for i, j, coef in chart.params.get("poly", ()):
            f = f + coef * x1**i * x2**j
            if i >= 1:
                f1 = f1 + coef * i * x1 ** (i - 1) * x2**j
            if j >= 1:
                f2 = f2 + coef * j * x1**i * x2 ** (j - 1)
            if i >= 2:
                f11 = f11 + coef * i * (i - 1) * x1 ** (i - 2) * x2**j
            if i >= 1 and j >= 1:
                f12 = f12 + coef * i * j * x1 ** (i - 1) * x2 ** (j - 1)
            if j >= 2:
                f22 = f22 + coef * j * (j - 1) * x1**i * x2 ** (j - 2)
        for amp, k1, k2, phase in chart.params.get("trig", ()):
            arg = k1 * x1 + k2 * x2 + phase
            s, c = np.sin(arg), np.cos(arg)
            f = f + amp * s
            f1, f2 = f1 + amp * k1 * c, f2 + amp * k2 * c
            f11 = f11 - amp * k1 * k1 * s
            f12 = f12 - amp * k1 * k2 * s
            f22 = f22 - amp * k2 * k2 * s
        y[..., 0], y[..., 1], y[..., 2] = x1, x2, f
        dy[..., 0, 0] = 1.0
        dy[..., 1, 1] = 1.0
        dy[..., 2, 0], dy[..., 2, 1] = f1, f2
        d2[..., 2, 0, 0] = f11
        d2[..., 2, 0, 1] = d2[..., 2, 1, 0] = f12
        d2[..., 2, 1, 1] = f22
    else:
        raise ValueError(f"no analytic derivatives for chart kind {kind!r}")
    return y, dy, d2


def _fd_derivatives(func, x, diameter):
    """Central differences of a vectorized map ``(...,2) -> (...,3)``."""
    h1 = FD_STEP * diameter
    h2 = FD_STEP_SECOND * diameter
    e = np.eye(2)
    y = np.asarray(func(x), dtype=float)
    dy = np.stack(
        [(func(x + h1 * e[a]) - func(x - h1 * e[a])) / (2 * h1) for a in range(2)], axis=-1
    )
    d2 = np.zeros(x.shape[:-1] + (3, 2, 2))
    for a in range(2):
        d2[..., a, a] = (func(x + h2 * e[a]) - 2 * y + func(x - h2 * e[a])) / h2**2
    mixed = (
        func(x + h2 * (e[0] + e[1]))
        - func(x + h2 * (e[0] - e[1]))
        - func(x - h2 * (e[0] - e[1]))
        + func(x - h2 * (e[0] + e[1]))
    ) / (4 * h2**2)
    d2[..., 0, 1] = d2[..., 1, 0] = mixed
    return y, dy, d2


def _jet_from_derivatives(y, dy, d2):
    a1, a2 = dy[..., 0], dy[..., 1]
    c = np.cross(a1, a2)
    norm = np.linalg.norm(c, axis=-1)
    if np.any(norm < REGULARITY_TOL):
        raise RegularityError("degenerate parametrization: |a1 x a2| < 1e-12")
    n = c / norm[..., None]
    # d_alpha n = (1 - n n^T) d_alpha c / |c|
    dc = np.stack(
        [np.cross(d2[..., 0, a], a2) + np.cross(a1, d2[..., 1, a]) for a in range(2)], axis=-1
    )
    proj = np.eye(3) - n[..., :, None] * n[..., None, :]
    dn = proj @ dc / norm[..., None, None]
    return SurfaceJet(y0=y, dy0=dy, n0=n, dn0=dn, d2y0=d2)


def evaluate_jet(chart, x):
    """Evaluate the chart and its derivatives at ``x`` (shape ``(2,)`` or ``(n, 2)``)."""
    x = np.asarray(x, dtype=float)
    _check_domain(chart, x)
    if chart.kind == "user":
        y, dy, d2 = _fd_derivatives(chart.func, x, chart.diameter)
    else:
        y, dy, d2 = _analytic_derivatives(chart, x)
    return _jet_from_derivatives(y, dy, d2)


def finite_difference_jet(chart, x):
    """Jet of a built-in chart computed with the user-map finite differences."""
    x = np.asarray(x, dtype=float)
    _check_domain(chart, x)

    def func(p):
        return _analytic_derivatives(chart, p)[0]

    return _jet_from_derivatives(*_fd_derivatives(func, x, chart.diameter))


def fundamental_forms(jet):
    I = np.swapaxes(jet.dy0, -1, -2) @ jet.dy0
    detI = I[..., 0, 0] * I[..., 1, 1] - I[..., 0, 1] * I[..., 1, 0]
    if np.any(detI <= REGULARITY_TOL):
        raise RegularityError("singular first fundamental form")
    II = -np.swapaxes(jet.dy0, -1, -2) @ jet.dn0
    L = np.linalg.solve(I, II)
    H = 0.5 * (L[..., 0, 0] + L[..., 1, 1])
    Kg = L[..., 0, 0] * L[..., 1, 1] - L[..., 0, 1] * L[..., 1, 0]
    return FundamentalForms(I=I, II=II, L=L, H=H, Kg=Kg)


def gradient_theta(jet):
    """Return ``(grad Theta, inverse, det)`` with ``grad Theta = (a1 | a2 | n0)``."""
    G = np.concatenate([jet.dy0, jet.n0[..., :, None]], axis=-1)
    det = np.linalg.norm(np.cross(jet.dy0[..., 0], jet.dy0[..., 1]), axis=-1)
    if np.any(det <= REGULARITY_TOL):
        raise RegularityError("det grad Theta <= 1e-12")
    return G, np.linalg.inv(G), det


def christoffel_from_jet(jet):
    """``Gamma^g_{ab} = <a^g, d_a a_b>`` using the contravariant rows of grad Theta^{-1}."""
    _, Ginv, _ = gradient_theta(jet)
    gamma = np.einsum("...gi,...iab->...gab", Ginv[..., :2, :], jet.d2y0)
    return ChristoffelSymbols(gamma=gamma)


def christoffel(chart, x):
    return christoffel_from_jet(evaluate_jet(chart, x))


def sample_grid(chart, n):
    (a, b), (c, d) = chart.domain
    g1, g2 = np.meshgrid(np.linspace(a, b, n), np.linspace(c, d, n), indexing="ij")
    return np.stack([g1.ravel(), g2.ravel()], axis=-1)


def principal_curvatures(forms):
    # L is self-adjoint w.r.t. I, so its eigenvalues are real
    return np.sort(np.real(np.linalg.eigvals(forms.L)), axis=-1)


def curvature_bound(chart, grid=64):
    """Maxima of ``|kappa_1|``, ``|kappa_2|`` over a ``grid x grid`` sampling.

    ``kappa_1`` is the principal curvature of larger modulus at each point.
    """
    if grid < 2:
        raise ValueError("grid must be at least 2")
    jet = evaluate_jet(chart, sample_grid(chart, grid))
    k = np.abs(principal_curvatures(fundamental_forms(jet)))
    k = np.sort(k, axis=-1)[:, ::-1]
    return float(k[:, 0].max()), float(k[:, 1].max())


def kappa_sup(chart, grid=64):
    return max(curvature_bound(chart, grid))
