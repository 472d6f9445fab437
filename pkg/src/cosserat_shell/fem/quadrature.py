"""Quadrature rules on the reference triangle ``(0,0), (1,0), (0,1)``.

Weights are normalised to sum to one, so an integral over a triangle of area
``|T|`` is ``|T| * sum(w * f(x))``.
"""

from functools import lru_cache

import numpy as np

# Strang-Fix / Dunavant, degree 4
_A, _B = 0.445948490915965, 0.091576213509771
_WA, _WB = 0.223381589678011, 0.109951743655322


@lru_cache(maxsize=None)
def triangle_rule(degree=4):
    """Return ``(points (n, 2), weights (n,))`` exact for polynomials of ``degree``."""
    if degree <= 1:
        return np.array([[1 / 3, 1 / 3]]), np.array([1.0])
    if degree == 2:
        pts = np.array([[1 / 6, 1 / 6], [2 / 3, 1 / 6], [1 / 6, 2 / 3]])
        return pts, np.full(3, 1 / 3)
    if degree == 4:
        pts = np.array([
            [_A, _A], [1 - 2 * _A, _A], [_A, 1 - 2 * _A],
            [_B, _B], [1 - 2 * _B, _B], [_B, 1 - 2 * _B],
        ])
        return pts, np.array([_WA] * 3 + [_WB] * 3)
    return collapsed_gauss(degree)


def collapsed_gauss(degree):
    """Tensor Gauss-Legendre rule pulled back through the Duffy map."""
    n = (degree + 3) // 2
    g, w = np.polynomial.legendre.leggauss(n)
    g, w = 0.5 * (g + 1), 0.5 * w
    xi, eta = np.meshgrid(g, g, indexing="ij")
    wx, wy = np.meshgrid(w, w, indexing="ij")
    x = xi.ravel()
    y = (eta * (1 - xi)).ravel()
    weights = (wx * wy * (1 - xi)).ravel() * 2.0
    return np.stack([x, y], axis=-1), weights
