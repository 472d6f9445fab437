"""Small matrix utilities: skew/axial maps, column-wise cross products, lifts.

All functions broadcast over leading dimensions, so a stack of matrices of
shape ``(..., 3, 3)`` is handled the same way as a single matrix.
"""

import numpy as np


def anti(q):
    """Skew matrix ``Anti(q)`` with ``Anti(q) @ x == cross(q, x)``."""
    q = np.asarray(q, dtype=float)
    out = np.zeros(q.shape[:-1] + (3, 3))
    out[..., 0, 1] = -q[..., 2]
    out[..., 0, 2] = q[..., 1]
    out[..., 1, 0] = q[..., 2]
    out[..., 1, 2] = -q[..., 0]
    out[..., 2, 0] = -q[..., 1]
    out[..., 2, 1] = q[..., 0]
    return out


def axl(A):
    """Axial vector of a skew matrix, ``(-A23, A13, -A12)``."""
    A = np.asarray(A, dtype=float)
    return np.stack([-A[..., 1, 2], A[..., 0, 2], -A[..., 0, 1]], axis=-1)


def cross_columns(q, M):
    """Column-wise cross product ``q x M = (q x M_1 | q x M_2 | ...)``."""
    return anti(q) @ np.asarray(M, dtype=float)


def sym(X):
    return 0.5 * (X + np.swapaxes(X, -1, -2))


def skew(X):
    return 0.5 * (X - np.swapaxes(X, -1, -2))


def trace(X):
    return np.trace(X, axis1=-2, axis2=-1)


def dev(X):
    n = X.shape[-1]
    return X - (trace(X) / n)[..., None, None] * np.eye(n)


def cartan(X):
    """Orthogonal split ``X = dev sym X + skew X + tr(X)/n * 1``."""
    n = X.shape[-1]
    return dev(sym(X)), skew(X), (trace(X) / n)[..., None, None] * np.eye(n)


def frob2(X):
    """Squared Frobenius norm over the last two axes."""
    return np.sum(X * X, axis=(-2, -1))


def frob_inner(X, Y):
    return np.sum(X * Y, axis=(-2, -1))


def lift_flat(M):
    """Embed a 2x2 matrix as the upper-left block of a 3x3 zero matrix."""
    M = np.asarray(M, dtype=float)
    out = np.zeros(M.shape[:-2] + (3, 3))
    out[..., :2, :2] = M
    return out


def lift_hat(M):
    """Like :func:`lift_flat` but with a one in the (3,3) slot."""
    out = lift_flat(M)
    out[..., 2, 2] = 1.0
    return out


def append_zero_column(X):
    """``(X | 0)`` for a stack of 3x2 matrices."""
    X = np.asarray(X, dtype=float)
    return np.concatenate([X, np.zeros(X.shape[:-1] + (1,))], axis=-1)


def left_mul_matrix(C):
    """9x9 matrix ``L`` with ``vec(C @ X) == L @ vec(X)`` (row-major vec)."""
    C = np.asarray(C, dtype=float)
    eye = np.eye(3)
    return np.einsum("...ik,jl->...ijkl", C, eye).reshape(C.shape[:-2] + (9, 9))


def right_mul_matrix(B):
    """9x9 matrix ``R`` with ``vec(X @ B) == R @ vec(X)`` (row-major vec)."""
    B = np.asarray(B, dtype=float)
    eye = np.eye(3)
    return np.einsum("ik,...lj->...ijkl", eye, B).reshape(B.shape[:-2] + (9, 9))
