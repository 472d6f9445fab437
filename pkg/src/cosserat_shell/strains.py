"""Linearised strain and curvature measures of the Cosserat shell.

A displacement/microrotation pair ``(v, theta)`` is described pointwise by a
:class:`DisplacementJet`. The measures are

* ``E = (grad v - theta x grad y0 | 0) [grad Theta]^{-1}``
* ``K = (grad theta | 0) [grad Theta]^{-1}``
* ``CK = C K = -n0 x K``

and the reduced 2D quantities G (change of metric), T (transverse shear),
R (bending strain) and N (drilling bendings).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import cross_columns, sym
from .errors import PreconditionError
from .geometry import christoffel_from_jet


@dataclass(frozen=True)
class DisplacementJet:
    v: np.ndarray  # (..., 3)
    dv: np.ndarray  # (..., 3, 2)
    theta: np.ndarray  # (..., 3)
    dtheta: np.ndarray  # (..., 3, 2)
    d2v: Optional[np.ndarray] = None  # (..., 3, 2, 2)


@dataclass(frozen=True)
class StrainState:
    E: np.ndarray
    K: np.ndarray
    CK: np.ndarray


@dataclass(frozen=True)
class ReducedStrains:
    G: np.ndarray  # (..., 2, 2)
    T: np.ndarray  # (..., 2)
    R: np.ndarray  # (..., 2, 2)
    N: np.ndarray  # (..., 2)


def _tangential_rows(tensors):
    # (X | 0) Ginv == X @ Ginv[:2, :] for X of shape 3x2
    return tensors.invGradTheta[..., :2, :]


def shear_part(jet, disp):
    """``grad v - theta x grad y0`` (3x2)."""
    return disp.dv - cross_columns(disp.theta, jet.dy0)


def strain_E(jet, tensors, disp):
    return shear_part(jet, disp) @ _tangential_rows(tensors)


def curvature_K(jet, tensors, disp):
    K = disp.dtheta @ _tangential_rows(tensors)
    return K, tensors.C @ K


def strain_state(jet, tensors, disp):
    K, CK = curvature_K(jet, tensors, disp)
    return StrainState(E=strain_E(jet, tensors, disp), K=K, CK=CK)


def reduced_strains(jet, disp):
    X = shear_part(jet, disp)
    dyT = np.swapaxes(jet.dy0, -1, -2)
    G = dyT @ X
    T = np.einsum("...i,...ia->...a", jet.n0, X)
    R = dyT @ cross_columns(jet.n0, disp.dtheta)
    N = np.einsum("...i,...ia->...a", jet.n0, disp.dtheta)
    return ReducedStrains(G=G, T=T, R=R, N=N)


def koiter_membrane(jet, disp):
    return sym(np.swapaxes(jet.dy0, -1, -2) @ disp.dv)


def koiter_bending(jet, disp, gamma=None):
    """Linearised change of second fundamental form.

    ``(R_K)_{ab} = <n0, d_ab v - sum_g Gamma^g_{ab} d_g v>``.
    """
    if disp.d2v is None:
        raise PreconditionError("koiter_bending needs second derivatives d2v")
    if gamma is None:
        gamma = christoffel_from_jet(jet).gamma
    # covariant second derivative of v, contracted with the normal
    cov = disp.d2v - np.einsum("...gab,...ig->...iab", gamma, disp.dv)
    return np.einsum("...i,...iab->...ab", jet.n0, cov)


def split_tangential_normal(X, n0):
    """Split ``X`` into ``(1 - n0 n0^T) X`` and ``(n0 n0^T) X``."""
    P = n0[..., :, None] * n0[..., None, :]
    Xperp = P @ X
    return X - Xperp, Xperp


def rebuild_E(tensors, reduced):
    """``[grad Theta]^{-T} (G; T | 0) [grad Theta]^{-1}``."""
    GT = np.concatenate([reduced.G, reduced.T[..., None, :]], axis=-2)
    Ginv = tensors.invGradTheta
    return np.swapaxes(Ginv, -1, -2) @ GT @ Ginv[..., :2, :]


def alternator_2d(jet):
    """2x2 skew matrix ``sqrt(det I) [[0, 1], [-1, 0]]``."""
    I = np.swapaxes(jet.dy0, -1, -2) @ jet.dy0
    s = np.sqrt(np.linalg.det(I))
    out = np.zeros(s.shape + (2, 2))
    out[..., 0, 1] = s
    out[..., 1, 0] = -s
    return out
