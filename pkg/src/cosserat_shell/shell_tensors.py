"""Midsurface tensors A, B, C, the lifted metric and the algebraic identities they obey."""

from dataclasses import dataclass

import numpy as np

from .algebra import anti, frob2, trace
from .errors import RegularityError
from .geometry import gradient_theta

# spin block used in the alternator tensor
_SPIN = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])


@dataclass(frozen=True)
class MidsurfaceTensors:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    Ihat: np.ndarray
    IhatInv: np.ndarray
    lambda0: np.ndarray
    lambdaM: np.ndarray
    gradTheta: np.ndarray
    invGradTheta: np.ndarray
    detTheta: np.ndarray
    n0: np.ndarray


@dataclass(frozen=True)
class IdentityReport:
    residuals: dict
    tol: float

    @property
    def passed(self):
        return all(r <= self.tol for r in self.residuals.values())

    def to_csv(self):
        rows = ["identity,max_residual,pass"]
        for name, r in self.residuals.items():
            rows.append(f"{name},{r:.6e},{str(r <= self.tol).lower()}")
        return "\n".join(rows) + "\n"


def build_tensors(jet):
    G, Ginv, det = gradient_theta(jet)
    zeros = np.zeros(jet.dy0.shape[:-1] + (1,))
    A = np.concatenate([jet.dy0, zeros], axis=-1) @ Ginv
    B = -np.concatenate([jet.dn0, zeros], axis=-1) @ Ginv
    C = det[..., None, None] * (np.swapaxes(Ginv, -1, -2) @ _SPIN @ Ginv)
    Ihat = np.swapaxes(G, -1, -2) @ G
    IhatInv = Ginv @ np.swapaxes(Ginv, -1, -2)
    lam0, lamM = _eigen_bounds(Ihat, IhatInv)
    return MidsurfaceTensors(
        A=A, B=B, C=C, Ihat=Ihat, IhatInv=IhatInv, lambda0=lam0, lambdaM=lamM,
        gradTheta=G, invGradTheta=Ginv, detTheta=det, n0=jet.n0,
    )


def _eigen_bounds(Ihat, IhatInv):
    w = np.linalg.eigvalsh(Ihat)
    if np.any(w <= 0):
        raise RegularityError("lifted metric is not positive definite")
    winv = np.linalg.eigvalsh(IhatInv)
    return winv[..., 0], w[..., -1]


def metric_eigen_bounds(tensors):
    """Smallest eigenvalue of ``Ihat^{-1}`` and largest of ``Ihat`` (per point)."""
    return _eigen_bounds(tensors.Ihat, tensors.IhatInv)


def global_eigen_bounds(tensors):
    """Extrema over all points: ``(min lambda0, max lambdaM)``."""
    lam0, lamM = metric_eigen_bounds(tensors)
    return float(np.min(lam0)), float(np.max(lamM))


def alternator_from_normal(n0):
    """``C = -n0 x 1``, built column by column from the cross product."""
    n0 = np.asarray(n0, dtype=float)
    eye = np.broadcast_to(np.eye(3), n0.shape[:-1] + (3, 3))
    return -np.cross(n0[..., None, :], np.swapaxes(eye, -1, -2)).swapaxes(-1, -2)


def identity_residuals(tensors, forms):
    """Per-point residuals of the twelve algebraic identities."""
    A, B, C = tensors.A, tensors.B, tensors.C
    H = forms.H[..., None, None]
    Kg = forms.Kg[..., None, None]

    def mnorm(X):
        return np.max(np.abs(X), axis=(-2, -1))

    return {
        "trA-2": np.abs(trace(A) - 2.0),
        "detA": np.abs(np.linalg.det(A)),
        "trB-2H": np.abs(trace(B) - 2.0 * forms.H),
        "detB": np.abs(np.linalg.det(B)),
        "B2-2HB+KA": mnorm(B @ B - 2.0 * H * B + Kg * A),
        "AB-B": mnorm(A @ B - B),
        "BA-B": mnorm(B @ A - B),
        "A2-A": mnorm(A @ A - A),
        "C+CT": mnorm(C + np.swapaxes(C, -1, -2)),
        "C2+A": mnorm(C @ C + A),
        "|C|2-2": np.abs(frob2(C) - 2.0),
        "C+n0x1": mnorm(C + anti(tensors.n0)),
    }


def verify_identities(tensors, forms, tol=1e-10):
    res = identity_residuals(tensors, forms)
    return IdentityReport({k: float(np.max(v)) for k, v in res.items()}, tol)
