"""Quadratic energy forms, shell energy densities and coefficient identification.

The shell densities are sums of the quadratic forms ``W_shell``, ``W_mp`` and
``W_curv`` evaluated at ``E``, ``K`` and the derived combinations
``Z = E B + C K``, ``Z B`` and ``K B``, ``K B^2`` with thickness weights
depending on ``h``, the Gauss curvature ``Kg`` and the mean curvature ``H``.

Besides the direct evaluators, :func:`density_matrix` returns the same
bilinear density as an 18x18 matrix acting on ``[vec E, vec K]``; the finite
element assembly uses that route.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .algebra import dev, frob2, frob_inner, left_mul_matrix, right_mul_matrix, skew, sym, trace
from .errors import ModelError, ParameterError
from .strains import split_tangential_normal


class ModelOrder(str, enum.Enum):
    H5 = "H5"
    H3 = "H3"
    PLATE = "PLATE"


@dataclass(frozen=True)
class MaterialParams:
    mu: float
    lam: float
    muc: float
    Lc: float
    b1: float
    b2: float
    b3: float

    @property
    def nu(self):
        return self.lam / (2.0 * (self.lam + self.mu))

    @property
    def young(self):
        return self.mu * (3.0 * self.lam + 2.0 * self.mu) / (self.lam + self.mu)

    @property
    def bulk(self):
        return (2.0 * self.mu + 3.0 * self.lam) / 3.0

    @property
    def membrane_lame(self):
        """``lambda mu / (lambda + 2 mu)``, the trace weight of ``W_shell``."""
        return self.lam * self.mu / (self.lam + 2.0 * self.mu)


@dataclass(frozen=True)
class CoercivityConstants:
    c1p: float
    C1p: float
    c2p: float
    C2p: float


@dataclass(frozen=True)
class EPCoefficients:
    alpha1: float
    alpha2: float
    alpha3: float
    alpha4: float
    beta1: float
    beta2: float
    beta3: float
    beta4: float
    muc_drill: float

    @property
    def alphas(self):
        return (self.alpha1, self.alpha2, self.alpha3, self.alpha4)

    @property
    def betas(self):
        return (self.beta1, self.beta2, self.beta3, self.beta4)

    def to_csv(self):
        names = ["alpha1", "alpha2", "alpha3", "alpha4", "beta1", "beta2", "beta3", "beta4",
                 "muc_drill"]
        rows = ["name,value"] + [f"{n},{getattr(self, n):.17g}" for n in names]
        return "\n".join(rows) + "\n"


# --- pointwise quadratic and bilinear forms ---------------------------------


def bf_shell(X, Y, mat):
    return (
        mat.mu * frob_inner(sym(X), sym(Y))
        + mat.muc * frob_inner(skew(X), skew(Y))
        + mat.membrane_lame * trace(X) * trace(Y)
    )


def qf_shell(X, mat):
    return bf_shell(X, X, mat)


def qf_shell_dev(X, mat):
    """Second, deviatoric form of ``W_shell``; equal to :func:`qf_shell`."""
    k = 2.0 * mat.mu * (2.0 * mat.lam + mat.mu) / (3.0 * (mat.lam + 2.0 * mat.mu))
    return mat.mu * frob2(dev(sym(X))) + mat.muc * frob2(skew(X)) + k * trace(X) ** 2


def qf_shell_inf(S, mat):
    S = sym(np.asarray(S, dtype=float))
    return mat.mu * frob2(S) + mat.membrane_lame * trace(S) ** 2


def bf_shell_inf(S, T, mat):
    S, T = sym(np.asarray(S, dtype=float)), sym(np.asarray(T, dtype=float))
    return mat.mu * frob_inner(S, T) + mat.membrane_lame * trace(S) * trace(T)


def bf_mp(X, Y, mat):
    return (
        mat.mu * frob_inner(sym(X), sym(Y))
        + mat.muc * frob_inner(skew(X), skew(Y))
        + 0.5 * mat.lam * trace(X) * trace(Y)
    )


def qf_mp(X, mat):
    return bf_mp(X, X, mat)


def bf_curv(X, Y, mat):
    return (mat.mu * mat.Lc**2) * (
        mat.b1 * frob_inner(dev(sym(X)), dev(sym(Y)))
        + mat.b2 * frob_inner(skew(X), skew(Y))
        + mat.b3 * trace(X) * trace(Y)
    )


def qf_curv(X, mat):
    return bf_curv(X, X, mat)


# --- 9x9 matrix representations on row-major vec(X) -------------------------

_I9 = np.eye(9)
_TRANSPOSE = np.eye(9)[[3 * j + i for i in range(3) for j in range(3)]]
_P_SYM = 0.5 * (_I9 + _TRANSPOSE)
_P_SKEW = 0.5 * (_I9 - _TRANSPOSE)
_TT = np.outer(np.eye(3).ravel(), np.eye(3).ravel())


def shell_form_matrix(mat):
    return mat.mu * _P_SYM + mat.muc * _P_SKEW + mat.membrane_lame * _TT


def mp_form_matrix(mat):
    return mat.mu * _P_SYM + mat.muc * _P_SKEW + 0.5 * mat.lam * _TT


def curv_form_matrix(mat):
    scale = mat.mu * mat.Lc**2
    return scale * (mat.b1 * (_P_SYM - _TT / 3.0) + mat.b2 * _P_SKEW + mat.b3 * _TT)


# --- coercivity constants ---------------------------------------------------


def _sym_basis():
    basis = []
    for i in range(3):
        S = np.zeros((3, 3))
        S[i, i] = 1.0
        basis.append(S)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        S = np.zeros((3, 3))
        S[i, j] = S[j, i] = 1.0 / math.sqrt(2.0)
        basis.append(S)
    return np.array(basis)


def _full_basis():
    return np.eye(9).reshape(9, 3, 3)


def gram_matrix(bilinear, basis):
    Xi = basis[:, None]
    Xj = basis[None, :]
    return bilinear(Xi, Xj)


def coercivity_constants(mat):
    """Extreme eigenvalues of ``W_shell^inf`` on Sym(3) and of ``W_curv`` on R^{3x3}."""
    errs = material_violations(mat, ModelOrder.H3)
    if errs:
        raise ParameterError("; ".join(errs))
    g1 = np.linalg.eigvalsh(gram_matrix(lambda X, Y: bf_shell_inf(X, Y, mat), _sym_basis()))
    g2 = np.linalg.eigvalsh(gram_matrix(lambda X, Y: bf_curv(X, Y, mat), _full_basis()))
    return CoercivityConstants(c1p=float(g1[0]), C1p=float(g1[-1]), c2p=float(g2[0]),
                               C2p=float(g2[-1]))


def coercivity_closed_form(mat):
    spherical = 2.0 * mat.mu * (2.0 * mat.lam + mat.mu) / (mat.lam + 2.0 * mat.mu)
    s = mat.mu * mat.Lc**2
    bs = (mat.b1, mat.b2, 3.0 * mat.b3)
    return CoercivityConstants(
        c1p=min(mat.mu, spherical), C1p=max(mat.mu, spherical),
        c2p=s * min(bs), C2p=s * max(bs),
    )


def material_violations(mat, order):
    """Positivity conditions of the existence theorems that ``mat`` violates."""
    order = ModelOrder(order)
    out = []
    if not mat.mu > 0:
        out.append("mu>0 required")
    if not 2.0 * mat.lam + mat.mu > 0:
        out.append("2λ+μ>0 required")
    if mat.muc < 0:
        out.append("μ_c ≥ 0 violated")
    elif order is ModelOrder.H5 and not mat.muc > 0:
        out.append("μ_c>0 required")
    if not mat.Lc > 0:
        out.append("L_c>0 required")
    for name in ("b1", "b2", "b3"):
        if not getattr(mat, name) > 0:
            out.append(f"{name}>0 required")
    return out


# --- shell densities --------------------------------------------------------


@dataclass(frozen=True)
class _Weights:
    E: np.ndarray
    Z: np.ndarray
    EZ: np.ndarray  # weight of the mixed -H term, already multiplied by H
    EZB: float
    mp: float
    K: np.ndarray
    KB: np.ndarray
    KB2: float


def _weights(forms, h, order):
    if not h > 0:
        raise ValueError("thickness h must be positive")
    Kg, H = np.asarray(forms.Kg), np.asarray(forms.H)
    h3, h5 = h**3, h**5
    if order is ModelOrder.H5:
        return _Weights(E=h + Kg * h3 / 12, Z=h3 / 12 - Kg * h5 / 80, EZ=-(h3 / 3) * H,
                        EZB=h3 / 6, mp=h5 / 80, K=h - Kg * h3 / 12, KB=h3 / 12 - Kg * h5 / 80,
                        KB2=h5 / 80)
    if order is ModelOrder.H3:
        return _Weights(E=h + Kg * h3 / 12, Z=h3 / 12 + 0 * Kg, EZ=-(h3 / 3) * H, EZB=h3 / 6,
                        mp=0.0, K=h - Kg * h3 / 12, KB=h3 / 12 + 0 * Kg, KB2=0.0)
    raise AssertionError(order)


def _require_flat(tensors):
    if np.max(np.abs(tensors.B)) > 1e-12:
        raise ModelError("PLATE model requires a flat reference surface (B = 0)")


def density(E, K, tensors, forms, h, mat, order=ModelOrder.H5):
    """Shell energy density per unit reference area, before the ``det grad Theta`` weight."""
    order = ModelOrder(order)
    C, B = tensors.C, tensors.B
    CK = C @ K
    if order is ModelOrder.PLATE:
        _require_flat(tensors)
        return h * qf_shell(E, mat) + h**3 / 12 * qf_shell(CK, mat) + h * qf_curv(K, mat)
    w = _weights(forms, h, order)
    Z = E @ B + CK
    ZB = Z @ B
    KB = K @ B
    out = (
        w.E * qf_shell(E, mat)
        + w.Z * qf_shell(Z, mat)
        + w.EZ * bf_shell(E, Z, mat)
        + w.EZB * bf_shell(E, ZB, mat)
        + w.K * qf_curv(K, mat)
        + w.KB * qf_curv(KB, mat)
    )
    if order is ModelOrder.H5:
        out = out + w.mp * qf_mp(ZB, mat) + w.KB2 * qf_curv(KB @ B, mat)
    return out


def bilinear_density(E1, K1, E2, K2, tensors, forms, h, mat, order=ModelOrder.H5):
    """Symmetric polarization of :func:`density`; equals it on the diagonal."""
    order = ModelOrder(order)
    C, B = tensors.C, tensors.B
    if order is ModelOrder.PLATE:
        _require_flat(tensors)
        return (h * bf_shell(E1, E2, mat) + h**3 / 12 * bf_shell(C @ K1, C @ K2, mat)
                + h * bf_curv(K1, K2, mat))
    w = _weights(forms, h, order)
    Z1, Z2 = E1 @ B + C @ K1, E2 @ B + C @ K2
    out = (
        w.E * bf_shell(E1, E2, mat)
        + w.Z * bf_shell(Z1, Z2, mat)
        + 0.5 * w.EZ * bf_shell(E1, Z2, mat)
        + 0.5 * w.EZ * bf_shell(E2, Z1, mat)
        + 0.5 * w.EZB * bf_shell(E1, Z2 @ B, mat)
        + 0.5 * w.EZB * bf_shell(E2, Z1 @ B, mat)
        + w.K * bf_curv(K1, K2, mat)
        + w.KB * bf_curv(K1 @ B, K2 @ B, mat)
    )
    if order is ModelOrder.H5:
        out = out + w.mp * bf_mp(Z1 @ B, Z2 @ B, mat)
        out = out + w.KB2 * bf_curv(K1 @ B @ B, K2 @ B @ B, mat)
    return out


def density_matrix(tensors, forms, h, mat, order=ModelOrder.H5):
    """Matrix ``D`` (..., 18, 18) with ``bilinear_density = x1 . D x2``, ``x = [vec E, vec K]``.

    ``D`` is exactly symmetric: it is built from its upper triangle.
    """
    order = ModelOrder(order)
    B, C = tensors.B, tensors.C
    batch = B.shape[:-2]
    Ws, Wc = shell_form_matrix(mat), curv_form_matrix(mat)
    RB = right_mul_matrix(B)
    LC = left_mul_matrix(C)
    I9 = np.broadcast_to(_I9, batch + (9, 9))
    O9 = np.zeros(batch + (9, 9))
    PE = np.concatenate([I9, O9], axis=-1)  # x -> vec E
    PK = np.concatenate([O9, I9], axis=-1)  # x -> vec K

    def quad(P, W):
        return np.swapaxes(P, -1, -2) @ W @ P

    def mixed(P, Q, W):
        M = np.swapaxes(P, -1, -2) @ W @ Q
        return 0.5 * (M + np.swapaxes(M, -1, -2))

    if order is ModelOrder.PLATE:
        _require_flat(tensors)
        PZ = LC @ PK
        D = h * quad(PE, Ws) + h**3 / 12 * quad(PZ, Ws) + h * quad(PK, Wc)
    else:
        w = _weights(forms, h, order)

        def c(x):
            return np.asarray(x)[..., None, None]

        PZ = RB @ PE + LC @ PK
        PZB = RB @ PZ
        PKB = RB @ PK
        D = (
            c(w.E) * quad(PE, Ws)
            + c(w.Z) * quad(PZ, Ws)
            + c(w.EZ) * mixed(PE, PZ, Ws)
            + w.EZB * mixed(PE, PZB, Ws)
            + c(w.K) * quad(PK, Wc)
            + c(w.KB) * quad(PKB, Wc)
        )
        if order is ModelOrder.H5:
            D = D + w.mp * quad(PZB, mp_form_matrix(mat)) + w.KB2 * quad(RB @ PKB, Wc)
    return symmetric_from_upper(D)


def symmetric_from_upper(M):
    """Rebuild ``M`` from its upper triangle so that ``M == M.T`` bit for bit."""
    upper = np.triu(M)
    return upper + np.swapaxes(np.triu(M, 1), -1, -2)


# --- six-parameter comparison -----------------------------------------------


def identify_coeffs(mat, h, Kg=0.0):
    m = h + Kg * h**3 / 12
    b = h - Kg * h**3 / 12
    s = mat.mu * mat.Lc**2
    return EPCoefficients(
        alpha1=m * 2 * mat.mu * mat.lam / (2 * mat.mu + mat.lam),
        alpha2=m * (mat.mu - mat.muc),
        alpha3=m * (mat.mu + mat.muc),
        alpha4=m * (mat.mu + mat.muc),
        beta1=2 * b * s * (12 * mat.b3 - mat.b1) / 3,
        beta2=b * s * (mat.b1 - mat.b2),
        beta3=b * s * (mat.b1 + mat.b2),
        beta4=b * s * (mat.b1 + mat.b2),
        muc_drill=2 * m * mat.muc,
    )


def plate_stiffnesses(mat, h):
    """Stretching stiffness ``C``, bending stiffness ``D`` and Poisson ratio."""
    E, nu = mat.young, mat.nu
    return E * h / (1 - nu**2), E * h**3 / (12 * (1 - nu**2)), nu


def _ep_terms(X, n0):
    Xpar, _ = split_tangential_normal(X, n0)
    tr = trace(Xpar)
    return (
        tr**2,
        trace(Xpar @ Xpar),
        frob2(Xpar),
        np.sum(np.einsum("...ji,...j->...i", X, n0) ** 2, axis=-1),
    )


def wp_density(E, K, n0, C_stiff, D_stiff, nu, alpha_s=5 / 6, alpha_t=7 / 10):
    e_tr2, _, e_norm2, e_shear = _ep_terms(E, n0)
    k_tr2, _, k_norm2, k_shear = _ep_terms(K, n0)
    two_w = (
        C_stiff * (nu * e_tr2 + (1 - nu) * e_norm2)
        + alpha_s * C_stiff * (1 - nu) * e_shear
        + D_stiff * (nu * k_tr2 + (1 - nu) * k_norm2)
        + alpha_t * D_stiff * (1 - nu) * k_shear
    )
    return 0.5 * two_w


def wep_membrane(E, n0, alphas):
    """Half of the alpha-part of ``2 W_EP``."""
    terms = _ep_terms(E, n0)
    return 0.5 * sum(a * t for a, t in zip(alphas, terms))


def wep_density(E, K, n0, alphas, betas):
    terms_k = _ep_terms(K, n0)
    return wep_membrane(E, n0, alphas) + 0.5 * sum(b * t for b, t in zip(betas, terms_k))
