"""Thickness/curvature/material admissibility checks run before solving."""

import math
from dataclasses import dataclass, field

import numpy as np

from .energy import ModelOrder, coercivity_constants, material_violations

H5_THRESHOLD = math.sqrt((2.0 / 3.0) * (29.0 - math.sqrt(761.0)))
NONLINEAR_THRESHOLD = 2.0
ALPHA_MAX = 2.0 * math.sqrt(3.0)
ALPHA_GRID = 512


@dataclass(frozen=True)
class AdmissibilityReport:
    hk: float
    h5_ok: bool
    h3_ok: bool
    h3_path: str
    nonlinear_bound_ok: bool
    material_ok: bool
    order: str
    geometry_ok: bool = True
    messages: list = field(default_factory=list)

    @property
    def admissible(self):
        if not (self.material_ok and self.geometry_ok):
            return False
        if self.order == ModelOrder.H5.value:
            return self.h5_ok
        return self.h3_ok

    def to_lines(self):
        return [
            f"hk={self.hk:.17g}",
            f"h5_ok={str(self.h5_ok).lower()}",
            f"h3_ok={str(self.h3_ok).lower()}",
            f"h3_path={self.h3_path}",
            f"nonlinear_bound_ok={str(self.nonlinear_bound_ok).lower()}",
            f"material_ok={str(self.material_ok).lower()}",
            f"admissible={str(self.admissible).lower()}",
        ] + [f"message={m}" for m in self.messages]


def check_h5(h, kappa_sup):
    return h * kappa_sup < H5_THRESHOLD


def check_nonlinear_bound(h, kappa_sup):
    return h * kappa_sup < NONLINEAR_THRESHOLD


def _ratios(mat, strict):
    cc = coercivity_constants(mat)
    upper, lower = cc.C1p, cc.c1p
    if strict:
        upper, lower = max(cc.C1p, mat.muc), min(cc.c1p, mat.muc)
    return cc.c2p, upper, lower


def h3_path_i_bound(alpha, c2p, C1p):
    """Upper bound on ``h^2`` in condition i) for a given ``alpha``."""
    return (5.0 - 2.0 * math.sqrt(6.0)) * (alpha**2 - 12.0) ** 2 / (4.0 * alpha**2) * c2p / C1p


def h3_path_ii_a(C1p, c1p):
    """Lower bound for ``a`` in condition ii); admissible iff ``h kappa < 1/a``."""
    return max(1.0 + math.sqrt(2.0) / 2.0, (1.0 + math.sqrt(1.0 + 3.0 * C1p / c1p)) / 2.0)


def alpha_grid(n=ALPHA_GRID):
    return ALPHA_MAX * np.arange(1, n + 1) / (n + 1)


def h3_condition_i(h, kappa_sup, mat, alpha, strict=False):
    """Condition i) for one value of the free parameter ``alpha``."""
    c2p, upper, _ = _ratios(mat, strict)
    return bool(0 < alpha < ALPHA_MAX and h * kappa_sup < alpha
                and h * h < h3_path_i_bound(alpha, c2p, upper))


def h3_condition_ii(h, kappa_sup, mat, strict=False):
    _, upper, lower = _ratios(mat, strict)
    if not lower > 0:
        return False
    return h * kappa_sup < 1.0 / h3_path_ii_a(upper, lower)


def check_h3(h, kappa_sup, mat, strict=False):
    """Return ``(ok, path)``; path is ``"condition_ii(<a>)"``, ``"condition_i(<alpha>)"`` or ``"none"``.

    Condition ii) is tried first. Condition i) is scanned over a 512-point
    grid of ``alpha`` in ``(0, 2 sqrt 3)``. ``strict`` uses ``max{C1p, muc}``
    and ``min{c1p, muc}`` in place of ``C1p`` and ``c1p``.
    """
    c2p, upper, lower = _ratios(mat, strict)
    hk = h * kappa_sup
    if lower > 0:
        a = h3_path_ii_a(upper, lower)
        if hk < 1.0 / a:
            return True, f"condition_ii({a:.6g})"
    for alpha in alpha_grid():
        if hk < alpha and h * h < h3_path_i_bound(alpha, c2p, upper):
            return True, f"condition_i({alpha:.6g})"
    return False, "none"


def validate_material(mat, order):
    return material_violations(mat, order)


def assess(h, kappa_sup, mat, order, strict=False):
    order = ModelOrder(order)
    messages = list(validate_material(mat, order))
    material_ok = not messages
    h5_ok = check_h5(h, kappa_sup)
    if material_ok:
        h3_ok, path = check_h3(h, kappa_sup, mat, strict=strict)
    else:
        h3_ok, path = False, "none"
    if order is not ModelOrder.H5 and mat.muc == 0:
        messages.append("warning: μ_c = 0 (no skew-strain stiffness)")
    geometry_ok = not (order is ModelOrder.PLATE and kappa_sup > 0)
    if not geometry_ok:
        messages.append("PLATE model requires a flat chart")
    nonlinear_ok = check_nonlinear_bound(h, kappa_sup)
    if not nonlinear_ok:
        messages.append("h*kappa >= 2: outside the range of the parent nonlinear model")
    return AdmissibilityReport(
        hk=h * kappa_sup, h5_ok=h5_ok, h3_ok=h3_ok, h3_path=path,
        nonlinear_bound_ok=nonlinear_ok, material_ok=material_ok, order=order.value,
        geometry_ok=geometry_ok, messages=messages,
    )
