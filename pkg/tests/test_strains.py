import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosserat_shell import geometry as g
from cosserat_shell.algebra import anti
from cosserat_shell.errors import PreconditionError
from cosserat_shell.shell_tensors import build_tensors
from cosserat_shell.strains import (DisplacementJet, alternator_2d, curvature_K, koiter_bending,
                                    koiter_membrane, rebuild_E, reduced_strains,
                                    split_tangential_normal, strain_E, strain_state)

from conftest import chart_zoo, random_points
from oracles import (QuadraticField, batch_jet, koiter_bending_oracle, nonlinear_strains,
                     observed_order)

ZERO3, ZERO32 = np.zeros(3), np.zeros((3, 2))


def disp(v=ZERO3, dv=ZERO32, theta=ZERO3, dtheta=ZERO32, d2v=None):
    return DisplacementJet(np.asarray(v, float), np.asarray(dv, float), np.asarray(theta, float),
                           np.asarray(dtheta, float), d2v)


def setup(chart, x):
    jet = g.evaluate_jet(chart, np.asarray(x, float))
    return jet, build_tensors(jet)


def random_setup(chart, n, seed):
    rng = np.random.default_rng(seed)
    xs = random_points(chart, n, rng)
    fields = [QuadraticField(rng) for _ in range(n)]
    jet, t = setup(chart, xs)
    return jet, t, batch_jet(fields, xs)


PLANE = g.plane()
X0 = [0.4, 0.6]


def test_zero_field_gives_zero_strain(chart):
    jet, t = setup(chart, random_points(chart, 1, np.random.default_rng(0))[0])
    s = strain_state(jet, t, disp())
    assert not s.E.any() and not s.K.any() and not s.CK.any()
    r = reduced_strains(jet, disp())
    assert not (r.G.any() or r.T.any() or r.R.any() or r.N.any())


def test_plane_stretch():
    jet, t = setup(PLANE, X0)
    E = strain_E(jet, t, disp(dv=[[1, 0], [0, 0], [0, 0]]))
    np.testing.assert_array_equal(E, np.outer([1, 0, 0], [1, 0, 0]))


def test_plane_drill_rotation_strain():
    jet, t = setup(PLANE, X0)
    E = strain_E(jet, t, disp(theta=[0, 0, 1]))
    expected = np.zeros((3, 3))
    expected[0, 1], expected[1, 0] = 1.0, -1.0
    np.testing.assert_array_equal(E, expected)


def test_plane_drilling_curvature():
    jet, t = setup(PLANE, X0)
    d = disp(dtheta=[[0, 0], [0, 0], [1, 0]])
    K, CK = curvature_K(jet, t, d)
    np.testing.assert_array_equal(K, np.outer([0, 0, 1], [1, 0, 0]))
    np.testing.assert_array_equal(CK, np.zeros((3, 3)))
    np.testing.assert_array_equal(reduced_strains(jet, d).N, [1, 0])


def test_plane_bending_curvature():
    jet, t = setup(PLANE, X0)
    K, CK = curvature_K(jet, t, disp(dtheta=[[0, 1], [0, 0], [0, 0]]))
    np.testing.assert_array_equal(K, np.outer([1, 0, 0], [0, 1, 0]))
    np.testing.assert_array_equal(CK, -np.outer([0, 1, 0], [0, 1, 0]))


def test_plane_reduced_strains_component_form():
    rng = np.random.default_rng(5)
    dv, th, dth = rng.normal(size=(3, 2)), rng.normal(size=3), rng.normal(size=(3, 2))
    jet, _ = setup(PLANE, X0)
    r = reduced_strains(jet, disp(dv=dv, theta=th, dtheta=dth))
    G = np.array([[dv[0, 0], dv[0, 1] + th[2]], [dv[1, 0] - th[2], dv[1, 1]]])
    np.testing.assert_allclose(r.G, G, atol=1e-15)
    np.testing.assert_allclose(r.T, [dv[2, 0] + th[1], dv[2, 1] - th[0]], atol=1e-15)
    # R = (e1|e2)^T (e3 x dtheta): rows (-dtheta_2, dtheta_1)
    np.testing.assert_allclose(r.R, np.array([-dth[1], dth[0]]), atol=1e-15)
    np.testing.assert_allclose(r.N, dth[2], atol=1e-15)


def test_E_cross_product_route(chart):
    jet, t, d = random_setup(chart, 50, 1)
    E = strain_E(jet, t, d)
    zeros = np.zeros((50, 3, 1))
    lifted_v = np.concatenate([d.dv, zeros], -1)
    lifted_y = np.concatenate([jet.dy0, zeros], -1)
    crossed = np.cross(d.theta[:, :, None], lifted_y, axis=1)
    np.testing.assert_allclose(E, (lifted_v - crossed) @ t.invGradTheta, atol=1e-13)


def test_CK_equals_minus_normal_cross_K(chart):
    jet, t, d = random_setup(chart, 50, 2)
    K, CK = curvature_K(jet, t, d)
    np.testing.assert_allclose(CK, -anti(jet.n0) @ K, atol=1e-13)


def test_rebuild_E_from_reduced(chart):
    jet, t, d = random_setup(chart, 50, 3)
    E = strain_E(jet, t, d)
    np.testing.assert_allclose(rebuild_E(t, reduced_strains(jet, d)), E, atol=1e-12)


def test_stacking_identity(chart):
    jet, t, d = random_setup(chart, 20, 4)
    r = reduced_strains(jet, d)
    X = d.dv - np.cross(d.theta[:, :, None], jet.dy0, axis=1)
    np.testing.assert_allclose(np.swapaxes(t.gradTheta, -1, -2) @ X,
                               np.concatenate([r.G, r.T[:, None, :]], axis=1), atol=1e-12)


def test_koiter_membrane_is_sym_G(chart):
    jet, t, d = random_setup(chart, 100, 6)
    r = reduced_strains(jet, d)
    np.testing.assert_allclose(koiter_membrane(jet, d), 0.5 * (r.G + np.swapaxes(r.G, 1, 2)),
                               atol=1e-13)
    dy_dv = np.swapaxes(jet.dy0, 1, 2) @ d.dv
    expected = np.einsum("n,nab->nab", np.einsum("ni,ni->n", d.theta, jet.n0),
                         alternator_2d(jet))
    np.testing.assert_allclose(r.G - dy_dv, expected, atol=1e-12)


def test_koiter_membrane_plane_example():
    jet, _ = setup(PLANE, X0)
    np.testing.assert_array_equal(koiter_membrane(jet, disp(dv=[[1, 0], [0, 0], [0, 0]])),
                                  np.diag([1.0, 0.0]))


def test_koiter_bending_plane_is_hessian_of_normal_component():
    rng = np.random.default_rng(7)
    f = QuadraticField(rng)
    jet, _ = setup(PLANE, X0)
    np.testing.assert_allclose(koiter_bending(jet, f.jet(np.array(X0))), f.hess()[2],
                               atol=1e-14)


def test_koiter_bending_requires_second_derivatives():
    jet, _ = setup(PLANE, X0)
    with pytest.raises(PreconditionError):
        koiter_bending(jet, disp())


@pytest.mark.parametrize("name", ["sphere", "cylinder", "saddle", "graph"])
def test_koiter_bending_matches_second_form_difference(name):
    chart = chart_zoo()[name]
    rng = np.random.default_rng(8)
    for x in random_points(chart, 5, rng):
        jet, _ = setup(chart, x)
        d = QuadraticField(rng).jet(x)
        np.testing.assert_allclose(koiter_bending(jet, d), koiter_bending_oracle(jet, d),
                                   atol=1e-6)


def test_koiter_bending_normal_field_on_sphere():
    # v = s(x) n0 with s(x) = 1 + x1 x2
    chart = g.sphere(1.0)
    x = np.array([0.2, -0.1])
    jet, _ = setup(chart, x)
    s, ds = 1 + x[0] * x[1], np.array([x[1], x[0]])
    d2s = np.array([[0.0, 1.0], [1.0, 0.0]])
    dn, n = jet.dn0, jet.n0
    # on the unit sphere n0 = y0, so d_ab n0 = d2y0
    v = s * n
    dv = np.outer(n, ds) + s * dn
    d2v = (np.einsum("i,ab->iab", n, d2s) + np.einsum("ia,b->iab", dn, ds)
           + np.einsum("ib,a->iab", dn, ds) + s * jet.d2y0)
    d = disp(v=v, dv=dv, d2v=d2v)
    np.testing.assert_allclose(koiter_bending(jet, d), koiter_bending_oracle(jet, d), atol=1e-7)


def test_split_tangential_normal_examples():
    e3 = np.array([0.0, 0.0, 1.0])
    par, perp = split_tangential_normal(np.eye(3), e3)
    np.testing.assert_array_equal(par, np.diag([1.0, 1.0, 0.0]))
    np.testing.assert_array_equal(perp, np.outer(e3, e3))
    X = np.outer(e3, [1.0, 0, 0])
    par, perp = split_tangential_normal(X, e3)
    np.testing.assert_array_equal(par, 0 * X)
    np.testing.assert_array_equal(perp, X)


@given(st.lists(st.floats(-5, 5), min_size=12, max_size=12))
def test_split_identities(vals):
    X = np.array(vals[:9]).reshape(3, 3)
    n = np.array(vals[9:])
    if np.linalg.norm(n) < 1e-3:
        n = np.array([0.0, 0.0, 1.0])
    n = n / np.linalg.norm(n)
    par, perp = split_tangential_normal(X, n)
    np.testing.assert_allclose(par + perp, X, atol=1e-14)
    assert np.sum(perp**2) == pytest.approx(np.sum((X.T @ n) ** 2), rel=1e-12, abs=1e-12)


@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2**16))
def test_strains_are_linear(a, b, seed):
    chart = chart_zoo()["sphere"]
    rng = np.random.default_rng(seed)
    x = random_points(chart, 1, rng)[0]
    jet, t = setup(chart, x)
    d1, d2 = QuadraticField(rng).jet(x), QuadraticField(rng).jet(x)
    combo = DisplacementJet(*(a * getattr(d1, k) + b * getattr(d2, k)
                              for k in ("v", "dv", "theta", "dtheta")))
    s, s1, s2 = strain_state(jet, t, combo), strain_state(jet, t, d1), strain_state(jet, t, d2)
    np.testing.assert_allclose(s.E, a * s1.E + b * s2.E, atol=1e-12)
    np.testing.assert_allclose(s.K, a * s1.K + b * s2.K, atol=1e-12)


def test_flat_curvature_decomposition():
    jet, t, d = random_setup(PLANE, 20, 9)
    K = strain_state(jet, t, d).K
    C = t.C
    drill = np.einsum("ni,nj->nij", jet.n0, np.einsum("ni,nij->nj", jet.n0, K))
    np.testing.assert_allclose(C @ (-C @ K) + drill, K, atol=1e-13)


@pytest.mark.parametrize("name", ["plane", "cylinder", "sphere", "saddle"])
def test_linearisation_order(name):
    chart = chart_zoo()[name]
    rng = np.random.default_rng(10)
    x = random_points(chart, 1, rng)[0]
    jet, t = setup(chart, x)
    d = QuadraticField(rng).jet(x)
    lin = strain_state(jet, t, d)
    eps = np.array([1e-2, 1e-3, 1e-4])
    errE, errK = [], []
    for e in eps:
        E, K = nonlinear_strains(jet, d, e)
        errE.append(np.abs(E / e - lin.E).max())
        errK.append(np.abs(K / e - lin.K).max())
    assert observed_order(errE, eps).min() >= 0.99
    assert observed_order(errK, eps).min() >= 0.99
