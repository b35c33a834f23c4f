import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from htype_means import special
from htype_means import transforms as T
from htype_means.group import build_htype, multiply


def _phi(k, n, lam):
    return lambda w: special.phi(k, n, lam, np.linalg.norm(w, axis=-1))


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("k,j", [(0, 0), (1, 1), (2, 2), (1, 0), (2, 1)])
def test_twisted_convolution_orthogonality(n, k, j):
    lam = 1.3
    z = np.array([0.4, -0.2, 0.3, 0.1][: 2 * n])
    got = T.twisted_convolution(_phi(k, n, lam), _phi(j, n, lam), lam, z, sphere_level=16)
    expected = (2 * math.pi / lam) ** n * special.phi(k, n, lam, np.linalg.norm(z)) if k == j else 0.0
    assert abs(got - expected) < 1e-10 * max(1.0, abs(expected))


def test_twisted_convolution_rejects_large_n():
    with pytest.raises(ValueError):
        T.twisted_convolution(_phi(0, 3, 1.0), _phi(0, 3, 1.0), 1.0, np.zeros(6))


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("k", [0, 1, 3])
def test_twisted_laplacian_eigen(n, k):
    lam = 1.3
    z = np.array([0.4, -0.2, 0.3, 0.1][: 2 * n])
    f = _phi(k, n, lam)
    got = T.twisted_laplacian_fd(f, z, lam, 1e-3) / f(z)
    assert got == pytest.approx((2 * k + n) * lam, rel=1e-6)


@pytest.mark.parametrize("n,m", [(1, 1), (2, 2), (2, 3)])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_sublaplacian_eigen_convergence(n, m, k):
    g = build_htype(n, m)
    rng = np.random.default_rng(k)
    a = rng.standard_normal(m)
    p = g.point(rng.uniform(-1, 1, 2 * n), rng.uniform(-1, 1, m))
    errs = [T.eigen_residual(g, k, a, p, h) for h in (4e-2, 2e-2, 1e-2)]
    assert math.log2(errs[0] / errs[1]) > 1.8 and math.log2(errs[1] / errs[2]) > 1.8


def test_sublaplacian_step_bounds():
    g = build_htype(1, 1)
    f = T.e_field(g, 0, [1.0])
    with pytest.raises(ValueError):
        T.sublaplacian_fd(g, f, g.identity(), h=1.0)


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_e_field_central_character(x, y, t):
    g = build_htype(1, 1)
    a = np.array([0.7])
    f = T.e_field(g, 1, a)
    c = np.array([t])
    p = g.point([x, y], [0.0])
    assert f.shifted_center(c).at(p) == pytest.approx(np.exp(-1j * 0.7 * t) * f.at(p), abs=1e-14)


def test_translated_is_left_translation():
    g = build_htype(2, 3)
    f = T.gaussian_field(g)
    rng = np.random.default_rng(0)
    q = g.point(rng.standard_normal(4), rng.standard_normal(3))
    p = g.point(rng.standard_normal(4), rng.standard_normal(3))
    assert f.translated(g, q).at(p) == pytest.approx(f.at(multiply(g, q, p)))
    assert f.scaled(2j).at(p) == pytest.approx(2j * f.at(p))


def test_field_integrals_closed_form():
    g = build_htype(1, 1)
    x, w = np.polynomial.hermite.hermgauss(20)
    grid = np.array(np.meshgrid(x, x, x, indexing="ij")).reshape(3, -1).T
    ww = np.prod(np.array(np.meshgrid(w, w, w, indexing="ij")).reshape(3, -1), axis=0)
    for sz, st_, f in ((1.0, 1.0, T.gaussian_field(g)), (2.0, 0.5, T.moment_field(g))):
        # Gauss-Hermite per axis after y = x / sqrt(s)
        scale = np.array([sz, sz, st_]) ** -0.5
        y = grid * scale
        vals = f(y[:, :2], y[:, 2:]) * np.exp(np.sum(grid**2, axis=1))
        assert (ww @ vals).real * np.prod(scale) == pytest.approx(f.meta["integral"], rel=1e-12)


def test_constant_field_and_validation():
    g = build_htype(2, 2)
    c = T.constant_field(3.0)
    assert c(np.zeros((5, 4)), np.zeros((5, 2))).shape == (5,)
    with pytest.raises(ValueError):
        T.e_field(g, 0, [0.0, 0.0])
    with pytest.raises(ValueError):
        T.e_field(g, 0, [1.0])
