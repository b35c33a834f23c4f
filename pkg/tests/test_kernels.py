import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from htype_means import kernels as K
from htype_means.quadrature import sphere_area
from htype_means.suites import kernel_points


def _pt(n, m, rz, rt):
    z = np.zeros(2 * n)
    z[0] = rz
    t = np.zeros(m)
    t[-1] = rt
    return z, t


@pytest.mark.parametrize("n,m,k", [(1, 2, 0), (2, 2, 1), (2, 3, 2), (1, 3, 1)])
def test_series_vs_mpmath_polar_integral(n, m, k):
    rz, rt = 1.1, 0.8
    nu = m / 2 - 1

    def integrand(lam):
        bm = mp.gamma(m / 2) * (2 / (lam * rt)) ** nu * mp.besselj(nu, lam * rt)
        x = lam * rz**2 / 2
        return bm * mp.laguerre(k, n - 1, x) * mp.exp(-x / 2) * lam ** (n + m - 1)

    ref = sphere_area(m) * mp.quad(integrand, [0, 5, 20, 60, mp.inf])
    assert K.ak_series(k, n, m, *_pt(n, m, rz, rt)) == pytest.approx(float(ref), rel=1e-9)


@given(
    st.integers(1, 3), st.sampled_from([2, 3, 4]), st.integers(0, 3),
    st.floats(0.1, 10.0), st.floats(0.3, 2.0),
)
def test_component_vs_direct(n, m, j, tau, rt):
    z, t = _pt(n, m, math.sqrt(4 * tau * rt), rt)
    a = K.ak_component(j, n, m, z, t)
    b = K.ak_component_direct(j, n, m, z, t)
    assert abs(a - b) <= 1e-8 * abs(a)


@pytest.mark.parametrize("n,m", [(2, 2), (2, 3)])
@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_triple_agreement(n, m, k):
    pts = kernel_points(n, m, np.random.default_rng(k), 4)
    c = K.fit_closed_form_constant(k, n, m, *pts[0])
    assert c == pytest.approx(K.closed_form_constant(k, n, m), rel=1e-9)
    for z, t in pts:
        a = K.ak_series(k, n, m, z, t)
        assert K.ak_closed_form(k, n, m, z, t) == pytest.approx(a, rel=1e-8)
        assert K.ak_direct(k, n, m, z, t) == pytest.approx(a, rel=1e-8)


@given(st.integers(0, 3), st.floats(0.2, 5.0), st.data())
def test_homogeneity_and_radiality(k, s, data):
    n, m = 2, 3
    seed = data.draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    z, t = rng.standard_normal(2 * n), rng.standard_normal(m)
    v = K.ak_series(k, n, m, z, t)
    assert K.ak_series(k, n, m, s * z, s * s * t) * s ** (2 * n + 2 * m) == pytest.approx(v, rel=1e-10)
    q, _ = np.linalg.qr(rng.standard_normal((m, m)))
    assert K.ak_series(k, n, m, z, q @ t) == pytest.approx(v, rel=1e-10)


def test_limits_on_axes():
    n, m = 2, 2
    z, _ = _pt(n, m, 1.0, 0.0)
    at_zero = K.ak_component(1, n, m, z, np.zeros(m))
    near = K.ak_component(1, n, m, z, np.array([0.0, 1e-7]))
    assert near == pytest.approx(at_zero, rel=1e-6)
    # z = 0 is finite and t-homogeneous
    v1 = K.ak_series(2, n, m, np.zeros(2 * n), np.array([0.0, 1.0]))
    v2 = K.ak_series(2, n, m, np.zeros(2 * n), np.array([0.0, 2.0]))
    assert v2 == pytest.approx(v1 * 2.0 ** (-(n + m)), rel=1e-12)
    with pytest.raises(ValueError):
        K.ak_series(0, n, m, np.zeros(4), np.zeros(2))
    with pytest.raises(ValueError):
        K.ak_series(0, 1, 1, np.ones(2), np.ones(1))


def test_series_coefficients():
    from fractions import Fraction

    assert K.series_coefficients(2, 2) == (Fraction(3), Fraction(-3, 2), Fraction(1, 8))


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("j", [0, 1, 2])
@pytest.mark.parametrize("m", [2, 3])
def test_cancellation(n, j, m):
    assert K.cancellation_integral(n, j, m) <= 1e-8
    assert K.boundary_degree_ok(n, j, m)


@pytest.mark.parametrize("n,m,k", [(1, 2, 0), (2, 2, 1), (2, 3, 2)])
def test_annulus_cancellation(n, m, k):
    assert K.annulus_cancellation(k, n, m) <= 1e-8


@pytest.mark.parametrize("n,m", [(1, 2), (2, 2), (2, 3), (3, 4)])
def test_abel_partial_sums(n, m):
    z, t = _pt(n, m, 0.9, 0.7)
    r = 0.3
    partial = math.fsum(r**k * K.ak_series(k, n, m, z, t) for k in range(41))
    assert partial == pytest.approx(K.abel_kernel(r, n, m, z, t), rel=1e-6)


@pytest.mark.parametrize("n,m", [(1, 2), (2, 2), (2, 3), (3, 3)])
def test_riesz_closed_form_vs_direct(n, m):
    rng = np.random.default_rng(n * 10 + m)
    z, t = rng.standard_normal(2 * n), rng.standard_normal(m)
    for j in range(m):
        a = K.riesz_abel_kernel(0.25, n, m, z, t, j)
        b = K.riesz_abel_direct(0.25, n, m, z, t, j)
        assert abs(a - b) <= 1e-8 * abs(a)


def test_direct_quadrature_refuses_small_tau():
    with pytest.raises(ValueError):
        K.ak_component_direct(0, 1, 2, *_pt(1, 2, 0.1, 1.0))


def test_riesz_is_odd_in_t():
    z, t = _pt(2, 3, 1.0, 0.5)
    t = np.array([0.3, -0.2, 0.5])
    a = K.riesz_abel_kernel(0.3, 2, 3, z, t, 0)
    assert K.riesz_abel_kernel(0.3, 2, 3, z, -t, 0) == pytest.approx(-a)
    with pytest.raises(ValueError):
        K.riesz_abel_kernel(0.3, 2, 3, z, np.zeros(3), 0)
    with pytest.raises(ValueError):
        K.riesz_abel_kernel(1.0, 2, 3, z, t, 0)


@pytest.mark.parametrize("n,m", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_riesz_tail_share(n, m):
    # order n - 1 is the derivative the kernel actually carries
    assert K.riesz_integrability(n, m)["tail_share"] < 1e-6


def test_riesz_tail_share_lower_order():
    assert K.riesz_integrability(2, 3, order=0)["tail_share"] < 1e-6
    # for (2, 2) the integrand is 3 a^2 (1 + a^2)^{-5/2}: total 1, tail 1.5 / B^2
    info = K.riesz_integrability(2, 2, order=0)
    assert info["total"] == pytest.approx(1.0, rel=1e-10)
    assert info["tail_share"] == pytest.approx(1.5e-6, rel=1e-5)


@given(st.integers(0, 4), st.floats(0.0, 10.0), st.floats(0.05, 0.5))
def test_laguerre_generating_function(alpha, x, r):
    assert K.laguerre_generating_error(alpha, x, r, 60) < 1e-8
