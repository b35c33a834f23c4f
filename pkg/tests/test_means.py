import math

import numpy as np
import pytest
from scipy import integrate as si

from htype_means import special
from htype_means.group import build_htype
from htype_means.means import (
    BiSphere,
    Homogeneous,
    MeanRules,
    VSphere,
    calibrate_polar_constant,
    eigenvalue,
    homogeneous_average,
    homogeneous_shells,
    polar_constant,
    spherical_mean,
)
from htype_means.transforms import constant_field, e_field, gaussian_field, moment_field

RULES = MeanRules(10, 10, 16)


def _check_eigen(g, spec, k, lam, rules, tol, seed=0):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(g.m)
    a *= lam / np.linalg.norm(a)
    f = e_field(g, k, a)
    e = eigenvalue(g, k, spec, lam)
    for _ in range(3):
        p = g.point(rng.uniform(-1, 1, 2 * g.n), rng.uniform(-1, 1, g.m))
        val = f.at(p)
        assert abs(spherical_mean(g, f, spec, p, rules) - e * val) <= tol * (abs(val) + 1e-3)


@pytest.mark.parametrize("k", [0, 1, 3])
@pytest.mark.parametrize("spec", [VSphere(0.9), BiSphere(0.9, 1.1)], ids=["vsphere", "bisphere"])
def test_eigenrelation(group, spec, k):
    _check_eigen(group, spec, k, 1.3, RULES, 1e-10)


@pytest.mark.parametrize("k", [0, 2])
def test_homogeneous_eigenrelation(group, k):
    _check_eigen(group, Homogeneous(1.1), k, 0.7, MeanRules(8, 8, 12), 1e-8)


def test_vsphere_eigenvalue_closed_form():
    g = build_htype(2, 2)
    lam, r, k = 1.7, 0.6, 2
    expected = float(special.eigen_coeff(k, 2)) * special.phi(k, 2, lam, r)
    assert eigenvalue(g, k, VSphere(r), lam) == pytest.approx(expected)


def test_means_of_constants():
    g = build_htype(2, 3)
    one = constant_field(1.0)
    p = g.point(np.ones(4), np.ones(3))
    for spec in (VSphere(1.0), BiSphere(1.0, 2.0), Homogeneous(0.5)):
        assert spherical_mean(g, one, spec, p, MeanRules(4, 4, 8)) == pytest.approx(1.0, abs=1e-13)


@pytest.mark.parametrize("n,m", [(1, 1), (2, 2), (2, 3), (4, 5)])
def test_shell_weights_normalised(n, m):
    rho, tau, w = homogeneous_shells(n, m, 24)
    assert w.sum() == pytest.approx(1.0, abs=1e-14)
    assert np.allclose(rho**4 + tau**2, 1.0, atol=1e-14)


@pytest.mark.parametrize("n,m", [(1, 1), (2, 2), (2, 3), (4, 4)])
def test_polar_constant_vs_direct_integral(n, m):
    # kappa = |S^{2n-1}| |S^{m-1}| int rho^{2n-1} tau^{m-1} over the Koranyi sphere, in rho^4 + tau^2 = 1 coordinates
    from htype_means.quadrature import sphere_area

    if m == 1:
        inner, _ = si.quad(lambda th: math.cos(th) ** (n - 1), -math.pi / 2, math.pi / 2)
        ref = sphere_area(2 * n) * inner
    else:
        inner, _ = si.quad(lambda th: math.cos(th) ** (n - 1) * math.sin(th) ** (m - 1), 0, math.pi / 2)
        ref = sphere_area(2 * n) * sphere_area(m) * inner
    assert polar_constant(n, m) == pytest.approx(ref, rel=1e-12)


def test_calibration_reproduces_moment_integral(group):
    kappa = calibrate_polar_constant(group, gaussian_field(group), rules=MeanRules(1, 1, 32))
    f = moment_field(group)
    mass = 1.0 / calibrate_polar_constant(group, f, total=1.0, rules=MeanRules(2, 2, 32))
    assert kappa * mass == pytest.approx(f.meta["integral"], rel=1e-4)
    assert kappa == pytest.approx(polar_constant(group.n, group.m), rel=1e-4)


def test_homogeneous_average_is_dilation_covariant():
    g = build_htype(2, 2)
    f = gaussian_field(g, 0.7, 1.3)
    a = homogeneous_average(g, f, 1.2, MeanRules(6, 6, 24))
    fs = gaussian_field(g, 0.7 * 1.2**2, 1.3 * 1.2**4)
    assert homogeneous_average(g, fs, 1.0, MeanRules(6, 6, 24)) == pytest.approx(a, rel=1e-13)


def test_literal_radius_differs():
    g = build_htype(2, 2)
    spec = Homogeneous(1.7)
    assert abs(eigenvalue(g, 1, spec, 1.0) - eigenvalue(g, 1, spec, 1.0, literal_radius=True)) > 1e-3


def test_measure_validation():
    for bad in (lambda: VSphere(0.0), lambda: BiSphere(1.0, -1.0), lambda: Homogeneous(-2.0)):
        with pytest.raises(ValueError):
            bad()
    g = build_htype(1, 1)
    with pytest.raises(ValueError):
        eigenvalue(g, 0, VSphere(1.0), 0.0)


def test_eigenrelation_is_basis_independent():
    # the same structure in a rotated orthonormal basis of v
    g = build_htype(2, 3)
    O, _ = np.linalg.qr(np.random.default_rng(2).standard_normal((4, 4)))
    _check_eigen(g.rotated(O), BiSphere(0.9, 1.1), 2, 1.3, RULES, 1e-10, seed=5)
