"""Spectral projection kernels A_k, their Abel and Riesz-modified sums.

Normalisation: A_k(z, t) = int_{R^m} exp(-i <a, t>) phi_k^{|a|}(|z|) |a|^n da,
and A_k^j is the same integral with phi_k replaced by
|z|^{2j} |a|^j exp(-|a| |z|^2 / 4).  In polar form every kernel is a
Bessel-Laplace integral in lam = |a|, which reduces to derivatives of

    I_m(tau) = int_0^inf j_nu(l) exp(-tau l) l^{m-1} dl,   j_nu(x) = J_nu(x) / x^nu,

through int j_nu(l) exp(-tau l) l^{m-1+p} dl = (-1)^p I_m^{(p)}(tau).
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import special
from .quadrature import integrate_halfline, make_halfline, make_interval, make_jacobi, make_sphere, sphere_area
from .means import homogeneous_shells

__all__ = [
    "ak_component",
    "ak_component_direct",
    "ak_series",
    "ak_direct",
    "ak_closed_form",
    "closed_form_integral",
    "closed_form_constant",
    "fit_closed_form_constant",
    "series_coefficients",
    "cancellation_integral",
    "boundary_degree_ok",
    "abel_kernel",
    "riesz_abel_kernel",
    "riesz_abel_direct",
    "riesz_integrability",
    "annulus_cancellation",
    "laguerre_generating_error",
]


def _radii(z, t) -> tuple[np.ndarray, np.ndarray]:
    z = np.asarray(z, dtype=float)
    t = np.asarray(t, dtype=float)
    rz = np.sqrt(np.sum(z * z, axis=-1))
    rt = np.sqrt(np.sum(t * t, axis=-1))
    if np.any((rz == 0) & (rt == 0)):
        raise ValueError("kernels are singular at the origin")
    return rz, rt


def _check_m(m: int) -> None:
    if m < 2:
        raise ValueError("spectral kernels need m >= 2")


def _scalar(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


def _signed_derivative(m: int, p: int, rz, rt):
    """|t|^{-(m + p)} (-1)^p I_m^{(p)}(|z|^2 / (4|t|)), continued to t = 0."""
    rz, rt = np.broadcast_arrays(np.asarray(rz, float), np.asarray(rt, float))
    out = np.empty(rz.shape)
    pos = rt > 0
    if np.any(pos):
        b = rz[pos] ** 2 / (4.0 * rt[pos])
        out[pos] = (-1) ** p * special.poisson_derivative(m, p, b) * rt[pos] ** (-(m + p))
    if np.any(~pos):
        # I_m(b) ~ c_m b^{-m}: the p-th derivative's leading term fixes the t = 0 limit
        rising = math.prod(range(m, m + p))
        out[~pos] = special.poisson_constant(m) * rising * (rz[~pos] ** 2 / 4.0) ** (-(m + p))
    return out


def ak_component(j: int, n: int, m: int, z, t):
    """A_k^j(z, t) = (2 pi)^{m/2} |z|^{2j} |t|^{-(n+m+j)} (-1)^{n+j} I_m^{(n+j)}(|z|^2 / (4|t|)).

    z has shape (..., 2n), t shape (..., m).  At z = 0 the value is the
    Abel limit of the (non-absolutely convergent) Bessel integral.
    """
    _check_m(m)
    if j < 0:
        raise ValueError("j must be nonnegative")
    rz, rt = _radii(z, t)
    val = (2 * math.pi) ** (0.5 * m) * rz ** (2 * j) * _signed_derivative(m, n + j, rz, rt)
    return _scalar(val)


DIRECT_TAU_MIN = 0.1


def _bessel_laplace(m: int, tau: float, power: int, extra=None, points: int = 256) -> float:
    """int_0^inf j_nu(l) exp(-tau l) l^power extra(l) dl by Gauss-Laguerre.

    The exponential is split as exp(-beta l) exp((beta - tau) l) with
    beta = sqrt(tau^2 + 1), which keeps the oscillation resolvable.  The
    growing factor is folded into the weights in log form so it cannot overflow.
    Below tau = DIRECT_TAU_MIN the oscillation outruns the rule and a
    ValueError is raised instead of returning an inaccurate value.
    """
    if tau < DIRECT_TAU_MIN:
        raise ValueError(f"direct quadrature needs |z|^2 / (4|t|) >= {DIRECT_TAU_MIN}, got {tau:.3g}")
    nu = 0.5 * m - 1.0
    beta = math.hypot(tau, 1.0)
    rule = make_halfline(points, float(power))
    lam = rule.nodes / beta
    w = np.exp(np.log(rule.weights) + (beta - tau) * lam)
    val = special.normalized_bessel(nu, lam)
    if extra is not None:
        val = val * extra(lam)
    return float(w @ val) * beta ** (-1.0 - power)


def ak_component_direct(j: int, n: int, m: int, z, t, points: int = 256) -> float:
    """Half-line quadrature of the defining Bessel integral for A_k^j; needs t != 0, z != 0."""
    _check_m(m)
    rz, rt = _radii(z, t)
    rz, rt = float(rz), float(rt)
    tau = rz * rz / (4.0 * rt)
    integral = _bessel_laplace(m, tau, m - 1 + n + j, points=points)
    return (2 * math.pi) ** (0.5 * m) * rz ** (2 * j) * rt ** (-(n + m + j)) * integral


def series_coefficients(k: int, n: int) -> tuple[Fraction, ...]:
    """(-1)^j C(k+n-1, k-j) 2^{-j} / j!, from L_k^{n-1}(x) with x = |a||z|^2 / 2."""
    return tuple(
        Fraction((-1) ** j * math.comb(k + n - 1, k - j), 2**j * math.factorial(j)) for j in range(k + 1)
    )


def ak_series(k: int, n: int, m: int, z, t):
    """A_k as the finite combination of the components A_k^j."""
    coeffs = series_coefficients(k, n)
    total = 0.0
    for j, c in enumerate(coeffs):
        total = total + float(c) * np.asarray(ak_component(j, n, m, z, t))
    return _scalar(total)


def ak_direct(k: int, n: int, m: int, z, t, points: int = 256) -> float:
    """A_k from (2 pi)^{m/2} int j_nu(l |t|) phi_k^l(|z|) l^{n+m-1} dl, Laguerre factor kept intact."""
    _check_m(m)
    rz, rt = _radii(z, t)
    rz, rt = float(rz), float(rt)
    x = rz * rz / rt
    integral = _bessel_laplace(
        m, 0.25 * x, n + m - 1, extra=lambda lam: special.laguerre(k, n - 1, 0.5 * x * lam), points=points
    )
    return (2 * math.pi) ** (0.5 * m) * rt ** (-(n + m)) * integral


def _p_term(j: int, N: int, A, B):
    """P_j = (N-1+j)!/j! B^j / A^{N+j} (1 + j/(N-1+j) A/B); P_j = 0 for j < 0."""
    if j < 0:
        return 0.0
    lead = math.factorial(N - 1 + j) / math.factorial(j) * B**j / A ** (N + j)
    if j == 0:
        return lead
    return lead * (1.0 + j / (N - 1 + j) * A / B)


def closed_form_integral(k: int, n: int, m: int, z, t, points: int = 256) -> float:
    """int_{-1}^{1} (1 - s^2)^{(m-3)/2} sum_l C(m-1, l) P_{k-l}(z, s|t|) ds, no prefactor.

    A = |z|^2 - 4 i s |t| and B = |z|^2 + 4 i s |t|; the integral is real by s -> -s symmetry.
    """
    _check_m(m)
    rz, rt = _radii(z, t)
    rz, rt = float(rz), float(rt)
    N = n + m
    rule = make_jacobi(points, 0.5 * (m - 3))
    s = rule.nodes
    A = rz * rz - 4j * s * rt
    B = rz * rz + 4j * s * rt
    acc = np.zeros_like(A)
    for ell in range(min(k, m - 1) + 1):
        acc = acc + math.comb(m - 1, ell) * _p_term(k - ell, N, A, B)
    return float(np.real(rule.weights @ acc))


def closed_form_constant(k: int, n: int, m: int) -> float:
    """Prefactor turning closed_form_integral into A_k.

    (2 pi)^{m/2} 4^N (-1)^k / (2^nu Gamma((m-1)/2) sqrt(pi)), from the Poisson
    representation of j_nu and the Laguerre generating function.
    """
    _check_m(m)
    N = n + m
    nu = 0.5 * m - 1.0
    return (2 * math.pi) ** (0.5 * m) * 4.0**N * (-1) ** k / (2.0**nu * math.gamma(0.5 * (m - 1)) * math.sqrt(math.pi))


def fit_closed_form_constant(k: int, n: int, m: int, z, t, points: int = 256) -> float:
    """One-point fit: ak_series / closed_form_integral at (z, t)."""
    return float(ak_series(k, n, m, z, t)) / closed_form_integral(k, n, m, z, t, points)


def ak_closed_form(k: int, n: int, m: int, z, t, constant: float | None = None, points: int = 256) -> float:
    """A_k through the s-integral of the P-sum; constant defaults to the analytic prefactor."""
    c = closed_form_constant(k, n, m) if constant is None else constant
    return c * closed_form_integral(k, n, m, z, t, points)


# -- cancellation -------------------------------------------------------------


def cancellation_integral(n: int, j: int, m: int, points: int = 200) -> float:
    """|int_0^inf I_m^{(p)}(b) b^{p-1} db| / int_0^inf |I_m^{(p)}(b)| b^{p-1} db, p = n + j.

    b = tan(theta) maps the half-line to (0, pi/2); in theta the integrand is
    a rational function of sin and cos, so Gauss-Legendre converges geometrically.
    """
    _check_m(m)
    p = n + j
    rule = make_interval(0.0, 0.5 * math.pi, points)
    th = rule.nodes
    b = np.tan(th)
    vals = special.poisson_derivative(m, p, b) * b ** (p - 1) / np.cos(th) ** 2
    signed = rule.weights @ vals
    absolute = rule.weights @ np.abs(vals)
    return float(abs(signed) / absolute)


def boundary_degree_ok(n: int, j: int, m: int) -> bool:
    """b^{p} Psi^{(p-1)}(b) -> 0 at infinity, p = n + j, read off the rational form.

    Psi^{(q)} = R_q (1 + b^2)^{-(m+1)/2 - q} with deg R_q <= q, so the product
    decays like b^{p + q - (m + 1) - 2q} = b^{-m}.
    """
    psi = special.psi_derivative(m, n + j - 1)
    q = psi.p
    growth = Fraction(n + j + psi.degree()) + 2 * psi.exponent
    return psi.degree() <= q and growth < 0


def annulus_cancellation(k: int, n: int, m: int, radial_points: int = 96) -> float:
    """|int_{a<|x|<b} A_k| / int_{a<|x|<b} |A_k| over Koranyi annuli.

    Homogeneity of degree -Q turns both into log(b/a) times an integral over
    the unit Koranyi sphere, so the ratio does not depend on (a, b).
    """
    rho, tau, w = homogeneous_shells(n, m, radial_points)
    zs = np.zeros((len(rho), 2 * n))
    ts = np.zeros((len(rho), m))
    zs[:, 0] = rho
    ts[:, 0] = tau
    vals = np.asarray(ak_series(k, n, m, zs, ts))
    return float(abs(w @ vals) / (w @ np.abs(vals)))


# -- Abel and Riesz ------------------------------------------------------------


def _check_r(r: float) -> None:
    if not 0.0 < r < 1.0:
        raise ValueError("r must lie in (0, 1)")


def abel_kernel(r: float, n: int, m: int, z, t):
    """sum_k r^k A_k = (1 - r)^{-n} A_0 evaluated with |z|^2 scaled by (1 + r)/(1 - r)."""
    _check_r(r)
    _check_m(m)
    rz, rt = _radii(z, t)
    c = (1.0 + r) / (1.0 - r)
    val = (1.0 - r) ** (-n) * (2 * math.pi) ** (0.5 * m) * _signed_derivative(m, n, math.sqrt(c) * rz, rt)
    return _scalar(val)


def riesz_abel_kernel(r: float, n: int, m: int, z, t, j: int):
    """Kernel of f -> sum_k r^k (R_j f) * A_k, R_j the central Riesz multiplier a_j / |a|.

    -i (2 pi)^{m/2} (1 - r)^{-n} t_j |t|^{-(n+m+1)} (-1)^{n-1} I_{m+2}^{(n-1)}(c |z|^2 / (4|t|)),
    c = (1 + r)/(1 - r).  Requires t != 0.
    """
    _check_r(r)
    _check_m(m)
    if not 0 <= j < m:
        raise ValueError("component index out of range")
    rz, rt = _radii(z, t)
    if np.any(rt == 0):
        raise ValueError("Riesz-Abel kernel needs t != 0")
    t = np.asarray(t, dtype=float)
    c = (1.0 + r) / (1.0 - r)
    b = c * rz**2 / (4.0 * rt)
    core = (-1) ** (n - 1) * special.poisson_derivative(m + 2, n - 1, b) * rt ** (-(n + m + 1))
    val = -1j * (2 * math.pi) ** (0.5 * m) * (1.0 - r) ** (-n) * t[..., j] * core
    return _scalar(val)


def riesz_abel_direct(r: float, n: int, m: int, z, t, j: int, level: int | None = None) -> complex:
    """int_{R^m} exp(-i <a, t>) (a_j / |a|) (1 - r)^{-n} exp(-c |a| |z|^2 / 4) |a|^n da.

    The radial integral is a Laplace transform done exactly,
    int_0^inf l^{n+m-1} exp(-l w) dl = (n+m-1)! / w^{n+m}; the angular part
    uses the product rule on S^{m-1}.  The integrand has poles at distance
    about asinh(c|z|^2 / (4|t|)) from the real sphere, which sets the
    default level.
    """
    _check_r(r)
    rz, rt = _radii(z, t)
    t = np.asarray(t, dtype=float)
    c = (1.0 + r) / (1.0 - r)
    if level is None:
        dist = math.asinh(c * float(rz) ** 2 / (4.0 * max(float(rt), 1e-300)))
        level = int(min(256, max(16, math.ceil(36.0 / max(dist, 1e-3)))))
    sph = make_sphere(m, level)
    omega = sph.nodes
    w = c * float(rz) ** 2 / 4.0 + 1j * (omega @ t)
    N = n + m
    ang = sph.weights @ (omega[:, j] * math.factorial(N - 1) / w**N)
    return complex(sphere_area(m) * (1.0 - r) ** (-n) * ang)


def riesz_integrability(n: int, m: int, order: int | None = None, cutoff: float = 1e3, points: int = 400) -> dict:
    """Tail share of int_0^inf |I_{m+2}^{(order)}(a)| a^{n-1} da beyond `cutoff`.

    order defaults to n - 1 (the kernel above); order = n - 2 is also accepted.
    """
    order = n - 1 if order is None else order
    if order < 0:
        raise ValueError("derivative order must be nonnegative")

    def piece(lo, hi):
        rule = make_interval(lo, hi, points)
        a = np.tan(rule.nodes)
        vals = np.abs(special.poisson_derivative(m + 2, order, a)) * a ** (n - 1) / np.cos(rule.nodes) ** 2
        return float(rule.weights @ vals)

    split = math.atan(cutoff)
    head = piece(0.0, split)
    tail = piece(split, 0.5 * math.pi)
    total = head + tail
    return {"order": order, "total": total, "tail": tail, "tail_share": tail / total}


def laguerre_generating_error(alpha: int, x: float, r: float, K: int = 60) -> float:
    """|sum_{k<=K} L_k^alpha(x) r^k - (1 - r)^{-alpha-1} exp(-x r / (1 - r))|, relative."""
    _check_r(r)
    partial = math.fsum(float(special.laguerre(k, alpha, x)) * r**k for k in range(K + 1))
    exact = (1.0 - r) ** (-alpha - 1) * math.exp(-x * r / (1.0 - r))
    return abs(partial - exact) / abs(exact)
