"""The three spherical-mean operators and their eigenvalues on e_k^a.

All measures are probability measures: mu_r on the sphere |w| = r in v,
mu_{r,s} = mu_r x nu_s, and sigma_s on the Koranyi sphere of radius s,
reached through its decomposition into bi-spheres.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import special
from .group import GroupPoint, HTypeGroup, bracket
from .quadrature import (
    DEFAULT_SPHERE_LEVEL,
    make_interval,
    make_sphere,
    sphere_area,
)
from .transforms import ScalarField

__all__ = [
    "VSphere",
    "BiSphere",
    "Homogeneous",
    "MeanRules",
    "spherical_mean",
    "homogeneous_average",
    "homogeneous_shells",
    "eigenvalue",
    "polar_constant",
    "calibrate_polar_constant",
]

_CHUNK = 400_000


@dataclass(frozen=True)
class VSphere:
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class BiSphere:
    r: float
    s: float

    def __post_init__(self):
        if not (self.r > 0 and self.s > 0):
            raise ValueError("radii must be positive")


@dataclass(frozen=True)
class Homogeneous:
    s: float

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError("radius must be positive")


MeasureSpec = VSphere | BiSphere | Homogeneous


@dataclass(frozen=True)
class MeanRules:
    v_level: int = DEFAULT_SPHERE_LEVEL
    z_level: int = DEFAULT_SPHERE_LEVEL
    radial_points: int = 32


@lru_cache(maxsize=None)
def homogeneous_shells(n: int, m: int, radial_points: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unit Koranyi sphere as a mixture of bi-spheres.

    Parametrised by |z|^2 = cos(theta), |t| = sin(theta), where the surface
    density is cos^{n-1} sin^{m-1}, analytic in theta.  Returns (rho, tau,
    weight) with weights summing to 1.  For m >= 2, theta runs over (0, pi/2)
    and tau is the central sphere radius; for m = 1, theta runs over
    (-pi/2, pi/2) and tau is a signed central shift.
    """
    lo = -0.5 * math.pi if m == 1 else 0.0
    rule = make_interval(lo, 0.5 * math.pi, radial_points)
    th = rule.nodes
    w = rule.weights * np.cos(th) ** (n - 1) * np.abs(np.sin(th)) ** (m - 1)
    rho, tau = np.sqrt(np.cos(th)), np.sin(th)
    w = w / w.sum()
    for a in (rho, tau, w):
        a.setflags(write=False)
    return rho, tau, w


def _center_nodes(m: int, level: int) -> tuple[np.ndarray, np.ndarray]:
    rule = make_sphere(m, level) if m >= 2 else make_sphere(1, 1)
    return rule.nodes, rule.weights


def _bisphere_at(g: HTypeGroup, f: ScalarField, z, t, rho: float, tnodes, tweights, v_level: int, invert: bool = True):
    """sum over w in rho*S^{2n-1}, u in tnodes of f(z - w, t - u - [z, w]/2), weighted.

    With invert=False evaluates f at the nodes (w, u) themselves (no convolution).
    """
    sph = make_sphere(2 * g.n, v_level)
    W = rho * sph.nodes
    if invert:
        zs = z[None, :] - W
        ts = t[None, :] - 0.5 * bracket(g, z[None, :], W)
    else:
        zs = W
        ts = np.broadcast_to(t, (len(W), g.m))
    kt = len(tweights)
    step = max(1, _CHUNK // max(kt, 1))
    total = 0.0 + 0.0j
    for lo in range(0, len(W), step):
        zc = zs[lo : lo + step]
        tc = ts[lo : lo + step]
        zz = np.broadcast_to(zc[:, None, :], (len(zc), kt, 2 * g.n))
        tt = tc[:, None, :] - tnodes[None, :, :] if invert else tc[:, None, :] + tnodes[None, :, :]
        vals = f(zz, tt)
        total += sph.weights[lo : lo + step] @ (vals @ tweights)
    return total


def _as_point(g: HTypeGroup, p) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(p, GroupPoint):
        return p.z, p.t
    z, t = p
    return np.asarray(z, float), np.asarray(t, float)


def spherical_mean(g: HTypeGroup, f: ScalarField, spec: MeasureSpec, p, rules: MeanRules = MeanRules()) -> complex:
    """f * (spec measure) at p, i.e. the average of f(p h^{-1}) over the measure."""
    z, t = _as_point(g, p)
    if isinstance(spec, VSphere):
        return complex(_bisphere_at(g, f, z, t, spec.r, np.zeros((1, g.m)), np.ones(1), rules.v_level))
    if isinstance(spec, BiSphere):
        nodes, weights = _center_nodes(g.m, rules.z_level)
        return complex(_bisphere_at(g, f, z, t, spec.r, spec.s * nodes, weights, rules.v_level))
    if isinstance(spec, Homogeneous):
        return complex(_homogeneous(g, f, z, t, spec.s, rules, invert=True))
    raise TypeError(f"unknown measure {spec!r}")


def _homogeneous(g, f, z, t, s, rules, invert):
    rho, tau, w = homogeneous_shells(g.n, g.m, rules.radial_points)
    if g.m >= 2:
        nodes, weights = _center_nodes(g.m, rules.z_level)
    total = 0.0 + 0.0j
    for ri, ti, wi in zip(rho, tau, w):
        if g.m >= 2:
            tn = (s * s * ti) * nodes
            tw = weights
        else:
            tn = np.array([[s * s * ti]])
            tw = np.ones(1)
        total += wi * _bisphere_at(g, f, z, t, s * ri, tn, tw, rules.v_level, invert=invert)
    return total


def homogeneous_average(g: HTypeGroup, f: ScalarField, s: float, rules: MeanRules = MeanRules()) -> complex:
    """sigma_s(f): the normalised average of f over the Koranyi sphere of radius s."""
    z0, t0 = np.zeros(2 * g.n), np.zeros(g.m)
    return complex(_homogeneous(g, f, z0, t0, s, rules, invert=False))


def eigenvalue(g: HTypeGroup, k: int, spec: MeasureSpec, lam: float, radial_points: int = 64, literal_radius: bool = False) -> float:
    """Scalar e(lam) with e_k^a * (spec measure) = e(|a|) e_k^a.

    literal_radius=True evaluates the Laguerre factor of the homogeneous
    integral at r instead of s*r, for comparison only.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")
    c = float(special.eigen_coeff(k, g.n))
    if isinstance(spec, VSphere):
        return c * float(special.phi(k, g.n, lam, spec.r))
    if isinstance(spec, BiSphere):
        return c * float(special.sphere_fourier_factor(g.m, spec.s * lam)) * float(special.phi(k, g.n, lam, spec.r))
    if isinstance(spec, Homogeneous):
        s = spec.s
        rho, tau, w = homogeneous_shells(g.n, g.m, radial_points)
        radius = rho if literal_radius else s * rho
        lag = special.phi(k, g.n, lam, radius)
        cent = special.sphere_fourier_factor(g.m, s * s * tau * lam)
        return c * float(np.sum(w * lag * cent))
    raise TypeError(f"unknown measure {spec!r}")


def polar_constant(n: int, m: int) -> float:
    """Total mass kappa of the polar-decomposition measure on the unit Koranyi sphere.

    int_G f = kappa int_0^inf sigma_R(f) R^{Q-1} dR with sigma normalised.
    """
    if m >= 2:
        beta = math.gamma(0.5 * n) * math.gamma(0.5 * m) / math.gamma(0.5 * (n + m))
        return sphere_area(2 * n) * sphere_area(m) * 0.5 * beta
    # int_{-pi/2}^{pi/2} cos^{n-1} = sqrt(pi) Gamma(n/2) / Gamma((n+1)/2)
    return sphere_area(2 * n) * math.sqrt(math.pi) * math.gamma(0.5 * n) / math.gamma(0.5 * (n + 1))


def calibrate_polar_constant(
    g: HTypeGroup,
    f: ScalarField,
    total: float | None = None,
    rules: MeanRules = MeanRules(v_level=12, z_level=12, radial_points=48),
    radial_max: float = 6.0,
    radial_nodes: int = 48,
) -> float:
    """kappa = int_G f / int_0^inf sigma_R(f) R^{Q-1} dR, the latter by Gauss-Legendre on [0, radial_max]."""
    if total is None:
        total = f.meta["integral"]
    rule = make_interval(0.0, radial_max, radial_nodes)
    acc = 0.0
    for R, w in zip(rule.nodes, rule.weights):
        acc += w * homogeneous_average(g, f, float(R), rules).real * R ** (g.Q - 1)
    return float(total / acc)
