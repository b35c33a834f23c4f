"""Fields that a single spherical mean annihilates, and the L^p threshold they sit on.

A field F with F * mu = 0 and F != 0 shows that the mean does not determine
F.  The fields here are bi-radial characters phi_k^lam(|z|) b_m(lam |t|),
tuned so that the mean's eigenvalue vanishes; their size in |t| decays like
|t|^{-(m-1)/2}, which is in L^p exactly when p > 2m/(m-1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import special
from .group import GroupPoint, HTypeGroup
from .means import BiSphere, Homogeneous, MeanRules, VSphere, eigenvalue, spherical_mean
from .quadrature import integrate_halfline, make_halfline, make_interval, make_sphere, sphere_area
from .transforms import ScalarField

__all__ = [
    "Counterexample",
    "biradial_character",
    "make_counterexample",
    "annihilation_residual",
    "biradial_average",
    "lp_decay_probe",
    "lp_threshold",
    "bessel_quotient_condition",
    "homogeneous_zero_scan",
]

INCONCLUSIVE_BAND = 0.03


@dataclass(frozen=True, eq=False)
class Counterexample:
    field: ScalarField
    spec: VSphere | BiSphere
    k: int
    lam: float
    predicted_eigenvalue: float
    meta: dict = field(default_factory=dict)


def biradial_character(g: HTypeGroup, k: int, lam: float) -> ScalarField:
    """Phi_k^lam(z, t) = phi_k^lam(|z|) b_m(lam |t|) / C(k+n-1, k), so Phi(0, 0) = 1 = sup |Phi|.

    Equal to the average of e_k^a over the sphere |a| = lam.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")
    n, m = g.n, g.m
    norm = 1.0 / math.comb(k + n - 1, k)

    def func(z, t):
        rz = np.sqrt(np.sum(z * z, axis=-1))
        rt = np.sqrt(np.sum(t * t, axis=-1))
        return (norm * special.phi(k, n, lam, rz) * special.sphere_fourier_factor(m, lam * rt)).astype(complex)

    return ScalarField(func, ("biradial", k, lam), ("bessel", (m - 1) / 2), {"sup": 1.0, "n": n, "m": m})


def make_counterexample(g: HTypeGroup, spec: VSphere | BiSphere, k: int, choice: str = "bessel") -> Counterexample:
    """Build a nonzero field annihilated by the given mean.

    VSphere(r): lam = 2x / r^2 with x the first zero of L_k^{n-1}; needs k >= 1.
    BiSphere(r, s): choice 'bessel' puts lam s on the first zero of J_{m/2-1},
    choice 'laguerre' uses the VSphere value of lam.
    """
    n, m = g.n, g.m
    if isinstance(spec, VSphere):
        if k < 1:
            raise ValueError("VSphere counterexamples need k >= 1")
        lam = 2.0 * special.find_zero("laguerre", 1, alpha=n - 1, k=k) / spec.r**2
    elif isinstance(spec, BiSphere):
        if choice == "bessel":
            lam = special.find_zero("bessel", 1, alpha=0.5 * m - 1.0) / spec.s
        elif choice == "laguerre":
            if k < 1:
                raise ValueError("the Laguerre choice needs k >= 1")
            lam = 2.0 * special.find_zero("laguerre", 1, alpha=n - 1, k=k) / spec.r**2
        else:
            raise ValueError(f"unknown choice {choice!r}")
    else:
        raise TypeError("counterexamples exist for VSphere and BiSphere means")
    f = biradial_character(g, k, lam)
    return Counterexample(f, spec, k, lam, eigenvalue(g, k, spec, lam), {"choice": choice})


def annihilation_residual(g: HTypeGroup, c: Counterexample, points, rules: MeanRules = MeanRules(), spec=None) -> float:
    """max_p |F * mu(p)| / sup |F|; `spec` overrides the counterexample's own measure."""
    mu = c.spec if spec is None else spec
    worst = 0.0
    for p in points:
        worst = max(worst, abs(spherical_mean(g, c.field, mu, p, rules)))
    return worst / c.field.meta.get("sup", 1.0)


def biradial_average(g: HTypeGroup, f: ScalarField, p: GroupPoint, rules: MeanRules = MeanRules()) -> complex:
    """Pi(f)(z, t): the average of f over |z'| = |z|, |t'| = |t| (independent rotations)."""
    rz = float(np.linalg.norm(p.z))
    rt = float(np.linalg.norm(p.t))
    zs = rz * make_sphere(2 * g.n, rules.v_level).nodes
    tsph = make_sphere(g.m, rules.z_level) if g.m >= 2 else make_sphere(1, 1)
    ts = rt * tsph.nodes
    vals = f(zs[:, None, :], ts[None, :, :])
    wz = make_sphere(2 * g.n, rules.v_level).weights
    return complex(wz @ vals @ tsph.weights)


def _annulus_mass(m: int, lam: float, p: float, lo: float, hi: float, panel_nodes: int = 16) -> float:
    """int_{lo < |t| < hi} |b_m(lam |t|)|^p dt by composite Gauss-Legendre in |t|.

    Panels are a quarter period wide so the |cos|^p kinks stay resolvable.
    """
    width = 0.25 * math.pi / lam
    panels = max(1, int(math.ceil((hi - lo) / width)))
    edges = np.linspace(lo, hi, panels + 1)
    x, w = np.polynomial.legendre.leggauss(panel_nodes)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    rho = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    vals = np.abs(special.sphere_fourier_factor(m, lam * rho)) ** p * rho ** (m - 1)
    return float(sphere_area(m) * (wt @ vals))


def _z_factor(k: int, n: int, lam: float, p: float) -> float:
    """int_{C^n} |phi_k^lam(|z|)|^p dz in x = lam |z|^2 / 2.

    |L_k|^p has kinks at the Laguerre zeros, so Gauss-Legendre runs between
    consecutive zeros and Gauss-Laguerre covers the tail past the last one.
    """
    alpha = n - 1
    cuts = [0.0] + (list(special.laguerre_zeros(k, alpha)) if k >= 1 else [])

    def dens(x):
        return np.abs(special.laguerre(k, alpha, x)) ** p * np.exp(-0.5 * p * x) * x**alpha

    value = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        rule = make_interval(lo, hi, 48)
        value += float(rule.weights @ dens(rule.nodes))
    x0 = cuts[-1]
    rule = make_halfline(96, 0.0)
    rate = 0.5 * p
    tail, _ = integrate_halfline(
        rule, lambda y: np.abs(special.laguerre(k, alpha, x0 + y)) ** p * (x0 + y) ** alpha, rate=rate, tail_tol=1e-8
    )
    value += float(tail) * math.exp(-rate * x0)
    # dz = |S^{2n-1}| rho^{2n-1} d rho with rho^2 = 2x / lam
    return 0.5 * sphere_area(2 * n) * (2.0 / lam) ** n * value


def lp_threshold(m: int) -> float:
    return math.inf if m == 1 else 2.0 * m / (m - 1)


def lp_decay_probe(c: Counterexample, p: float, annuli: int = 10) -> tuple[float, str]:
    """(fitted density exponent, verdict) for int |F|^p over dyadic |t|-annuli.

    The masses M_i over 2^i r0 < |t| < 2^{i+1} r0 behave like 2^{i(e + 1)}
    with e the exponent of the radial density |t|^{m-1} |b_m|^p; e is fitted
    by least squares on log2 M_i.  The verdict reads the ratio 2^{e+1}:
    below 1 the series converges, above 1 it diverges, and within
    INCONCLUSIVE_BAND of 1 no call is made.
    """
    if not 1.0 <= p <= 10.0:
        raise ValueError("p must lie in [1, 10]")
    if not 2 <= annuli <= 12:
        raise ValueError("annuli must lie in 2..12")
    n, m = c.field.meta["n"], c.field.meta["m"]
    lam = c.lam
    zf = _z_factor(c.k, n, lam, p)
    # start where the Bessel factor is in its asymptotic regime
    r0 = 2.0 ** math.ceil(math.log2(10.0 / lam))
    masses = np.array([zf * _annulus_mass(m, lam, p, r0 * 2**i, r0 * 2 ** (i + 1)) for i in range(annuli)])
    idx = np.arange(annuli)
    slope = float(np.polyfit(idx, np.log2(masses), 1)[0])
    exponent = slope - 1.0
    ratio = 2.0**slope
    if abs(ratio - 1.0) <= INCONCLUSIVE_BAND:
        verdict = "inconclusive"
    elif ratio < 1.0:
        verdict = "converges"
    else:
        verdict = "diverges"
    return exponent, verdict


def bessel_quotient_condition(order: float, r: float, s: float, N: int) -> bool:
    """True iff r/s stays more than 1e-9 away from every quotient z_i / z_j of the first N zeros of J_order."""
    if not 1 <= N <= 50:
        raise ValueError("N must lie in 1..50")
    if r <= 0 or s <= 0:
        raise ValueError("radii must be positive")
    zeros = np.array(special.bessel_zeros(float(order), N))
    quotients = zeros[:, None] / zeros[None, :]
    return bool(np.all(np.abs(r / s - quotients) > 1e-9))


def homogeneous_zero_scan(g: HTypeGroup, k: int = 0, s: float = 1.0, lam_max: float = 50.0, samples: int = 2000) -> list[float]:
    """Approximate positive zeros of lam -> eigenvalue(k, Homogeneous(s), lam) on (0, lam_max].

    Sign changes on a uniform grid, refined by bisection.
    """
    spec = Homogeneous(s)
    f = lambda lam: eigenvalue(g, k, spec, lam, radial_points=96)  # noqa: E731
    grid = np.linspace(lam_max / samples, lam_max, samples)
    vals = np.array([f(x) for x in grid])
    roots = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        lo, hi = grid[i], grid[i + 1]
        flo = vals[i]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            if fm == 0.0:
                lo = hi = mid
                break
            if (fm < 0) == (flo < 0):
                lo, flo = mid, fm
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    return roots
