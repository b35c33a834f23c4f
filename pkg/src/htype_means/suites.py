"""Named verification suites; each returns a VerificationReport.

Suites read (n, m), quadrature sizes, tolerances and a seed from a RunConfig.
Only the suites that need the group itself build it, so kernel-only suites
also run for pairs (n, m) that carry no H-type structure.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels, lab, special
from .group import build_htype, clifford_dimension, verify_structure
from .means import BiSphere, Homogeneous, MeanRules, VSphere, calibrate_polar_constant, eigenvalue, polar_constant, spherical_mean
from .report import VerificationReport
from .transforms import e_field, eigen_residual, gaussian_field, moment_field

SUITE_NAMES = ("structure", "special", "cancellation", "eigen", "kernels", "abel", "counterexample", "lp-threshold")

DEFAULT_TOLERANCES = {
    "skew": 1e-12,
    "orthogonal": 1e-12,
    "anticommute": 1e-12,
    "jmap_square": 1e-12,
    "poisson_closed_vs_quadrature": 1e-8,
    "bessel_half_zero": 1e-12,
    "bessel_j0_zero": 1e-9,
    "laguerre_series": 1e-12,
    "laguerre_generating": 1e-8,
    "poisson_derivative_fd": 1e-6,
    "cancellation": 1e-8,
    "annulus_cancellation": 1e-6,
    "eigen_vsphere": 1e-6,
    "eigen_bisphere": 1e-6,
    "eigen_homogeneous": 1e-5,
    "sublaplacian_order": 1.8,
    "polar_constant": 1e-4,
    "series_vs_closed": 1e-6,
    "series_vs_direct": 1e-6,
    "closed_vs_direct": 1e-6,
    "homogeneity": 1e-10,
    "radiality": 1e-10,
    "abel_partial_sum": 1e-6,
    "riesz_direct": 1e-6,
    "riesz_tail": 1e-6,
    "annihilation": 1e-8,
    "perturbed_floor": 1e-3,
    "product_formula": 1e-6,
    "lp_exponent": 0.05,
}


@dataclass
class QuadConfig:
    sphere_level: int = 10
    halfline_points: int = 256
    interval_points: int = 32


@dataclass
class RunConfig:
    n: int = 1
    m: int = 1
    quad: QuadConfig = field(default_factory=QuadConfig)
    tolerances: dict = field(default_factory=dict)
    suites: list = field(default_factory=lambda: list(SUITE_NAMES))
    output_dir: str = "."
    seed: int = 0

    def tol(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))

    def rules(self) -> MeanRules:
        q = self.quad
        return MeanRules(q.sphere_level, q.sphere_level, q.interval_points)

    def echo(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "quad": {
                "sphere_level": self.quad.sphere_level,
                "halfline_points": self.quad.halfline_points,
                "interval_points": self.quad.interval_points,
            },
            "tolerances": dict(sorted(self.tolerances.items())),
            "suites": list(self.suites),
            "seed": self.seed,
        }


def _rng(cfg: RunConfig, salt: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, salt])


def _kernel_m(cfg: RunConfig) -> list[int]:
    # kernel identities need m >= 2; m = 1 falls back to the two smallest centres
    return [cfg.m] if cfg.m >= 2 else [2, 3]


# -- suites ---------------------------------------------------------------------


def suite_structure(cfg: RunConfig) -> VerificationReport:
    g = build_htype(cfg.n, cfg.m)
    rep = verify_structure(g, tol=max(cfg.tol(k) for k in ("skew", "orthogonal", "anticommute", "jmap_square")), seed=cfg.seed)
    for chk in rep.checks:
        if chk.name in DEFAULT_TOLERANCES:
            chk.tol = cfg.tol(chk.name)
    rep.add_bool("clifford_divides", (2 * cfg.n) % clifford_dimension(cfg.m) == 0)
    return rep


def suite_special(cfg: RunConfig) -> VerificationReport:
    rep = VerificationReport("special")
    worst = 0.0
    for m in (2, 3, 4):
        for tau in (0.5, 1.0, 2.0):
            c = special.poisson_I(m, tau)
            q = special.poisson_I(m, tau, mode="quadrature", points=min(cfg.quad.halfline_points, 512))
            worst = max(worst, abs(c - q) / abs(c))
    rep.add("poisson_closed_vs_quadrature", worst, cfg.tol("poisson_closed_vs_quadrature"), metric="rel", rel_err=worst)
    rep.add("bessel_half_zero", abs(special.bessel_j(0.5, math.pi)), cfg.tol("bessel_half_zero"))
    rep.add("bessel_j0_zero", abs(special.bessel_j(0.0, special.find_zero("bessel", 1, alpha=0.0))), cfg.tol("bessel_j0_zero"))
    worst = 0.0
    xs = np.linspace(0.0, 20.0, 41)
    for k in range(7):
        for alpha in range(6):
            a = special.laguerre(k, alpha, xs)
            b = special.laguerre_series(k, alpha, xs)
            worst = max(worst, float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300))))
    rep.add("laguerre_series", worst, cfg.tol("laguerre_series"), rel_err=worst, metric="rel")
    worst = max(kernels.laguerre_generating_error(alpha, x, 0.5, 60) for alpha in range(4) for x in (0.0, 1.0, 5.0, 10.0))
    rep.add("laguerre_generating", worst, cfg.tol("laguerre_generating"), rel_err=worst, metric="rel")
    worst = 0.0
    h = 1e-3
    for m in (2, 3, 4):
        for p in range(1, 6):
            # sample points kept away from zeros of I_m^{(p)}
            for b in (0.37, 0.91, 1.73, 2.9):
                f = lambda x: special.poisson_derivative(m, p - 1, x)  # noqa: E731
                fd = (f(b - 2 * h) - 8 * f(b - h) + 8 * f(b + h) - f(b + 2 * h)) / (12 * h)
                ex = special.poisson_derivative(m, p, b)
                worst = max(worst, abs(fd - ex) / abs(ex))
    rep.add("poisson_derivative_fd", worst, cfg.tol("poisson_derivative_fd"), rel_err=worst, metric="rel")
    return rep


def suite_cancellation(cfg: RunConfig) -> VerificationReport:
    rep = VerificationReport("cancellation")
    for m in _kernel_m(cfg):
        worst = max(kernels.cancellation_integral(cfg.n, j, m) for j in range(3))
        rep.add(f"cancellation[n={cfg.n},m={m}]", worst, cfg.tol("cancellation"))
        rep.add_bool(f"boundary_degree[n={cfg.n},m={m}]", all(kernels.boundary_degree_ok(cfg.n, j, m) for j in range(3)))
        worst = max(kernels.annulus_cancellation(k, cfg.n, m, radial_points=max(cfg.quad.interval_points, 64)) for k in range(3))
        rep.add(f"annulus_cancellation[n={cfg.n},m={m}]", worst, cfg.tol("annulus_cancellation"))
    return rep


def _random_point(g, rng, zr=1.0, tr=1.0):
    return g.point(rng.uniform(-zr, zr, 2 * g.n), rng.uniform(-tr, tr, g.m))


def _random_direction(rng, m, length):
    a = rng.standard_normal(m)
    return a * (length / np.linalg.norm(a))


def eigen_worst(g, spec, rules, rng, ks, lams, npoints) -> float:
    """max relative eigenrelation defect, tolerance form |defect| / (|e(p)| + 1e-3)."""
    worst = 0.0
    for k in ks:
        for lam in lams:
            f = e_field(g, k, _random_direction(rng, g.m, lam))
            e = eigenvalue(g, k, spec, lam)
            for _ in range(npoints):
                p = _random_point(g, rng)
                val = f.at(p)
                got = spherical_mean(g, f, spec, p, rules)
                worst = max(worst, abs(got - e * val) / (abs(val) + 1e-3))
    return worst


def sublaplacian_order(g, k, a, p) -> float:
    errs = [eigen_residual(g, k, a, p, h) for h in (4e-2, 2e-2, 1e-2)]
    return min(math.log2(errs[0] / errs[1]), math.log2(errs[1] / errs[2]))


def polar_check(g, radial_points: int = 32) -> tuple[float, float]:
    """kappa from a Gaussian, then the relative error it gives on the moment field's integral."""
    kappa = calibrate_polar_constant(g, gaussian_field(g), rules=MeanRules(1, 1, radial_points))
    f = moment_field(g)
    # degree-2 angular dependence: level 2 product rules are exact
    mass = 1.0 / calibrate_polar_constant(g, f, total=1.0, rules=MeanRules(2, 2, radial_points))
    return kappa, abs(kappa * mass - f.meta["integral"]) / f.meta["integral"]


def suite_eigen(cfg: RunConfig) -> VerificationReport:
    g = build_htype(cfg.n, cfg.m)
    rules = cfg.rules()
    rng = _rng(cfg, 4)
    rep = VerificationReport("eigen")
    lams = (0.7, 1.3)
    w = eigen_worst(g, VSphere(0.9), rules, rng, range(4), lams, 10)
    rep.add("eigen_vsphere", w, cfg.tol("eigen_vsphere"), rel_err=w, metric="rel")
    npts = 10 if g.n + g.m <= 4 else 3
    w = eigen_worst(g, BiSphere(0.9, 1.1), rules, rng, range(4), lams, npts)
    rep.add("eigen_bisphere", w, cfg.tol("eigen_bisphere"), rel_err=w, metric="rel")
    hrules = MeanRules(min(rules.v_level, 8), min(rules.z_level, 8), 12)
    w = eigen_worst(g, Homogeneous(1.1), hrules, rng, range(3), lams, 1)
    rep.add("eigen_homogeneous", w, cfg.tol("eigen_homogeneous"), rel_err=w, metric="rel")
    order = min(sublaplacian_order(g, k, _random_direction(rng, g.m, 1.3), _random_point(g, rng)) for k in range(3))
    rep.add("sublaplacian_order", order, cfg.tol("sublaplacian_order"), metric="min")
    kappa, rel = polar_check(g, max(cfg.quad.interval_points, 32))
    rep.add("polar_constant", rel, cfg.tol("polar_constant"), rel_err=rel, metric="rel")
    rep.add("polar_constant_closed_form", abs(kappa / polar_constant(g.n, g.m) - 1.0), cfg.tol("polar_constant"))
    return rep


def kernel_points(n: int, m: int, rng, count: int = 20):
    pts = []
    for _ in range(count):
        z = _random_direction(rng, 2 * n, rng.uniform(0.8, 1.5))
        t = _random_direction(rng, m, rng.uniform(0.5, 1.5))
        pts.append((z, t))
    return pts


def kernel_triple(k: int, n: int, m: int, pts, points: int = 256) -> tuple[float, float, float, float]:
    """Worst pairwise relative gaps series/closed/direct and the fitted-vs-analytic constant gap."""
    c = kernels.fit_closed_form_constant(k, n, m, *pts[0], points=points)
    sc = sd = cd = 0.0
    for z, t in pts:
        a = kernels.ak_series(k, n, m, z, t)
        b = kernels.ak_closed_form(k, n, m, z, t, constant=c, points=points)
        d = kernels.ak_direct(k, n, m, z, t, points=points)
        scale = abs(a)
        sc, sd, cd = max(sc, abs(a - b) / scale), max(sd, abs(a - d) / scale), max(cd, abs(b - d) / scale)
    return sc, sd, cd, abs(c / kernels.closed_form_constant(k, n, m) - 1.0)


def homogeneity_worst(n: int, m: int, rng, count: int = 50) -> tuple[float, float]:
    variants = [
        lambda z, t: kernels.ak_series(2, n, m, z, t),
        lambda z, t: kernels.ak_closed_form(1, n, m, z, t, points=128),
        lambda z, t: kernels.abel_kernel(0.3, n, m, z, t),
        lambda z, t: kernels.riesz_abel_kernel(0.3, n, m, z, t, 0),
    ]
    hom = rad = 0.0
    for i in range(count):
        z = rng.standard_normal(2 * n)
        t = rng.standard_normal(m)
        q, _ = np.linalg.qr(rng.standard_normal((m, m)))
        for idx, f in enumerate(variants[:3] if i % 5 else variants):
            v = f(z, t)
            for s in (0.5, 2.0):
                hom = max(hom, abs(f(s * z, s * s * t) * s ** (2 * n + 2 * m) - v) / abs(v))
            if idx < 3:
                # the Riesz kernel carries t_j and is not radial in t
                rad = max(rad, abs(f(z, q @ t) - v) / abs(v))
    return hom, rad


def suite_kernels(cfg: RunConfig) -> VerificationReport:
    rep = VerificationReport("kernels")
    rng = _rng(cfg, 6)
    for m in _kernel_m(cfg):
        pts = kernel_points(cfg.n, m, rng)
        for k in range(4):
            sc, sd, cd, const = kernel_triple(k, cfg.n, m, pts, cfg.quad.halfline_points)
            tag = f"[k={k},m={m}]"
            rep.add("series_vs_closed" + tag, sc, cfg.tol("series_vs_closed"), rel_err=sc, metric="rel")
            rep.add("series_vs_direct" + tag, sd, cfg.tol("series_vs_direct"), rel_err=sd, metric="rel")
            rep.add("closed_vs_direct" + tag, cd, cfg.tol("closed_vs_direct"), rel_err=cd, metric="rel")
            rep.add("fitted_constant" + tag, const, cfg.tol("series_vs_closed"), rel_err=const, metric="rel")
        hom, rad = homogeneity_worst(cfg.n, m, rng, 20)
        rep.add(f"homogeneity[m={m}]", hom, cfg.tol("homogeneity"), rel_err=hom, metric="rel")
        rep.add(f"radiality[m={m}]", rad, cfg.tol("radiality"), rel_err=rad, metric="rel")
    return rep


def abel_partial_error(n: int, m: int, r: float = 0.3, K: int = 40) -> float:
    z = np.zeros(2 * n)
    z[0] = 1.0
    t = np.zeros(m)
    t[0] = 1.0
    partial = math.fsum(r**k * kernels.ak_series(k, n, m, z, t) for k in range(K + 1))
    closed = kernels.abel_kernel(r, n, m, z, t)
    return abs(partial - closed) / abs(closed)


def riesz_worst(n: int, m: int, rng, r: float = 0.2, count: int = 5) -> float:
    worst = 0.0
    for _ in range(count):
        z = _random_direction(rng, 2 * n, rng.uniform(0.8, 1.5))
        t = _random_direction(rng, m, 1.0)
        for j in range(m):
            a = kernels.riesz_abel_kernel(r, n, m, z, t, j)
            b = kernels.riesz_abel_direct(r, n, m, z, t, j)
            worst = max(worst, abs(a - b) / max(abs(a), 1e-300))
    return worst


def suite_abel(cfg: RunConfig) -> VerificationReport:
    rep = VerificationReport("abel")
    rng = _rng(cfg, 7)
    for m in _kernel_m(cfg):
        e = abel_partial_error(cfg.n, m)
        rep.add(f"abel_partial_sum[m={m}]", e, cfg.tol("abel_partial_sum"), rel_err=e, metric="rel")
        e = riesz_worst(cfg.n, m, rng)
        rep.add(f"riesz_direct[m={m}]", e, cfg.tol("riesz_direct"), rel_err=e, metric="rel")
        share = kernels.riesz_integrability(cfg.n, m)["tail_share"]
        rep.add(f"riesz_tail[m={m}]", share, cfg.tol("riesz_tail"))
    e = max(kernels.laguerre_generating_error(cfg.n - 1, x, 0.3, 60) for x in (0.5, 2.0, 6.0))
    rep.add("laguerre_generating", e, cfg.tol("laguerre_generating"), rel_err=e, metric="rel")
    return rep


def suite_counterexample(cfg: RunConfig) -> VerificationReport:
    g = build_htype(cfg.n, cfg.m)
    rng = _rng(cfg, 8)
    rules = cfg.rules()
    rep = VerificationReport("counterexample")
    pts = [_random_point(g, rng, 1.5, 2.0) for _ in range(10)]
    specs = [(VSphere(1.0), 1, "bessel"), (VSphere(0.8), 2, "bessel"), (BiSphere(0.9, 1.2), 1, "bessel"), (BiSphere(0.9, 1.2), 2, "laguerre")]
    worst = 0.0
    for spec, k, choice in specs:
        c = lab.make_counterexample(g, spec, k, choice)
        worst = max(worst, lab.annihilation_residual(g, c, pts, rules), abs(c.predicted_eigenvalue))
    rep.add("annihilation", worst, cfg.tol("annihilation"))
    c = lab.make_counterexample(g, VSphere(1.0), 1)
    bent = lab.Counterexample(lab.biradial_character(g, 1, 1.1 * c.lam), c.spec, 1, 1.1 * c.lam, 0.0)
    res = lab.annihilation_residual(g, bent, pts[:3] + [g.identity()], rules)
    rep.add_bool("perturbed_detectable", res > cfg.tol("perturbed_floor"))
    phi = lab.biradial_character(g, 1, 1.3)
    worst = 0.0
    for _ in range(10):
        q, p = _random_point(g, rng), _random_point(g, rng)
        lhs = lab.biradial_average(g, phi.translated(g, q), p, rules)
        rhs = phi.at(q) * phi.at(p)
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-12))
    rep.add("product_formula", worst, cfg.tol("product_formula"), rel_err=worst, metric="rel")
    return rep


def lp_scan(g, ps=tuple(np.arange(2.0, 5.01, 0.5)), annuli: int = 10) -> list[tuple[float, float, str, float]]:
    """(p, fitted exponent, verdict, predicted exponent) along the scan."""
    c = lab.make_counterexample(g, VSphere(1.0), 1)
    out = []
    for p in ps:
        e, v = lab.lp_decay_probe(c, float(p), annuli)
        out.append((float(p), e, v, g.m - 1 - p * (g.m - 1) / 2))
    return out


def flips_at_threshold(scan, threshold: float) -> bool:
    """Diverges strictly below the threshold, converges strictly above, one sign change."""
    calls = [(p, v) for p, _, v, _ in scan if v != "inconclusive"]
    below = all(v == "diverges" for p, v in calls if p < threshold)
    above = all(v == "converges" for p, v in calls if p > threshold)
    changes = sum(1 for (_, a), (_, b) in zip(calls, calls[1:]) if a != b)
    return below and above and changes == (1 if any(p > threshold for p, _ in calls) else 0)


def exponent_error(e: float, pred: float) -> float:
    # relative error, absolute when the prediction is zero
    return abs(e - pred) / abs(pred) if pred != 0 else abs(e - pred)


def suite_lp(cfg: RunConfig) -> VerificationReport:
    g = build_htype(cfg.n, cfg.m)
    rep = VerificationReport("lp-threshold")
    scan = lp_scan(g)
    rep.add_bool("verdict_flip", flips_at_threshold(scan, lab.lp_threshold(g.m)))
    if g.m >= 2:
        worst = max(exponent_error(e, pred) for _, e, _, pred in scan)
        rep.add("lp_exponent", worst, cfg.tol("lp_exponent"), rel_err=worst, metric="rel")
    return rep


SUITES = {
    "structure": suite_structure,
    "special": suite_special,
    "cancellation": suite_cancellation,
    "eigen": suite_eigen,
    "kernels": suite_kernels,
    "abel": suite_abel,
    "counterexample": suite_counterexample,
    "lp-threshold": suite_lp,
}


def run_suite(name: str, cfg: RunConfig) -> VerificationReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    start = time.perf_counter()
    rep = SUITES[name](cfg)
    rep.suite = name
    rep.config_echo = {"n": cfg.n, "m": cfg.m}
    rep.wall_time = time.perf_counter() - start
    return rep
