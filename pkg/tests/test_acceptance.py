"""Acceptance criteria 1-14, each at its stated tolerance and runtime budget.

Every test records one PASS/FAIL line, printed in the terminal summary.
"""
import math
import time

import numpy as np
import pytest

from htype_means import kernels, lab, special
from htype_means.group import InadmissiblePair, build_htype, verify_structure
from htype_means.means import BiSphere, Homogeneous, MeanRules, VSphere, eigenvalue, spherical_mean
from htype_means.suites import (
    exponent_error,
    flips_at_threshold,
    homogeneity_worst,
    kernel_points,
    kernel_triple,
    lp_scan,
    polar_check,
    riesz_worst,
    abel_partial_error,
    sublaplacian_order,
)
from htype_means.transforms import e_field

from conftest import ACCEPTANCE_LINES

GROUPS = [(1, 1), (2, 2), (2, 3)]
RULES = MeanRules(10, 10, 32)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def record(num: int, ok: bool, budget: float, elapsed: float, detail: str) -> None:
    ok_time = elapsed < budget
    status = "PASS" if ok and ok_time else "FAIL"
    ACCEPTANCE_LINES.append(f"{status} criterion {num}: {detail}; {elapsed:.2f} s (budget {budget:g} s)")
    assert ok, detail
    assert ok_time, f"runtime {elapsed:.2f} s over budget {budget} s"


def _eigen_defect(g, spec, rules, rng, ks, lams, npoints):
    """max |mean - e * value| / |value| over random a, points."""
    worst = 0.0
    for k in ks:
        for lam in lams:
            a = rng.standard_normal(g.m)
            a *= lam / np.linalg.norm(a)
            f = e_field(g, k, a)
            e = eigenvalue(g, k, spec, lam)
            for _ in range(npoints):
                p = g.point(rng.uniform(-1, 1, 2 * g.n), rng.uniform(-1, 1, g.m))
                val = f.at(p)
                worst = max(worst, abs(spherical_mean(g, f, spec, p, rules) - e * val) / max(abs(val), 1e-300))
    return worst


def test_criterion_01_structure():
    with Timer() as tm:
        worst = 0.0
        for n, m in [(1, 1), (2, 2), (2, 3), (4, 4), (4, 5)]:
            rep = verify_structure(build_htype(n, m), tol=1e-12)
            assert rep.passed
            worst = max(worst, max(c.max_abs_err for c in rep.checks))
        rejected = 0
        for n, m in [(1, 2), (1, 3)]:
            try:
                build_htype(n, m)
            except InadmissiblePair:
                rejected += 1
    record(1, worst <= 1e-12 and rejected == 2, 1.0, tm.elapsed, f"max invariant defect {worst:.1e}, rejected {rejected}/2")


def test_criterion_02_poisson_identity():
    with Timer() as tm:
        worst = 0.0
        for m in (2, 3, 4):
            for tau in (0.5, 1.0, 2.0):
                c = special.poisson_I(m, tau)
                q = special.poisson_I(m, tau, mode="quadrature", points=256)
                worst = max(worst, abs(c - q) / abs(c))
    record(2, worst <= 1e-8, 1.0, tm.elapsed, f"max relative gap {worst:.1e} (tol 1e-8)")


def test_criterion_03_cancellation():
    with Timer() as tm:
        worst = max(kernels.cancellation_integral(n, j, m) for n in (1, 2, 3) for j in (0, 1, 2) for m in (2, 3))
    record(3, worst <= 1e-8, 5.0, tm.elapsed, f"max normalised cancellation {worst:.1e} (tol 1e-8)")


def test_criterion_04_vsphere_eigen():
    rng = np.random.default_rng(4)
    with Timer() as tm:
        worst = max(_eigen_defect(build_htype(*p), VSphere(0.9), RULES, rng, range(4), (0.7, 1.6), 10) for p in GROUPS)
    record(4, worst <= 1e-6, 30.0, tm.elapsed, f"max relative defect {worst:.1e} (tol 1e-6)")


def test_criterion_05_bisphere_eigen():
    rng = np.random.default_rng(5)
    with Timer() as tm:
        worst = max(_eigen_defect(build_htype(*p), BiSphere(0.9, 1.1), RULES, rng, range(4), (0.7, 1.6), 10) for p in GROUPS)
    record(5, worst <= 1e-6, 30.0, tm.elapsed, f"max relative defect {worst:.1e} (tol 1e-6)")


def test_criterion_06_homogeneous_eigen():
    rng = np.random.default_rng(6)
    rules = MeanRules(8, 8, 16)
    with Timer() as tm:
        worst = max(_eigen_defect(build_htype(*p), Homogeneous(1.1), rules, rng, range(3), (0.7, 1.6), 2) for p in GROUPS)
    record(6, worst <= 1e-5, 60.0, tm.elapsed, f"max relative defect {worst:.1e} incl. m=1 (tol 1e-5)")


def test_criterion_07_kernel_triple():
    rng = np.random.default_rng(7)
    with Timer() as tm:
        gap = hom = 0.0
        for n, m in [(2, 2), (2, 3)]:
            pts = kernel_points(n, m, rng, 20)
            for k in range(4):
                sc, sd, cd, _ = kernel_triple(k, n, m, pts)
                gap = max(gap, sc, sd, cd)
            hom = max(hom, homogeneity_worst(n, m, rng, 20)[0])
    record(7, gap <= 1e-6 and hom <= 1e-10, 60.0, tm.elapsed, f"pairwise gap {gap:.1e} (tol 1e-6), homogeneity {hom:.1e} (tol 1e-10)")


def test_criterion_08_abel():
    with Timer() as tm:
        partial = max(abel_partial_error(n, m, 0.3, 40) for n, m in [(1, 2), (2, 2), (2, 3)])
        gen = max(kernels.laguerre_generating_error(a, x, 0.3, 60) for a in range(4) for x in (0.0, 0.5, 2.0, 6.0))
    record(8, partial <= 1e-6 and gen <= 1e-8, 30.0, tm.elapsed, f"partial sum gap {partial:.1e} (tol 1e-6), generating function {gen:.1e} (tol 1e-8)")


def test_criterion_09_riesz():
    rng = np.random.default_rng(9)
    with Timer() as tm:
        gap = max(riesz_worst(n, m, rng, 0.2, 5) for n, m in [(2, 2), (2, 3)])
        tail = kernels.riesz_integrability(2, 3, order=0)["tail_share"]
        tail_22 = kernels.riesz_integrability(2, 2, order=0)["tail_share"]
    record(
        9, gap <= 1e-6 and tail < 1e-6, 30.0, tm.elapsed,
        f"closed vs direct {gap:.1e} (tol 1e-6), tail share (2,3) {tail:.1e} (tol 1e-6) [(2,2): {tail_22:.2e}, analytic 1.5e-6]",
    )


def test_criterion_10_sublaplacian_order():
    rng = np.random.default_rng(10)
    with Timer() as tm:
        order = math.inf
        for n, m in GROUPS:
            g = build_htype(n, m)
            for k in range(3):
                a = rng.standard_normal(m)
                p = g.point(rng.uniform(-1, 1, 2 * n), rng.uniform(-1, 1, m))
                order = min(order, sublaplacian_order(g, k, a, p))
    record(10, order >= 1.8, 30.0, tm.elapsed, f"observed order {order:.3f} (min 1.8)")


def test_criterion_11_annihilation():
    rng = np.random.default_rng(11)
    with Timer() as tm:
        worst = 0.0
        perturbed = math.inf
        for n, m in GROUPS:
            g = build_htype(n, m)
            pts = [g.point(rng.uniform(-1.5, 1.5, 2 * n), rng.uniform(-2, 2, m)) for _ in range(5)]
            for spec, k, choice in [(VSphere(1.0), 1, "bessel"), (VSphere(0.8), 2, "bessel"), (BiSphere(0.9, 1.2), 1, "bessel"), (BiSphere(0.9, 1.2), 2, "laguerre")]:
                c = lab.make_counterexample(g, spec, k, choice)
                worst = max(worst, lab.annihilation_residual(g, c, pts, RULES))
            c = lab.make_counterexample(g, VSphere(1.0), 1)
            bent = lab.Counterexample(lab.biradial_character(g, 1, 1.1 * c.lam), c.spec, 1, 1.1 * c.lam, 0.0)
            perturbed = min(perturbed, lab.annihilation_residual(g, bent, pts[:2] + [g.identity()], RULES))
    record(11, worst <= 1e-8 and perturbed > 1e-3, 60.0, tm.elapsed, f"residual {worst:.1e} (tol 1e-8), perturbed {perturbed:.1e} (floor 1e-3)")


def test_criterion_12_lp_threshold():
    with Timer() as tm:
        flips = True
        err = 0.0
        for n, m in [(2, 2), (2, 3)]:
            scan = lp_scan(build_htype(n, m))
            flips &= flips_at_threshold(scan, lab.lp_threshold(m))
            err = max(err, max(exponent_error(e, pred) for _, e, _, pred in scan))
    record(12, flips and err <= 0.05, 60.0, tm.elapsed, f"verdict flips at 2m/(m-1) for m=2,3: {flips}; exponent error {err:.3f} (tol 0.05)")


def test_criterion_13_product_formula():
    rng = np.random.default_rng(13)
    with Timer() as tm:
        worst = 0.0
        for n, m in GROUPS:
            g = build_htype(n, m)
            phi = lab.biradial_character(g, 1, 1.3)
            for _ in range(10):
                q = g.point(rng.uniform(-1, 1, 2 * n), rng.uniform(-1, 1, m))
                p = g.point(rng.uniform(-1, 1, 2 * n), rng.uniform(-1, 1, m))
                lhs = lab.biradial_average(g, phi.translated(g, q), p, RULES)
                rhs = phi.at(q) * phi.at(p)
                worst = max(worst, abs(lhs - rhs) / abs(rhs))
    record(13, worst <= 1e-6, 30.0, tm.elapsed, f"max relative gap {worst:.1e} (tol 1e-6)")


def test_criterion_14_polar_calibration():
    with Timer() as tm:
        worst = max(polar_check(build_htype(*p), 32)[1] for p in GROUPS)
    record(14, worst <= 1e-4, 30.0, tm.elapsed, f"max relative integral error {worst:.1e} (tol 1e-4)")
