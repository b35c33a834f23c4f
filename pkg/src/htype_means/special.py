"""Bessel, Laguerre and Poisson-kernel special functions.

Everything here is vectorised over the real argument and accurate to
roughly 1e-12 absolute on the ranges the rest of the package uses
(Bessel orders m/2 - 1 and m/2 for small m, arguments up to a few hundred).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .quadrature import QuadratureError, integrate_halfline, make_halfline

__all__ = [
    "bessel_j",
    "normalized_bessel",
    "sphere_fourier_factor",
    "laguerre",
    "laguerre_series",
    "laguerre_coefficients",
    "phi",
    "poisson_constant",
    "poisson_I",
    "PoissonDerivative",
    "psi_derivative",
    "poisson_derivative",
    "find_zero",
    "bessel_zeros",
    "laguerre_zeros",
    "eigen_coeff",
    "QuadratureError",
]

SERIES_CUTOFF = 4.0
HANKEL_CUTOFF = 25.0
_TRAPEZOID_POINTS = 320


def _is_half_integer(order: float) -> bool:
    return abs(2.0 * order - round(2.0 * order)) < 1e-14 and int(round(2.0 * order)) % 2 == 1


def _is_integer(order: float) -> bool:
    return abs(order - round(order)) < 1e-14


# -- Bessel J ---------------------------------------------------------------


def _series_normalized(order: float, x: np.ndarray) -> np.ndarray:
    """J_order(x) / x^order from the power series (used for small x)."""
    q = -0.25 * x * x
    term = np.full_like(x, 1.0 / (2.0**order * math.gamma(order + 1.0)))
    total = term.copy()
    for k in range(1, 200):
        term = term * q / (k * (k + order))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _hankel(order: float, x: np.ndarray) -> np.ndarray:
    """Hankel asymptotic expansion, accurate for x >= HANKEL_CUTOFF."""
    mu = 4.0 * order * order
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    live = np.ones(x.shape, dtype=bool)
    prev = np.full_like(x, np.inf)
    for k in range(1, 80):
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = np.abs(term)
        # asymptotic series: each lane stops at its smallest term
        live &= mag < prev
        if not np.any(live):
            break
        t = np.where(live, term, 0.0)
        if k % 2:
            q = q + (-1.0) ** ((k - 1) // 2) * t
        else:
            p = p + (-1.0) ** (k // 2) * t
        prev = mag
        live &= mag > 1e-18
    chi = x - (0.5 * order + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def _trapezoid_integer(order: int, x: np.ndarray) -> np.ndarray:
    """Bessel's integral J_n(x) = (1/pi) int_0^pi cos(n s - x sin s) ds.

    The integrand is periodic and analytic, so the trapezoid rule converges
    geometrically once the point count exceeds x by a margin.
    """
    npts = _TRAPEZOID_POINTS
    s = (np.arange(npts) + 0.5) * (2.0 * math.pi / npts)
    out = np.empty_like(x)
    flat_x = x.ravel()
    flat = out.ravel()
    chunk = 4096
    for lo in range(0, flat_x.size, chunk):
        xs = flat_x[lo : lo + chunk, None]
        flat[lo : lo + chunk] = np.cos(order * s[None, :] - xs * np.sin(s[None, :])).mean(axis=1)
    return flat.reshape(x.shape)


_CHEB_DEGREE = 20


def _schlafli(order: float, x: np.ndarray) -> np.ndarray:
    """J_order(x) for non-integer order from Schlafli's integral (x >= 1).

    (1/pi) int_0^pi cos(order s - x sin s) ds - sin(order pi)/pi int_0^inf exp(-x sinh u - order u) du,
    both pieces by Gauss-Legendre.
    """
    npts = min(int(np.max(x) + abs(order)) + 64, 2048)
    s, w = np.polynomial.legendre.leggauss(npts)
    s = 0.5 * math.pi * (s + 1.0)
    w = 0.5 * w
    first = np.cos(order * s[None, :] - x.ravel()[:, None] * np.sin(s[None, :])) @ w
    top = math.asinh(45.0 / max(float(np.min(x)), 1e-3)) + 1.0
    u, wu = np.polynomial.legendre.leggauss(96)
    u = 0.5 * top * (u + 1.0)
    wu = 0.5 * top * wu
    second = np.exp(-x.ravel()[:, None] * np.sinh(u[None, :]) - order * u[None, :]) @ wu
    return (first - math.sin(order * math.pi) / math.pi * second).reshape(x.shape)


@lru_cache(maxsize=None)
def _mid_table(order: float, lo: float, hi: float) -> tuple[float, np.ndarray]:
    """Piecewise Chebyshev coefficients of J_order on unit panels covering [lo, hi].

    Samples come from Bessel's integral (Schlafli's form for non-integer
    order); J is entire, so degree 20 on a unit panel is at the limit of
    double precision.
    """
    start = math.floor(lo)
    panels = int(math.ceil(hi)) - start
    k = np.arange(_CHEB_DEGREE + 1)
    u = np.cos(math.pi * (k + 0.5) / (_CHEB_DEGREE + 1))
    centres = start + 0.5 + np.arange(panels)
    nodes = centres[:, None] + 0.5 * u[None, :]
    if _is_integer(order):
        samples = _trapezoid_integer(int(round(order)), nodes)
    else:
        samples = _schlafli(order, nodes)
    coeffs = np.stack([np.polynomial.chebyshev.chebfit(u, row, _CHEB_DEGREE) for row in samples])
    coeffs.setflags(write=False)
    return float(start), coeffs


def _table_mid(order: float, x: np.ndarray, lo: float, hi: float) -> np.ndarray:
    start, coeffs = _mid_table(float(order), math.floor(lo), hi)
    idx = np.clip(np.floor(x - start).astype(int), 0, len(coeffs) - 1)
    u = 2.0 * (x - start - idx) - 1.0
    c = coeffs[idx]
    # Clenshaw, vectorised over points
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for j in range(_CHEB_DEGREE, 0, -1):
        b1, b2 = 2.0 * u * b1 - b2 + c[:, j], b1
    return u * b1 - b2 + c[:, 0]


def _spherical_closed(order: float, x: np.ndarray) -> np.ndarray:
    """Half-integer order via the trigonometric closed forms (x > 0)."""
    ell = int(round(order - 0.5))
    s, c = np.sin(x), np.cos(x)
    pref = np.sqrt(2.0 / (math.pi * x))
    if ell == -1:
        return pref * c
    j_prev = c / x  # spherical y-like seed: j_{-1}(x) = cos x / x
    j_cur = s / x
    for l_ in range(0, ell):
        j_prev, j_cur = j_cur, (2 * l_ + 1) / x * j_cur - j_prev
    return np.sqrt(2.0 * x / math.pi) * j_cur


def bessel_j(order: float, x):
    """Bessel function of the first kind J_order(x) for x >= 0.

    Half-integer orders use closed trigonometric forms.  Other orders use the
    power series near the origin, a tabulated Chebyshev fit of Bessel's
    integral in the middle range and the Hankel expansion for large x.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise ValueError("bessel_j requires x >= 0")
    scalar = arr.ndim == 0
    xs = np.atleast_1d(arr).astype(float)
    out = np.empty_like(xs)

    half = _is_half_integer(order)
    if half:
        small_cut = max(1.5 + abs(order), 2.0)
    else:
        small_cut = max(SERIES_CUTOFF, float(order))
    small = xs <= small_cut
    big_cut = max(HANKEL_CUTOFF, 4.0 * order * order)
    big = xs >= big_cut
    mid = ~small & ~big

    if np.any(small):
        xv = xs[small]
        with np.errstate(divide="ignore"):
            out[small] = _series_normalized(order, xv) * xv**order
    if np.any(big):
        out[big] = _spherical_closed(order, xs[big]) if half else _hankel(order, xs[big])
    if np.any(mid):
        xv = xs[mid]
        if half:
            out[mid] = _spherical_closed(order, xv)
        else:
            out[mid] = _table_mid(order, xv, small_cut, big_cut)
    return float(out[0]) if scalar else out.reshape(arr.shape)


def normalized_bessel(order: float, x):
    """J_order(x) / x^order, continuous at x = 0 with value 1/(2^order Gamma(order+1))."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise ValueError("normalized_bessel requires x >= 0")
    scalar = arr.ndim == 0
    xs = np.atleast_1d(arr).astype(float)
    out = np.empty_like(xs)
    near = xs <= 1.0
    if np.any(near):
        out[near] = _series_normalized(order, xs[near])
    if np.any(~near):
        xv = xs[~near]
        out[~near] = bessel_j(order, xv) / xv**order
    return float(out[0]) if scalar else out.reshape(arr.shape)


def sphere_fourier_factor(m: int, x):
    """Average of exp(i x <u, e>) over the unit sphere S^{m-1}; equals 1 at x = 0.

    b_m(x) = 2^{(m-2)/2} Gamma(m/2) J_{(m-2)/2}(x) / x^{(m-2)/2}; for m = 1 the
    "sphere" is {-1, 1} and b_1 = cos.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return np.cos(x) if np.ndim(x) else math.cos(x)
    nu = 0.5 * m - 1.0
    return 2.0**nu * math.gamma(nu + 1.0) * normalized_bessel(nu, np.abs(x))


# -- Laguerre ---------------------------------------------------------------


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    c = 134217729.0 * a  # 2^27 + 1
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_scale_add(c1, xh, xl, c2, yh, yl):
    """(c1*x + c2*y) in double-double, c1/c2 plain doubles (arrays allowed)."""
    p1, e1 = _two_prod(c1, xh)
    p2, e2 = _two_prod(c2, yh)
    s, e = _two_sum(p1, p2)
    e = e + e1 + e2 + c1 * xl + c2 * yl
    return _two_sum(s, e)


COMPENSATED_ABOVE = 30


def laguerre(k: int, alpha: float, x):
    """Generalised Laguerre polynomial L_k^alpha(x) by the three-term recurrence.

    Above degree 30 the recurrence runs in double-double arithmetic.
    """
    if k < 0:
        raise ValueError("degree must be nonnegative")
    if k > 60:
        raise ValueError("laguerre supports degrees k <= 60")
    arr = np.asarray(x, dtype=float)
    if k == 0:
        out = np.ones_like(arr)
        return float(out) if arr.ndim == 0 else out
    if k > COMPENSATED_ABOVE:
        prev_h, prev_l = np.ones_like(arr), np.zeros_like(arr)
        cur_h, cur_l = _two_sum(1.0 + alpha, -arr)
        for j in range(1, k):
            a = (2 * j + 1 + alpha) - arr
            b = -(j + alpha)
            nh, nl = _dd_scale_add(a, cur_h, cur_l, b, prev_h, prev_l)
            q = nh / (j + 1)
            # exact-ish division of the double-double by j + 1
            ph, pl = _two_prod(q, np.full_like(arr, float(j + 1)))
            rem = ((nh - ph) - pl + nl) / (j + 1)
            prev_h, prev_l = cur_h, cur_l
            cur_h, cur_l = _two_sum(q, rem)
        out = cur_h + cur_l
    else:
        prev = np.ones_like(arr)
        cur = 1.0 + alpha - arr
        for j in range(1, k):
            prev, cur = cur, ((2 * j + 1 + alpha - arr) * cur - (j + alpha) * prev) / (j + 1)
        out = cur
    return float(out) if np.ndim(out) == 0 else out


@lru_cache(maxsize=None)
def laguerre_coefficients(k: int, alpha: int) -> tuple[Fraction, ...]:
    """Exact coefficients c_j of L_k^alpha(x) = sum_j c_j x^j (integer alpha)."""
    return tuple(
        Fraction((-1) ** j * math.comb(k + alpha, k - j), math.factorial(j)) for j in range(k + 1)
    )


def laguerre_series(k: int, alpha: int, x):
    """L_k^alpha from the explicit finite sum, the independent check on laguerre().

    Summed exactly in rationals (floats convert without loss), so the only
    rounding is the final one.
    """
    arr = np.asarray(x, dtype=float)
    coeffs = laguerre_coefficients(k, alpha)

    def one(v: float) -> float:
        xv = Fraction(v)
        acc = Fraction(0)
        for c in reversed(coeffs):
            acc = acc * xv + c
        return float(acc)

    if arr.ndim == 0:
        return one(float(arr))
    return np.array([one(v) for v in arr.ravel()]).reshape(arr.shape)


def phi(k: int, n: int, lam: float, rho):
    """Scaled Laguerre function L_k^{n-1}(lam rho^2 / 2) exp(-lam rho^2 / 4)."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    r2 = np.asarray(rho, dtype=float) ** 2
    x = 0.5 * lam * r2
    return laguerre(k, n - 1, x) * np.exp(-0.5 * x)


# -- Poisson integral I_m ---------------------------------------------------


def poisson_constant(m: int) -> float:
    """c_m with I_m(tau) = c_m tau (1 + tau^2)^{-(m+1)/2}.

    I_m is the Laplace transform of J_{m/2-1}(l) l^{m/2}; no 2 pi factors.
    """
    return 2.0 ** (0.5 * m) * math.gamma(0.5 * (m + 1)) / math.sqrt(math.pi)


def poisson_I(m: int, tau, mode: str = "closed", points: int = 192):
    """I_m(tau) = int_0^inf J_{m/2-1}(l) l^{1-m/2} exp(-tau l) l^{m-1} dl."""
    if m < 1:
        raise ValueError("m must be positive")
    if mode == "closed":
        t = np.asarray(tau, dtype=float)
        if np.any(t <= 0):
            raise ValueError("tau must be positive")
        out = poisson_constant(m) * t * (1.0 + t * t) ** (-0.5 * (m + 1))
        return float(out) if out.ndim == 0 else out
    if mode != "quadrature":
        raise ValueError(f"unknown mode {mode!r}")
    tau = float(tau)
    if tau <= 0:
        raise ValueError("tau must be positive")
    nu = 0.5 * m - 1.0
    rule = make_halfline(points, 0.0)
    # exp(-tau l) split as exp(-beta l) * exp((beta - tau) l), beta tuned to unit frequency
    beta = math.hypot(tau, 1.0)
    value, _ = integrate_halfline(
        rule,
        lambda lam: normalized_bessel(nu, lam) * lam ** (m - 1) * np.exp((beta - tau) * lam),
        rate=beta,
    )
    return value


EXACT_POLY_ABOVE = 24


@dataclass(frozen=True)
class PoissonDerivative:
    """Psi^{(p)}(b) = R_p(b) (1 + b^2)^{-(m+1)/2 - p} with exact rational R_p."""

    m: int
    p: int
    poly_coeffs: tuple[Fraction, ...] = field(repr=False)

    @property
    def exponent(self) -> Fraction:
        return -Fraction(self.m + 1, 2) - self.p

    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.poly_coeffs) if c != 0]
        return nz[-1] if nz else -1

    def poly(self, b):
        b = np.asarray(b, dtype=float)
        if self.p > EXACT_POLY_ABOVE:
            # float Horner loses digits to cancellation at high order
            flat = [float(self.poly_exact(Fraction(v))) for v in b.ravel()]
            return np.array(flat).reshape(b.shape)
        acc = np.zeros_like(b)
        for c in reversed(self.poly_coeffs):
            acc = acc * b + float(c)
        return acc

    def poly_exact(self, b: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.poly_coeffs):
            acc = acc * b + c
        return acc

    def __call__(self, b):
        b = np.asarray(b, dtype=float)
        out = self.poly(b) * (1.0 + b * b) ** float(self.exponent)
        return float(out) if out.ndim == 0 else out


def _poly_deriv(c: tuple[Fraction, ...]) -> list[Fraction]:
    return [i * c[i] for i in range(1, len(c))]


@lru_cache(maxsize=None)
def psi_derivative(m: int, p: int) -> PoissonDerivative:
    """Rational representation of the p-th derivative of (1 + b^2)^{-(m+1)/2}."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    if p == 0:
        return PoissonDerivative(m, 0, (Fraction(1),))
    prev = psi_derivative(m, p - 1).poly_coeffs
    q = p - 1
    d = _poly_deriv(prev)
    out = [Fraction(0)] * (len(prev) + 1)
    # R_{q+1} = R_q' (1 + b^2) - (m + 1 + 2q) b R_q
    for i, c in enumerate(d):
        out[i] += c
        out[i + 2] += c
    for i, c in enumerate(prev):
        out[i + 1] -= (m + 1 + 2 * q) * c
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return PoissonDerivative(m, p, tuple(out))


def poisson_derivative(m: int, p: int, b):
    """p-th derivative of I_m at b > 0 (or b = 0 for p >= 1), via b Psi + p Psi'.

    I_m(b) = c_m b Psi(b), so I_m^{(p)} = c_m (b Psi^{(p)} + p Psi^{(p-1)}).
    """
    if p < 0:
        raise ValueError("p must be nonnegative")
    if p > 80:
        raise ValueError("poisson_derivative supports p <= 80")
    b = np.asarray(b, dtype=float)
    val = b * psi_derivative(m, p)(b)
    if p > 0:
        val = val + p * psi_derivative(m, p - 1)(b)
    out = poisson_constant(m) * val
    return float(out) if np.ndim(out) == 0 else out


# -- zeros ------------------------------------------------------------------


def _bisect(f, lo: float, hi: float) -> float:
    """Bisect a sign change down to adjacent floats."""
    flo = f(lo)
    for _ in range(2100):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=None)
def bessel_zeros(order: float, count: int) -> tuple[float, ...]:
    """First `count` positive zeros of J_order by sign-change scan plus bisection."""
    if count < 1:
        raise ValueError("count must be positive")
    f = lambda s: bessel_j(order, s)  # noqa: E731
    zeros: list[float] = []
    step = 0.25
    lo = 1e-3
    flo = f(lo)
    while len(zeros) < count:
        hi = lo + step
        fhi = f(hi)
        if flo == 0.0:
            zeros.append(lo)
        elif flo * fhi < 0:
            zeros.append(_bisect(f, lo, hi))
        lo, flo = hi, fhi
    return tuple(zeros[:count])


@lru_cache(maxsize=None)
def laguerre_zeros(k: int, alpha: float) -> tuple[float, ...]:
    """All k positive zeros of L_k^alpha, ascending."""
    if k < 1:
        raise ValueError("L_0 has no positive zero")
    # Golub-Welsch eigenvalues as brackets, polished by bisection
    j = np.arange(k)
    diag = 2 * j + 1 + alpha
    off = np.sqrt((j[1:]) * (j[1:] + alpha))
    guess = np.linalg.eigvalsh(np.diag(diag) + np.diag(off, 1) + np.diag(off, -1))
    f = lambda s: laguerre(k, alpha, s)  # noqa: E731
    gaps = np.diff(np.concatenate([[0.0], guess, [guess[-1] * 2 + 10]]))
    out = []
    for i, g in enumerate(guess):
        delta = 0.25 * min(gaps[i], gaps[i + 1])
        lo, hi = g - delta, g + delta
        if f(lo) * f(hi) > 0:
            raise ArithmeticError(f"failed to bracket Laguerre zero near {g}")
        out.append(_bisect(f, lo, hi))
    return tuple(out)


def find_zero(family: str, index: int, *, alpha: float = 0.0, k: int | None = None) -> float:
    """index-th positive zero of J_alpha (family 'bessel') or L_k^alpha ('laguerre')."""
    if index < 1 or index > 50:
        raise ValueError("index must lie in 1..50")
    if family == "bessel":
        return bessel_zeros(float(alpha), index)[index - 1]
    if family == "laguerre":
        if k is None or k < 1:
            raise ValueError("laguerre zeros need k >= 1")
        if index > k:
            raise ValueError(f"L_{k} has only {k} zeros")
        return laguerre_zeros(k, float(alpha))[index - 1]
    raise ValueError(f"unknown family {family!r}")


def eigen_coeff(k: int, n: int) -> Fraction:
    """k! (n-1)! / (k+n-1)!, the mean-value factor of the Laguerre functions."""
    return Fraction(math.factorial(k) * math.factorial(n - 1), math.factorial(k + n - 1))
