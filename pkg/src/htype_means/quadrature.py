"""Deterministic quadrature rules: spheres, intervals, half-lines, Jacobi weights.

Node generation is delegated to scipy's Golub-Welsch based routines; the
sphere rules are hyperspherical products built on top of them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import special as sps

__all__ = [
    "QuadratureRule",
    "QuadratureError",
    "TailTooLarge",
    "make_rule",
    "make_sphere",
    "make_interval",
    "make_halfline",
    "make_jacobi",
    "make_jacobi_ab",
    "integrate",
    "integrate_sphere",
    "integrate_halfline",
    "sphere_area",
    "DEFAULT_SPHERE_LEVEL",
    "DEFAULT_HALFLINE_POINTS",
    "DEFAULT_INTERVAL_POINTS",
]

DEFAULT_SPHERE_LEVEL = 24
DEFAULT_HALFLINE_POINTS = 128
DEFAULT_INTERVAL_POINTS = 64
MAX_POINTS = 512
TAIL_TOL = 1e-12


class QuadratureError(ArithmeticError):
    pass


class TailTooLarge(QuadratureError):
    """The last Gauss-Laguerre node still carries a visible share of the integral."""


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    kind: str
    params: tuple
    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.weights)


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)
    return arrays


def _check_points(npts: int) -> None:
    if npts < 1 or npts > MAX_POINTS:
        raise ValueError(f"rule size must lie in 1..{MAX_POINTS}, got {npts}")


@lru_cache(maxsize=None)
def make_interval(a: float, b: float, npts: int = DEFAULT_INTERVAL_POINTS) -> QuadratureRule:
    """Gauss-Legendre on [a, b]."""
    _check_points(npts)
    x, w = np.polynomial.legendre.leggauss(npts)
    nodes = 0.5 * (b - a) * x + 0.5 * (a + b)
    weights = 0.5 * (b - a) * w
    return QuadratureRule("interval", (a, b, npts), *_freeze(nodes, weights))


@lru_cache(maxsize=None)
def make_jacobi_ab(npts: int, a: float, b: float) -> QuadratureRule:
    """Gauss-Jacobi for the weight (1 - x)^a (1 + x)^b on [-1, 1]."""
    _check_points(npts)
    if a <= -1 or b <= -1:
        raise ValueError("Jacobi exponents must exceed -1")
    if a == b == -0.5:
        # Gauss-Chebyshev, closed form
        i = np.arange(1, npts + 1)
        x = np.cos((2 * i - 1) * math.pi / (2 * npts))[::-1].copy()
        w = np.full(npts, math.pi / npts)
    elif a == b == 0:
        x, w = np.polynomial.legendre.leggauss(npts)
    else:
        x, w = sps.roots_jacobi(npts, a, b)
    return QuadratureRule("jacobi", (npts, a, b), *_freeze(np.asarray(x, float), np.asarray(w, float)))


def make_jacobi(npts: int, beta: float) -> QuadratureRule:
    """Gauss-Jacobi for the symmetric weight (1 - s^2)^beta on [-1, 1]."""
    return make_jacobi_ab(npts, beta, beta)


@lru_cache(maxsize=None)
def make_halfline(npts: int = DEFAULT_HALFLINE_POINTS, alpha: float = 0.0) -> QuadratureRule:
    """Generalised Gauss-Laguerre for x^alpha e^{-x} on [0, inf).

    Nodes whose weight underflows to zero are dropped.
    """
    _check_points(npts)
    with np.errstate(over="ignore", invalid="ignore"):
        x, w = sps.roots_genlaguerre(npts, alpha)
    keep = w > 0
    return QuadratureRule("halfline", (npts, alpha), *_freeze(x[keep].copy(), w[keep].copy()))


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere S^{d-1} in R^d (d = 1 gives 2 points)."""
    return 2.0 * math.pi ** (0.5 * d) / math.gamma(0.5 * d)


@lru_cache(maxsize=None)
def make_sphere(d: int, level: int = DEFAULT_SPHERE_LEVEL) -> QuadratureRule:
    """Product rule for normalised surface measure on S^{d-1}.

    S^1 gets 2*level equally spaced angles; each further dimension adds a
    Gauss-Jacobi factor in the polar cosine with level + 1 nodes.  d = 1 is
    the two-point set {-1, 1}.  Rules are antipodally symmetric.
    """
    if d < 1:
        raise ValueError("sphere dimension must be >= 1")
    if level < 1 or level > MAX_POINTS // 2:
        raise ValueError("unsupported sphere level")
    if d == 1:
        nodes = np.array([[1.0], [-1.0]])
        weights = np.array([0.5, 0.5])
    elif d == 2:
        ang = np.arange(2 * level) * (math.pi / level)
        nodes = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        weights = np.full(2 * level, 1.0 / (2 * level))
    else:
        sub = make_sphere(d - 1, level)
        polar = make_jacobi(level + 1, 0.5 * (d - 3))
        u = polar.nodes
        wu = polar.weights / polar.weights.sum()
        rad = np.sqrt(1.0 - u * u)
        nodes = np.concatenate(
            [
                np.repeat(u, len(sub))[:, None],
                (rad[:, None, None] * sub.nodes[None, :, :]).reshape(-1, d - 1),
            ],
            axis=1,
        )
        weights = (wu[:, None] * sub.weights[None, :]).ravel()
    return QuadratureRule("sphere", (d, level), *_freeze(nodes, weights))


def make_rule(kind: str, **params) -> QuadratureRule:
    """Dispatch on kind: sphere(d, level) | interval(a, b, N) | halfline(N, alpha) | jacobi(N, beta)."""
    if kind == "sphere":
        d = params["d"]
        if d < 2:
            raise ValueError("sphere rules need d >= 2")
        return make_sphere(d, params.get("level", DEFAULT_SPHERE_LEVEL))
    if kind == "interval":
        return make_interval(float(params["a"]), float(params["b"]), params.get("N", DEFAULT_INTERVAL_POINTS))
    if kind == "halfline":
        return make_halfline(params.get("N", DEFAULT_HALFLINE_POINTS), float(params.get("alpha", 0.0)))
    if kind == "jacobi":
        return make_jacobi(params.get("N", DEFAULT_INTERVAL_POINTS), float(params["beta"]))
    raise ValueError(f"unknown rule kind {kind!r}")


def integrate(rule: QuadratureRule, f: Callable) -> complex | float:
    """sum_i w_i f(x_i) with numpy's fixed pairwise summation order."""
    vals = np.asarray(f(rule.nodes))
    return np.sum(rule.weights * vals)


def integrate_sphere(rule: QuadratureRule, f: Callable):
    """Mean of f over the sphere; f maps an (K, d) node array to K values."""
    if rule.kind != "sphere":
        raise ValueError("integrate_sphere needs a sphere rule")
    return integrate(rule, f)


def integrate_halfline(rule: QuadratureRule, f: Callable, rate: float = 1.0, tail_tol: float = TAIL_TOL):
    """int_0^inf exp(-rate x) x^alpha f(x) dx; the weight is supplied by the rule.

    Returns (value, tail) where tail is the last node's share of sum |w f|.
    Raises TailTooLarge when that share exceeds tail_tol.
    """
    if rule.kind != "halfline":
        raise ValueError("integrate_halfline needs a halfline rule")
    if rate <= 0:
        raise ValueError("rate must be positive")
    alpha = rule.params[1]
    vals = np.asarray(f(rule.nodes / rate))
    terms = rule.weights * vals
    scale = np.sum(np.abs(terms))
    tail = float(np.abs(terms[-1]) / scale) if scale > 0 else 0.0
    if tail > tail_tol:
        raise TailTooLarge(f"last node carries {tail:.2e} of the integral")
    return np.sum(terms) * rate ** (-1.0 - alpha), tail
