"""Fields on the group, twisted convolution on C^n, and the sublaplacian by finite differences."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import special
from .group import GroupPoint, HTypeGroup, build_htype, group_mul
from .quadrature import (
    DEFAULT_HALFLINE_POINTS,
    DEFAULT_SPHERE_LEVEL,
    integrate_halfline,
    make_halfline,
    make_sphere,
    sphere_area,
)

__all__ = [
    "ScalarField",
    "e_field",
    "gaussian_field",
    "moment_field",
    "constant_field",
    "twisted_convolution",
    "sublaplacian_fd",
    "twisted_laplacian_fd",
    "eigen_residual",
]


@dataclass(frozen=True, eq=False)
class ScalarField:
    """A complex function of (z, t) arrays, broadcasting over leading axes."""

    func: Callable[[np.ndarray, np.ndarray], np.ndarray]
    descriptor: tuple
    decay_hint: str | tuple = "exponential"
    meta: dict = field(default_factory=dict)

    def __call__(self, z, t):
        return np.asarray(self.func(np.asarray(z, dtype=float), np.asarray(t, dtype=float)))

    def at(self, p: GroupPoint) -> complex:
        return complex(self(p.z, p.t))

    def translated(self, g: HTypeGroup, q: GroupPoint) -> "ScalarField":
        """x -> f(q x), i.e. f composed with left translation by q."""
        def func(z, t):
            z2, t2 = group_mul(g, q.z, q.t, z, t)
            return self.func(z2, t2)

        return ScalarField(func, ("translated", self.descriptor, tuple(q.z), tuple(q.t)), self.decay_hint)

    def shifted_center(self, c) -> "ScalarField":
        """(z, t) -> f(z, t + c) for a central vector c."""
        c = np.asarray(c, dtype=float)
        return ScalarField(lambda z, t: self.func(z, t + c), ("center-shift", self.descriptor, tuple(c)), self.decay_hint)

    def scaled(self, factor: complex) -> "ScalarField":
        return ScalarField(lambda z, t: factor * self.func(z, t), ("scaled", self.descriptor, factor), self.decay_hint)


def e_field(g: HTypeGroup, k: int, a) -> ScalarField:
    """e_k^a(z, t) = exp(-i <a, t>) phi_k^{|a|}(|z|)."""
    a = np.asarray(a, dtype=float)
    if a.shape != (g.m,):
        raise ValueError("a must have length m")
    lam = float(np.linalg.norm(a))
    if lam == 0.0:
        raise ValueError("e_k^a needs a != 0")
    n = g.n

    def func(z, t):
        rho = np.sqrt(np.sum(z * z, axis=-1))
        return np.exp(-1j * (t @ a)) * special.phi(k, n, lam, rho)

    return ScalarField(func, ("eigenfunction", k, tuple(a.tolist())), ("exponential", lam / 4.0))


def gaussian_field(g: HTypeGroup, sz: float = 1.0, st: float = 1.0) -> ScalarField:
    """exp(-sz |z|^2 - st |t|^2); integral pi^n / sz^n * (pi / st)^{m/2}."""
    def func(z, t):
        return np.exp(-sz * np.sum(z * z, axis=-1) - st * np.sum(t * t, axis=-1)).astype(complex)

    total = (math.pi / sz) ** g.n * (math.pi / st) ** (0.5 * g.m)
    return ScalarField(func, ("gaussian", sz, st), ("exponential", min(sz, st)), {"integral": total})


def moment_field(g: HTypeGroup, sz: float = 2.0, st: float = 0.5) -> ScalarField:
    """(1 + x_1^2 + t_1^2) exp(-sz |z|^2 - st |t|^2), with its closed-form integral.

    Not radial in z or t, so it exercises the angular rules as well.
    """
    def func(z, t):
        g0 = np.exp(-sz * np.sum(z * z, axis=-1) - st * np.sum(t * t, axis=-1))
        return ((1.0 + z[..., 0] ** 2 + t[..., 0] ** 2) * g0).astype(complex)

    base = (math.pi / sz) ** g.n * (math.pi / st) ** (0.5 * g.m)
    total = base * (1.0 + 0.5 / sz + 0.5 / st)
    return ScalarField(func, ("moment", sz, st), ("exponential", min(sz, st)), {"integral": total})


def constant_field(value: complex = 1.0) -> ScalarField:
    return ScalarField(
        lambda z, t: np.full(np.broadcast_shapes(z.shape[:-1], t.shape[:-1]), value, dtype=complex),
        ("constant", value),
        "none",
    )


def twisted_convolution(
    f1: Callable,
    f2: Callable,
    lam: float,
    z,
    *,
    rate: float | None = None,
    radial_points: int = DEFAULT_HALFLINE_POINTS,
    sphere_level: int = DEFAULT_SPHERE_LEVEL,
) -> complex:
    """int_{C^n} f1(z - w) f2(w) exp((i/2) lam Im(z . conj w)) dw for n in {1, 2}.

    f1, f2 take (..., 2n) real arrays.  `rate` is the Gaussian decay of the
    integrand in |w|^2 (default lam/2, right for a product of two phi^lam).
    The radial variable x = |w|^2 is handled by Gauss-Laguerre with weight
    x^{n-1} exp(-rate x) made explicit; angles by the S^{2n-1} product rule.
    """
    z = np.asarray(z, dtype=float)
    n = z.shape[-1] // 2
    if n not in (1, 2):
        raise ValueError("twisted convolution is implemented for n = 1, 2")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    rate = 0.5 * lam if rate is None else rate
    canon = build_htype(n, 1)
    sph = make_sphere(2 * n, sphere_level)
    rule = make_halfline(radial_points, n - 1.0)

    def radial(x):
        rho = np.sqrt(x)
        w = rho[:, None, None] * sph.nodes[None, :, :]
        phase = np.exp(0.5j * lam * canon.bracket(z, w)[..., 0])
        vals = f1(z - w) * f2(w) * phase
        return np.exp(rate * x) * (vals @ sph.weights)

    value, _ = integrate_halfline(rule, radial, rate=rate)
    return complex(0.5 * sphere_area(2 * n) * value)


def sublaplacian_fd(g: HTypeGroup, f: ScalarField, p: GroupPoint, h: float = 1e-2) -> complex:
    """-sum_j (X_j^2 + Y_j^2) f(p) with each X_j^2 a second central difference
    along the one-parameter subgroup s -> p (s e_j, 0)."""
    if not 1e-4 <= h <= 1e-1:
        raise ValueError("step h must lie in [1e-4, 1e-1]")
    dim = 2 * g.n
    steps = np.concatenate([h * np.eye(dim), -h * np.eye(dim)])
    zero_t = np.zeros((2 * dim, g.m))
    z2, t2 = group_mul(g, p.z[None, :], p.t[None, :], steps, zero_t)
    vals = f(z2, t2)
    centre = complex(f(p.z, p.t))
    second = (vals[:dim] + vals[dim:] - 2.0 * centre) / (h * h)
    return complex(-np.sum(second))


def twisted_laplacian_fd(phi: Callable, z, lam: float, h: float = 1e-2) -> complex:
    """-Delta phi + lam^2 |z|^2 / 4 phi - i lam sum_j (x_j d/dy_j - y_j d/dx_j) phi, central differences.

    phi takes (..., 2n) arrays; coordinates are (x_1..x_n, y_1..y_n).
    """
    z = np.asarray(z, dtype=float)
    dim = z.shape[-1]
    n = dim // 2
    eye = np.eye(dim)
    plus = phi(z[None, :] + h * eye)
    minus = phi(z[None, :] - h * eye)
    centre = complex(phi(z))
    lap = np.sum(plus + minus - 2.0 * centre) / (h * h)
    grad = (plus - minus) / (2.0 * h)
    rot = np.sum(z[:n] * grad[n:] - z[n:] * grad[:n])
    return complex(-lap + 0.25 * lam * lam * float(z @ z) * centre - 1j * lam * rot)


def eigen_residual(g: HTypeGroup, k: int, a, p: GroupPoint, h: float) -> float:
    """|L_fd e_k^a(p) - (2k + n)|a| e_k^a(p)|."""
    f = e_field(g, k, a)
    lam = float(np.linalg.norm(a))
    return abs(sublaplacian_fd(g, f, p, h) - (2 * k + g.n) * lam * f.at(p))
