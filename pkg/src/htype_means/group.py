"""H-type groups: Clifford-module construction, group law, dilations, norm.

Points are (z, t) with z in R^{2n} ordered (x_1..x_n, y_1..y_n) and t in R^m.
The array-level helpers broadcast over leading axes so that quadrature code
can push whole node sets through the group law at once.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .report import VerificationReport

__all__ = [
    "InadmissiblePair",
    "HTypeGroup",
    "GroupPoint",
    "clifford_dimension",
    "clifford_generators",
    "build_htype",
    "verify_structure",
    "bracket",
    "jmap",
    "multiply",
    "inverse",
    "dilate",
    "koranyi_norm",
    "group_mul",
]

_I2 = np.eye(2)
_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
_J = np.array([[0.0, -1.0], [1.0, 0.0]])
_SEEDS = {"I": _I2, "J": _J, "X": _X, "Z": _Z}
_BASE_DIMS = {1: 2, 2: 4, 3: 4, 4: 8, 5: 8, 6: 8, 7: 8, 8: 16}


class InadmissiblePair(ValueError):
    def __init__(self, n: int, m: int):
        self.n, self.m = n, m
        super().__init__(
            f"no H-type structure with dim v = {2 * n}, dim z = {m}: "
            f"2n must be a multiple of {clifford_dimension(m)}"
        )


def clifford_dimension(m: int) -> int:
    """Smallest d carrying m anticommuting orthogonal skew d x d matrices."""
    if m < 1:
        raise ValueError("m must be positive")
    if m <= 8:
        return _BASE_DIMS[m]
    return 16 * clifford_dimension(m - 8)


def _word_matrix(word: str) -> np.ndarray:
    out = np.ones((1, 1))
    for ch in word:
        out = np.kron(out, _SEEDS[ch])
    return out


def _anticommute(w1: str, w2: str) -> bool:
    # X, Z, J pairwise anticommute; I commutes with everything
    clashes = sum(1 for a, b in zip(w1, w2) if a != "I" and b != "I" and a != b)
    return clashes % 2 == 1


def _search_words(m: int, k: int) -> list[str]:
    words = ["".join(w) for w in itertools.product("IJXZ", repeat=k) if w.count("J") % 2 == 1]
    first = "J" + "I" * (k - 1)
    words.remove(first)
    words.insert(0, first)

    def extend(chosen: list[str], start: int) -> list[str] | None:
        if len(chosen) == m:
            return chosen
        for i in range(start, len(words)):
            w = words[i]
            if all(_anticommute(w, c) for c in chosen):
                found = extend(chosen + [w], i + 1)
                if found:
                    return found
        return None

    found = extend([first], 1)
    if found is None:
        raise RuntimeError(f"no anticommuting family of size {m} in dimension {2**k}")
    return found


@lru_cache(maxsize=None)
def clifford_generators(m: int) -> np.ndarray:
    """m anticommuting orthogonal skew matrices of size clifford_dimension(m).

    m <= 8: a deterministic search over Kronecker words in the real 2x2
    seeds I, X, Z, J.  m > 8: the period-eight step E_i (x) I, w (x) F_j with
    w the product of the eight size-16 generators.  The first generator is
    always J (x) I, i.e. [[0, -I], [I, 0]] in (x, y) ordering.
    """
    d = clifford_dimension(m)
    if m <= 8:
        k = int(round(np.log2(d)))
        words = _search_words(m, k)
        gens = np.stack([_word_matrix(w) for w in words])
    else:
        e = clifford_generators(8)
        f = clifford_generators(m - 8)
        omega = np.linalg.multi_dot(list(e))
        eye = np.eye(f.shape[1])
        gens = np.stack([np.kron(ei, eye) for ei in e] + [np.kron(omega, fj) for fj in f])
    gens.setflags(write=False)
    return gens


@dataclass(frozen=True)
class GroupPoint:
    z: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z", np.asarray(self.z, dtype=float))
        object.__setattr__(self, "t", np.asarray(self.t, dtype=float))

    def as_tuple(self) -> tuple[np.ndarray, np.ndarray]:
        return self.z, self.t

    def distance(self, other: "GroupPoint") -> float:
        return float(np.sqrt(np.sum((self.z - other.z) ** 2) + np.sum((self.t - other.t) ** 2)))


@dataclass(frozen=True, eq=False)
class HTypeGroup:
    n: int
    m: int
    U: np.ndarray

    @property
    def Q(self) -> int:
        return 2 * self.n + 2 * self.m

    @property
    def dim_v(self) -> int:
        return 2 * self.n

    def point(self, z=None, t=None) -> GroupPoint:
        z = np.zeros(2 * self.n) if z is None else np.asarray(z, dtype=float)
        t = np.zeros(self.m) if t is None else np.asarray(t, dtype=float)
        if z.shape[-1] != 2 * self.n or t.shape[-1] != self.m:
            raise ValueError("point dimensions do not match the group")
        return GroupPoint(z, t)

    def identity(self) -> GroupPoint:
        return self.point()

    def bracket(self, z1, z2) -> np.ndarray:
        return bracket(self, z1, z2)

    def jmap(self, a) -> np.ndarray:
        return jmap(self, a)

    def mul(self, z1, t1, z2, t2):
        return group_mul(self, z1, t1, z2, t2)

    def rotated(self, O: np.ndarray) -> "HTypeGroup":
        """Same structure expressed in the orthonormal basis given by the columns of O."""
        O = np.asarray(O, dtype=float)
        U = np.einsum("ai,jab,bk->jik", O, self.U, O)
        U.setflags(write=False)
        return HTypeGroup(self.n, self.m, U)


def build_htype(n: int, m: int) -> HTypeGroup:
    """Standard H-type group with dim v = 2n, dim z = m.

    One irreducible Clifford block is replicated 2n/d times, each block
    occupying matching slices of the x and y coordinates.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    d = clifford_dimension(m)
    if (2 * n) % d:
        raise InadmissiblePair(n, m)
    gens = clifford_generators(m)
    h = d // 2
    U = np.zeros((m, 2 * n, 2 * n))
    for b in range(2 * n // d):
        idx = np.concatenate([np.arange(b * h, (b + 1) * h), n + np.arange(b * h, (b + 1) * h)])
        U[:, idx[:, None], idx[None, :]] = gens
    U.setflags(write=False)
    return HTypeGroup(n, m, U)


def verify_structure(g: HTypeGroup, tol: float = 1e-12, samples: int = 100, seed: int = 0) -> VerificationReport:
    """Skewness, orthogonality, anticommutation and J_a^2 = -|a|^2 I deviations."""
    rep = VerificationReport("structure", config_echo={"n": g.n, "m": g.m, "tol": tol})
    eye = np.eye(2 * g.n)
    skew = max(float(np.abs(u + u.T).max()) for u in g.U)
    orth = max(float(np.abs(u.T @ u - eye).max()) for u in g.U)
    anti = 0.0
    for i in range(g.m):
        for j in range(i + 1, g.m):
            anti = max(anti, float(np.abs(g.U[i] @ g.U[j] + g.U[j] @ g.U[i]).max()))
    rng = np.random.default_rng(seed)
    jsq = 0.0
    for _ in range(samples):
        a = rng.standard_normal(g.m)
        a /= np.linalg.norm(a)
        ja = jmap(g, a)
        jsq = max(jsq, float(np.abs(ja @ ja + eye).max()))
    rep.add("skew", skew, tol)
    rep.add("orthogonal", orth, tol)
    rep.add("anticommute", anti, tol)
    rep.add("jmap_square", jsq, tol)
    rep.add_bool("homogeneous_dimension", g.Q == 2 * g.n + 2 * g.m)
    return rep


def _check_z(g: HTypeGroup, *zs) -> None:
    for z in zs:
        if np.shape(z)[-1] != 2 * g.n:
            raise ValueError(f"expected vectors of length {2 * g.n}, got shape {np.shape(z)}")


def bracket(g: HTypeGroup, z1, z2) -> np.ndarray:
    """[z1, z2]_j = <z1, U^j z2>, broadcasting over leading axes."""
    _check_z(g, z1, z2)
    return np.einsum("...a,jab,...b->...j", np.asarray(z1, float), g.U, np.asarray(z2, float))


def jmap(g: HTypeGroup, a) -> np.ndarray:
    """J_a = sum_j a_j (U^j)^T, so that <J_a v, v'> = <a, [v, v']>."""
    a = np.asarray(a, dtype=float)
    if a.shape != (g.m,):
        raise ValueError("a must have length m")
    return np.einsum("j,jba->ab", a, g.U)


def group_mul(g: HTypeGroup, z1, t1, z2, t2):
    """(z1, t1)(z2, t2) on arrays."""
    return np.asarray(z1) + np.asarray(z2), np.asarray(t1) + np.asarray(t2) + 0.5 * bracket(g, z1, z2)


def multiply(g: HTypeGroup, p: GroupPoint, q: GroupPoint) -> GroupPoint:
    if p.t.shape[-1] != g.m or q.t.shape[-1] != g.m:
        raise ValueError("central dimension mismatch")
    return GroupPoint(*group_mul(g, p.z, p.t, q.z, q.t))


def inverse(p: GroupPoint) -> GroupPoint:
    return GroupPoint(-p.z, -p.t)


def dilate(r: float, p: GroupPoint) -> GroupPoint:
    if r <= 0:
        raise ValueError("dilation factor must be positive")
    return GroupPoint(r * p.z, r * r * p.t)


def koranyi_norm(p: GroupPoint) -> float:
    """(|z|^4 + |t|^2)^(1/4)."""
    z2 = float(np.sum(p.z**2))
    return (z2 * z2 + float(np.sum(p.t**2))) ** 0.25
