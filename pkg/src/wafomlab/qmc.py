"""Discretized QMC over Z_b: points and cubes of digit matrices, Walsh
functions, test integrands with exact cube averages, and integration error
experiments."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .abelian import GroupSpec, dft, flat_index, space_matrices
from .errors import CapacityError, SpecMismatchError
from .netgen import PointGroup
from .wafom import wafom_fast

WALSH_CHECK_CAPACITY = 1 << 20
_SNAP = 1e-9


def _base(group_or_base: GroupSpec | int) -> int:
    if isinstance(group_or_base, GroupSpec):
        if not group_or_base.is_cyclic:
            raise SpecMismatchError(f"points are defined over Z_b only, got moduli {group_or_base.moduli}")
        return group_or_base.order
    return int(group_or_base)


def point_of(mats, group_or_base: GroupSpec | int, n: int | None = None,
             centered: bool = False) -> np.ndarray:
    """x_B^i = sum_j b_ij b^-j for one matrix (s, n) or a stack (N, s, n).

    ``centered`` adds half a cell, b^-n / 2, to every coordinate.
    """
    b = _base(group_or_base)
    mats = np.asarray(mats)
    n = mats.shape[-1] if n is None else n
    scale = float(b) ** -np.arange(1, n + 1)
    x = mats.astype(float) @ scale
    if centered:
        x = x + 0.5 * float(b) ** -n
    return x


def point_of_exact(mat, b: int) -> tuple[Fraction, ...]:
    mat = np.asarray(mat)
    return tuple(sum((Fraction(int(v), b ** (j + 1)) for j, v in enumerate(row)), Fraction(0))
                 for row in mat)


def phi(mat, b: int) -> np.ndarray:
    """phi_i(A) = sum_j a_ij b^(j-1); each value is below b^n."""
    mat = np.asarray(mat, dtype=np.int64)
    n = mat.shape[-1]
    return mat @ (b ** np.arange(n, dtype=np.int64))


def _digits(k: int, b: int) -> list[int]:
    out = []
    while k:
        k, r = divmod(k, b)
        out.append(r)
    return out


def _x_digits(x, b: int, count: int):
    """First ``count`` b-adic digits of x in [0, 1) (array or scalar).

    Floats within a relative 1e-9 of a grid point b^-count * integer are
    snapped to it, so float images of b-adic rationals such as 1/3 read
    correctly.
    """
    if isinstance(x, Fraction):
        t = math.floor(x * b ** count)
        return [(t // b ** (count - 1 - i)) % b for i in range(count)]
    t = np.asarray(x, dtype=float) * float(b) ** count
    r = np.round(t)
    t = np.where(np.abs(t - r) <= _SNAP * np.maximum(1.0, np.abs(t)), r, np.floor(t)).astype(np.int64)
    return [(t // b ** (count - 1 - i)) % b for i in range(count)]


def walsh(k: int, b: int, x):
    """k-th b-adic Walsh function omega_b^(kappa_0 x_1 + kappa_1 x_2 + ...)."""
    kd = _digits(int(k), b)
    if not kd:
        return 1.0 + 0j if np.ndim(x) == 0 else np.ones(np.shape(x), dtype=complex)
    xd = _x_digits(x, b, len(kd))
    e = sum(kap * xj for kap, xj in zip(kd, xd)) % b
    return np.exp(2j * np.pi * np.asarray(e) / b) if np.ndim(e) else complex(np.exp(2j * np.pi * e / b))


def walsh_multi(ks: Sequence[int], b: int, x) -> complex | np.ndarray:
    """prod_i wal_{k_i}(x_i); ``x`` has the coordinates on its last axis."""
    x = np.asarray(x) if not isinstance(x, tuple) else x
    out = 1.0 + 0j
    for i, k in enumerate(ks):
        out = out * walsh(int(k), b, x[..., i] if isinstance(x, np.ndarray) else x[i])
    return out


# -- test integrands -----------------------------------------------------------------


@dataclass(frozen=True)
class TestFunction:
    """An integrand on [0,1)^s with its exact integral and exact cube means.

    ``cube_mean(corners, h)`` returns the mean over [c, c + h)^s for each row
    of corners.  ``lipschitz`` is a Euclidean Lipschitz constant, when known.
    """

    __test__ = False

    name: str
    dimension: int
    evaluate: Callable[[np.ndarray], np.ndarray]
    exact_integral: float
    cube_mean: Callable[[np.ndarray, float], np.ndarray]
    lipschitz: float | None = None

    def cube_average(self, mats, b: int, n: int | None = None) -> np.ndarray:
        """f_n(B) for one matrix or a stack."""
        mats = np.asarray(mats)
        n = mats.shape[-1] if n is None else n
        corners = np.atleast_2d(point_of(mats, b, n))
        out = self.cube_mean(corners, float(b) ** -n)
        return out if mats.ndim == 3 else float(out[0])


def _separable(name: str, s: int, g, g_mean, integral_1d: float, grad_bound: float) -> TestFunction:
    def evaluate(x):
        x = np.atleast_2d(x)
        return np.prod(g(x), axis=-1)

    def cube_mean(corners, h):
        return np.prod(g_mean(np.atleast_2d(corners), h), axis=-1)

    # a bound on every partial derivative gives a Euclidean constant sqrt(s) times larger
    return TestFunction(name, s, evaluate, integral_1d ** s, cube_mean, grad_bound * math.sqrt(s))


def prod_linear(s: int) -> TestFunction:
    return _separable("prod_linear", s, lambda x: x, lambda a, h: a + h / 2, 0.5, 1.0)


def prod_exp(s: int) -> TestFunction:
    return _separable("prod_exp", s, np.exp, lambda a, h: np.exp(a) * (np.expm1(h) / h),
                      math.e - 1, math.e ** s)


def prod_centered(s: int, gamma: float | Sequence[float] = 1.0) -> TestFunction:
    gam = np.broadcast_to(np.asarray(gamma, dtype=float), (s,)).copy()
    half = 1 + np.abs(gam) / 2
    k = float(max(abs(gam[i]) * np.prod(np.delete(half, i)) for i in range(s)))
    return _separable("prod_centered", s, lambda x: 1 + gam * (x - 0.5),
                      lambda a, h: 1 + gam * (a + h / 2 - 0.5), 1.0, k)


def prod_quadratic(s: int) -> TestFunction:
    return _separable("prod_quadratic", s, lambda x: x * x,
                      lambda a, h: a * a + a * h + h * h / 3, 1.0 / 3.0, 2.0)


BUILTIN = {
    "prod_linear": prod_linear,
    "prod_exp": prod_exp,
    "prod_centered": prod_centered,
    "prod_quadratic": prod_quadratic,
}


def make_function(name: str, s: int, gamma: float | Sequence[float] | None = None) -> TestFunction:
    if name not in BUILTIN:
        raise KeyError(f"unknown function {name!r}; choose from {sorted(BUILTIN)}")
    if name == "prod_centered":
        return prod_centered(s, 1.0 if gamma is None else gamma)
    return BUILTIN[name](s)


def step_function(values: np.ndarray, b: int, s: int, n: int) -> TestFunction:
    """Piecewise constant on the b-adic cubes of side b^-n; ``values`` is
    indexed like :func:`wafomlab.abelian.space_matrices`."""
    values = np.asarray(values, dtype=float).reshape(-1)
    if values.size != b ** (s * n):
        raise SpecMismatchError(f"need {b ** (s * n)} values, got {values.size}")
    group = GroupSpec.cyclic(b)

    def cell(x):
        x = np.atleast_2d(x)
        digits = np.stack(_x_digits(x, b, n), axis=-1)  # (N, s, n)
        return values[flat_index(group, digits)]

    def cube_mean(corners, h):
        if not math.isclose(h, float(b) ** -n):
            raise SpecMismatchError("step function cubes must match its own resolution")
        return cell(corners)

    return TestFunction("step", s, cell, float(values.mean()), cube_mean, None)


# -- experiments ----------------------------------------------------------------------


@dataclass(frozen=True)
class QmcResult:
    I_Pn: float
    I_center: float
    exact: float
    err_discretized: float
    err_center: float
    wafom: float

    def to_json_dict(self) -> dict:
        return asdict(self)


def discretized_qmc(pg: PointGroup, f: TestFunction) -> QmcResult:
    """I_{P,n}(f) from exact cube averages and the centre-point rule."""
    b = _base(pg.group)
    if f.dimension != pg.s:
        raise SpecMismatchError(f"function dimension {f.dimension} != s = {pg.s}")
    h = float(b) ** -pg.n
    corners = point_of(pg.elements, b, pg.n)
    i_pn = math.fsum(f.cube_mean(corners, h)) / pg.order
    i_center = math.fsum(f.evaluate(corners + h / 2)) / pg.order
    exact = f.exact_integral
    return QmcResult(i_pn, i_center, exact, abs(i_pn - exact), abs(i_center - exact), wafom_fast(pg))


def walsh_coefficient_check(f: TestFunction, b: int, s: int, n: int, mat) -> tuple[complex, complex]:
    """Both sides of conj(F(f)(phi(A))) = dft(f_n)(A) for the step function f_n.

    The left side sums Vol(I_B) f_n(B) wal_{phi(A)}(x_B) over all cubes, with
    the Walsh function read off the real coordinates of x_B; the right side is
    the discrete Fourier transform of f_n on Z_b^(s x n).
    """
    total = b ** (s * n)
    if total > WALSH_CHECK_CAPACITY:
        raise CapacityError(f"b^(sn) = {total} exceeds {WALSH_CHECK_CAPACITY}")
    group = GroupSpec.cyclic(b)
    mat = np.asarray(mat)
    cubes = space_matrices(group, s, n)
    fn = f.cube_average(cubes, b, n)
    x = point_of(cubes, b, n)
    wal = walsh_multi(phi(mat, b), b, x)
    lhs = complex((fn * wal).sum() / total)
    rhs = complex(dft(group, s, n, fn)[int(flat_index(group, mat[None])[0])])
    return lhs, rhs
