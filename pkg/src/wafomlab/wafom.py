"""Walsh figure of merit: three evaluation routes and the bounds that relate
it to the minimum Dick weight and to the size of the point group.

``wafom_fast`` evaluates

    WAFOM(P) = -1 + |P|^-1 sum_{B in P} prod_{i,j} (1 + eta(b_ij) b^-j)

in floating point.  The mean is close to 1 when WAFOM is small, so the
products and the sum are carried in double-double arithmetic (error-free
transformations, fixed pairwise reduction tree) before the final subtraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .enumerator import INFINITE_WEIGHT, log_ceil, min_dick_weight, weight_enumerator, zero_profiles
from .errors import PreconditionError
from .netgen import PointGroup
from .weight import dick_weights, max_weight, sphere_sizes
from .abelian import smallest_prime_factor

LOG_FLOOR = 1e-300

# -- double-double kernels --------------------------------------------------------

_SPLITTER = 134217729.0  # 2^27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _fast_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return _fast_two_sum(p, e)


def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    t, f = _two_sum(al, bl)
    e = e + t
    s, e = _fast_two_sum(s, e)
    e = e + f
    return _fast_two_sum(s, e)


def _dd_tree_sum(hi: np.ndarray, lo: np.ndarray) -> tuple[float, float]:
    """Pairwise reduction with a tree fixed by the array length."""
    hi = np.asarray(hi, dtype=float)
    lo = np.asarray(lo, dtype=float)
    if hi.size == 0:
        return 0.0, 0.0
    while hi.size > 1:
        if hi.size % 2:
            hi = np.append(hi, 0.0)
            lo = np.append(lo, 0.0)
        hi, lo = _dd_add(hi[0::2], lo[0::2], hi[1::2], lo[1::2])
    return float(hi[0]), float(lo[0])


@lru_cache(maxsize=256)
def _column_factors(b: int, s: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Double-double value of (1 + (b-1) b^-j)^z (1 - b^-j)^(s-z), indexed [j-1, z]."""
    hi = np.zeros((n, s + 1))
    lo = np.zeros((n, s + 1))
    for j in range(1, n + 1):
        up = Fraction(b ** j + b - 1, b ** j)
        down = Fraction(b ** j - 1, b ** j)
        for z in range(s + 1):
            exact = up ** z * down ** (s - z)
            h = float(exact)
            hi[j - 1, z] = h
            lo[j - 1, z] = float(exact - Fraction(h))
    return hi, lo


# -- WAFOM ------------------------------------------------------------------------


def wafom_fast(pg: PointGroup) -> float:
    """O(sn|P|) evaluation from the points of P."""
    b, s, n = pg.group.order, pg.s, pg.n
    if pg.order == pg.ambient_size:
        return 0.0
    profiles, counts = zero_profiles(pg)
    fhi, flo = _column_factors(b, s, n)
    hi = fhi[0, profiles[:, 0]]
    lo = flo[0, profiles[:, 0]]
    for j in range(1, n):
        hi, lo = _dd_mul(hi, lo, fhi[j, profiles[:, j]], flo[j, profiles[:, j]])
    c = counts.astype(float)
    hi, lo = _dd_mul(hi, lo, c, np.zeros_like(c))
    th, tl = _dd_tree_sum(hi, lo)
    th, tl = _dd_add(th, tl, -float(pg.order), 0.0)
    value = (th + tl) / pg.order
    return max(value, 0.0)


def wafom_exact(pg: PointGroup) -> Fraction:
    """W_{P-perp}(1, 1/b) - 1 from the exact weight enumerator."""
    we = weight_enumerator(pg)
    b = we.b
    top = len(we.coefficients) - 1
    num = sum(a * b ** (top - m) for m, a in enumerate(we.coefficients) if m >= 1)
    return Fraction(num, b ** top)


def wafom_dual(dual_elements: np.ndarray, b: int) -> float:
    """Definition: sum over nonzero A in P-perp of b^-mu(A)."""
    mu = dick_weights(dual_elements)
    return math.fsum(float(b) ** -int(m) for m in mu if m > 0)


def log_b_fraction(value: Fraction, b: int) -> float:
    if value <= 0:
        return -math.inf
    return (math.log(value.numerator) - math.log(value.denominator)) / math.log(b)


def wafom_log_b(pg: PointGroup, value: float | None = None) -> float:
    """log_b WAFOM(P); below 1e-300 the exact rational is used instead."""
    if value is None:
        value = wafom_fast(pg)
    if value >= LOG_FLOOR:
        return math.log(value) / math.log(pg.group.order)
    return log_b_fraction(wafom_exact(pg), pg.group.order)


# -- bounds -----------------------------------------------------------------------


def alpha(b: int) -> float:
    """alpha_b = log(p_b) / 2 with p_b the smallest prime factor of b."""
    return math.log(smallest_prime_factor(b)) / 2.0


def tail_exact_fraction(b: int, s: int, n: int, M: int) -> Fraction:
    """C_{s,n}(M) = sum_{m >= M} S_{s,n}(m) b^-m."""
    top = max_weight(s, n)
    if M > top:
        return Fraction(0)
    sph = sphere_sizes(b, s, n)
    lo = max(M, 0)
    return Fraction(sum(sph[m] * b ** (top - m) for m in range(lo, top + 1)), b ** top)


def tail_exact(b: int, s: int, n: int, M: int) -> float:
    return float(tail_exact_fraction(b, s, n, M))


def tail_threshold(b: int, s: int, c: float) -> float:
    """Smallest admissible M' for :func:`tail_bound`: (1+c)^2 (log b)^-2 (b-1) s."""
    return (1 + c) ** 2 * (b - 1) * s / math.log(b) ** 2


def tail_bound(b: int, s: int, m_prime: float, c: float) -> float:
    """(1 + (1+c)/(c log b)) b^-M' exp(2 sqrt((b-1) s M')), an upper bound on
    C_s(ceil M')."""
    if c <= 0:
        raise PreconditionError(f"c must be positive, got {c}")
    need = tail_threshold(b, s, c)
    if m_prime < need and not math.isclose(m_prime, need, rel_tol=1e-12):
        raise PreconditionError(f"M' = {m_prime} is below the admissible minimum {need!r}")
    lb = math.log(b)
    return (1 + (1 + c) / (c * lb)) * math.exp(-m_prime * lb + 2 * math.sqrt((b - 1) * s * m_prime))


def min_weight_ceiling(s: int, d: int) -> int:
    """s q(q+1)/2 + (q+1)(r+1) with d = qs + r; bounds delta_{P-perp} when |P| <= b^d."""
    q, r = divmod(d, s)
    return s * q * (q + 1) // 2 + (q + 1) * (r + 1)


def min_weight_ceiling_smooth(s: int, d: int) -> float:
    """d^2/(2s) + 3d/2 + s, the relaxed form of :func:`min_weight_ceiling`."""
    return d * d / (2 * s) + 1.5 * d + s


def unconditional_lower_bound(b: int, s: int, d: int) -> float:
    """b^-(sq(q+1)/2 + (q+1)(r+1)); valid for every proper P with |P| <= b^d."""
    return float(b) ** -min_weight_ceiling(s, d)


def lower_bound_threshold(C: float) -> float:
    """Minimal d/s for which WAFOM >= b^(-C d^2/s) holds."""
    if C <= 0.5:
        raise PreconditionError(f"C must exceed 1/2, got {C}")
    return (math.sqrt(C + 1 / 16) + 0.75) / (C - 0.5)


def lower_bound(b: int, s: int, d: int, C: float) -> float:
    """b^(-C d^2/s) when d/s >= (sqrt(C + 1/16) + 3/4)/(C - 1/2)."""
    need = lower_bound_threshold(C)
    if d / s < need:
        raise PreconditionError(f"d/s = {d / s:.6g} is below the threshold {need:.6g} for C = {C}")
    return b ** (-C * d * d / s)


def existence_threshold(b: int, s: int, A: float, c: float) -> float:
    """Smallest admissible d: (1+c)(b-1)s / (A log b)."""
    return (1 + c) * (b - 1) * s / (A * math.log(b))


def existence_bound(b: int, p_b: int, s: int, d: int, A: float | None = None,
                    c: float = 1.0) -> float:
    """(1 + (1+c)/(c log b)) b^(-A^2 d^2/((b-1)s)) e^(2Ad): some subgroup with
    |P| <= b^d has WAFOM at most this."""
    alpha_b = math.log(p_b) / 2.0
    if A is None:
        A = alpha_b
    if p_b != smallest_prime_factor(b):
        raise PreconditionError(f"p_b = {p_b} is not the smallest prime factor of b = {b}")
    if c <= 0:
        raise PreconditionError(f"c must be positive, got {c}")
    if not 0 < A <= alpha_b * (1 + 1e-15):
        raise PreconditionError(f"A = {A} must lie in (0, alpha_b = {alpha_b}]")
    need = existence_threshold(b, s, A, c)
    if d < need:
        raise PreconditionError(f"d = {d} is below the admissible minimum {need:.6g}")
    lb = math.log(b)
    return (1 + (1 + c) / (c * lb)) * math.exp(-A * A * d * d / ((b - 1) * s) * lb + 2 * A * d)


@dataclass(frozen=True)
class BoundParams:
    c: float = 1.0
    C: float = 1.0
    A: float | None = None
    b: int = 2

    def __post_init__(self) -> None:
        if self.c <= 0:
            raise PreconditionError("c must be positive")
        if self.C <= 0.5:
            raise PreconditionError("C must exceed 1/2")
        if self.A is not None and not 0 < self.A <= alpha(self.b) * (1 + 1e-15):
            raise PreconditionError(f"A must lie in (0, alpha_b = {alpha(self.b)}]")

    @property
    def alpha_b(self) -> float:
        return alpha(self.b)


@dataclass(frozen=True)
class OrderWindow:
    b: int
    s: int
    d: int
    lower_exponent: float
    upper_exponent: float
    C: float
    D: float
    E: int
    c: float


def order_constants(b: int) -> tuple[float, int, float, float]:
    """(D, E, c, C): D = alpha_b, E the smallest integer > (b-1)/(D log b),
    c from E = (1+c)(b-1)/(D log b), C = 1/2 + 3/(2E) + 1/E^2."""
    D = alpha(b)
    ratio = (b - 1) / (D * math.log(b))
    E = math.floor(ratio) + 1
    c = E * D * math.log(b) / (b - 1) - 1
    C = 0.5 + 1.5 / E + 1.0 / E ** 2
    return D, E, c, C


def order_window(b: int, s: int, d: int) -> OrderWindow:
    """Exponent window for min log_b WAFOM over subgroups with |P| <= b^d."""
    D, E, c, C = order_constants(b)
    if d / s < E:
        raise PreconditionError(f"d/s = {d / s:.6g} must be at least E = {E} for b = {b}")
    lb = math.log(b)
    lower = -C * d * d / s
    upper = (-D * D * d * d / ((b - 1) * s) + 2 * D * d / lb
             + math.log1p((1 + c) / (c * lb)) / lb)
    return OrderWindow(b, s, d, lower, upper, C, D, E, c)


# -- reports ----------------------------------------------------------------------


@dataclass
class WafomReport:
    moduli: tuple[int, ...]
    s: int
    n: int
    num_points: int
    wafom: float
    wafom_log_b: float
    method: str
    min_weight: int | float | None = None
    lower_bound: float | None = None
    existence_bound: float | None = None
    wafom_fraction: Fraction | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def base(self) -> int:
        return math.prod(self.moduli)

    @property
    def d(self) -> int:
        return log_ceil(self.base, self.num_points)

    @property
    def log_num_points(self) -> float:
        return math.log(self.num_points) / math.log(self.base)

    def to_json_dict(self) -> dict:
        out = {
            "base": self.base,
            "moduli": list(self.moduli),
            "s": self.s,
            "n": self.n,
            "log_num_points": self.log_num_points,
            "wafom": self.wafom,
            "wafom_log_b": _marker(self.wafom_log_b),
            "method": self.method,
            "min_weight": _marker(self.min_weight),
            "lower_bound": self.lower_bound,
            "existence_bound": self.existence_bound,
            "seed": self.seed,
        }
        if self.wafom_fraction is not None:
            out["wafom_fraction"] = str(self.wafom_fraction)
        out.update(self.extra)
        return out


def _marker(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def evaluate(pg: PointGroup, *, exact: bool = False, with_min_weight: bool = False,
             c: float = 1.0, seed: int | None = None) -> WafomReport:
    """Evaluate WAFOM of P and attach the bounds that apply to its size."""
    b, s = pg.group.order, pg.s
    frac = None
    if exact:
        frac = wafom_exact(pg)
        value, method = float(frac), "exact-rational"
        log_value = log_b_fraction(frac, b)
    else:
        value, method = wafom_fast(pg), "fast"
        log_value = -math.inf if pg.order == pg.ambient_size else wafom_log_b(pg, value)
    d = log_ceil(b, pg.order)
    proper = pg.order < pg.ambient_size
    lower = unconditional_lower_bound(b, s, d) if proper else None
    exist = None
    if d >= existence_threshold(b, s, alpha(b), c):
        exist = existence_bound(b, smallest_prime_factor(b), s, d, c=c)
    mw = min_dick_weight(pg) if with_min_weight else None
    return WafomReport(pg.group.moduli, s, pg.n, pg.order, value, log_value, method,
                       min_weight=mw, lower_bound=lower, existence_bound=exist,
                       wafom_fraction=frac, seed=seed)


__all__ = [
    "INFINITE_WEIGHT", "BoundParams", "OrderWindow", "WafomReport", "alpha", "evaluate",
    "existence_bound", "existence_threshold", "lower_bound", "lower_bound_threshold",
    "min_weight_ceiling", "min_weight_ceiling_smooth", "order_constants", "order_window",
    "tail_bound", "tail_exact", "tail_exact_fraction", "tail_threshold",
    "unconditional_lower_bound", "wafom_dual", "wafom_exact", "wafom_fast", "wafom_log_b",
]
