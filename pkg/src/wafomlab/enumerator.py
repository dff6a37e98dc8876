"""Dick-weight enumerator of P-perp computed from P, and its brute-force
counterpart computed from an explicit dual.

The identity used here is

    W_{P-perp}(1, y) = |P|^-1 * sum_{B in P} prod_{i,j} (1 + eta(b_ij) y^j),

with eta = b-1 on zero entries and -1 elsewhere.  The product for a given B
depends only on its zero profile z_j(B) = #{i : b_ij = 0}, so points are
grouped by profile and each group contributes

    count * prod_j (1 + (b-1) y^j)^{z_j} (1 - y^j)^{s - z_j}.

Everything is exact integer arithmetic; the division by |P| happens once.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapacityError, CorruptGroupError
from .netgen import PointGroup, dual
from .weight import dick_weights, max_weight

INFINITE_WEIGHT = math.inf
CWE_CAPACITY = 1 << 20
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class WeightEnumerator:
    """Coefficients a_m = #{A in P-perp : mu(A) = m} for m <= truncation_degree."""

    b: int
    s: int
    n: int
    order: int  # |P|
    coefficients: tuple[int, ...]

    @property
    def M(self) -> int:
        return max_weight(self.s, self.n)

    @property
    def truncation_degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def truncated(self) -> bool:
        return self.truncation_degree < self.M

    def __getitem__(self, m: int) -> int:
        return self.coefficients[m] if 0 <= m < len(self.coefficients) else 0

    def min_weight(self) -> int | float | None:
        """First m >= 1 with a_m != 0; INFINITE_WEIGHT if the full dual is {O};
        None if the truncation hides it."""
        for m, a in enumerate(self.coefficients[1:], start=1):
            if a:
                return m
        return None if self.truncated else INFINITE_WEIGHT

    def evaluate(self, y: Fraction) -> Fraction:
        """W(1, y) as an exact rational (over the stored coefficients)."""
        y = Fraction(y)
        acc, power = Fraction(0), Fraction(1)
        for a in self.coefficients:
            acc += a * power
            power *= y
        return acc

    def to_text(self) -> str:
        lines = [f"# {self.b} {self.s} {self.n} {self.M} {self.order}"]
        lines += [f"{m} {a}" for m, a in enumerate(self.coefficients)]
        return "\n".join(lines) + "\n"


def zero_profiles(pg: PointGroup) -> tuple[np.ndarray, np.ndarray]:
    """Distinct zero profiles (K x n) of the points of P and their counts."""
    z = (pg.elements == 0).sum(axis=1)
    radix = pg.s + 1
    if radix ** pg.n <= 1 << 22:
        keys = z.astype(np.int64) @ (radix ** np.arange(pg.n, dtype=np.int64))
        counts = np.bincount(keys, minlength=radix ** pg.n)
        present = np.flatnonzero(counts)
        profiles = (present[:, None] // radix ** np.arange(pg.n)) % radix
        return profiles, counts[present]
    profiles, counts = np.unique(z, axis=0, return_counts=True)
    return profiles, counts


def factor_table(b: int, s: int, dtype=np.int64) -> np.ndarray:
    """table[z, t] = [u^t] (1 + (b-1)u)^z (1 - u)^(s-z), for 0 <= z, t <= s."""
    table = np.zeros((s + 1, s + 1), dtype=dtype)
    for z in range(s + 1):
        for t in range(s + 1):
            table[z, t] = sum(math.comb(z, k) * (b - 1) ** k * math.comb(s - z, t - k) * (-1) ** (t - k)
                              for k in range(max(0, t - (s - z)), min(z, t) + 1))
    return table


def _profile_polynomials(b: int, s: int, n: int, profiles: np.ndarray, counts: np.ndarray,
                         degree: int, exact_objects: bool) -> list[int]:
    dtype = object if exact_objects else np.int64
    table = factor_table(b, s, dtype=dtype)
    k = profiles.shape[0]
    polys = np.zeros((k, degree + 1), dtype=dtype)
    polys[:, 0] = 1
    for j in range(1, n + 1):
        z = profiles[:, j - 1]
        new = np.zeros_like(polys)
        for t in range(s + 1):
            shift = j * t
            if shift > degree:
                break
            coef = table[z, t]
            new[:, shift:] += coef[:, None] * polys[:, :degree + 1 - shift]
        polys = new
    weights = counts.astype(dtype)
    total = (weights[:, None] * polys).sum(axis=0)
    return [int(x) for x in total]


def weight_enumerator(pg: PointGroup, truncation_degree: int | None = None) -> WeightEnumerator:
    b, s, n = pg.group.order, pg.s, pg.n
    top = max_weight(s, n)
    degree = top if truncation_degree is None else min(int(truncation_degree), top)
    if degree < 0:
        raise ValueError("truncation degree must be >= 0")
    profiles, counts = zero_profiles(pg)
    exact_objects = pg.order * b ** (s * n) >= _INT64_SAFE
    sums = _profile_polynomials(b, s, n, profiles, counts, degree, exact_objects)
    coeffs = []
    for m, x in enumerate(sums):
        q, r = divmod(x, pg.order)
        if r:
            raise CorruptGroupError(f"coefficient {m} not divisible by |P| = {pg.order}")
        coeffs.append(q)
    if coeffs[0] != 1:
        raise CorruptGroupError(f"a_0 = {coeffs[0]}; the point set is not a subgroup")
    return WeightEnumerator(b, s, n, pg.order, tuple(coeffs))


def direct_enumerator(dual_elements: np.ndarray, b: int) -> WeightEnumerator:
    """Histogram of mu over an explicit list of dual elements."""
    dual_elements = np.asarray(dual_elements)
    _, s, n = dual_elements.shape
    hist = np.bincount(dick_weights(dual_elements), minlength=max_weight(s, n) + 1)
    order, rem = divmod(b ** (s * n), dual_elements.shape[0])
    if rem:
        raise CorruptGroupError("dual size does not divide b^(sn)")
    return WeightEnumerator(b, s, n, order, tuple(int(x) for x in hist))


def log_ceil(b: int, x: int) -> int:
    """Smallest d >= 0 with b^d >= x."""
    d, acc = 0, 1
    while acc < x:
        acc *= b
        d += 1
    return d


def min_weight_truncation(s: int, d: int) -> int:
    """ceil(d^2/(2s) + 3d/2 + s)."""
    return math.ceil(Fraction(d * d, 2 * s) + Fraction(3 * d, 2) + s)


def min_dick_weight(pg: PointGroup) -> int | float:
    """delta_{P-perp}; INFINITE_WEIGHT when P-perp = {O}."""
    b, s, n = pg.group.order, pg.s, pg.n
    if pg.order == pg.ambient_size:
        return INFINITE_WEIGHT
    top = max_weight(s, n)
    degree = min(min_weight_truncation(s, log_ceil(b, pg.order)), top)
    while True:
        found = weight_enumerator(pg, degree).min_weight()
        if found is not None:
            return found
        if degree >= top:
            raise CorruptGroupError("no nonzero dual element although P is proper")
        degree = min(2 * degree, top)


def complete_weight_enumerator(pg: PointGroup) -> dict[tuple[int, ...], int]:
    """Counts of per-column nonzero patterns (w_1..w_n) over an explicit P-perp.

    This is the specialisation x_{i,j}(0) -> x_j, x_{i,j}(h != 0) -> y_j of the
    complete weight enumerator: the monomial of A is prod_j x_j^{s-w_j} y_j^{w_j}.
    """
    if pg.ambient_size > CWE_CAPACITY:
        raise CapacityError(f"b^(sn) = {pg.ambient_size} exceeds {CWE_CAPACITY}")
    w = (dual(pg) != 0).sum(axis=1)
    patterns, counts = np.unique(w, axis=0, return_counts=True)
    return {tuple(int(x) for x in p): int(c) for p, c in zip(patterns, counts)}


def column_weight_enumerator(pg: PointGroup) -> dict[tuple[int, ...], int]:
    """Same object as :func:`complete_weight_enumerator`, computed from P via
    |P|^-1 sum_B prod_j (x_j + (b-1) y_j)^{z_j} (x_j - y_j)^{s-z_j}."""
    b, s, n = pg.group.order, pg.s, pg.n
    if (s + 1) ** n * max(1, pg.order) > 1 << 24:
        raise CapacityError("too many column patterns for a dense expansion")
    table = factor_table(b, s)
    profiles, counts = zero_profiles(pg)
    acc = counts.astype(np.int64)[:, None]
    for j in range(n):
        acc = (acc[:, :, None] * table[profiles[:, j]][:, None, :]).reshape(acc.shape[0], -1)
    totals = acc.sum(axis=0)
    out = {}
    for pattern, total in zip(itertools.product(range(s + 1), repeat=n), totals):
        if total:
            q, r = divmod(int(total), pg.order)
            if r:
                raise CorruptGroupError(f"pattern {pattern} not divisible by |P|")
            out[pattern] = q
    return out


def specialize(cwe: dict[tuple[int, ...], int], b: int, s: int, n: int, order: int) -> WeightEnumerator:
    """x_j -> 1, y_j -> y^j: collapse column patterns to Dick weights."""
    coeffs = [0] * (max_weight(s, n) + 1)
    for pattern, count in cwe.items():
        coeffs[sum(j * w for j, w in enumerate(pattern, start=1))] += count
    return WeightEnumerator(b, s, n, order, tuple(coeffs))
