"""Dick weight, sphere sizes S_{s,n}(m), ball volumes and their exponential
bounds.

All counts are exact Python integers: they reach b^(sn) quickly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError

HISTOGRAM_CAPACITY = 1 << 28


def max_weight(s: int, n: int) -> int:
    """M = n(n+1)s/2, the weight of a matrix with no zero entry."""
    return n * (n + 1) * s // 2


def dick_weight(a) -> int:
    """mu(A) = sum over nonzero entries a_{i,j} of the column index j (1-based)."""
    a = np.asarray(a)
    cols = np.arange(1, a.shape[-1] + 1)
    return int(((a != 0) * cols).sum())


def dick_weights(mats: np.ndarray) -> np.ndarray:
    """Vectorised :func:`dick_weight` over a stack of shape (N, s, n)."""
    mats = np.asarray(mats)
    cols = np.arange(1, mats.shape[-1] + 1)
    return ((mats != 0).sum(axis=-2) * cols).sum(axis=-1)


@dataclass(frozen=True)
class SphereSeries:
    b: int
    s: int
    n: int | None  # None for the stabilised series S_s
    coefficients: tuple[int, ...]

    def __getitem__(self, m: int) -> int:
        return self.coefficients[m] if 0 <= m < len(self.coefficients) else 0

    def __len__(self) -> int:
        return len(self.coefficients)

    def cumulative(self) -> tuple[int, ...]:
        out, acc = [], 0
        for c in self.coefficients:
            acc += c
            out.append(acc)
        return tuple(out)


def _product_series(b: int, s: int, kmax: int, m_max: int) -> list[int]:
    """Coefficients of prod_{k=1}^{kmax} (1 + (b-1) x^k)^s up to degree m_max."""
    binom = [math.comb(s, t) * (b - 1) ** t for t in range(s + 1)]
    poly = [0] * (m_max + 1)
    poly[0] = 1
    for k in range(1, min(kmax, m_max) + 1):
        new = [0] * (m_max + 1)
        for deg, c in enumerate(poly):
            if not c:
                continue
            for t, bt in enumerate(binom):
                e = deg + k * t
                if e > m_max:
                    break
                new[e] += c * bt
        poly = new
    return poly


def sphere_sizes(b: int, s: int, n: int, m_max: int | None = None) -> SphereSeries:
    """S_{s,n}(0..m_max); m_max defaults to n(n+1)s/2."""
    if m_max is None:
        m_max = max_weight(s, n)
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    return SphereSeries(b, s, n, tuple(_product_series(b, s, n, m_max)))


def sphere_sizes_stable(b: int, s: int, m_max: int) -> SphereSeries:
    """S_s(m) = S_{s,m}(m) for m = 0..m_max."""
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    return SphereSeries(b, s, None, tuple(_product_series(b, s, m_max, m_max)))


def volume(b: int, s: int, n: int, M: int) -> int:
    """vol_{s,n}(M) = #{A : mu(A) <= M}."""
    if M < 0:
        return 0
    return sum(sphere_sizes(b, s, n, min(M, max_weight(s, n))).coefficients)


def volume_stable(b: int, s: int, M: int) -> int:
    if M < 0:
        return 0
    return sum(sphere_sizes_stable(b, s, M).coefficients)


def volume_bound(b: int, s: int, M: float) -> float:
    """exp(2 sqrt((b-1) s M)); bounds both vol_s(M) and S_s(M)."""
    if M < 0:
        raise ValueError("M must be >= 0")
    return math.exp(2.0 * math.sqrt((b - 1) * s * M))


def exhaustive_sphere_sizes(b: int, s: int, n: int) -> tuple[int, ...]:
    """Histogram of mu over every matrix in Z_b^(s x n), by enumeration.

    Positions are split in two halves; the weight of each full matrix is the
    sum of the weights of its halves, evaluated for every pair.
    """
    total = b ** (s * n)
    if total > HISTOGRAM_CAPACITY:
        raise CapacityError(f"b^(sn) = {total} exceeds {HISTOGRAM_CAPACITY}")
    pos_weight = np.tile(np.arange(1, n + 1), s)
    half = len(pos_weight) // 2
    w1 = _partial_weights(b, pos_weight[:half])
    w2 = _partial_weights(b, pos_weight[half:])
    top = max_weight(s, n)
    hist = np.zeros(top + 1, dtype=np.int64)
    step = max(1, (1 << 22) // w2.size)
    for lo in range(0, w1.size, step):
        block = (w1[lo:lo + step, None] + w2[None, :]).ravel()
        hist += np.bincount(block, minlength=top + 1)
    return tuple(int(x) for x in hist)


def _partial_weights(b: int, weights: np.ndarray) -> np.ndarray:
    out = np.zeros(1, dtype=np.int64)
    for w in weights:
        digit_weight = np.where(np.arange(b) != 0, w, 0)
        out = (out[:, None] + digit_weight[None, :]).ravel()
    return out
