"""Finite abelian groups as products of cyclic groups, their characters and
brute-force Fourier transforms on G^(s x n).

Group elements are stored as integer codes in ``[0, b)`` using a little-endian
mixed radix over the moduli, so that digit matrices are plain integer arrays of
shape ``(s, n)``.  For a cyclic group the code is the residue itself.  The
character group is identified with G through the pairing
``h . g = prod_i omega_{m_i}^{h_i g_i}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import CapacityError, SpecMismatchError

DFT_CAPACITY = 1 << 24
NAIVE_DFT_CAPACITY = 1 << 12


def smallest_prime_factor(b: int) -> int:
    if b < 2:
        raise ValueError(f"no prime factor for {b}")
    p = 2
    while p * p <= b:
        if b % p == 0:
            return p
        p += 1
    return b


@dataclass(frozen=True)
class GroupSpec:
    """G = Z_{m_1} x ... x Z_{m_k}."""

    moduli: tuple[int, ...]

    def __post_init__(self) -> None:
        moduli = tuple(int(m) for m in self.moduli)
        if not moduli:
            raise ValueError("a group needs at least one cyclic factor")
        if any(m < 2 for m in moduli):
            raise ValueError(f"every modulus must be >= 2, got {moduli}")
        object.__setattr__(self, "moduli", moduli)

    @classmethod
    def cyclic(cls, b: int) -> GroupSpec:
        return cls((b,))

    @classmethod
    def parse(cls, text: str) -> GroupSpec:
        """Parse ``"6"`` or ``"2,3"``."""
        try:
            moduli = tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)
        except ValueError as exc:
            raise ValueError(f"bad moduli list {text!r}") from exc
        return cls(moduli)

    def __str__(self) -> str:
        return ",".join(str(m) for m in self.moduli)

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def smallest_prime_factor(self) -> int:
        return smallest_prime_factor(self.order)

    @property
    def is_cyclic(self) -> bool:
        return len(self.moduli) == 1

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(np.uint8) if self.order <= 256 else np.dtype(np.int32)

    # -- element coding ---------------------------------------------------

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        strides, acc = [], 1
        for m in self.moduli:
            strides.append(acc)
            acc *= m
        return tuple(strides)

    def encode(self, residues: Sequence[int] | int) -> int:
        if isinstance(residues, (int, np.integer)):
            if self.rank != 1:
                raise SpecMismatchError(f"integer element given for non-cyclic group {self}")
            residues = (int(residues),)
        residues = tuple(int(r) for r in residues)
        if len(residues) != self.rank:
            raise SpecMismatchError(f"element {residues} does not match moduli {self.moduli}")
        for r, m in zip(residues, self.moduli):
            if not 0 <= r < m:
                raise ValueError(f"residue {r} out of range for modulus {m}")
        return sum(r * st for r, st in zip(residues, self._strides))

    def decode(self, code: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.residues[int(code)])

    @cached_property
    def residues(self) -> np.ndarray:
        """``residues[code]`` is the residue tuple of ``code``."""
        codes = np.arange(self.order)
        cols = [(codes // st) % m for st, m in zip(self._strides, self.moduli)]
        return np.stack(cols, axis=1).astype(np.int64)

    def _from_residues(self, res: np.ndarray) -> np.ndarray:
        return (res % np.array(self.moduli)) @ np.array(self._strides)

    @cached_property
    def add_table(self) -> np.ndarray:
        r = self.residues
        return self._from_residues(r[:, None, :] + r[None, :, :]).astype(self.dtype)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self._from_residues(-self.residues).astype(self.dtype)

    @cached_property
    def mul_table(self) -> np.ndarray:
        """``mul_table[t, g]`` is the t-fold sum of g, for 0 <= t < b."""
        t = np.arange(self.order)[:, None, None]
        return self._from_residues(t * self.residues[None, :, :]).astype(self.dtype)

    @cached_property
    def pair_exponent(self) -> np.ndarray:
        """``h . g = omega_b ** pair_exponent[h, g]``."""
        b = self.order
        scale = np.array([b // m for m in self.moduli])
        r = self.residues
        e = (r[:, None, :] * r[None, :, :]) % np.array(self.moduli)
        return (e * scale).sum(axis=2) % b

    @cached_property
    def roots(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.order) / self.order)

    @cached_property
    def character_table(self) -> np.ndarray:
        return self.roots[self.pair_exponent]

    # -- matrices -----------------------------------------------------------

    def as_matrix(self, entries) -> np.ndarray:
        """Coerce nested lists of codes (or residue tuples, for product groups)
        into a code array."""
        arr = np.asarray(entries, dtype=np.int64)
        if self.rank > 1 and arr.ndim >= 1 and arr.shape[-1] == self.rank and arr.ndim == 3:
            arr = self._checked_residues(arr)
        if arr.size and (arr.min() < 0 or arr.max() >= self.order):
            raise ValueError(f"entry out of range for group of order {self.order}")
        return arr.astype(self.dtype)

    def _checked_residues(self, arr: np.ndarray) -> np.ndarray:
        mod = np.array(self.moduli)
        if (arr < 0).any() or (arr >= mod).any():
            raise ValueError(f"residue out of range for moduli {self.moduli}")
        return arr @ np.array(self._strides)

    def zero_matrix(self, s: int, n: int) -> np.ndarray:
        return np.zeros((s, n), dtype=self.dtype)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.add_table[a, b]

    def neg(self, a: np.ndarray) -> np.ndarray:
        return self.neg_table[a]


def _code(group: GroupSpec, x) -> int:
    if isinstance(x, (int, np.integer)):
        x = int(x)
        if not 0 <= x < group.order:
            raise ValueError(f"element code {x} out of range for order {group.order}")
        return x
    return group.encode(x)


def pair(group: GroupSpec, h, g) -> complex:
    """Value of the character h at g, a b-th root of unity."""
    return complex(group.roots[group.pair_exponent[_code(group, h), _code(group, g)]])


def matrix_pair_exponent(group: GroupSpec, a: np.ndarray, b: np.ndarray) -> int:
    """Exponent e with ``A . B = omega_b ** e``, exact."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise SpecMismatchError(f"shape mismatch {a.shape} vs {b.shape}")
    return int(group.pair_exponent[a, b].sum() % group.order)


def matrix_pair(group: GroupSpec, a: np.ndarray, b: np.ndarray) -> complex:
    return complex(group.roots[matrix_pair_exponent(group, a, b)])


# -- the ambient space G^(s x n) ------------------------------------------------


def space_size(group: GroupSpec, s: int, n: int) -> int:
    return group.order ** (s * n)


def space_matrices(group: GroupSpec, s: int, n: int, start: int = 0,
                   stop: int | None = None) -> np.ndarray:
    """Matrices with flat indices in ``[start, stop)``.

    The flat index reads the row-major flattened matrix as big-endian base-b
    digits, so ``values.reshape((b,) * (s * n))`` puts position p on axis p.
    """
    total = space_size(group, s, n)
    stop = total if stop is None else min(stop, total)
    idx = np.arange(start, stop, dtype=np.int64)
    b = group.order
    digits = np.empty((idx.size, s * n), dtype=group.dtype)
    for p in range(s * n - 1, -1, -1):
        digits[:, p] = idx % b
        idx //= b
    return digits.reshape(-1, s, n)


def flat_index(group: GroupSpec, mats: np.ndarray) -> np.ndarray:
    """Inverse of :func:`space_matrices` for a stack of matrices."""
    mats = np.asarray(mats)
    flat = mats.reshape(mats.shape[0], -1).astype(np.int64)
    b = group.order
    out = np.zeros(flat.shape[0], dtype=np.int64)
    for p in range(flat.shape[1]):
        out = out * b + flat[:, p]
    return out


def _check_dft_domain(group: GroupSpec, s: int, n: int, values: np.ndarray,
                      capacity: int) -> np.ndarray:
    total = space_size(group, s, n)
    if total > capacity:
        raise CapacityError(f"|G^(s x n)| = {total} exceeds the brute-force capacity {capacity}")
    values = np.asarray(values, dtype=complex).reshape(-1)
    if values.size != total:
        raise SpecMismatchError(f"expected {total} values, got {values.size}")
    return values


def dft(group: GroupSpec, s: int, n: int, values: np.ndarray) -> np.ndarray:
    """``fhat(h) = b^-sn * sum_g f(g) (h . g)`` for every character h.

    The character of G^(s x n) is a product of per-position characters, so the
    defining sum is evaluated one position at a time (a tensor contraction
    with the b x b character table), not by a fast transform.
    """
    values = _check_dft_domain(group, s, n, values, DFT_CAPACITY)
    b, sn = group.order, s * n
    if sn == 0:
        return values.copy()
    f = values.reshape((b,) * sn)
    table = group.character_table
    for axis in range(sn):
        f = np.moveaxis(np.tensordot(table, f, axes=([1], [axis])), 0, axis)
    return f.reshape(-1) / values.size


def dft_naive(group: GroupSpec, s: int, n: int, values: np.ndarray) -> np.ndarray:
    """Literal double sum over (h, g); quadratic cost, tiny domains only."""
    values = _check_dft_domain(group, s, n, values, NAIVE_DFT_CAPACITY)
    mats = space_matrices(group, s, n).reshape(values.size, -1)
    out = np.empty(values.size, dtype=complex)
    for hi, h in enumerate(mats):
        e = group.pair_exponent[h[None, :], mats].sum(axis=1) % group.order
        out[hi] = (values * group.roots[e]).sum()
    return out / values.size


def inverse_dft(group: GroupSpec, s: int, n: int, coeffs: np.ndarray) -> np.ndarray:
    """``f(g) = sum_h fhat(-h) (h . g)``."""
    coeffs = _check_dft_domain(group, s, n, coeffs, DFT_CAPACITY)
    b, sn = group.order, s * n
    if sn == 0:
        return coeffs.copy()
    mats = space_matrices(group, s, n)
    negated = coeffs[flat_index(group, group.neg(mats))]
    f = negated.reshape((b,) * sn)
    table = group.character_table
    for axis in range(sn):
        f = np.moveaxis(np.tensordot(table, f, axes=([0], [axis])), 0, axis)
    return f.reshape(-1)


def character_sum(group: GroupSpec, characters: np.ndarray, g: np.ndarray) -> complex:
    """``sum_{h in characters} h . g``."""
    characters = np.asarray(characters)
    flat = characters.reshape(characters.shape[0], -1)
    e = group.pair_exponent[flat, np.asarray(g).reshape(1, -1)].sum(axis=1) % group.order
    return complex(group.roots[e].sum())


def poisson_sum_check(values: np.ndarray, point_group) -> tuple[complex, complex]:
    """Both sides of ``|P|^-1 sum_{g in P} f(g) = sum_{h in P-perp} fhat(h)``."""
    from .netgen import dual

    group, s, n = point_group.group, point_group.s, point_group.n
    values = _check_dft_domain(group, s, n, values, DFT_CAPACITY)
    lhs = values[flat_index(group, point_group.elements)].mean()
    fhat = dft(group, s, n, values)
    rhs = fhat[flat_index(group, dual(point_group))].sum()
    return complex(lhs), complex(rhs)
