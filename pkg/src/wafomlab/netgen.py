"""Point groups P in G^(s x n): spans of generator matrices, digital nets
from generating matrices, and brute-force dual groups."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .abelian import GroupSpec, flat_index, space_matrices, space_size
from .errors import CapacityError, CorruptGroupError, SpecMismatchError

log = logging.getLogger(__name__)

SPAN_CAPACITY = 1 << 24
DUAL_CAPACITY = 1 << 24
_DUAL_CHUNK = 1 << 16


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """d matrices B_1..B_d in G^(s x n), stored as an array of shape (d, s, n)."""

    group: GroupSpec
    s: int
    n: int
    generators: np.ndarray

    def __post_init__(self) -> None:
        gens = np.asarray(self.generators)
        if gens.ndim == 2:
            gens = gens[None]
        if gens.ndim != 3 or gens.shape[0] < 1:
            raise ValueError("need at least one generator matrix")
        if gens.shape[1:] != (self.s, self.n):
            raise SpecMismatchError(f"generators have shape {gens.shape[1:]}, expected {(self.s, self.n)}")
        if gens.size and (gens.min() < 0 or gens.max() >= self.group.order):
            raise ValueError("generator entry out of range")
        gens = gens.astype(self.group.dtype)
        gens.setflags(write=False)
        object.__setattr__(self, "generators", gens)

    @property
    def d(self) -> int:
        return self.generators.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeneratorSet):
            return NotImplemented
        return (self.group == other.group and self.s == other.s and self.n == other.n
                and np.array_equal(self.generators, other.generators))

    def to_generating_matrices(self) -> GeneratingMatrices:
        if not self.group.is_cyclic:
            raise SpecMismatchError("generating matrices exist only over Z_b")
        return GeneratingMatrices(self.group.order, self.generators.transpose(1, 2, 0))


@dataclass(frozen=True, eq=False)
class GeneratingMatrices:
    """C_1..C_s in Z_b^(n x d), stored as an array of shape (s, n, d)."""

    base: int
    matrices: np.ndarray

    def __post_init__(self) -> None:
        mats = np.asarray(self.matrices, dtype=np.int64)
        if mats.ndim != 3:
            raise ValueError("matrices must have shape (s, n, d)")
        if mats.size and (mats.min() < 0 or mats.max() >= self.base):
            raise ValueError(f"generating matrix entry out of range for base {self.base}")
        mats.setflags(write=False)
        object.__setattr__(self, "matrices", mats)

    @property
    def s(self) -> int:
        return self.matrices.shape[0]

    @property
    def n(self) -> int:
        return self.matrices.shape[1]

    @property
    def d(self) -> int:
        return self.matrices.shape[2]

    def basis(self) -> np.ndarray:
        """X_1..X_d: row j of X_i is the transpose of column i of C_j."""
        return self.matrices.transpose(2, 0, 1).copy()

    def to_generator_set(self) -> GeneratorSet:
        return GeneratorSet(GroupSpec.cyclic(self.base), self.s, self.n, self.basis())


@dataclass(frozen=True, eq=False)
class PointGroup:
    """An explicitly enumerated subgroup of G^(s x n)."""

    group: GroupSpec
    s: int
    n: int
    elements: np.ndarray
    generators: np.ndarray
    provenance: str = "span"
    free: bool | None = None

    def __post_init__(self) -> None:
        for name in ("elements", "generators"):
            arr = np.asarray(getattr(self, name), dtype=self.group.dtype)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    def __len__(self) -> int:
        return self.order

    @cached_property
    def flat_indices(self) -> frozenset[int]:
        return frozenset(int(k) for k in flat_index(self.group, self.elements))

    def __contains__(self, mat) -> bool:
        return _contains(self.elements, np.asarray(mat))

    def issubset(self, other: PointGroup) -> bool:
        return self.flat_indices <= other.flat_indices

    def same_set(self, other: PointGroup) -> bool:
        return self.flat_indices == other.flat_indices

    @property
    def ambient_size(self) -> int:
        return space_size(self.group, self.s, self.n)


def _contains(elements: np.ndarray, mat: np.ndarray) -> bool:
    flat = elements.reshape(elements.shape[0], -1)
    return bool(np.any(np.all(flat == mat.reshape(1, -1), axis=1)))


def span_matrices(group: GroupSpec, s: int, n: int, mats: np.ndarray, *,
                  provenance: str = "span", capacity: int = SPAN_CAPACITY) -> PointGroup:
    """Subgroup generated by ``mats`` under addition.

    Each generator B extends the current group P by the cosets P + kB for
    k below the order of B modulo P, so no deduplication pass is needed.
    """
    mats = np.asarray(mats, dtype=group.dtype).reshape(-1, s, n)
    elements = group.zero_matrix(s, n)[None]
    for gen in mats:
        t, cur = 1, gen
        while not _contains(elements, cur):
            cur = group.add(cur, gen)
            t += 1
        if t == 1:
            continue
        if elements.shape[0] * t > capacity:
            raise CapacityError(f"span exceeds {capacity} elements")
        multiples = group.mul_table[np.arange(t)[:, None, None], gen[None]]
        elements = group.add_table[multiples[:, None], elements[None]].reshape(-1, s, n)
    return PointGroup(group, s, n, elements, mats, provenance=provenance)


def span(gens: GeneratorSet, *, capacity: int = SPAN_CAPACITY) -> PointGroup:
    """Subgroup generated by B_1..B_d (the Z_b-linear span when G = Z_b)."""
    return span_matrices(gens.group, gens.s, gens.n, gens.generators,
                         provenance="span", capacity=capacity)


def digital_net(gm: GeneratingMatrices, *, capacity: int = SPAN_CAPACITY) -> PointGroup:
    """Points x_k = sum_i kappa_{i-1} X_i for k = 0..b^d-1, duplicates removed.

    ``free`` records whether X_1..X_d are a free basis, i.e. |P| = b^d.
    Non-free inputs are accepted and logged.
    """
    b, d = gm.base, gm.d
    group = GroupSpec.cyclic(b)
    if b ** d > capacity:
        raise CapacityError(f"b^d = {b ** d} exceeds {capacity}")
    basis = gm.basis().reshape(d, -1)
    k = np.arange(b ** d, dtype=np.int64)
    kappa = np.stack([(k // b ** i) % b for i in range(d)], axis=1)
    points = (kappa @ basis) % b
    _, first = np.unique(points, axis=0, return_index=True)
    points = points[np.sort(first)].reshape(-1, gm.s, gm.n)
    free = points.shape[0] == b ** d
    if not free:
        log.info("generating matrices are not a free basis: |P| = %d < b^d = %d",
                    points.shape[0], b ** d)
    return PointGroup(group, gm.s, gm.n, points, gm.basis(), provenance="digital-net", free=free)


def whole_group(group: GroupSpec, s: int, n: int) -> PointGroup:
    k = group.rank
    units = np.array([group.encode(tuple(int(i == c) for i in range(k))) for c in range(k)])
    gens = np.zeros((s * n * k, s * n), dtype=group.dtype)
    for p in range(s * n):
        gens[p * k:(p + 1) * k, p] = units
    return span_matrices(group, s, n, gens.reshape(-1, s, n), provenance="whole-group")


def trivial_group(group: GroupSpec, s: int, n: int) -> PointGroup:
    zero = group.zero_matrix(s, n)[None]
    return PointGroup(group, s, n, zero, zero, provenance="trivial")


def dual(pg: PointGroup, *, capacity: int = DUAL_CAPACITY) -> np.ndarray:
    """P-perp by testing every candidate against the generators of P only."""
    group, s, n = pg.group, pg.s, pg.n
    total = space_size(group, s, n)
    if total > capacity:
        raise CapacityError(f"|G^(s x n)| = {total} exceeds the dual capacity {capacity}")
    gens = pg.generators.reshape(pg.generators.shape[0], -1)
    gens = gens[np.any(gens != 0, axis=1)]
    found = []
    for start in range(0, total, _DUAL_CHUNK):
        cand = space_matrices(group, s, n, start, start + _DUAL_CHUNK).reshape(-1, s * n)
        ok = np.ones(cand.shape[0], dtype=bool)
        for g in gens:
            ok &= group.pair_exponent[cand, g[None, :]].sum(axis=1) % group.order == 0
        found.append(cand[ok])
    out = np.concatenate(found).reshape(-1, s, n)
    if out.shape[0] * pg.order != total:
        raise CorruptGroupError(
            f"|P| * |P-perp| = {pg.order} * {out.shape[0]} != {total}; P is not a subgroup")
    return out
