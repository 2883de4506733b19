"""Exhaustive Winterhof check over every F_p-subspace of F_{p^n}.

For a subspace V, x -> psi(a x) is a character of V, so the inner sum is
|V| when Tr(a V) = 0 and exactly 0 otherwise. The sweep therefore tracks,
for each subspace, the set of multipliers a annihilating it, as a bitset.
Subspaces are visited once each, by their reduced row echelon forms, in a
depth-first walk that appends rows with decreasing pivot columns; adding a
row v intersects the parent's annihilator with {a : Tr(a v) = 0}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import CapacityError
from .field_fpn import ExtFieldDesc

MAX_SUBSPACES = 1 << 28


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if not 0 <= k <= n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(p: int, n: int) -> int:
    return sum(gaussian_binomial(n, k, p) for k in range(n + 1))


def rref_bases(p: int, n: int):
    """Yield the RREF basis (rows as coordinate tuples) of every subspace of F_p^n."""
    for d in range(n + 1):
        for pivots in itertools.combinations(range(n), d):
            free = [(r, c) for r, j in enumerate(pivots) for c in range(j + 1, n) if c not in pivots]
            for vals in itertools.product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(d)]
                for r, j in enumerate(pivots):
                    rows[r][j] = 1
                for (r, c), v in zip(free, vals):
                    rows[r][c] = v
                yield [tuple(row) for row in rows]


def zero_set_bitsets(fld: ExtFieldDesc) -> np.ndarray:
    """Row v (a field index) is the bitset of all a with Tr(a v) = 0."""
    size = fld.size
    coords = fld.all_coords()
    zero = (coords @ fld.trace_gram @ coords.T) % fld.p == 0
    zero = np.pad(zero, ((0, 0), (0, (-size) % 64)))
    packed = np.packbits(zero, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64)


@njit(cache=True)
def popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit(cache=True)
def _sweep(p, n, zero_sets, start):
    words = zero_sets.shape[1]
    ann = np.empty((n + 1, words), np.uint64)
    ann[0, :] = start
    pivmask = np.zeros(n + 1, np.int64)
    minpiv = np.zeros(n + 1, np.int64)
    cur_j = np.zeros(n + 1, np.int64)
    cur_t = np.zeros(n + 1, np.int64)
    limit = np.zeros(n + 1, np.int64)
    ppow = np.ones(n + 1, np.int64)
    for i in range(1, n + 1):
        ppow[i] = ppow[i - 1] * p
    visited = np.zeros(n + 1, np.int64)
    hi = np.zeros(n + 1, np.int64)
    lo = np.full(n + 1, ppow[n] * ppow[n], np.int64)

    count = 0
    for w in range(words):
        count += popcount64(ann[0, w])
    visited[0] = 1
    hi[0] = count
    lo[0] = count
    minpiv[0] = n
    limit[0] = ppow[n - 1]
    d = 0
    while True:
        if cur_j[d] >= minpiv[d]:
            if d == 0:
                break
            d -= 1
            cur_t[d] += 1
            continue
        if cur_t[d] >= limit[d]:
            cur_j[d] += 1
            cur_t[d] = 0
            j = cur_j[d]
            if j < minpiv[d]:
                nfree = 0
                for c in range(j + 1, n):
                    if (pivmask[d] >> c) & 1 == 0:
                        nfree += 1
                limit[d] = ppow[nfree]
            continue
        j = cur_j[d]
        t = cur_t[d]
        row = ppow[j]
        for c in range(j + 1, n):
            if (pivmask[d] >> c) & 1 == 0:
                row += (t % p) * ppow[c]
                t //= p
        count = 0
        for w in range(words):
            v = ann[d, w] & zero_sets[row, w]
            ann[d + 1, w] = v
            count += popcount64(v)
        agg = ppow[d + 1] * count
        visited[d + 1] += 1
        if agg > hi[d + 1]:
            hi[d + 1] = agg
        if agg < lo[d + 1]:
            lo[d + 1] = agg
        d += 1
        pivmask[d] = pivmask[d - 1] | (1 << j)
        minpiv[d] = j
        cur_j[d] = 0
        cur_t[d] = 0
        nfree = 0
        for c in range(1, n):
            if (pivmask[d] >> c) & 1 == 0:
                nfree += 1
        limit[d] = ppow[nfree]
    return visited, lo, hi


@dataclass(frozen=True)
class WinterhofSweep:
    p: int
    n: int
    reduction_poly: tuple
    subspaces_by_dim: tuple
    min_aggregate_by_dim: tuple
    max_aggregate_by_dim: tuple

    @property
    def cap(self) -> int:
        return self.p**self.n

    @property
    def subspaces(self) -> int:
        return sum(self.subspaces_by_dim)

    @property
    def passed(self) -> bool:
        return max(self.max_aggregate_by_dim) <= self.cap

    @property
    def always_equal(self) -> bool:
        return set(self.min_aggregate_by_dim) | set(self.max_aggregate_by_dim) == {self.cap}

    def to_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "reduction_poly": list(self.reduction_poly),
                "subspaces": self.subspaces, "subspaces_by_dim": list(self.subspaces_by_dim),
                "min_aggregate_by_dim": list(self.min_aggregate_by_dim),
                "max_aggregate_by_dim": list(self.max_aggregate_by_dim),
                "cap": self.cap, "passed": self.passed, "always_equal": self.always_equal}


def winterhof_sweep(fld: ExtFieldDesc) -> WinterhofSweep:
    """Evaluate sum_a |sum_{x in V} psi(a x)| for every subspace V (the aggregate
    of each subspace is exact: an integer)."""
    if subspace_count(fld.p, fld.n) > MAX_SUBSPACES:
        raise CapacityError(f"F_{fld.p}^{fld.n} has too many subspaces to sweep")
    zero_sets = zero_set_bitsets(fld)
    start = np.packbits(np.pad(np.ones(fld.size, bool), (0, (-fld.size) % 64)),
                        bitorder="little").view(np.uint64)
    visited, lo, hi = _sweep(fld.p, fld.n, zero_sets, start)
    return WinterhofSweep(fld.p, fld.n, fld.reduction_poly, tuple(int(v) for v in visited),
                          tuple(int(v) for v in lo), tuple(int(v) for v in hi))
