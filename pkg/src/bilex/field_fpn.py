"""Arithmetic in F_{p^n} = F_p[x]/(f) in the power basis 1, a, ..., a^(n-1).

Scalar operations go through :class:`FpnElement`; the audit and character-sum
code use the vectorized helpers (``coords_array``, ``mul_coords``,
``trace_gram``) on integer arrays instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import CapacityError, DomainError, ParameterError
from .field_fp import SubgroupDesc, cyclic_subgroup, is_prime

# polynomials are tuples of residues, constant term first


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a, b, p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def poly_divmod(a, b, p: int) -> tuple[list[int], list[int]]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    if not b:
        raise DomainError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv_lead % p
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return _trim(q), a


def poly_sub(a, b, p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def poly_gcd(a, b, p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, poly_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def poly_powmod(base, e: int, mod, p: int) -> list[int]:
    result = [1]
    base = poly_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = poly_divmod(poly_mul(result, base, p), mod, p)[1]
        base = poly_divmod(poly_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def is_irreducible(f, p: int) -> bool:
    """Rabin-style test: f of degree n is irreducible iff gcd(f, x^(p^i) - x) = 1 for i <= n/2."""
    f = _trim([c % p for c in f])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if n <= 3:
        # no roots <=> irreducible in degrees 2 and 3
        return all(sum(c * pow(x, i, p) for i, c in enumerate(f)) % p for x in range(p))
    xp = [0, 1]
    for _ in range(n // 2):
        xp = poly_powmod(xp, p, f, p)
        if len(poly_gcd(f, poly_sub(xp, [0, 1], p), p)) != 1:
            return False
    return True


def parse_poly(text: str) -> tuple[int, ...]:
    """Parse ``"1,1,1"`` (constant term first) into a coefficient tuple."""
    try:
        coeffs = tuple(int(c) for c in text.split(","))
    except ValueError as exc:
        raise ParameterError(f"bad polynomial text {text!r}") from exc
    if not coeffs:
        raise ParameterError("empty polynomial")
    return coeffs


def format_poly(coeffs) -> str:
    return ",".join(str(c) for c in coeffs)


@dataclass(frozen=True)
class ExtFieldDesc:
    p: int
    n: int
    reduction_poly: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ParameterError(f"characteristic {self.p} is not prime")
        if self.n < 1:
            raise ParameterError("extension degree must be >= 1")
        poly = tuple(c % self.p for c in self.reduction_poly)
        if len(poly) != self.n + 1 or poly[-1] != 1:
            raise ParameterError(f"reduction polynomial must be monic of degree {self.n}")
        if not is_irreducible(poly, self.p):
            raise ParameterError(f"{format_poly(poly)} is reducible over F_{self.p}")
        object.__setattr__(self, "reduction_poly", poly)

    @classmethod
    def from_text(cls, p: int, poly_text: str) -> ExtFieldDesc:
        coeffs = parse_poly(poly_text)
        return cls(p, len(coeffs) - 1, coeffs)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def size(self) -> int:
        return self.p**self.n

    @property
    def m(self) -> int:
        return self.p.bit_length()

    def __call__(self, value) -> FpnElement:
        """Build an element from a coordinate sequence or an integer index."""
        if isinstance(value, (int, np.integer)):
            return self.from_index(int(value))
        coords = tuple(int(c) % self.p for c in value)
        if len(coords) > self.n:
            raise ParameterError(f"{len(coords)} coordinates for a degree-{self.n} field")
        return FpnElement(coords + (0,) * (self.n - len(coords)), self)

    def zero(self) -> FpnElement:
        return FpnElement((0,) * self.n, self)

    def one(self) -> FpnElement:
        return FpnElement((1,) + (0,) * (self.n - 1), self)

    def gen(self) -> FpnElement:
        """The class of x, i.e. the basis element a."""
        if self.n == 1:
            # x = -f0 in the degenerate case
            return self((-self.reduction_poly[0],))
        return self((0, 1))

    def from_index(self, idx: int) -> FpnElement:
        if not 0 <= idx < self.size:
            raise ParameterError(f"index {idx} out of range")
        coords = []
        for _ in range(self.n):
            idx, r = divmod(idx, self.p)
            coords.append(r)
        return FpnElement(tuple(coords), self)

    def elements(self):
        return (self.from_index(i) for i in range(self.size))

    # --- vectorized helpers ------------------------------------------------

    @cached_property
    def _place(self) -> np.ndarray:
        return self.p ** np.arange(self.n, dtype=np.int64)

    def coords_array(self, elems) -> np.ndarray:
        return np.array([e.coords for e in elems], dtype=np.int64).reshape(-1, self.n)

    def all_coords(self) -> np.ndarray:
        """Coordinates of every element, row i holding the element with index i."""
        idx = np.arange(self.size, dtype=np.int64)
        return (idx[:, None] // self._place[None, :]) % self.p

    def index_of(self, coords: np.ndarray) -> np.ndarray:
        return np.asarray(coords, dtype=np.int64) @ self._place

    @cached_property
    def reduction_matrix(self) -> np.ndarray:
        """Row s holds the coordinates of x^s for s < 2n - 1."""
        rows = []
        for s in range(2 * self.n - 1):
            r = poly_divmod([0] * s + [1], self.reduction_poly, self.p)[1]
            rows.append(r + [0] * (self.n - len(r)))
        return np.array(rows, dtype=np.int64)

    def mul_coords(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Broadcasting product of coordinate arrays shaped (..., n)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        n, p = self.n, self.p
        shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
        conv = np.zeros(shape + (2 * n - 1,), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                conv[..., i + j] += a[..., i] * b[..., j]
        conv %= p
        return (conv @ self.reduction_matrix) % p

    @cached_property
    def trace_gram(self) -> np.ndarray:
        """Matrix T with Tr(x*y) = x @ T @ y (mod p) for coordinate vectors."""
        basis_traces = [trace(FpnElement(tuple(int(c) for c in row), self)).value
                        for row in self.reduction_matrix]
        n = self.n
        return np.array([[basis_traces[i + j] for j in range(n)] for i in range(n)],
                        dtype=np.int64)

    @cached_property
    def trace_vector(self) -> np.ndarray:
        """Traces of the basis elements, so Tr(x) = coords @ trace_vector (mod p)."""
        return self.trace_gram[0].copy()


@dataclass(frozen=True)
class FpnElement:
    coords: tuple[int, ...]
    field: ExtFieldDesc

    def __post_init__(self):
        f = self.field
        if len(self.coords) != f.n or any(not 0 <= c < f.p for c in self.coords):
            raise ParameterError(f"invalid coordinates {self.coords} for F_{f.p}^{f.n}")

    def __repr__(self):
        return f"F{self.field.p}^{self.field.n}{self.coords}"

    @property
    def index(self) -> int:
        return sum(c * self.field.p**i for i, c in enumerate(self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _coerce(self, other):
        if isinstance(other, int):
            return self.field((other,))
        return other

    def __add__(self, other):
        return fpn_add(self, self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return fpn_add(self, fpn_neg(self._coerce(other)))

    def __rsub__(self, other):
        return fpn_add(self._coerce(other), fpn_neg(self))

    def __mul__(self, other):
        return fpn_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return fpn_neg(self)

    def __truediv__(self, other):
        return fpn_mul(self, fpn_inv(self._coerce(other)))

    def __pow__(self, e: int):
        return fpn_pow(self, e)

    def inverse(self):
        return fpn_inv(self)


def _check_same(a: FpnElement, b: FpnElement) -> None:
    if not isinstance(b, FpnElement) or a.field != b.field:
        raise ParameterError("operands belong to different fields")


def fpn_add(a: FpnElement, b: FpnElement) -> FpnElement:
    _check_same(a, b)
    p = a.field.p
    return FpnElement(tuple((x + y) % p for x, y in zip(a.coords, b.coords)), a.field)


def fpn_neg(a: FpnElement) -> FpnElement:
    p = a.field.p
    return FpnElement(tuple(-x % p for x in a.coords), a.field)


def fpn_mul(a: FpnElement, b: FpnElement) -> FpnElement:
    _check_same(a, b)
    f = a.field
    r = poly_divmod(poly_mul(a.coords, b.coords, f.p), f.reduction_poly, f.p)[1]
    return FpnElement(tuple(r) + (0,) * (f.n - len(r)), f)


def fpn_inv(a: FpnElement) -> FpnElement:
    """Inverse by the extended Euclidean algorithm on polynomials."""
    if a.is_zero():
        raise DomainError("0 has no multiplicative inverse")
    f = a.field
    p = f.p
    r0, r1 = list(f.reduction_poly), _trim(list(a.coords))
    s0, s1 = [], [1]
    while r1:
        q, r = poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1, p), p)
    # r0 is a nonzero constant since f is irreducible
    inv_c = pow(r0[0], -1, p)
    s = poly_divmod([c * inv_c % p for c in s0], f.reduction_poly, p)[1]
    return FpnElement(tuple(s) + (0,) * (f.n - len(s)), f)


def fpn_pow(a: FpnElement, e: int) -> FpnElement:
    if e < 0:
        raise ParameterError("negative exponent")
    result, base = a.field.one(), a
    while e:
        if e & 1:
            result = fpn_mul(result, base)
        base = fpn_mul(base, base)
        e >>= 1
    return result


def trace(x: FpnElement):
    """Tr(x) = x + x^p + ... + x^(p^(n-1)), returned as an element of F_p."""
    from .field_fp import FieldDesc

    f = x.field
    acc, y = x, x
    for _ in range(f.n - 1):
        y = fpn_pow(y, f.p)
        acc = fpn_add(acc, y)
    if any(acc.coords[1:]):
        raise AssertionError(f"trace of {x!r} left the prime subfield")
    return FieldDesc(f.p)(acc.coords[0])


def mult_subgroup_fpn(fld: ExtFieldDesc, q: int, seed: int = 1) -> SubgroupDesc:
    """Subgroup of F_{p^n}* of order q; candidates are scanned by index from ``seed``."""
    size = fld.size

    def scan(start):
        for i in range(size - 1):
            yield fld.from_index((start - 1 + i) % (size - 1) + 1)

    return cyclic_subgroup(fld, size - 1, q, seed, scan)


@dataclass(frozen=True)
class AdditiveSubgroupDesc:
    """The F_p-span of ``basis_vectors``; ``elements`` lists all of it."""

    field: ExtFieldDesc
    basis_vectors: tuple
    elements: tuple
    rank: int


MAX_SUBSPACE_ELEMENTS = 1 << 16


def row_reduce(rows: np.ndarray, p: int) -> np.ndarray:
    """Reduced row echelon form over F_p with zero rows dropped."""
    m = np.array(rows, dtype=np.int64) % p
    if m.size == 0:
        return m.reshape(0, m.shape[-1] if m.ndim == 2 else 0)
    r = 0
    nrows, ncols = m.shape
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        for i in range(nrows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        r += 1
        if r == nrows:
            break
    return m[:r]


def additive_subgroup(fld: ExtFieldDesc, basis_vectors) -> AdditiveSubgroupDesc:
    vecs = tuple(basis_vectors)
    for v in vecs:
        if not isinstance(v, FpnElement) or v.field != fld:
            raise ParameterError(f"{v!r} is not an element of the field")
    ech = row_reduce(fld.coords_array(vecs), fld.p) if vecs else np.zeros((0, fld.n), np.int64)
    rank = ech.shape[0]
    if fld.p**rank > MAX_SUBSPACE_ELEMENTS:
        raise CapacityError(f"subspace of size {fld.p}^{rank} is too large to enumerate")
    elems = []
    for combo in itertools.product(range(fld.p), repeat=rank):
        c = (np.array(combo, dtype=np.int64) @ ech) % fld.p if rank else np.zeros(fld.n, np.int64)
        elems.append(FpnElement(tuple(int(x) for x in c), fld))
    return AdditiveSubgroupDesc(fld, vecs, tuple(elems), rank)


def find_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Monic irreducible of degree n with the fewest nonzero lower coefficients;
    ties go to the smallest lower coefficients read as base-p digits
    (constant term least significant)."""
    if n == 1:
        return (0, 1)
    for weight in range(1, n + 1):
        candidates = []
        # the constant term is nonzero, otherwise x divides the polynomial
        for rest in itertools.combinations(range(1, n), weight - 1):
            for vals in itertools.product(range(1, p), repeat=weight):
                lower = [0] * n
                for pos, v in zip((0,) + rest, vals):
                    lower[pos] = v
                candidates.append(tuple(lower))
        candidates.sort(key=lambda c: sum(v * p**i for i, v in enumerate(c)))
        for lower in candidates:
            if is_irreducible(lower + (1,), p):
                return lower + (1,)
    raise ParameterError(f"no irreducible polynomial of degree {n} over F_{p}")
