"""Short-Weierstrass curves y^2 = x^3 + ax + b in affine coordinates.

The curve code is generic over the base field: anything with
``FieldDesc``'s element protocol (``+ - * inverse() is_zero()``) works, so the
same group law serves F_p and F_{p^n}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CapacityError, ParameterError
from .field_fp import FieldDesc, factorize
from .field_fpn import ExtFieldDesc

MAX_PRIME_FIELD = 1 << 20
MAX_EXT_FIELD = 1 << 16


@dataclass(frozen=True)
class CurveDesc:
    base: FieldDesc | ExtFieldDesc
    a: object
    b: object

    def __post_init__(self):
        fld = self.base
        object.__setattr__(self, "a", _lift(fld, self.a))
        object.__setattr__(self, "b", _lift(fld, self.b))
        if fld.characteristic < 5:
            raise ParameterError("curves need characteristic >= 5")
        disc = self.a * self.a * self.a * 4 + self.b * self.b * 27
        if disc.is_zero():
            raise ParameterError("singular curve: 4a^3 + 27b^2 = 0")

    def rhs(self, x):
        return x * x * x + self.a * x + self.b

    def contains(self, pt: CurvePoint) -> bool:
        if pt.is_infinity:
            return True
        return pt.y * pt.y == self.rhs(pt.x)

    def point(self, x, y) -> CurvePoint:
        pt = CurvePoint(False, _lift(self.base, x), _lift(self.base, y))
        if not self.contains(pt):
            raise ParameterError(f"({x}, {y}) is not on {self}")
        return pt

    def __str__(self):
        return f"y^2 = x^3 + ({self.a!r})x + ({self.b!r})"


def _lift(fld, v):
    if isinstance(fld, ExtFieldDesc):
        if isinstance(v, int):
            return fld((v,))
        if isinstance(v, (tuple, list)):
            return fld(v)
        return v
    return fld(v) if isinstance(v, int) else v


@dataclass(frozen=True)
class CurvePoint:
    is_infinity: bool
    x: object = None
    y: object = None

    def __repr__(self):
        if self.is_infinity:
            return "O"
        return f"({self.x!r}, {self.y!r})"


INFINITY = CurvePoint(True)


def ec_neg(curve: CurveDesc, P: CurvePoint) -> CurvePoint:
    if P.is_infinity:
        return P
    return CurvePoint(False, P.x, -P.y)


def ec_add(curve: CurveDesc, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    """Chord-tangent addition."""
    if not (curve.contains(P) and curve.contains(Q)):
        raise ParameterError("point is not on this curve")
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    if P.x == Q.x:
        if (P.y + Q.y).is_zero():
            return INFINITY
        slope = (P.x * P.x * 3 + curve.a) / (P.y * 2)
    else:
        slope = (Q.y - P.y) / (Q.x - P.x)
    x3 = slope * slope - P.x - Q.x
    y3 = slope * (P.x - x3) - P.y
    return CurvePoint(False, x3, y3)


def ec_scalar_mul(curve: CurveDesc, n: int, P: CurvePoint) -> CurvePoint:
    if n < 0:
        return ec_scalar_mul(curve, -n, ec_neg(curve, P))
    result, addend = INFINITY, P
    while n:
        if n & 1:
            result = ec_add(curve, result, addend)
        addend = ec_add(curve, addend, addend)
        n >>= 1
    return result


def ec_enumerate(curve: CurveDesc) -> list[CurvePoint]:
    """All rational points, O first, then by x (field order) and y."""
    fld = curve.base
    cap = MAX_EXT_FIELD if isinstance(fld, ExtFieldDesc) else MAX_PRIME_FIELD
    if fld.size > cap:
        raise CapacityError(f"field of size {fld.size} is too large to sweep")
    roots: dict = {}
    for y in fld.elements():
        roots.setdefault(y * y, []).append(y)
    pts = [INFINITY]
    for x in fld.elements():
        for y in roots.get(curve.rhs(x), ()):
            pts.append(CurvePoint(False, x, y))
    return pts


def hasse_holds(curve: CurveDesc, count: int | None = None) -> bool:
    if count is None:
        count = len(ec_enumerate(curve))
    q = curve.base.size
    return abs(count - (q + 1)) <= 2 * math.sqrt(q)


@dataclass(frozen=True)
class EcSubgroupDesc:
    curve: CurveDesc
    generator: CurvePoint
    order: int
    elements: tuple = field(repr=False)

    @property
    def bitlen(self) -> int:
        return self.order.bit_length()

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    def __contains__(self, pt) -> bool:
        return pt in self.element_set

    def __len__(self) -> int:
        return self.order

    @property
    def finite_points(self) -> tuple:
        return tuple(P for P in self.elements if not P.is_infinity)


def point_order(curve: CurveDesc, P: CurvePoint, group_order: int) -> int:
    n = group_order
    for r in factorize(group_order):
        while n % r == 0 and ec_scalar_mul(curve, n // r, P).is_infinity:
            n //= r
    return n


def ec_subgroup(curve: CurveDesc, q: int, seed: int = 0,
                points: list[CurvePoint] | None = None) -> EcSubgroupDesc:
    """Cyclic subgroup of order q, from the first point (in enumeration order,
    starting at index ``seed``) whose cofactor multiple has exact order q."""
    if points is None:
        points = ec_enumerate(curve)
    N = len(points)
    if q < 1 or N % q:
        raise ParameterError(f"{q} does not divide the group order {N}")
    cofactor = N // q
    for i in range(N):
        P = points[(seed + i) % N]
        G = ec_scalar_mul(curve, cofactor, P)
        if point_order(curve, G, q) == q and ec_scalar_mul(curve, q, G).is_infinity:
            elems = [INFINITY]
            T = G
            for _ in range(q - 1):
                elems.append(T)
                T = ec_add(curve, T, G)
            if not T.is_infinity:
                raise AssertionError("generator order mismatch")
            return EcSubgroupDesc(curve, G, q, tuple(elems))
    raise ParameterError(f"no point of order {q}: the q-torsion is not cyclic of that order")


# --- vectorized group law over F_p, used by the exhaustive sums -----------

def _modpow_vec(base: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(base)
    base = base % p
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def ec_add_vec(curve: CurveDesc, x1, y1, x2, y2):
    """Elementwise P + Q for finite points over F_p given as int arrays.

    Returns ``(x3, y3, at_infinity)``; entries where the sum is O hold zeros.
    Requires p < 2^31 so products stay inside int64.
    """
    p = curve.base.p
    if p >= 1 << 31:
        raise CapacityError("vectorized addition needs p < 2^31")
    a = curve.a.value
    x1, y1, x2, y2 = np.broadcast_arrays(*(np.asarray(v, dtype=np.int64) for v in (x1, y1, x2, y2)))
    same_x = x1 == x2
    inf = same_x & ((y1 + y2) % p == 0)
    doubling = same_x & ~inf
    num = np.where(doubling, (3 * x1 % p * x1 + a) % p, (y2 - y1) % p)
    den = np.where(doubling, 2 * y1 % p, (x2 - x1) % p)
    den = np.where(inf, 1, den)
    slope = num * _modpow_vec(den, p - 2, p) % p
    x3 = (slope * slope - x1 - x2) % p
    y3 = (slope * ((x1 - x3) % p) - y1) % p
    x3 = np.where(inf, 0, x3)
    y3 = np.where(inf, 0, y3)
    return x3, y3, inf
