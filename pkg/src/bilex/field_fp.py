"""Prime-field arithmetic and multiplicative subgroups of F_p*.

Elements are small immutable values carrying their modulus; all heavy
enumeration elsewhere works on plain integer arrays and only uses these
types at the API boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import DomainError, ParameterError

MAX_MODULUS = 1 << 61

# deterministic for n < 3.3e24, which covers every 64-bit input
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; fine for the orders met at desk scale."""
    if n < 1:
        raise ParameterError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for r, e in factorize(n).items():
        divs = [d * r**i for d in divs for i in range(e + 1)]
    return sorted(divs)


@dataclass(frozen=True)
class FieldDesc:
    """The prime field F_p. ``m`` is the bit length of p."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 2:
            raise ParameterError(f"modulus must be an integer >= 2, got {self.p!r}")
        if self.p >= MAX_MODULUS:
            raise ParameterError(f"modulus {self.p} exceeds the 2^61 desk-scale cap")
        if not is_prime(self.p):
            raise ParameterError(f"modulus {self.p} is not prime")

    @property
    def m(self) -> int:
        return self.p.bit_length()

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def size(self) -> int:
        return self.p

    def __call__(self, value: int) -> FpElement:
        return FpElement(value % self.p, self.p)

    def zero(self) -> FpElement:
        return FpElement(0, self.p)

    def one(self) -> FpElement:
        return FpElement(1, self.p)

    def elements(self):
        return (FpElement(v, self.p) for v in range(self.p))


@dataclass(frozen=True)
class FpElement:
    value: int
    modulus: int

    def __post_init__(self):
        if not 0 <= self.value < self.modulus:
            raise ParameterError(f"{self.value} is not a canonical residue mod {self.modulus}")

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"

    def is_zero(self) -> bool:
        return self.value == 0

    def _coerce(self, other) -> FpElement:
        if isinstance(other, int):
            return FpElement(other % self.modulus, self.modulus)
        return other

    def __add__(self, other):
        return fp_add(self, self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return fp_add(self, fp_neg(self._coerce(other)))

    def __rsub__(self, other):
        return fp_add(self._coerce(other), fp_neg(self))

    def __mul__(self, other):
        return fp_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return fp_neg(self)

    def __truediv__(self, other):
        return fp_mul(self, fp_inv(self._coerce(other)))

    def __pow__(self, e: int):
        return fp_pow(self, e)

    def inverse(self) -> FpElement:
        return fp_inv(self)


def _check_same(a: FpElement, b: FpElement) -> None:
    if not isinstance(b, FpElement) or a.modulus != b.modulus:
        raise ParameterError(f"modulus mismatch: {a!r} vs {b!r}")


def fp_add(a: FpElement, b: FpElement) -> FpElement:
    _check_same(a, b)
    return FpElement((a.value + b.value) % a.modulus, a.modulus)


def fp_mul(a: FpElement, b: FpElement) -> FpElement:
    _check_same(a, b)
    return FpElement(a.value * b.value % a.modulus, a.modulus)


def fp_neg(a: FpElement) -> FpElement:
    return FpElement(-a.value % a.modulus, a.modulus)


def fp_inv(a: FpElement) -> FpElement:
    if a.value == 0:
        raise DomainError("0 has no multiplicative inverse")
    return FpElement(pow(a.value, -1, a.modulus), a.modulus)


def fp_pow(a: FpElement, e: int) -> FpElement:
    if e < 0:
        raise ParameterError("negative exponent")
    result, base = 1, a.value
    while e:
        if e & 1:
            result = result * base % a.modulus
        base = base * base % a.modulus
        e >>= 1
    return FpElement(result % a.modulus, a.modulus)


def has_exact_order(x, q: int, one) -> bool:
    """True iff ``x**q == one`` and no ``x**(q/r)`` with r | q prime equals one."""
    if x**q != one:
        return False
    return all(x ** (q // r) != one for r in factorize(q))


@dataclass(frozen=True)
class SubgroupDesc:
    """A cyclic multiplicative subgroup, with its elements listed as generator powers.

    Works for both F_p and F_{p^n}; ``field`` is the parent descriptor.
    """

    field: object
    generator: object
    order: int
    elements: tuple = field(repr=False)

    @property
    def bitlen(self) -> int:
        return self.order.bit_length()

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.element_set

    def __len__(self) -> int:
        return self.order


def _powers(g, q: int, one) -> tuple:
    out = [one]
    x = one
    for _ in range(q - 1):
        x = x * g
        out.append(x)
    return tuple(out)


def cyclic_subgroup(fld, group_order: int, q: int, seed: int, candidates) -> SubgroupDesc:
    """Shared cofactor-exponentiation search used by both field types.

    ``candidates(seed)`` yields nonzero field elements in scan order.
    """
    if q < 1 or group_order % q:
        raise ParameterError(f"order {q} does not divide {group_order}")
    one = fld.one()
    cofactor = group_order // q
    for tried, h in enumerate(candidates(seed)):
        if tried > fld.size:
            break
        g = h**cofactor
        if has_exact_order(g, q, one):
            return SubgroupDesc(fld, g, q, _powers(g, q, one))
    raise AssertionError(f"no element of order {q} found; the field is not cyclic?")


def subgroup_of_order(fld: FieldDesc, q: int, seed: int = 2) -> SubgroupDesc:
    """Subgroup of F_p* of order q, generated by h^((p-1)/q) for the first fit h >= seed."""
    p = fld.p

    def scan(start):
        for i in range(p - 1):
            v = (start - 1 + i) % (p - 1) + 1
            yield FpElement(v, p)

    return cyclic_subgroup(fld, p - 1, q, seed, scan)


def lsb_k(x: FpElement | int, k: int, m: int | None = None) -> int:
    """The k least significant bits of x's canonical representative, as an integer."""
    value = x.value if isinstance(x, FpElement) else int(x)
    if m is None and isinstance(x, FpElement):
        m = x.modulus.bit_length()
    if k < 0 or (m is not None and k > m):
        raise ParameterError(f"k={k} outside [0, {m}]")
    return value & ((1 << k) - 1)


def bits_string(value: int, k: int) -> str:
    """Render a k-bit symbol most significant first, so the lsb is the last character."""
    return format(value, f"0{k}b") if k else ""
