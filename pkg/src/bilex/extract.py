"""The four two-source extractors, scalar and vectorized.

Symbol encoding: bit outputs are the integer ``x mod 2^k``; coordinate
outputs ``(t_1, ..., t_k)`` are encoded as ``t_1 + t_2 p + ... + t_k p^(k-1)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .ec import CurvePoint, EcSubgroupDesc
from .errors import DomainError, ParameterError
from .field_fp import FieldDesc, FpElement, SubgroupDesc, bits_string, lsb_k
from .field_fpn import ExtFieldDesc, FpnElement


class ExtractorKind(str, enum.Enum):
    FP_LSB = "fp_lsb"
    FPN_COORD = "fpn_coord"
    EC_FP_LSB = "ec_fp_lsb"
    EC_FPN_COORD = "ec_fpn_coord"

    @property
    def on_curve(self) -> bool:
        return self in (ExtractorKind.EC_FP_LSB, ExtractorKind.EC_FPN_COORD)

    @property
    def coordinate_output(self) -> bool:
        return self in (ExtractorKind.FPN_COORD, ExtractorKind.EC_FPN_COORD)


@dataclass(frozen=True)
class ExtractorSpec:
    kind: ExtractorKind
    k: int
    source1: SubgroupDesc | EcSubgroupDesc
    source2: SubgroupDesc | EcSubgroupDesc

    def __post_init__(self):
        kind = ExtractorKind(self.kind)
        object.__setattr__(self, "kind", kind)
        want_curve = kind.on_curve
        for src in (self.source1, self.source2):
            if isinstance(src, EcSubgroupDesc) != want_curve:
                raise ParameterError(f"{kind.value} needs {'curve' if want_curve else 'field'} subgroups")
        if self.base_field(self.source1) != self.base_field(self.source2):
            raise ParameterError("sources live over different fields")
        if want_curve and self.source1.curve != self.source2.curve:
            raise ParameterError("sources live on different curves")
        fld = self.field
        want_ext = kind.coordinate_output
        if isinstance(fld, ExtFieldDesc) != want_ext:
            raise ParameterError(f"{kind.value} is not defined over {fld}")
        top = fld.n if want_ext else fld.m
        if not 0 <= self.k <= top:
            raise ParameterError(f"k={self.k} outside [0, {top}]")

    @staticmethod
    def base_field(src):
        return src.curve.base if isinstance(src, EcSubgroupDesc) else src.field

    @property
    def field(self) -> FieldDesc | ExtFieldDesc:
        return self.base_field(self.source1)

    @property
    def p(self) -> int:
        return self.field.characteristic

    @property
    def alphabet_size(self) -> int:
        return self.p**self.k if self.kind.coordinate_output else 1 << self.k

    @property
    def same_source(self) -> bool:
        return self.source1.element_set == self.source2.element_set

    # --- arrays used by exhaustive enumeration ------------------------------

    def _values(self, src) -> np.ndarray:
        if self.kind.on_curve:
            elems = [P.x for P in src.finite_points]
        else:
            elems = list(src.elements)
        if self.kind.coordinate_output:
            return self.field.coords_array(elems)
        return np.array([e.value for e in elems], dtype=np.int64)

    @cached_property
    def values1(self) -> np.ndarray:
        return self._values(self.source1)

    @cached_property
    def values2(self) -> np.ndarray:
        return self._values(self.source2)

    @property
    def excluded_pairs(self) -> int:
        """Pairs dropped because one side is the point at infinity."""
        total = self.source1.order * self.source2.order
        return total - len(self.values1) * len(self.values2)

    def pair_outputs(self, lo: int = 0, hi: int | None = None) -> np.ndarray:
        """Encoded outputs for rows ``lo:hi`` of source 1 against all of source 2,
        flattened row-major."""
        a = self.values1[lo:hi]
        b = self.values2
        k, p = self.k, self.p
        if self.kind is ExtractorKind.FP_LSB or self.kind is ExtractorKind.EC_FP_LSB:
            prod = np.multiply.outer(a, b) % p
            return (prod & ((1 << k) - 1)).ravel()
        if self.kind is ExtractorKind.FPN_COORD:
            prod = a[:, None, :k] * b[None, :, :k] % p
        else:
            prod = self.field.mul_coords(a[:, None, :], b[None, :, :])[..., :k]
        place = p ** np.arange(k, dtype=np.int64)
        return (prod @ place).ravel()


def _check_member(x, group, label):
    if group is not None and x not in group:
        raise ParameterError(f"{label}={x!r} is not in its source subgroup")


def f_k(x1: FpElement, x2: FpElement, k: int, G1=None, G2=None) -> int:
    """lsb_k(x1 * x2) over F_p. Membership is only checked when groups are passed."""
    _check_member(x1, G1, "x1")
    _check_member(x2, G2, "x2")
    return lsb_k(x1 * x2, k)


def F_k(x: FpnElement, xp: FpnElement, k: int, G1=None, G2=None) -> tuple[int, ...]:
    """Coordinate-wise products (x_1 x'_1, ..., x_k x'_k) in the power basis."""
    if x.field != xp.field:
        raise ParameterError("operands belong to different fields")
    if not 0 <= k <= x.field.n:
        raise ParameterError(f"k={k} outside [0, {x.field.n}]")
    _check_member(x, G1, "x")
    _check_member(xp, G2, "x'")
    p = x.field.p
    return tuple(a * b % p for a, b in zip(x.coords[:k], xp.coords[:k]))


def _finite(P: CurvePoint, label: str) -> None:
    if P.is_infinity:
        raise DomainError(f"{label} is the point at infinity, which has no x-coordinate")


def extrac_k(P: CurvePoint, Q: CurvePoint, k: int, PP=None, QQ=None) -> int:
    """lsb_k(x(P) * x(Q)) for points over F_p."""
    _finite(P, "P")
    _finite(Q, "Q")
    _check_member(P, PP, "P")
    _check_member(Q, QQ, "Q")
    return lsb_k(P.x * Q.x, k)


def extrac_fpn_k(P: CurvePoint, Q: CurvePoint, k: int, PP=None, QQ=None) -> tuple[int, ...]:
    """First k power-basis coordinates of x(P) * x(Q) over F_{p^n}."""
    _finite(P, "P")
    _finite(Q, "Q")
    if not 0 <= k <= P.x.field.n:
        raise ParameterError(f"k={k} outside [0, {P.x.field.n}]")
    _check_member(P, PP, "P")
    _check_member(Q, QQ, "Q")
    return (P.x * Q.x).coords[:k]


def extract(spec: ExtractorSpec, s1, s2, k: int | None = None, check: bool = True):
    """Apply the extractor named by ``spec``; ``check`` toggles membership tests."""
    k = spec.k if k is None else k
    G1, G2 = (spec.source1, spec.source2) if check else (None, None)
    fn = {
        ExtractorKind.FP_LSB: f_k,
        ExtractorKind.FPN_COORD: F_k,
        ExtractorKind.EC_FP_LSB: extrac_k,
        ExtractorKind.EC_FPN_COORD: extrac_fpn_k,
    }[spec.kind]
    return fn(s1, s2, k, G1, G2)


def symbol_value(output, p: int) -> int:
    if isinstance(output, tuple):
        return sum(t * p**i for i, t in enumerate(output))
    return int(output)


def symbol_text(output, k: int) -> str:
    if isinstance(output, tuple):
        return ",".join(str(t) for t in output)
    return bits_string(output, k)
