"""Additive character sums over F_p, F_{p^n} and curve subgroups, and the
checkers for the classical bounds on them.

All sums are evaluated term by term from lookup tables of e_p(r), r in F_p.
Reductions use numpy's fixed-order pairwise summation over fixed-shape
blocks, so results do not depend on how work is split across threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .ec import CurvePoint, EcSubgroupDesc, ec_add, ec_add_vec
from .errors import CapacityError, ParameterError
from .field_fp import FieldDesc, FpElement, SubgroupDesc
from .field_fpn import AdditiveSubgroupDesc, ExtFieldDesc, FpnElement, trace

TOL = 1e-9
MAX_SWEEP_P = 1 << 16
MAX_WINTERHOF_FIELD = 1 << 12
_A_BLOCK = 128


@dataclass(frozen=True)
class ComplexSum:
    re: float
    im: float
    terms: int
    excluded: int = 0

    @property
    def magnitude(self) -> float:
        return math.hypot(self.re, self.im)

    def __complex__(self):
        return complex(self.re, self.im)

    def close_to(self, other, tol: float | None = None) -> bool:
        tol = TOL * max(self.terms, 1) if tol is None else tol
        return abs(complex(self) - complex(other)) <= tol


@lru_cache(maxsize=64)
def unit_table(p: int) -> tuple[np.ndarray, np.ndarray]:
    """cos and sin of 2*pi*r/p for r = 0..p-1."""
    angles = 2.0 * np.pi * np.arange(p, dtype=np.float64) / p
    cos, sin = np.cos(angles), np.sin(angles)
    cos.flags.writeable = False
    sin.flags.writeable = False
    return cos, sin


def e_p(a: FpElement | int, p: int | None = None) -> complex:
    if isinstance(a, FpElement):
        r, p = a.value, a.modulus
    else:
        if p is None:
            raise ParameterError("p is required for integer arguments")
        r = a % p
    return complex(math.cos(2 * math.pi * r / p), math.sin(2 * math.pi * r / p))


def psi(a: FpnElement) -> complex:
    return e_p(trace(a))


def _sum_residues(residues: np.ndarray, p: int, weights: np.ndarray | None = None,
                  excluded: int = 0) -> ComplexSum:
    cos, sin = unit_table(p)
    residues = np.asarray(residues, dtype=np.int64).ravel()
    if weights is None:
        re, im, terms = np.sum(cos[residues]), np.sum(sin[residues]), residues.size
    else:
        weights = np.asarray(weights).ravel()
        re = np.sum(cos[residues] * weights)
        im = np.sum(sin[residues] * weights)
        terms = int(weights.sum())
    return ComplexSum(float(re), float(im), int(terms), excluded)


def _fp_values(G: SubgroupDesc) -> np.ndarray:
    return np.array([x.value for x in G.elements], dtype=np.int64)


def _value(a) -> int:
    return a.value if isinstance(a, FpElement) else int(a)


def single_sum(a: FpElement | int, G: SubgroupDesc) -> ComplexSum:
    """S(a, G) = sum over x in G of e_p(a x)."""
    p = G.field.p
    return _sum_residues(_value(a) * _fp_values(G) % p, p)


def bilinear_sum(a: FpElement | int, G: SubgroupDesc, H: SubgroupDesc) -> ComplexSum:
    """S(a, (G, H)) = double sum of e_p(a x y), evaluated over all |G||H| terms."""
    if G.field != H.field:
        raise ParameterError("subgroups live in different fields")
    p = G.field.p
    g = _value(a) * _fp_values(G) % p
    h = _fp_values(H)
    cos, sin = unit_table(p)
    re = im = 0.0
    step = max(1, (1 << 20) // max(len(h), 1))
    for lo in range(0, len(g), step):
        r = np.multiply.outer(g[lo:lo + step], h) % p
        re += float(np.sum(cos[r]))
        im += float(np.sum(sin[r]))
    return ComplexSum(re, im, len(g) * len(h))


def _fpn_trace_of_products(a: FpnElement, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    fld = a.field
    ax = fld.mul_coords(np.array(a.coords, dtype=np.int64)[None, :], xs)
    prod = fld.mul_coords(ax[:, None, :], ys[None, :, :])
    return prod @ fld.trace_vector % fld.p


def bilinear_sum_fpn(a: FpnElement, G: SubgroupDesc, H: SubgroupDesc) -> ComplexSum:
    """Double sum of psi(a x y) over x in G, y in H with unit weights."""
    fld = a.field
    if G.field != fld or H.field != fld:
        raise ParameterError("subgroups live in a different field")
    xs = fld.coords_array(G.elements)
    ys = fld.coords_array(H.elements)
    return _sum_residues(_fpn_trace_of_products(a, xs, ys), fld.p)


def _sum_points_x(PP: EcSubgroupDesc, QQ: EcSubgroupDesc):
    """x(P + Q) over all pairs, as field indices, plus the count of pairs summing to O."""
    curve = PP.curve
    if QQ.curve != curve:
        raise ParameterError("subgroups live on different curves")
    fld = curve.base
    if isinstance(fld, FieldDesc):
        px = [(P.x.value, P.y.value) for P in PP.finite_points]
        qx = [(Q.x.value, Q.y.value) for Q in QQ.finite_points]
        xs = []
        excluded = 0
        if px and qx:
            P = np.array(px, dtype=np.int64)
            Q = np.array(qx, dtype=np.int64)
            x3, _, inf = ec_add_vec(curve, P[:, 0, None], P[:, 1, None], Q[None, :, 0], Q[None, :, 1])
            xs.append(x3[~inf])
            excluded = int(inf.sum())
        # P + O = P: pairs with O on one side contribute the other point itself
        n_inf_p = PP.order - len(px)
        n_inf_q = QQ.order - len(qx)
        xs += [np.array([v[0] for v in px], dtype=np.int64)] * n_inf_q
        xs += [np.array([v[0] for v in qx], dtype=np.int64)] * n_inf_p
        excluded += n_inf_p * n_inf_q
        out = np.concatenate(xs) if xs else np.zeros(0, np.int64)
        return out, excluded
    out = []
    excluded = 0
    for P in PP.elements:
        for Q in QQ.elements:
            R = ec_add(curve, P, Q)
            if R.is_infinity:
                excluded += 1
            else:
                out.append(R.x.index)
    return np.array(out, dtype=np.int64), excluded


def _trace_products(fld, a_idx: np.ndarray, z_idx: np.ndarray) -> np.ndarray:
    """Tr(a z) for all pairs, as a (len(a), len(z)) residue array."""
    if isinstance(fld, FieldDesc):
        return np.multiply.outer(a_idx, z_idx) % fld.p
    coords = fld.all_coords()
    return (coords[a_idx] @ fld.trace_gram @ coords[z_idx].T) % fld.p


def ec_bilinear_sum(a: FpElement | FpnElement | int, PP: EcSubgroupDesc, QQ: EcSubgroupDesc) -> ComplexSum:
    """Sum of psi_a(x(P + Q)) over P in PP, Q in QQ; pairs with P + Q = O are
    skipped and counted in ``excluded``."""
    fld = PP.curve.base
    xs, excluded = _sum_points_x(PP, QQ)
    if isinstance(a, FpnElement):
        a_idx = a.index
    else:
        a_idx = _value(a) % fld.p
    res = _trace_products(fld, np.array([a_idx]), xs)
    return _sum_residues(res, fld.characteristic, excluded=excluded)


# --- full sweeps over the multiplier a ------------------------------------

def histogram_transform(fld, counts: np.ndarray, threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """For every a in the field, the real and imaginary parts of
    sum_z counts[z] psi(a z), with z and a indexed as field elements."""
    size = fld.size
    support = np.flatnonzero(counts)
    weights = counts[support].astype(np.float64)
    cos, sin = unit_table(fld.characteristic)

    def block(lo):
        a_idx = np.arange(lo, min(lo + _A_BLOCK, size), dtype=np.int64)
        r = _trace_products(fld, a_idx, support)
        return np.sum(cos[r] * weights, axis=1), np.sum(sin[r] * weights, axis=1)

    starts = range(0, size, _A_BLOCK)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(block, starts))
    else:
        parts = [block(lo) for lo in starts]
    re = np.concatenate([x[0] for x in parts])
    im = np.concatenate([x[1] for x in parts])
    return re, im


def max_nontrivial(fld, counts: np.ndarray, threads: int = 1) -> tuple[float, int]:
    """max over a != 0 of |sum_z counts[z] psi(a z)| and the maximizing a (smallest index)."""
    re, im = histogram_transform(fld, counts, threads)
    mag = np.hypot(re[1:], im[1:])
    if mag.size == 0:
        return 0.0, 0
    i = int(np.argmax(mag))
    return float(mag[i]), i + 1


def product_histogram(G: SubgroupDesc, H: SubgroupDesc) -> np.ndarray:
    """counts[z] = #{(x, y) in G x H : x y = z} over F_p."""
    p = G.field.p
    g, h = _fp_values(G), _fp_values(H)
    counts = np.zeros(p, dtype=np.int64)
    step = max(1, (1 << 20) // max(len(h), 1))
    for lo in range(0, len(g), step):
        counts += np.bincount((np.multiply.outer(g[lo:lo + step], h) % p).ravel(), minlength=p)
    return counts


def product_histogram_fpn(G: SubgroupDesc, H: SubgroupDesc) -> np.ndarray:
    fld = G.field
    xs, ys = fld.coords_array(G.elements), fld.coords_array(H.elements)
    idx = fld.index_of(fld.mul_coords(xs[:, None, :], ys[None, :, :]))
    return np.bincount(idx.ravel(), minlength=fld.size)


def point_sum_histogram(PP: EcSubgroupDesc, QQ: EcSubgroupDesc) -> tuple[np.ndarray, int]:
    xs, excluded = _sum_points_x(PP, QQ)
    return np.bincount(xs, minlength=PP.curve.base.size), excluded


# --- bound checkers -------------------------------------------------------

@dataclass(frozen=True)
class BoundCheck:
    name: str
    value: float
    cap: float
    passed: bool | None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"check": self.name, "value": self.value, "cap": self.cap,
                "passed": self.passed, "details": dict(self.details)}


def _require_sweepable(p: int):
    if p > MAX_SWEEP_P:
        raise CapacityError(f"p={p} is above the 2^16 cap for full sweeps over a")


def check_polya_vinogradov(G: SubgroupDesc, threads: int = 1) -> BoundCheck:
    """max over a != 0 of |S(a, G)| against sqrt(p)."""
    fld = G.field
    _require_sweepable(fld.p)
    counts = np.zeros(fld.p, dtype=np.int64)
    counts[_fp_values(G)] = 1
    value, arg = max_nontrivial(fld, counts, threads)
    cap = math.sqrt(fld.p)
    return BoundCheck("pv", value, cap, value <= cap + TOL * G.order,
                      {"p": fld.p, "order": G.order, "argmax_a": arg})


def check_bilinear(G: SubgroupDesc, H: SubgroupDesc, threads: int = 1, tol: float = 1e-6) -> BoundCheck:
    """max over a != 0 of |S(a, (G, H))| against sqrt(p |G| |H|)."""
    fld = G.field
    _require_sweepable(fld.p)
    value, arg = max_nontrivial(fld, product_histogram(G, H), threads)
    cap = math.sqrt(fld.p * G.order * H.order)
    return BoundCheck("bilinear", value, cap, value <= cap + tol,
                      {"p": fld.p, "q1": G.order, "q2": H.order, "argmax_a": arg})


def check_bilinear_fpn(G: SubgroupDesc, H: SubgroupDesc, threads: int = 1, tol: float = 1e-6) -> BoundCheck:
    fld = G.field
    if fld.size > MAX_WINTERHOF_FIELD:
        raise CapacityError("extension field too large for a full sweep")
    value, arg = max_nontrivial(fld, product_histogram_fpn(G, H), threads)
    cap = math.sqrt(fld.size * G.order * H.order)
    return BoundCheck("bilinear_fpn", value, cap, value <= cap + tol,
                      {"p": fld.p, "n": fld.n, "q1": G.order, "q2": H.order, "argmax_a": arg})


def winterhof_aggregate(V: AdditiveSubgroupDesc) -> float:
    """sum over all a of |sum over x in V of psi(a x)|, every term evaluated."""
    fld = V.field
    if fld.size > MAX_WINTERHOF_FIELD:
        raise CapacityError(f"field of size {fld.size} is above the 2^12 Winterhof cap")
    cos, sin = unit_table(fld.p)
    xs = np.array([x.index for x in V.elements], dtype=np.int64)
    total = []
    for lo in range(0, fld.size, _A_BLOCK):
        a_idx = np.arange(lo, min(lo + _A_BLOCK, fld.size), dtype=np.int64)
        r = _trace_products(fld, a_idx, xs)
        total.append(np.hypot(np.sum(cos[r], axis=1), np.sum(sin[r], axis=1)))
    return math.fsum(np.concatenate(total))


def check_winterhof(V: AdditiveSubgroupDesc) -> BoundCheck:
    fld = V.field
    value = winterhof_aggregate(V)
    cap = float(fld.size)
    return BoundCheck("winterhof", value, cap, value <= cap + TOL * fld.size * len(V.elements),
                      {"p": fld.p, "n": fld.n, "rank": V.rank, "size": len(V.elements)})


def check_ec_bilinear(PP: EcSubgroupDesc, QQ: EcSubgroupDesc, threads: int = 1) -> BoundCheck:
    """Measures max over nontrivial psi of |V(psi, PP, QQ)| / sqrt(q q1 q2).

    The bound only holds up to an unspecified constant, so ``passed`` is None."""
    fld = PP.curve.base
    counts, excluded = point_sum_histogram(PP, QQ)
    value, arg = max_nontrivial(fld, counts, threads)
    radical = math.sqrt(fld.size * PP.order * QQ.order)
    return BoundCheck("ec_bilinear", value, radical, None,
                      {"ratio": value / radical, "excluded_pairs": excluded,
                       "q1": PP.order, "q2": QQ.order, "field_size": fld.size, "argmax_a": arg})
