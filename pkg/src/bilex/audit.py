"""Exact output distributions of the extractors and their comparison with the
theoretical statistical-distance bounds.

Every pair of the two sources is enumerated; probabilities are then computed
in double precision, with an exact rational path for small alphabets.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import charsum
from .errors import CapacityError, DomainError
from .extract import ExtractorKind, ExtractorSpec
from .field_fpn import ExtFieldDesc

DEFAULT_PAIR_CAP = 1 << 26
MAX_ALPHABET = 1 << 24
EXACT_ALPHABET = 1 << 12
PAIR_CHECK_CAP = 1 << 22
LEMMA1_TOL = 1e-12
_BLOCK_PAIRS = 1 << 20


@dataclass(frozen=True)
class OutputDistribution:
    alphabet_size: int
    counts: np.ndarray = field(repr=False)
    excluded: int = 0

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (self.alphabet_size,):
            raise ValueError("counts must have one entry per alphabet symbol")
        if (counts < 0).any():
            raise ValueError("negative count")
        counts = counts.copy()
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_mapping(cls, alphabet_size: int, counts: dict, excluded: int = 0) -> OutputDistribution:
        dense = np.zeros(alphabet_size, dtype=np.int64)
        for sym, c in counts.items():
            if not 0 <= sym < alphabet_size:
                raise ValueError(f"symbol {sym} outside the alphabet")
            dense[sym] = c
        return cls(alphabet_size, dense, excluded)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def as_dict(self) -> dict[int, int]:
        nz = np.flatnonzero(self.counts)
        return {int(s): int(self.counts[s]) for s in nz}


def distribution_of(spec: ExtractorSpec, threads: int = 1,
                    pair_cap: int = DEFAULT_PAIR_CAP) -> OutputDistribution:
    """Tally the extractor over every pair of the two sources.

    Work is cut into fixed row blocks whatever ``threads`` is, and the integer
    block histograms are summed, so the result never depends on threading.
    """
    pairs = spec.source1.order * spec.source2.order
    if pairs > pair_cap:
        raise CapacityError(f"{pairs} pairs exceed the enumeration cap {pair_cap}")
    size = spec.alphabet_size
    if size > MAX_ALPHABET:
        raise CapacityError(f"alphabet of {size} symbols is too large to tabulate")
    rows = len(spec.values1)
    step = max(1, _BLOCK_PAIRS // max(len(spec.values2), 1))

    def block(lo):
        return np.bincount(spec.pair_outputs(lo, lo + step), minlength=size)

    starts = range(0, rows, step)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(block, starts))
    else:
        parts = [block(lo) for lo in starts]
    counts = np.zeros(size, dtype=np.int64)
    for part in parts:
        counts += part
    return OutputDistribution(size, counts, spec.excluded_pairs)


def _require_mass(d: OutputDistribution) -> int:
    total = d.total
    if total <= 0:
        raise DomainError("empty distribution")
    return total


def statistical_distance(d: OutputDistribution) -> float:
    """SD against the uniform distribution on the whole alphabet."""
    total = _require_mass(d)
    return 0.5 * float(np.sum(np.abs(d.counts / total - 1.0 / d.alphabet_size)))


def collision_probability(d: OutputDistribution) -> float:
    total = _require_mass(d)
    return float(np.sum((d.counts / total) ** 2))


def guessing_probability(d: OutputDistribution) -> float:
    total = _require_mass(d)
    return int(d.counts.max()) / total


def statistical_distance_exact(d: OutputDistribution) -> Fraction:
    total = _require_mass(d)
    n = d.alphabet_size
    return Fraction(sum(abs(int(c) * n - total) for c in d.counts), 2 * total * n)


def collision_probability_exact(d: OutputDistribution) -> Fraction:
    total = _require_mass(d)
    return Fraction(sum(int(c) ** 2 for c in d.counts), total * total)


def equal_output_pairs(outputs: np.ndarray) -> int:
    """Number of ordered pairs (i, j) of enumeration slots with equal outputs,
    counted from sorted runs of the raw output list."""
    s = np.sort(np.asarray(outputs).ravel())
    if s.size == 0:
        return 0
    edges = np.flatnonzero(np.diff(s)) + 1
    runs = np.diff(np.concatenate(([0], edges, [s.size])))
    return int(np.sum(runs.astype(object) ** 2))


@dataclass(frozen=True)
class Lemma1Check:
    col: float
    rhs: float
    holds: bool

    def to_dict(self) -> dict:
        return {"col": self.col, "rhs": self.rhs, "holds": self.holds}


def check_lemma1(d: OutputDistribution, tol: float = LEMMA1_TOL) -> Lemma1Check:
    """Col >= (1 + 4 SD^2) / |alphabet|."""
    col = collision_probability(d)
    sd = statistical_distance(d)
    rhs = (1.0 + 4.0 * sd * sd) / d.alphabet_size
    return Lemma1Check(col, rhs, col >= rhs - tol)


# --- theoretical bounds ---------------------------------------------------

@dataclass(frozen=True)
class Bound:
    value: float
    formula: str
    terms: tuple = ()
    closed_form: float | None = None
    asymptotic: bool = False


def bound_lemma4(p: int, k: int, q1: int, q2: int) -> Bound:
    """Delta <= (sqrt(2^k/p) + sqrt(2^k p log2 p / (q1 q2))) / 2; the closed form
    2^((k + m + log2 m - l1 - l2)/2) is a stated cap on 2 Delta, kept for comparison."""
    t1 = math.sqrt(2**k / p)
    t2 = math.sqrt(2**k * p * math.log2(p) / (q1 * q2))
    m, l1, l2 = p.bit_length(), q1.bit_length(), q2.bit_length()
    closed = 2 ** ((k + m + math.log2(m) - (l1 + l2)) / 2)
    return Bound(0.5 * (t1 + t2), "lemma4", (t1, t2), closed)


def bound_lemma6(p: int, n: int, k: int, q1: int, q2: int) -> Bound:
    value = math.sqrt(p ** (n + k - 2) / (q1 * q2))
    m, l1, l2 = p.bit_length(), q1.bit_length(), q2.bit_length()
    closed = 2 ** ((k * m + n * m - (l1 + l2 + 2)) / 2)
    return Bound(value, "lemma6", (value,), closed)


def bound_ec_fp(p: int, k: int, q1: int, q2: int) -> Bound:
    value = math.sqrt(2 ** (k - 2) * p * math.log2(p) / (q1 * q2))
    return Bound(value, "ec_fp", (value,), None, asymptotic=True)


def bound_ec_fpn(p: int, n: int, k: int, q1: int, q2: int) -> Bound:
    value = math.sqrt(p ** (n + k) / (4 * q1 * q2))
    return Bound(value, "ec_fpn", (value,), None, asymptotic=True)


def bound_for(spec: ExtractorSpec) -> Bound:
    fld = spec.field
    p, k = spec.p, spec.k
    q1, q2 = spec.source1.order, spec.source2.order
    n = fld.n if isinstance(fld, ExtFieldDesc) else 1
    return {
        ExtractorKind.FP_LSB: lambda: bound_lemma4(p, k, q1, q2),
        ExtractorKind.FPN_COORD: lambda: bound_lemma6(p, n, k, q1, q2),
        ExtractorKind.EC_FP_LSB: lambda: bound_ec_fp(p, k, q1, q2),
        ExtractorKind.EC_FPN_COORD: lambda: bound_ec_fpn(p, n, k, q1, q2),
    }[spec.kind]()


def max_bilinear_magnitude(spec: ExtractorSpec, threads: int = 1) -> tuple[float, float]:
    """M = max over nontrivial characters of the bilinear sum behind the
    extractor's bound, with the matching square-root cap."""
    fld = spec.field
    s1, s2 = spec.source1, spec.source2
    if spec.kind is ExtractorKind.FP_LSB:
        counts = charsum.product_histogram(s1, s2)
    elif spec.kind is ExtractorKind.FPN_COORD:
        counts = charsum.product_histogram_fpn(s1, s2)
    else:
        counts, _ = charsum.point_sum_histogram(s1, s2)
    M, _ = charsum.max_nontrivial(fld, counts, threads)
    return M, math.sqrt(fld.size * s1.order * s2.order)


# --- report ---------------------------------------------------------------

def _round15(x):
    if isinstance(x, float):
        return float(f"{x:.15g}")
    if isinstance(x, dict):
        return {k: _round15(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round15(v) for v in x]
    return x


@dataclass(frozen=True)
class BoundReport:
    params: dict
    distribution: OutputDistribution = field(repr=False)
    measured_sd: float
    measured_col: float
    measured_guess: float
    lemma1: Lemma1Check
    bound: Bound
    max_bilinear_magnitude: float
    M_cap: float
    status: str
    sd_exact: Fraction | None = None
    col_pair_check: bool | None = None

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "vacuous")

    @property
    def vacuous(self) -> bool:
        return self.status == "vacuous"

    @property
    def lemma1_lhs_rhs(self) -> tuple[float, float]:
        return self.lemma1.col, self.lemma1.rhs

    def to_json_dict(self) -> dict:
        d = self.distribution
        summary = {
            "alphabet_size": d.alphabet_size,
            "total": d.total,
            "support": int(np.count_nonzero(d.counts)),
            "min_count": int(d.counts.min()),
            "max_count": int(d.counts.max()),
            "excluded_pairs": d.excluded,
            "sd_exact": None if self.sd_exact is None else str(self.sd_exact),
            "col_pair_check": self.col_pair_check,
        }
        parts = {
            "formula": self.bound.formula,
            "terms": list(self.bound.terms),
            "closed_form": self.bound.closed_form,
            "asymptotic": self.bound.asymptotic,
            "M_cap": self.M_cap,
            "M_ratio": self.max_bilinear_magnitude / self.M_cap if self.M_cap else None,
        }
        return _round15({
            "params": self.params,
            "distribution_summary": summary,
            "sd": self.measured_sd,
            "col": self.measured_col,
            "guess": self.measured_guess,
            "lemma1": self.lemma1.to_dict(),
            "bound": self.bound.value,
            "bound_parts": parts,
            "M": self.max_bilinear_magnitude,
            "status": self.status,
        })


def spec_params(spec: ExtractorSpec) -> dict:
    fld = spec.field
    ext = isinstance(fld, ExtFieldDesc)
    params = {
        "kind": spec.kind.value,
        "p": spec.p,
        "n": fld.n if ext else 1,
        "field_size": fld.size,
        "k": spec.k,
        "q1": spec.source1.order,
        "q2": spec.source2.order,
        "m": spec.p.bit_length(),
        "l1": spec.source1.bitlen,
        "l2": spec.source2.bitlen,
        "same_source": spec.same_source,
    }
    if ext:
        params["reduction_poly"] = list(fld.reduction_poly)
        params["coordinate_rule"] = "first k power-basis coordinates"
    if spec.kind.on_curve:
        curve = spec.source1.curve
        params["curve"] = {"a": _element_json(curve.a), "b": _element_json(curve.b)}
    return params


def _element_json(x):
    return list(x.coords) if hasattr(x, "coords") else x.value


def _status(sd: float, sd_exact: Fraction | None, bound: float) -> str:
    if bound >= 1.0:
        return "vacuous"
    within = sd_exact <= Fraction(bound) if sd_exact is not None else sd <= bound
    return "pass" if within else "fail"


def audit_extractor(spec: ExtractorSpec, threads: int = 1, name: str | None = None,
                    pair_cap: int = DEFAULT_PAIR_CAP) -> BoundReport:
    d = distribution_of(spec, threads, pair_cap)
    sd = statistical_distance(d)
    col = collision_probability(d)
    sd_exact = statistical_distance_exact(d) if d.alphabet_size <= EXACT_ALPHABET else None
    pair_check = None
    if d.total <= PAIR_CHECK_CAP:
        equal = equal_output_pairs(spec.pair_outputs())
        pair_check = Fraction(equal, d.total**2) == collision_probability_exact(d)
    bound = bound_for(spec)
    M, M_cap = max_bilinear_magnitude(spec, threads)
    params = spec_params(spec)
    if name is not None:
        params = {"entry": name, **params}
    return BoundReport(
        params=params,
        distribution=d,
        measured_sd=sd,
        measured_col=col,
        measured_guess=guessing_probability(d),
        lemma1=check_lemma1(d),
        bound=bound,
        max_bilinear_magnitude=M,
        M_cap=M_cap,
        status=_status(sd, sd_exact, bound.value),
        sd_exact=sd_exact,
        col_pair_check=pair_check,
    )
