import json
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bilex.audit import (
    OutputDistribution, audit_extractor, bound_ec_fp, bound_lemma4, bound_lemma6, check_lemma1,
    collision_probability, collision_probability_exact, distribution_of, equal_output_pairs,
    guessing_probability, statistical_distance, statistical_distance_exact,
)
from bilex.errors import CapacityError, DomainError
from bilex.extract import ExtractorKind, ExtractorSpec
from bilex.field_fp import FieldDesc, subgroup_of_order

REPORT_KEYS = ["params", "distribution_summary", "sd", "col", "guess", "lemma1", "bound",
               "bound_parts", "M", "status"]


def fp_spec(p, q1, q2, k, seed1=2, seed2=2):
    fld = FieldDesc(p)
    return ExtractorSpec(ExtractorKind.FP_LSB, k, subgroup_of_order(fld, q1, seed1),
                         subgroup_of_order(fld, q2, seed2))


def exact_sd_oracle(spec):
    """Pure-Python enumeration and rational arithmetic, sharing no code with the audit."""
    p, k = spec.p, spec.k
    tally = Counter((x.value * y.value % p) % (1 << k)
                    for x in spec.source1.elements for y in spec.source2.elements)
    total, N = sum(tally.values()), 1 << k
    return sum(abs(Fraction(tally.get(s, 0), total) - Fraction(1, N)) for s in range(N)) / 2


def test_distribution_examples():
    d = distribution_of(fp_spec(11, 1, 1, 2))
    assert d.total == 1 and d.as_dict() == {1: 1}
    d = distribution_of(fp_spec(11, 5, 2, 1))
    # [DERIVED] products {1,4,5,9,3} x {1,10} mod 11 = {1,4,5,9,3,10,7,6,2,8}: 5 odd, 5 even
    assert d.total == 10 and d.as_dict() == {0: 5, 1: 5}


def test_statistics_on_analytic_distributions():
    uniform = OutputDistribution(4, [3, 3, 3, 3])
    assert statistical_distance(uniform) == 0
    assert collision_probability(uniform) == pytest.approx(0.25)
    assert guessing_probability(uniform) == 0.25
    point = OutputDistribution(2, [7, 0])
    assert statistical_distance(point) == 0.5
    assert collision_probability(point) == 1 and guessing_probability(point) == 1
    for d in (uniform, point):
        chk = check_lemma1(d)
        assert chk.holds and chk.col == pytest.approx(chk.rhs, abs=1e-15)


def test_empty_distribution_rejected():
    with pytest.raises(DomainError):
        statistical_distance(OutputDistribution(2, [0, 0]))


@given(st.lists(st.integers(0, 1000), min_size=1, max_size=64).filter(any))
def test_lemma1_and_probability_chain(counts):
    d = OutputDistribution(len(counts), counts)
    col, gamma, N = collision_probability(d), guessing_probability(d), len(counts)
    assert check_lemma1(d).holds
    assert col >= 1 / N - 1e-15
    assert gamma**2 - 1e-15 <= col <= gamma + 1e-15
    assert statistical_distance_exact(d) == pytest.approx(statistical_distance(d), abs=1e-12)
    assert float(collision_probability_exact(d)) == pytest.approx(col, abs=1e-12)


def test_lemma1_fuzz_thousand_distributions():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        N = int(rng.integers(1, 300))
        counts = rng.integers(0, 50, size=N) * (rng.random(N) < rng.random())
        counts[rng.integers(N)] += 1
        assert check_lemma1(OutputDistribution(N, counts)).holds


@pytest.mark.parametrize("k", [1, 2, 3])
def test_lemma4_audit_matches_rational_oracle(k):
    spec = fp_spec(1009, 504, 504, k, 2, 3)
    rep = audit_extractor(spec)
    assert rep.sd_exact == exact_sd_oracle(spec)
    assert rep.measured_sd == pytest.approx(float(rep.sd_exact), abs=1e-15)
    assert rep.status == "pass" and rep.measured_sd <= rep.bound.value
    assert rep.col_pair_check is True
    assert rep.max_bilinear_magnitude <= rep.M_cap


def test_bound_formulas():
    # [DERIVED] sqrt(2^3 / 225)
    assert bound_lemma6(2, 4, 1, 15, 15).value == pytest.approx(math.sqrt(8 / 225))
    assert bound_lemma6(2, 4, 1, 15, 15).value == pytest.approx(0.1886, abs=1e-4)
    b = bound_lemma4(1009, 2, 504, 504)
    t1 = math.sqrt(4 / 1009)
    t2 = math.sqrt(4 * 1009 * math.log2(1009) / 504**2)
    assert b.value == pytest.approx((t1 + t2) / 2) and b.value == pytest.approx(0.231, abs=1e-3)
    assert b.terms == pytest.approx((0.0630, 0.3989), abs=1e-3)
    assert b.closed_form == pytest.approx(2 ** ((2 + 10 + math.log2(10) - 18) / 2))
    assert bound_ec_fp(1009, 2, 503, 1006).asymptotic


def test_degenerate_k_zero():
    rep = audit_extractor(fp_spec(1009, 504, 504, 0))
    assert rep.measured_sd == 0 and rep.bound.terms[0] == pytest.approx(math.sqrt(1 / 1009))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_trivial_groups_are_point_masses(k):
    rep = audit_extractor(fp_spec(1009, 1, 1, k))
    assert rep.sd_exact == 1 - Fraction(1, 2**k)
    assert rep.status == "vacuous"


def test_full_group_balances_parity():
    # F*_1009 x F*_1009 hits every nonzero residue 1008 times; 504 of them are odd
    rep = audit_extractor(fp_spec(1009, 1008, 1008, 1))
    assert rep.measured_sd == 0


def test_threads_do_not_change_anything():
    spec = fp_spec(2003, 1001, 286, 3)
    a = audit_extractor(spec, threads=1).to_json_dict()
    b = audit_extractor(spec, threads=8).to_json_dict()
    assert json.dumps(a) == json.dumps(b)
    assert np.array_equal(distribution_of(spec, 1).counts, distribution_of(spec, 5).counts)


def test_report_schema():
    d = audit_extractor(fp_spec(11, 5, 2, 2), name="x").to_json_dict()
    assert list(d) == REPORT_KEYS
    assert d["params"]["entry"] == "x" and d["status"] in {"pass", "vacuous", "fail"}
    assert isinstance(d["distribution_summary"]["total"], int)
    assert json.loads(json.dumps(d)) == d


def test_col_pair_counting():
    outs = np.array([3, 1, 3, 3, 0, 1])
    assert equal_output_pairs(outs) == 9 + 4 + 1
    d = OutputDistribution(4, np.bincount(outs, minlength=4))
    assert collision_probability_exact(d) == Fraction(14, 36)


def test_pair_cap():
    with pytest.raises(CapacityError):
        distribution_of(fp_spec(1009, 504, 504, 1), pair_cap=1000)
