import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bilex.charsum import (
    bilinear_sum, bilinear_sum_fpn, check_bilinear, check_bilinear_fpn, check_ec_bilinear,
    check_polya_vinogradov, check_winterhof, e_p, ec_bilinear_sum, histogram_transform,
    max_nontrivial, product_histogram, psi, single_sum, winterhof_aggregate,
)
from bilex.ec import CurveDesc, ec_add, ec_enumerate, ec_subgroup
from bilex.errors import CapacityError, ParameterError
from bilex.field_fp import FieldDesc, divisors, subgroup_of_order
from bilex.field_fpn import ExtFieldDesc, additive_subgroup, mult_subgroup_fpn, trace

from test_ec import add_oracle
from test_field_fpn import schoolbook, trace_oracle

F4 = ExtFieldDesc.from_text(2, "1,1,1")
F8 = ExtFieldDesc.from_text(2, "1,1,0,1")
F9 = ExtFieldDesc.from_text(3, "1,0,1")


def ep(r, p):
    return cmath.exp(2j * math.pi * (r % p) / p)


def test_scalar_characters():
    assert e_p(0, 7) == 1
    assert e_p(1, 2) == pytest.approx(-1)
    w = F4.gen()
    assert psi(F4.zero()) == 1
    assert psi(w) == pytest.approx(-1)  # Tr(w) = 1
    assert psi(F4.one()) == pytest.approx(1)  # Tr(1) = 0
    with pytest.raises(ParameterError):
        e_p(3)
    with pytest.raises(ParameterError):
        FieldDesc(4)


@pytest.mark.parametrize("p", [5, 11, 31, 101])
def test_single_sum_against_direct_oracle(p):
    fld = FieldDesc(p)
    for q in divisors(p - 1):
        G = subgroup_of_order(fld, q)
        assert single_sum(0, G).close_to(q)
        for a in (1, 2, p - 1):
            ref = sum(ep(a * x.value, p) for x in G.elements)
            assert single_sum(a, G).close_to(ref)
    full = subgroup_of_order(fld, p - 1)
    assert single_sum(3, full).close_to(-1)


def test_single_sum_is_invariant_under_subgroup_shift():
    fld = FieldDesc(31)
    for q in divisors(30):
        G = subgroup_of_order(fld, q)
        for x0 in G.elements:
            for a in range(31):
                assert single_sum(a * x0.value, G).close_to(single_sum(a, G))


def test_bilinear_sum_examples():
    fld = FieldDesc(101)
    G, H = subgroup_of_order(fld, 20), subgroup_of_order(fld, 25)
    assert bilinear_sum(0, G, H).close_to(500)
    one = subgroup_of_order(fld, 1)
    assert bilinear_sum(7, one, one).close_to(e_p(7, 101))
    ref = sum(ep(3 * x.value * y.value, 101) for x in G.elements for y in H.elements)
    s = bilinear_sum(3, G, H)
    assert s.close_to(ref) and s.magnitude <= math.sqrt(101 * 500)


def test_fpn_bilinear_matches_trace_table():
    G = mult_subgroup_fpn(F4, 3)
    # [DERIVED] 9-term enumeration with the schoolbook product and Frobenius trace
    ref = 0
    for x in G.elements:
        for y in G.elements:
            z = F4(schoolbook(x.coords, y.coords, (1, 1, 1), 2))
            ref += ep(trace_oracle(z), 2)
    s = bilinear_sum_fpn(F4.one(), G, G)
    assert s.close_to(ref)
    assert bilinear_sum_fpn(F4.zero(), G, G).close_to(9)


@given(st.integers(1, 8), st.sampled_from([1, 2, 4, 8]), st.sampled_from([1, 2, 4, 8]))
def test_fpn_bilinear_bound(a, q1, q2):
    G, H = mult_subgroup_fpn(F9, q1), mult_subgroup_fpn(F9, q2)
    assert bilinear_sum_fpn(F9(a), G, H).magnitude <= math.sqrt(9 * q1 * q2) + 1e-9


def test_histogram_transform_equals_direct_sums():
    fld = FieldDesc(101)
    G, H = subgroup_of_order(fld, 10), subgroup_of_order(fld, 4)
    counts = product_histogram(G, H)
    assert counts.sum() == 40
    re, im = histogram_transform(fld, counts, threads=3)
    for a in range(101):
        assert bilinear_sum(a, G, H).close_to(complex(re[a], im[a]))


def test_histogram_transform_thread_count_is_bitwise_irrelevant():
    fld = FieldDesc(2003)
    counts = product_histogram(subgroup_of_order(fld, 1001), subgroup_of_order(fld, 286))
    r1 = histogram_transform(fld, counts, 1)
    r8 = histogram_transform(fld, counts, 8)
    assert all(np.array_equal(x, y) for x, y in zip(r1, r8))


def test_polya_vinogradov_examples():
    fld = FieldDesc(11)
    G = subgroup_of_order(fld, 5)
    chk = check_polya_vinogradov(G)
    oracle = max(abs(sum(ep(a * x.value, 11) for x in G.elements)) for a in range(1, 11))
    assert chk.value == pytest.approx(oracle, abs=1e-9)
    assert chk.cap == pytest.approx(math.sqrt(11)) and chk.passed
    trivial = check_polya_vinogradov(subgroup_of_order(fld, 1))
    assert trivial.value == pytest.approx(1) and trivial.passed


def test_sweep_caps():
    with pytest.raises(CapacityError):
        check_polya_vinogradov(subgroup_of_order(FieldDesc(65537), 2))


def test_bilinear_checkers():
    fld = FieldDesc(499)
    chk = check_bilinear(subgroup_of_order(fld, 83), subgroup_of_order(fld, 6))
    assert chk.passed and chk.value <= chk.cap
    F16 = ExtFieldDesc.from_text(2, "1,1,0,0,1")
    G = mult_subgroup_fpn(F16, 15)
    fpn = check_bilinear_fpn(G, G)
    assert fpn.passed and fpn.cap == pytest.approx(math.sqrt(16 * 225))


def test_winterhof_f4_equality_case():
    V = additive_subgroup(F4, [F4.one()])
    # [DERIVED] a in {0, 1}: |1 + 1| = 2; a in {w, w+1}: |1 + psi(a)| = 0
    terms = [abs(sum(ep(trace_oracle(F4(schoolbook(a.coords, x.coords, (1, 1, 1), 2))), 2)
                     for x in V.elements)) for a in F4.elements()]
    assert terms == pytest.approx([2, 2, 0, 0])
    chk = check_winterhof(V)
    assert chk.value == pytest.approx(4, abs=1e-12) and chk.cap == 4 and chk.passed


@given(st.lists(st.integers(0, 8), min_size=1, max_size=2))
def test_winterhof_aggregate_equals_field_size(basis):
    # Sum over a of |sum_V psi(a x)| = |V| * |V-perp| = p^n for every subspace
    V = additive_subgroup(F9, [F9(i) for i in basis])
    assert winterhof_aggregate(V) == pytest.approx(9, abs=1e-9)


def test_max_nontrivial_empty_field_edge():
    fld = FieldDesc(2)
    counts = np.array([0, 1])
    assert max_nontrivial(fld, counts) == (pytest.approx(1.0), 1)


E1009 = CurveDesc(FieldDesc(1009), 2, 8)


def test_ec_sum_with_order_two_subgroup():
    pts = ec_enumerate(E1009)
    PP = ec_subgroup(E1009, 2, points=pts)
    QQ = ec_subgroup(E1009, 503, points=pts)
    T = PP.finite_points[0]
    a = 5
    ref, excluded = 0, 0
    for P in (None, (T.x.value, T.y.value)):
        for Q in QQ.elements:
            R = add_oracle(1009, 2, P, None if Q.is_infinity else (Q.x.value, Q.y.value))
            if R is None:
                excluded += 1
            else:
                ref += ep(a * R[0], 1009)
    s = ec_bilinear_sum(a, PP, QQ)
    assert s.excluded == excluded == 1
    assert s.terms == 2 * 503 - 1
    assert s.close_to(ref)


def test_ec_checker_reports_ratio_without_verdict():
    pts = ec_enumerate(E1009)
    chk = check_ec_bilinear(ec_subgroup(E1009, 503, points=pts), ec_subgroup(E1009, 1006, points=pts))
    assert chk.passed is None
    assert chk.details["ratio"] == pytest.approx(chk.value / math.sqrt(1009 * 503 * 1006))


def test_ec_sum_over_extension_curve_matches_scalar_loop():
    F121 = ExtFieldDesc.from_text(11, "1,0,1")
    E = CurveDesc(F121, 1, 5)
    pts = ec_enumerate(E)
    G = ec_subgroup(E, 13, points=pts)
    a = F121((3, 7))
    ref = sum(psi(a * ec_add(E, P, Q).x) for P in G.elements for Q in G.elements
              if not ec_add(E, P, Q).is_infinity)
    s = ec_bilinear_sum(a, G, G)
    assert s.close_to(ref) and s.excluded == 13
    assert trace(a).value == trace_oracle(a)
