import pytest

from bilex.charsum import winterhof_aggregate
from bilex.errors import CapacityError
from bilex.field_fpn import ExtFieldDesc, additive_subgroup, find_irreducible
from bilex.subspaces import gaussian_binomial, rref_bases, subspace_count, winterhof_sweep


def test_gaussian_binomials():
    assert [gaussian_binomial(4, k, 2) for k in range(5)] == [1, 15, 35, 15, 1]
    assert gaussian_binomial(3, 1, 3) == 13
    assert gaussian_binomial(3, 4, 3) == 0
    # Galois numbers G_n(2): 1, 2, 5, 16, 67, 374, ...
    assert [subspace_count(2, n) for n in range(6)] == [1, 2, 5, 16, 67, 374]


@pytest.mark.parametrize("p,n", [(2, 3), (2, 4), (3, 3), (5, 2)])
def test_rref_enumeration_is_complete_and_distinct(p, n):
    fld = ExtFieldDesc(p, n, find_irreducible(p, n))
    spans = []
    for rows in rref_bases(p, n):
        V = additive_subgroup(fld, [fld(r) for r in rows]) if rows else None
        spans.append(frozenset(V.elements) if V else frozenset({fld.zero()}))
        assert V is None or V.rank == len(rows)
    assert len(spans) == len(set(spans)) == subspace_count(p, n)


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_sweep_agrees_with_direct_summation(p, n):
    fld = ExtFieldDesc(p, n, find_irreducible(p, n))
    by_dim = {}
    for rows in rref_bases(p, n):
        if rows:
            agg = winterhof_aggregate(additive_subgroup(fld, [fld(r) for r in rows]))
        else:
            agg = float(fld.size)  # V = {0}: each of the p^n inner sums is 1
        by_dim.setdefault(len(rows), []).append(agg)
    sweep = winterhof_sweep(fld)
    assert list(sweep.subspaces_by_dim) == [len(by_dim[d]) for d in range(n + 1)]
    for d in range(n + 1):
        assert sweep.min_aggregate_by_dim[d] == pytest.approx(min(by_dim[d]), abs=1e-8)
        assert sweep.max_aggregate_by_dim[d] == pytest.approx(max(by_dim[d]), abs=1e-8)
    assert sweep.passed and sweep.always_equal


def test_f4_sweep_reports_equality():
    F4 = ExtFieldDesc.from_text(2, "1,1,1")
    d = winterhof_sweep(F4).to_dict()
    assert d["subspaces"] == 5 and d["cap"] == 4 and d["passed"] and d["always_equal"]


def test_sweep_capacity():
    with pytest.raises(CapacityError):
        winterhof_sweep(ExtFieldDesc(2, 16, find_irreducible(2, 16)))
