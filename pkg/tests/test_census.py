from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from g1census.acceptance import degodd_code, odd_rank
from g1census.blocks import m1n_maps_pure, tails_poincare
from g1census.census import (Assembler, betti_bounds, cusp_strata, cycle_sum, e1_pure_table, h2_basis,
                             odd_survey, picard_rank, stratum_pure)
from g1census.enumerate import enumerate_coarse_classes, make_key
from g1census.hodge import HodgeSeries, geometric_tate

from oracles.burnside import invariant_dims, series_degrees

L = lambda i: (i, ())  # noqa: E731


def test_interior_record():
    (key,) = enumerate_coarse_classes(1, 1, 2, 0)
    rec = stratum_pure(key)
    assert rec.invariant_pure == HodgeSeries({(0, L(0)): 1, (2, L(1)): 2, (4, L(2)): 1})
    assert rec.aut_order == 1


def test_degodd_first_graph():
    for r, nonzero in [(10, False), (11, True), (12, True)]:
        rec = Assembler(r).stratum(make_key(degodd_code([1] * 11), 0, r, 11))
        odd = rec.invariant_pure.odd_part()
        assert bool(odd) == nonzero
        if nonzero:
            assert min(odd.dims()) == 11 + 2 * comb(11, 2) == 121


def test_degodd_second_graph():
    rec = Assembler(11).stratum(make_key(degodd_code(range(1, 12)), 0, 11, 66), max_degree=13)
    assert rec.aut_order == 1
    assert rec.invariant_pure.coefficient(11, (0, ((11, 1),))) == 1


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("sign", [False, True])
@pytest.mark.parametrize("W", [geometric_tate(2), geometric_tate(3),
                               HodgeSeries({(0, L(0)): 1, (2, L(1)): 3, (4, L(2)): 1})])
def test_cycle_sum_brute_force(k, sign, W):
    got = {d: c for d, c in cycle_sum(W, k, sign=sign).dims().items() if c}
    assert got == invariant_dims(series_degrees(W.dims()), k, sign)


def test_identical_tails_brute_force():
    # positive core of degree 2 with five degree-1 tails: Aut = S5 of order 120
    keys = [k for k in enumerate_coarse_classes(0, 2, 7, 5)
            if k.kind == "positive-genus1-core" and len(k.to_json()["tails"]) == 5
            and all(t == [1, []] for t in k.to_json()["tails"])]
    (key,) = keys
    rec = Assembler(2).stratum(key)
    assert rec.aut_order == 120
    core = m1n_maps_pure(5, 2, 2).pure
    tail = tails_poincare(0, 1, 2)
    sym = invariant_dims(series_degrees(tail.dims()), 5)
    want = core * HodgeSeries({(d, L(d // 2)): c for d, c in sym.items()})
    assert rec.invariant_pure == want


def _records(n, r, d, c):
    return e1_pure_table(n, r, d, c).records


RECORD_GRID = [(0, 2, 3, 3), (1, 2, 3, 2), (2, 3, 2, 2), (0, 3, 4, 2)]


@pytest.mark.parametrize("n,r,d,c", RECORD_GRID)
def test_record_invariants(n, r, d, c):
    for rec in _records(n, r, d, c):
        inv, raw = rec.invariant_pure.dims(), rec.raw.pure.dims()
        assert all(inv[j] <= raw.get(j, 0) for j in inv)
        assert rec.invariant_pure.coefficient(0) == 1
        assert all(0 <= j <= 2 * rec.key.dim for j in rec.bm_pure.dims())
        assert rec.invariant_pure.is_pure()
        assert rec.invariant_pure.nonnegative_integral()


@pytest.mark.parametrize("n,r,d,c", RECORD_GRID)
def test_table_counts(n, r, d, c):
    tab = e1_pure_table(n, r, d, c)
    counts = tab.counts_by_degree()
    assert counts[0] == 1
    assert counts.get(1, 0) == 0
    assert not {j for j in tab.odd_entries() if j < 11}
    amb = n + d * (r + 1)
    by_j = {}
    for (p, j), rows in tab.entries.items():
        by_j[j] = by_j.get(j, 0) + sum(rk for _, rk in rows)
    assert {2 * amb - j: c for j, c in by_j.items() if c} == {k: v for k, v in counts.items() if v}
    for deg, mono_counts in tab.hodge_breakdown().items():
        for mono in mono_counts:
            if deg % 2 == 0:
                assert not mono[1]


def test_cusp_entries_carry_one_cusp_factor():
    keys, _ = cusp_strata(0, 11, 11, 1, None)
    asm = Assembler(11)
    for key in keys[:20]:
        rec = asm.stratum(key, max_degree=130)
        for (deg, mono), c in rec.invariant_pure.items():
            if deg % 2:
                assert sum(e for _, e in mono[1]) == 1
            else:
                assert not mono[1]


@given(st.sampled_from([(0, 2), (1, 2), (0, 3), (2, 2)]), st.integers(3, 6))
def test_odd_vanishing_is_stable_in_r(nd, r2):
    n, d = nd
    a = e1_pure_table(n, 2, d, 2, max_degree=10).odd_entries()
    b = e1_pure_table(n, r2, d, 2, max_degree=10).odd_entries()
    assert a == b == {}


def test_picard_examples():
    assert picard_rank(0, 2, 2) == 5 == picard_rank(0, 5, 2)
    assert picard_rank(0, 2, 3) == 2 + 5
    assert h2_basis(0, 2, 2)[:2] == ["Theta", "H"]
    with pytest.raises(ValueError):
        picard_rank(0, 2, 1)


def test_odd_survey_examples():
    s = odd_survey(0, 11, 11, max_codim=3)
    assert s.nonzero and s.headline["global_degree"] == 123 and s.headline["stratum_degree"] == 121
    assert all(not odd_survey(0, 11, d, max_codim=3).nonzero for d in range(2, 11))
    t = odd_survey(0, 11, 66, max_codim=3, max_degree=13)
    assert t.degrees.get(13) and not t.degrees.get(11)


@pytest.mark.parametrize("n,r,d", [(0, 2, 2), (1, 2, 2), (0, 2, 3)])
def test_betti_bounds(n, r, d):
    b = betti_bounds(n, r, d, 3)
    assert b[0] == (1, 1) and b[1] == (0, 0)
    assert b[2] == (picard_rank(n, r, d),) * 2
    assert all(u >= lo >= 0 for lo, u in b.values())


def test_s11_rank_formula():
    rank = {r: odd_rank(Assembler(r).stratum(make_key(degodd_code([1] * 11), 0, r, 11)).invariant_pure)
            for r in (10, 11, 12)}
    assert rank[10] == 0 and rank[11] > 0 and rank[12] > rank[11]
