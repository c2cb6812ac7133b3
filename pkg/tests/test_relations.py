import pytest
from hypothesis import given
from hypothesis import strategies as st

from g1census.blocks import basepoint_basis
from g1census.enumerate import enumerate_coarse_classes, is_enumerated, make_key
from g1census.hodge import CuspTable
from g1census.relations import (KINDS, basepoint_relations_cycle, basepoint_relations_g1, beta_relations_g0,
                                degree_two_rank_check, relation_ledger, structural_relations)

# synthetic multiplicities: only the bookkeeping is under test here
TABLE = CuspTable({(12, 11): (11, "trivial"), (13, 11): (55, "trivial"), (13, 13): (1, "sign")})


def _known(n, r, d, c):
    return {k.canonical: k for k in enumerate_coarse_classes(n, r, d, c)}


def test_g1_degree_two_only_aligned_terms():
    recs = basepoint_relations_g1(0, 2, 2)
    assert len(recs) == len(basepoint_basis(0)) * (2 - 1) * 3
    for rec in recs:
        for t in rec.terms:
            assert t.stratum.startswith("A|")
        reasons = {why for what, why in rec.absent if what.startswith("tail delta=1")}
        assert reasons == {"empty genus-one factor"}


def test_g1_hyperplane_exponent_gate():
    r, d = 2, 3
    recs = basepoint_relations_g1(0, r, d)
    for rec in recs:
        _, (_, _, theta, m) = rec.source
        has_tail = any(t.stratum.startswith("U|") for t in rec.terms)
        assert has_tail == (m >= 1 * (r + 1))


def test_cusp_sources_at_eleven_marks():
    recs = basepoint_relations_g1(11, 2, 2, 1, TABLE)
    cusp = [rec for rec in recs if rec.source[1][1] != "1"]
    assert cusp and any(t.cusp for rec in cusp for t in rec.terms)


def test_cycle_records():
    (loop,) = [k for k in enumerate_coarse_classes(0, 2, 2, 1) if k.kind == "positive-cycle-core"]
    recs = basepoint_relations_cycle(loop, 1)
    assert len(recs) == 3
    for d in (2, 3, 4):
        for key in enumerate_coarse_classes(0, 2, d, 2):
            if key.kind != "positive-cycle-core":
                continue
            for rec in basepoint_relations_cycle(key, 2):
                # the degree-one tail split is always accounted for
                mentioned = [t.stratum for t in rec.terms] + [a for a, _ in rec.absent]
                assert any(":1:-:" in s for s in mentioned)
                # no core-edge contraction targets
                for t in rec.terms:
                    assert t.stratum.startswith("U|0:")


def test_beta_records():
    keys = {tuple(sorted(x[0] for x in k.to_json()["radius"])): k
            for k in enumerate_coarse_classes(0, 2, 3, 1) if k.kind == "aligned-genus1-core"}
    (rec,) = beta_relations_g0(keys[(3,)], max_codim=2)
    assert rec.terms and rec.terms[0].label == ("fundamental", "pt")
    ones = beta_relations_g0(keys[(1, 1, 1)], max_codim=2)
    assert {r.source[1][0] for r in ones} == {"beta", "beta-diff"}
    two = enumerate_coarse_classes(0, 2, 2, 1)
    (single,) = [k for k in two if k.kind == "aligned-genus1-core" and len(k.to_json()["radius"]) == 1]
    assert len(beta_relations_g0(single, max_codim=2)) == 1


def test_structural_examples():
    recs = structural_relations(4, 2, 2, 1)
    kinds = {r.kind for r in recs}
    assert kinds == {"psi-equality", "wdvv-pullback", "getzler-pullback"}
    two_radius = make_key((True, ("g1", ((1, 0, 0, (1, 2, 3, 4)),
                                         (((0, 1, 1, ()), ()), ((0, 1, 1, ()), ()))))), 4, 2, 2)
    psi = [r for r in recs if r.kind == "psi-equality" and r.source[0] == two_radius.canonical]
    assert len(psi) == 1
    wdvv = [r for r in recs if r.kind == "wdvv-pullback"]
    assert wdvv
    getz = [r for r in recs if r.kind == "getzler-pullback" and r.source[0] == two_radius.canonical]
    assert getz


LEDGER_GRID = [(0, 2, 2), (1, 2, 2), (0, 2, 3), (2, 3, 2), (1, 3, 3)]


@pytest.mark.parametrize("n,r,d", LEDGER_GRID)
def test_ledger_invariants(n, r, d):
    known = _known(n, r, d, 2)
    for rec in relation_ledger(n, r, d, 1):
        assert rec.kind in KINDS
        assert len(rec.degrees()) <= 1
        for t in rec.terms:
            assert t.stratum in known
            assert t.global_degree == rec.global_degree


@pytest.mark.parametrize("n,r,d", LEDGER_GRID[:4])
def test_degree_two(n, r, d):
    gens, rels, pic = degree_two_rank_check(n, r, d)
    assert gens - rels == pic


@given(st.sampled_from([(0, 2, 3, 2), (1, 2, 3, 2), (2, 2, 2, 2)]), st.data())
def test_membership_predicate(params, data):
    n, r, d, c = params
    big = enumerate_coarse_classes(n, r, d, c + 1)
    names = {k.canonical for k in enumerate_coarse_classes(n, r, d, c)}
    key = data.draw(st.sampled_from(big))
    assert is_enumerated(key.code, n, d, c) == (key.canonical in names)
    other = data.draw(st.integers(0, d + 2))
    if other != d:
        assert not is_enumerated(key.code, n, other, c + 1)
