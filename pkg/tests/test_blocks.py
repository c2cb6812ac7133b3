import pytest
from hypothesis import given
from hypothesis import strategies as st

from g1census.blocks import (NeedsTable, cycle_core_pieces, dtilde_pieces, m1n_maps_pure, map_w_cohomology,
                             mapF_parametrised_pieces, mapF_pieces, mbar0n_coefficients, mbar0n_poincare,
                             pic_off, pic_pure, tails_coefficients, tails_poincare)
from g1census.hodge import CuspTable, HodgeSeries, TableIncomplete, geometric_tate

from oracles.euler import POINCARE_MBAR0N, euler_mbar0n

L = lambda i: (i, ())  # noqa: E731
S12 = (0, ((11, 1),))
# synthetic multiplicities: only the mechanism is under test here
TABLE = CuspTable({(12, 11): (11, "trivial"), (13, 11): (55, "trivial"), (13, 13): (1, "sign")})


def H(d):
    return HodgeSeries(d)


def off_labels(piece):
    return [lab for lab, _, _ in piece.off_labels]


def test_map_w():
    p = map_w_cohomology(2, 3)
    assert p.pure == HodgeSeries.one()
    assert p.off_by_one == H({(5, L(3)): 1})
    one = map_w_cohomology(1, 2)
    assert not one.empty and one.pure == HodgeSeries.one() and not one.off_by_one
    assert map_w_cohomology(1, 2, w_nonzero=False).empty


def test_dtilde():
    p = dtilde_pieces((1, 1), 2)
    kinds = sorted(lab[0] for lab in off_labels(p))
    assert kinds == ["beta", "beta", "torus"]
    q = dtilde_pieces((2, 2, 2), 2)
    assert q.pure == HodgeSeries.one() and 2 * q.dim == 12
    assert dtilde_pieces((1, 0), 2).empty


def test_dtilde_zero_reduction():
    base = dtilde_pieces((2, 2), 2)
    extended = dtilde_pieces((2, 2, 0), 2)
    assert extended.dim == base.dim + 1
    assert extended.pure == base.pure
    assert extended.off_by_one == base.off_by_one + H({(1, L(1)): 1})


def test_mapf_parametrised():
    p = mapF_parametrised_pieces((2, 2), 3)
    assert sorted(lab[0] for lab in off_labels(p)) == ["beta", "beta", "torus"]
    assert p.pure == HodgeSeries.one()
    q = mapF_parametrised_pieces((1, 1), 2)
    assert [lab for lab in off_labels(q) if lab[0] == "beta"]
    s = mapF_parametrised_pieces((3,), 2)
    assert s.pure == HodgeSeries.one() and sum(s.off_by_one.dims().values()) == 1


def test_mapf():
    assert mapF_pieces((2, 2), (0, 0), 3).pure == geometric_tate(3)
    assert mapF_pieces((2,), (3,), 3).pure == HodgeSeries.one()
    assert mapF_pieces((1, 1), (0, 0), 2).pure == geometric_tate(2)


@given(st.lists(st.integers(1, 4), min_size=2, max_size=4), st.data(), st.integers(1, 4))
def test_mapf_pure_depends_only_on_valence(deltas, data, r):
    legs = data.draw(st.lists(st.integers(0, 2), min_size=len(deltas), max_size=len(deltas)))
    other = [x + 1 for x in deltas]
    assert mapF_pieces(tuple(deltas), tuple(legs), r).pure == mapF_pieces(tuple(other), tuple(legs), r).pure


def test_pic():
    assert pic_pure(1) == geometric_tate(2)
    assert pic_pure(10) == H({(0, L(0)): 1, (2, L(1)): 1, (11, S12): 1})
    assert not pic_off(2)
    assert pic_off(3).dims() == {3: 1}


def test_m1n_maps():
    assert m1n_maps_pure(1, 1, 2).pure == H({(0, L(0)): 1, (2, L(1)): 2, (4, L(2)): 1})
    for n in range(1, 10):
        assert m1n_maps_pure(n, 3, 2).pure.dims()[2] == 2
    p = m1n_maps_pure(11, 1, 2, TABLE).pure
    assert p.coefficient(11, S12) > 0 and p.coefficient(13, (1, ((11, 1),))) > 0
    with pytest.raises(TableIncomplete):
        m1n_maps_pure(11, 1, 2)


def test_cycle_core():
    loop = cycle_core_pieces(1, (2,), (0,), 2)
    # one bivalent vertex carrying psi times r hyperplane powers, cut at twice the dimension
    assert loop.pure.max_degree() <= 2 * loop.dim
    assert loop.pure.dims() == {0: 1, 2: 2, 4: 2, 6: 2, 8: 2, 10: 2}
    marked = cycle_core_pieces(2, (1, 1), (1, 1), 2)
    assert marked.pure == geometric_tate(2)
    assert any(lab[0] == "torus-sign" for lab in off_labels(loop))


def test_tails():
    for r in range(1, 6):
        assert tails_poincare(0, 1, r) == geometric_tate(r)
    c = tails_coefficients(1, 2, 2)
    assert c == c[::-1] and len(c) - 1 == 2 * 3 + 1 - 2


@pytest.mark.parametrize("m,delta,r", [(0, 1, 2), (1, 1, 2), (0, 2, 2), (2, 1, 3), (1, 2, 2), (0, 3, 1),
                                       (3, 0, 2), (0, 2, 3)])
def test_tails_palindromic(m, delta, r):
    c = tails_coefficients(m, delta, r)
    assert c == c[::-1]
    assert len(c) - 1 == delta * (r + 1) + m - 2


def test_tails_budget():
    with pytest.raises(NeedsTable):
        tails_coefficients(0, 4, 2, budget=2)


@pytest.mark.parametrize("n", range(3, 8))
def test_mbar0n(n):
    coeffs = mbar0n_coefficients(n)
    assert coeffs == POINCARE_MBAR0N[n]
    assert sum(coeffs) == euler_mbar0n(n)
    assert mbar0n_poincare(n).dims() == {2 * i: c for i, c in enumerate(coeffs) if c}


def test_weights():
    pieces = [map_w_cohomology(3, 2), dtilde_pieces((1, 2), 3), mapF_pieces((2, 2), (0, 1), 3),
              mapF_parametrised_pieces((1, 1, 2), 2), cycle_core_pieces(3, (1, 0, 2), (0, 1, 0), 2),
              m1n_maps_pure(11, 2, 2, TABLE)]
    for p in pieces:
        assert p.pure.is_pure()
        assert p.off_by_one.is_off_by_one()
