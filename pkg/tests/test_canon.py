from hypothesis import given
from hypothesis import strategies as st

from g1census.canon import aut_group, aut_order_from_code, canonical_form, graph_code, isomorphic
from g1census.enumerate import code_to_graph, enumerate_coarse_classes
from g1census.graphs import CentralAlignment, DualGraph, relabel

from oracles.automorphisms import aut_count
from strategies import genus_one_graphs


def degodd_graph(degrees):
    k = len(degrees)
    g = DualGraph([1] + [0] * k, [0] + list(degrees), [(0, i + 1) for i in range(k)])
    a = CentralAlignment.from_dict({0: 0, **{i + 1: 1 for i in range(k)}})
    return g, a


def test_relabelled_two_cycle():
    g = DualGraph([0, 0], [1, 2], [(0, 1), (0, 1)])
    h, _ = relabel(g, [1, 0])
    assert canonical_form(g)[0] == canonical_form(h)[0]


def test_loop_vs_two_cycle():
    loop = DualGraph([0], [2], [(0, 0)])
    two = DualGraph([0, 0], [1, 1], [(0, 1), (0, 1)])
    assert not isomorphic((loop, None), (two, None))


def test_degodd_small_relabellings():
    from itertools import permutations
    g, a = degodd_graph([1, 1, 1])
    ref = canonical_form(g, a)[0]
    for p in permutations(range(4)):
        h, b = relabel(g, list(p), a)
        assert canonical_form(h, b)[0] == ref


def test_degodd_groups():
    g, a = degodd_graph([1] * 11)
    from math import factorial
    assert aut_group(g, a).order == factorial(11)
    g2, a2 = degodd_graph(range(1, 12))
    assert aut_group(g2, a2).order == 1


def test_dihedral_cycles():
    for k in range(1, 6):
        edges = [(0, 0)] if k == 1 else [(i, (i + 1) % k) for i in range(k)]
        g = DualGraph([0] * k, [1] * k, edges)
        grp = aut_group(g)
        assert grp.order == 2 * k == aut_count(g.genus, g.degree, g.edges, g.marks)
        assert len(grp.elements()) == grp.order


@given(genus_one_graphs(), st.data())
def test_canonical_invariant_under_relabelling(g, data):
    perm = data.draw(st.permutations(list(range(g.num_vertices))))
    h, _ = relabel(g, perm)
    assert canonical_form(g)[0] == canonical_form(h)[0]
    assert graph_code(g) == graph_code(h)


@given(genus_one_graphs(max_tree=3, max_cycle=3))
def test_order_matches_brute_force(g):
    grp = aut_group(g)
    assert grp.order == aut_count(g.genus, g.degree, g.edges, g.marks)
    assert len(grp.elements()) == grp.order


CORPUS = [k for n, r, d, c in [(0, 2, 3, 3), (2, 2, 2, 2), (1, 2, 4, 2)]
          for k in enumerate_coarse_classes(n, r, d, c)
          if len(code_to_graph(k.code)[0].genus) <= 7]


@given(st.sampled_from(CORPUS), st.data())
def test_aligned_corpus(key, data):
    g, a = code_to_graph(key.code)
    levels = dict(a.level) if a else None
    assert aut_order_from_code(key.code) == aut_count(g.genus, g.degree, g.edges, g.marks, levels)
    perm = data.draw(st.permutations(list(range(g.num_vertices))))
    h, b = relabel(g, perm, a)
    assert canonical_form(h, b)[0] == key.canonical
