import json
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from g1census.enumerate import (boundary_divisors, code_to_graph, codimension, dimension_crosscheck,
                                enumerate_coarse_classes, key_from_graph, make_key)
from g1census.graphs import (contract_edge, core, is_stable, radial_merge,
                             validate_alignment)
from g1census.acceptance import divisor_descriptor

from oracles.divisors import divisors

GOLDEN = Path(__file__).resolve().parent / "golden"


def test_interior_only():
    keys = enumerate_coarse_classes(0, 2, 2, 0)
    assert len(keys) == 1 and keys[0].kind == "interior"
    assert keys[0].dim == 0 + 2 * 3


def test_codim_one_degree_two():
    divs = boundary_divisors(0, 3, 2)
    assert sorted(divisor_descriptor(k) for k in divs) == sorted([
        ["loop", 2, []], ["radius", [], [[2, []]]], ["radius", [], [[1, []], [1, []]]]])


def test_marking_placements():
    got = {divisor_descriptor(k)[0] + str(divisor_descriptor(k)[1:]) for k in boundary_divisors(1, 2, 2)}
    assert any(s.startswith("radius[[1]") for s in got)      # mark on the core
    assert any("[2, [1]]" in s for s in got)                # mark on a radius vertex
    tails = [divisor_descriptor(k) for k in boundary_divisors(1, 2, 3) if divisor_descriptor(k)[0] == "tail"]
    assert ["tail", 2, [], 1, [1]] in tails and ["tail", 2, [1], 1, []] in tails


def test_degree_three_shapes():
    desc = [divisor_descriptor(k) for k in boundary_divisors(0, 2, 3)]
    for want in (["radius", [], [[3, []]]], ["radius", [], [[1, []], [2, []]]],
                 ["radius", [], [[1, []], [1, []], [1, []]]], ["loop", 3, []], ["tail", 2, [], 1, []]):
        assert want in desc
    # a loop carrying degree two plus a degree-one tail has two nodes
    codim2 = [k for k in enumerate_coarse_classes(0, 2, 3, 2) if k.codim == 2]
    loops = [k for k in codim2 if k.kind == "positive-cycle-core" and len(k.to_json()["tails"]) == 1]
    assert loops


@pytest.mark.parametrize("n", [0, 1, 2])
@pytest.mark.parametrize("r", [2, 3])
@pytest.mark.parametrize("d", [2, 3])
def test_golden_divisors(n, r, d):
    want = json.loads((GOLDEN / f"divisors_n{n}_r{r}_d{d}.json").read_text())
    assert want == divisors(n, d)
    assert sorted(divisor_descriptor(k) for k in boundary_divisors(n, r, d)) == want


def test_codimension_examples():
    gd = (False, ("g1", ((1, 2, 0, ()), (((0, 1, -1, ()), ()),))))
    assert codimension(gd) == 1
    aligned = (True, ("g1", ((1, 0, 0, ()), (((0, 2, 1, ()), ()),))))
    assert codimension(aligned) == 1
    two_cycle = (False, ("cyc", (((0, 1, 0, ()), ()), ((0, 1, 0, ()), ()))))
    assert codimension(two_cycle) == 2


def test_dimension_examples():
    r, n, d = 2, 1, 3
    gd = make_key((False, ("g1", ((1, 2, 0, (1,)), (((0, 1, -1, ()), ()),)))), n, r, d)
    ok, dims = dimension_crosscheck(gd)
    assert ok and sum(dims.values()) == n + d * (r + 1) - 1
    al = make_key((True, ("g1", ((1, 0, 0, ()), (((0, 1, 1, ()), ()), ((0, 2, 1, (1,)), ()))))), n, r, d)
    ok, dims = dimension_crosscheck(al)
    assert ok and al.dim == n + d * (r + 1) - 1
    interior = enumerate_coarse_classes(n, r, d, 0)[0]
    assert interior.dim == n + d * (r + 1)


GRID = [(n, r, d) for n in range(4) for r in (1, 2, 3) for d in range(6)]


@pytest.mark.parametrize("n,r,d", GRID)
def test_dimension_crosscheck_grid(n, r, d):
    for k in enumerate_coarse_classes(n, r, d, 2, check=False):
        assert dimension_crosscheck(k)[0], k.canonical


def _corpus():
    out = []
    for n, r, d, c in [(0, 2, 3, 3), (1, 2, 3, 2), (2, 2, 2, 2), (0, 2, 4, 2), (1, 3, 3, 2)]:
        out.append(((n, r, d, c), enumerate_coarse_classes(n, r, d, c)))
    return out


CORPUS = _corpus()


@pytest.mark.parametrize("params,keys", CORPUS, ids=[str(p) for p, _ in CORPUS])
def test_enumerated_classes_valid(params, keys):
    for k in keys:
        g, a = code_to_graph(k.code)
        assert g.check() == []
        assert is_stable(g), k.canonical
        if a is not None:
            assert validate_alignment(g, a)[0], k.canonical
        assert k.dim + k.codim == k.n + k.d * (k.r + 1)
    assert len({k.canonical for k in keys}) == len(keys)


@pytest.mark.parametrize("params,keys", CORPUS, ids=[str(p) for p, _ in CORPUS])
def test_closed_under_merge_and_core_contraction(params, keys):
    n, r, d, c = params
    known = {k.canonical for k in enumerate_coarse_classes(n, r, d, c)}
    for k in keys:
        g, a = code_to_graph(k.code)
        images = []
        if a is not None:
            for i in range(1, a.depth + 1):
                h, b = radial_merge(g, a, i)
                if b is None and sum(h.degree[v] for v in core(h)) == 1 and h.genus[min(core(h))] == 1:
                    continue  # positive genus-one core of degree one is empty
                images.append((h, b))
        else:
            cyc = core(g)
            for i, (x, y) in enumerate(g.edges):
                if x in cyc and y in cyc and len(cyc) > 1:
                    images.append((contract_edge(g, i), None))
        for h, b in images:
            img = key_from_graph(h, b, r)
            assert img.codim == k.codim - 1
            assert img.canonical in known, (k.canonical, img.canonical)


@given(st.sampled_from([(n, d) for n in (1, 2, 3) for d in (2, 3)]), st.data())
def test_mark_permutation_invariance(nd, data):
    n, d = nd
    keys = enumerate_coarse_classes(n, 2, d, 2)
    perm = data.draw(st.permutations(list(range(n))))
    renamed = set()
    for k in keys:
        g, a = code_to_graph(k.code)
        from g1census.graphs import DualGraph
        marks = [0] * n
        for i, v in enumerate(g.marks):
            marks[perm[i]] = v
        h = DualGraph(g.genus, g.degree, g.edges, marks)
        renamed.add(key_from_graph(h, a, 2).canonical)
    assert renamed == {k.canonical for k in keys}


def test_emptiness_rules():
    for k in enumerate_coarse_classes(1, 2, 3, 3):
        top = k.code
        aligned, (kind, body) = top
        if kind == "g1" and not aligned:
            assert body[0][1] != 1
        if aligned:
            from g1census.enumerate import radius_vertices
            rad = radius_vertices(top)
            assert sum(v[0][1] for v in rad) >= 2
            assert not (len(rad) == 1 and rad[0][0][1] == 1)
