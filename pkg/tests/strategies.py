"""Hypothesis strategies for random genus-one graphs."""
from hypothesis import strategies as st

from g1census.graphs import DualGraph


@st.composite
def genus_one_graphs(draw, max_tree=4, max_cycle=4, max_deg=2, max_marks=3):
    if draw(st.booleans()):
        genus, edges = [1], []
    else:
        k = draw(st.integers(1, max_cycle))
        genus = [0] * k
        edges = [(0, 0)] if k == 1 else [(i, (i + 1) % k) for i in range(k)]
    for _ in range(draw(st.integers(0, max_tree))):
        parent = draw(st.integers(0, len(genus) - 1))
        genus.append(0)
        edges.append((parent, len(genus) - 1))
    nv = len(genus)
    degree = [draw(st.integers(0, max_deg)) for _ in range(nv)]
    marks = [draw(st.integers(0, nv - 1)) for _ in range(draw(st.integers(0, max_marks)))]
    return DualGraph(genus, degree, edges, marks)


@st.composite
def permutations_of(draw, n):
    return draw(st.permutations(list(range(n))))
