"""Genus-one dual graphs with degree and marking decorations, central
alignments, and coarse (tail-contracted) representatives.

Vertices are integers 0..V-1.  Edges are sorted vertex pairs; a loop is
(v, v).  Markings are stored as a tuple whose i-th entry is the vertex
carrying mark i+1.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Optional


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class DualGraph:
    genus: tuple
    degree: tuple
    edges: tuple
    marks: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(tuple(sorted(e)) for e in self.edges)))
        object.__setattr__(self, "genus", tuple(self.genus))
        object.__setattr__(self, "degree", tuple(self.degree))
        object.__setattr__(self, "marks", tuple(self.marks))

    @property
    def n(self):
        return len(self.marks)

    @property
    def d(self):
        return sum(self.degree)

    @property
    def num_vertices(self):
        return len(self.genus)

    def vertices(self):
        return range(len(self.genus))

    def marks_at(self, v):
        return tuple(i + 1 for i, u in enumerate(self.marks) if u == v)

    def valence(self, v):
        val = 0
        for a, b in self.edges:
            if a == v:
                val += 1
            if b == v:
                val += 1
        return val

    def neighbours(self, v):
        out = []
        for a, b in self.edges:
            if a == v and b != v:
                out.append(b)
            elif b == v and a != v:
                out.append(a)
        return out

    def adjacency(self):
        adj = defaultdict(list)
        for a, b in self.edges:
            if a != b:
                adj[a].append(b)
                adj[b].append(a)
        return adj

    def betti(self):
        return len(self.edges) - self.num_vertices + 1

    def is_connected(self):
        if not self.num_vertices:
            return False
        adj = self.adjacency()
        seen = {0}
        todo = [0]
        while todo:
            v = todo.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    todo.append(u)
        return len(seen) == self.num_vertices

    def check(self):
        problems = []
        if not self.is_connected():
            problems.append("disconnected")
        if self.betti() + sum(self.genus) != 1:
            problems.append("arithmetic genus is not one")
        if any(m < 0 or m >= self.num_vertices for m in self.marks):
            problems.append("marking on a missing vertex")
        if any(x < 0 for x in self.genus + self.degree):
            problems.append("negative decoration")
        return problems


def is_stable(g: DualGraph) -> bool:
    """Every contracted vertex has 2w - 2 + val + #marks > 0 (loops count twice)."""
    for v in g.vertices():
        if g.degree[v] == 0:
            if 2 * g.genus[v] - 2 + g.valence(v) + len(g.marks_at(v)) <= 0:
                return False
    return True


def contract_edge(g: DualGraph, e) -> DualGraph:
    """Contract edge e, given either as an index or as a vertex pair."""
    edges = list(g.edges)
    if isinstance(e, int):
        if not 0 <= e < len(edges):
            raise GraphError(f"no edge with index {e}")
        idx = e
    else:
        key = tuple(sorted(e))
        if key not in edges:
            raise GraphError(f"edge {key} not present")
        idx = edges.index(key)
    a, b = edges.pop(idx)
    genus = list(g.genus)
    degree = list(g.degree)
    if a == b:
        genus[a] += 1
        return DualGraph(genus, degree, edges, g.marks)
    # merge b into a, then drop b and shift labels
    genus[a] += genus[b]
    degree[a] += degree[b]

    def relabel(v):
        v = a if v == b else v
        return v - 1 if v > b else v

    del genus[b]
    del degree[b]
    new_edges = [(relabel(x), relabel(y)) for x, y in edges]
    marks = [relabel(m) for m in g.marks]
    return DualGraph(genus, degree, new_edges, marks)


def cycle_vertices(g: DualGraph):
    """Vertices on the unique cycle, in cyclic order; [] when there is none."""
    for a, b in g.edges:
        if a == b:
            return [a]
    counts = defaultdict(int)
    for e in g.edges:
        counts[e] += 1
    for e, c in counts.items():
        if c == 2:
            return list(e)
    # strip leaves until only the cycle is left
    deg = defaultdict(int)
    adj = g.adjacency()
    for v in g.vertices():
        deg[v] = len(adj[v])
    alive = set(g.vertices())
    leaves = deque(v for v in alive if deg[v] <= 1)
    while leaves:
        v = leaves.popleft()
        if v not in alive:
            continue
        alive.discard(v)
        for u in adj[v]:
            if u in alive:
                deg[u] -= 1
                if deg[u] == 1:
                    leaves.append(u)
    if not alive:
        return []
    start = min(alive)
    order = [start]
    prev, cur = None, start
    while True:
        nxt = [u for u in adj[cur] if u in alive and u != prev]
        nxt = min(nxt) if prev is None else nxt[0]
        if nxt == start:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    return order


def core(g: DualGraph) -> frozenset:
    """Minimal genus-one subgraph: the genus-one vertex or the cycle."""
    for v in g.vertices():
        if g.genus[v] == 1:
            return frozenset([v])
    return frozenset(cycle_vertices(g))


def parent_map(g: DualGraph, root=None):
    """Parent of each non-core vertex on its path to the core."""
    root = core(g) if root is None else frozenset(root)
    adj = g.adjacency()
    parent = {}
    seen = set(root)
    todo = deque(sorted(root))
    while todo:
        v = todo.popleft()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                parent[u] = v
                todo.append(u)
    return parent


class VertexPoset:
    """f1 <= f2 when the path from f2 to the core passes through f1; core tied minimal."""

    def __init__(self, g: DualGraph):
        self.core = core(g)
        self.parent = parent_map(g, self.core)

    def ancestors(self, v):
        out = []
        while v in self.parent:
            v = self.parent[v]
            out.append(v)
        return out

    def leq(self, a, b):
        if a in self.core:
            return True
        if b in self.core:
            return False
        return a == b or a in self.ancestors(b)

    def comparable(self, a, b):
        return self.leq(a, b) or self.leq(b, a)


def vertex_poset(g: DualGraph) -> VertexPoset:
    return VertexPoset(g)


@dataclass(frozen=True)
class Enhanced:
    genus: tuple
    degree: tuple
    edges: tuple
    marks: tuple  # (mark label, new vertex)
    vertex_map: tuple  # new index -> old index
    legs: tuple  # (new vertex, old edge) one per cut edge


def enhancement(g: DualGraph, s) -> Enhanced:
    """Induced subgraph on s with one extra leg for every cut edge."""
    s = sorted(set(s))
    if not s:
        raise GraphError("empty vertex subset")
    pos = {v: i for i, v in enumerate(s)}
    edges, legs = [], []
    for a, b in g.edges:
        if a in pos and b in pos:
            edges.append((pos[a], pos[b]))
        elif a in pos:
            legs.append((pos[a], (a, b)))
        elif b in pos:
            legs.append((pos[b], (a, b)))
    marks = tuple((i + 1, pos[m]) for i, m in enumerate(g.marks) if m in pos)
    return Enhanced(tuple(g.genus[v] for v in s), tuple(g.degree[v] for v in s),
                    tuple(sorted(edges)), marks, tuple(s), tuple(legs))


@dataclass(frozen=True)
class CentralAlignment:
    level: tuple  # sorted (vertex, level) pairs

    @classmethod
    def from_dict(cls, levels):
        return cls(tuple(sorted(levels.items())))

    @property
    def levels(self):
        return dict(self.level)

    @property
    def support(self):
        return frozenset(v for v, _ in self.level)

    @property
    def depth(self):
        return max((l for _, l in self.level), default=0)


def validate_alignment(g: DualGraph, a: CentralAlignment):
    """Returns (ok, list of violated conditions)."""
    report = []
    lv = a.levels
    sup = a.support
    if not sup <= set(g.vertices()):
        return False, ["support outside the graph"]
    c = core(g)
    if a.depth < 1:
        report.append("depth must be at least one")
    # connected support containing the core
    if not c <= sup:
        report.append("support does not contain the core")
    else:
        adj = g.adjacency()
        seen = set(c)
        todo = list(c)
        while todo:
            v = todo.pop()
            for u in adj[v]:
                if u in sup and u not in seen:
                    seen.add(u)
                    todo.append(u)
        if seen != set(sup):
            report.append("support is not connected")
    if {v for v in sup if lv[v] == 0} != set(c):
        report.append("level zero is not the core")
    top = a.depth
    positive = [v for v in sup if g.degree[v] > 0]
    if any(lv[v] != top for v in positive):
        report.append("positive-degree support vertex below the top level")
    if sum(g.degree[v] for v in sup if lv[v] == top) < 2:
        report.append("radius degrees sum to less than two")
    poset = VertexPoset(g)
    bad = False
    for u in sup:
        for v in sup:
            if u != v and poset.leq(u, v) and not poset.leq(v, u) and lv[u] >= lv[v]:
                bad = True
    if bad:
        report.append("level map is not monotone")
    if set(range(top + 1)) != set(lv.values()):
        report.append("level map is not surjective")
    return not report, report


def radial_merge(g: DualGraph, a: CentralAlignment, i: int):
    """Merge level i into level i-1, contracting the edges between them."""
    if not 1 <= i <= a.depth:
        raise GraphError(f"level index {i} out of range 1..{a.depth}")
    lv = a.levels
    to_contract = [(x, y) for x, y in g.edges
                   if x != y and x in lv and y in lv and {lv[x], lv[y]} == {i - 1, i}]
    new_lv = {v: (l - 1 if l >= i else l) for v, l in lv.items()}
    # track vertex identities through contractions
    names = list(g.vertices())
    h = g
    for x, y in to_contract:
        ix, iy = names.index(x), names.index(y)
        h = contract_edge(h, (ix, iy))
        keep, drop = min(ix, iy), max(ix, iy)
        # the surviving vertex keeps the lower-level name
        low = x if lv[x] < lv[y] else y
        names[keep] = low
        del names[drop]
    if a.depth - 1 == 0:
        return h, None
    levels = {}
    for idx, name in enumerate(names):
        if name in new_lv:
            levels[idx] = new_lv[name]
    return h, CentralAlignment.from_dict(levels)


def rational_tails(g: DualGraph, a: Optional[CentralAlignment] = None):
    """Maximal connected subgraphs avoiding the support (the core when unaligned)."""
    sup = a.support if a is not None else core(g)
    adj = g.adjacency()
    rest = set(g.vertices()) - set(sup)
    tails = []
    while rest:
        v = min(rest)
        comp = {v}
        todo = [v]
        while todo:
            x = todo.pop()
            for u in adj[x]:
                if u in rest and u not in comp:
                    comp.add(u)
                    todo.append(u)
        rest -= comp
        tails.append(frozenset(comp))
    return tails


@dataclass(frozen=True)
class CoarseClass:
    graph: DualGraph
    alignment: Optional[CentralAlignment] = None
    canonical: str = field(default="", compare=True)

    @property
    def tails(self):
        """(attach vertex, tail degree, tail marks) for each single-vertex tail."""
        out = []
        sup = self.alignment.support if self.alignment else core(self.graph)
        for comp in rational_tails(self.graph, self.alignment):
            (v,) = tuple(comp)
            (attach,) = [u for u in self.graph.neighbours(v) if u in sup]
            out.append((attach, self.graph.degree[v], self.graph.marks_at(v)))
        return out

    def __hash__(self):
        return hash(self.canonical)

    def __eq__(self, other):
        return isinstance(other, CoarseClass) and self.canonical == other.canonical


def contract_tails(g: DualGraph, a: Optional[CentralAlignment] = None):
    """Contract every rational tail to one vertex; returns (graph, alignment)."""
    names = list(g.vertices())
    h = g
    for comp in rational_tails(g, a):
        while True:
            inner = [(x, y) for x, y in h.edges
                     if x != y and names[x] in comp and names[y] in comp]
            if not inner:
                break
            x, y = inner[0]
            h = contract_edge(h, (x, y))
            del names[max(x, y)]
    if a is None:
        return h, None
    lv = a.levels
    return h, CentralAlignment.from_dict({i: lv[nm] for i, nm in enumerate(names) if nm in lv})


def relabel(g: DualGraph, perm, a: Optional[CentralAlignment] = None):
    """Apply the vertex permutation perm (old -> new)."""
    inv = [0] * len(perm)
    for old, new in enumerate(perm):
        inv[new] = old
    h = DualGraph([g.genus[inv[i]] for i in range(len(perm))],
                  [g.degree[inv[i]] for i in range(len(perm))],
                  [(perm[x], perm[y]) for x, y in g.edges],
                  [perm[m] for m in g.marks])
    if a is None:
        return h, None
    return h, CentralAlignment.from_dict({perm[v]: l for v, l in a.level})


def coarse_representative(g: DualGraph, a: Optional[CentralAlignment] = None) -> CoarseClass:
    from .canon import canonical_form

    h, b = contract_tails(g, a)
    s, (h2, b2) = canonical_form(h, b)
    return CoarseClass(h2, b2, s)
