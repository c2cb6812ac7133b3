"""Canonical forms and automorphism groups of decorated genus-one graphs.

A genus-one graph is a core (one genus-one vertex or a cycle) with rooted
trees hanging off it, so a canonical code is an AHU-style nested tuple: each
vertex contributes (label, sorted child codes) and a cycle core contributes
the dihedrally smallest rotation/reflection of its vertex codes.

Vertex label = (genus, degree, level, marks); level is -1 off the support.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import factorial
from typing import Optional

from .graphs import CentralAlignment, DualGraph, core, cycle_vertices, parent_map, relabel


def _labels(g: DualGraph, a: Optional[CentralAlignment]):
    lv = a.levels if a is not None else {v: 0 for v in core(g)}
    return {v: (g.genus[v], g.degree[v], lv.get(v, -1), g.marks_at(v)) for v in g.vertices()}


def _children(g: DualGraph):
    par = parent_map(g)
    kids = {v: [] for v in g.vertices()}
    for v, p in par.items():
        kids[p].append(v)
    return kids


def dihedral_images(seq):
    """All rotations and reflections of a cyclic sequence, with a reflection flag."""
    k = len(seq)
    out = []
    for j in range(k):
        out.append((tuple(seq[(i + j) % k] for i in range(k)), False, tuple((i + j) % k for i in range(k))))
        out.append((tuple(seq[(j - i) % k] for i in range(k)), True, tuple((j - i) % k for i in range(k))))
    return out


class _Coder:
    def __init__(self, g, a):
        self.g = g
        self.labels = _labels(g, a)
        self.kids = _children(g)
        self.memo = {}

    def code(self, v):
        if v not in self.memo:
            ch = tuple(sorted(self.code(u) for u in self.kids[v]))
            self.memo[v] = (self.labels[v], ch)
        return self.memo[v]

    def core_code(self):
        g = self.g
        c = core(g)
        if len(c) == 1 and g.genus[next(iter(c))] == 1:
            (v,) = tuple(c)
            return ("g1", self.code(v)), [v]
        cyc = cycle_vertices(g)
        seq = [self.code(v) for v in cyc]
        best = None
        for img, refl, pos in dihedral_images(seq):
            if best is None or img < best[0]:
                best = (img, [cyc[p] for p in pos])
        return ("cyc", best[0]), best[1]

    def order(self, roots):
        """Vertex traversal order: roots, then children by code (breadth first)."""
        out = list(roots)
        i = 0
        while i < len(out):
            v = out[i]
            out.extend(sorted(self.kids[v], key=self.code))
            i += 1
        return out


def graph_code(g: DualGraph, a: Optional[CentralAlignment] = None):
    coder = _Coder(g, a)
    cc, _ = coder.core_code()
    return (a is not None, cc)


def serialize(g: DualGraph, a: Optional[CentralAlignment] = None) -> str:
    lv = a.levels if a is not None else {}
    parts = []
    for v in g.vertices():
        marks = ",".join(str(m) for m in g.marks_at(v))
        lev = lv.get(v, "-")
        parts.append(f"{g.genus[v]}:{g.degree[v]}:{lev}:[{marks}]")
    edges = " ".join(f"{x}-{y}" for x, y in g.edges)
    tag = "A" if a is not None else "U"
    return f"{tag}|{' '.join(parts)}|{edges}"


def canonical_form(g: DualGraph, a: Optional[CentralAlignment] = None):
    """(canonical string, (relabelled graph, relabelled alignment))."""
    coder = _Coder(g, a)
    _, roots = coder.core_code()
    order = coder.order(roots)
    perm = [0] * g.num_vertices
    for new, old in enumerate(order):
        perm[old] = new
    h, b = relabel(g, perm, a)
    return serialize(h, b), (h, b)


def isomorphic(x, y) -> bool:
    return canonical_form(*x)[0] == canonical_form(*y)[0]


# ---- automorphisms -------------------------------------------------------

@dataclass(frozen=True)
class Automorphism:
    vertices: tuple  # vertex permutation v -> vertices[v]
    half_edges: tuple  # half-edge 2e+s -> half_edges[2e+s]
    reflection: bool = False

    def compose(self, other):
        """self after other."""
        return Automorphism(tuple(self.vertices[i] for i in other.vertices),
                            tuple(self.half_edges[i] for i in other.half_edges),
                            self.reflection != other.reflection)


@dataclass(frozen=True)
class AutGroup:
    generators: tuple
    order: int
    n_vertices: int = 0
    n_half_edges: int = 0

    def elements(self, limit=100000):
        """Closure enumeration (small groups only)."""
        nv, nh = self.n_vertices, self.n_half_edges
        ident = Automorphism(tuple(range(nv)), tuple(range(nh)))
        seen = {ident}
        todo = [ident]
        while todo:
            x = todo.pop()
            for s in self.generators:
                y = s.compose(x)
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
                    if len(seen) > limit:
                        raise RuntimeError("group too large to enumerate")
        return list(seen)


def _code_aut_order(code) -> int:
    _, ch = code
    out = 1
    for c, mult in Counter(ch).items():
        out *= factorial(mult) * _code_aut_order(c) ** mult
    return out


def aut_order_from_code(top) -> int:
    _, cc = top
    kind, body = cc
    if kind == "g1":
        return _code_aut_order(body)
    seq = body
    stab = sum(1 for img, _, _ in dihedral_images(seq) if img == tuple(seq))
    out = stab
    for c in seq:
        out *= _code_aut_order(c)
    return out


def _half_edge_perm(g: DualGraph, vperm, swap_multi=False, flip_loop=False):
    """Lift a vertex permutation to half-edges (edges as sorted pairs)."""
    edges = list(g.edges)
    used = set()
    target = [None] * len(edges)
    for i, (x, y) in enumerate(edges):
        want = tuple(sorted((vperm[x], vperm[y])))
        cands = [j for j, e in enumerate(edges) if e == want and j not in used]
        j = cands[-1] if (swap_multi and len(cands) > 1) else cands[0]
        used.add(j)
        target[i] = j
    he = [0] * (2 * len(edges))
    for i, (x, y) in enumerate(edges):
        j = target[i]
        a2, b2 = edges[j]
        if x == y:
            s0, s1 = (1, 0) if flip_loop else (0, 1)
            he[2 * i], he[2 * i + 1] = 2 * j + s0, 2 * j + s1
        elif vperm[x] == a2 and vperm[y] == b2 and a2 != b2:
            he[2 * i], he[2 * i + 1] = 2 * j, 2 * j + 1
        else:
            he[2 * i], he[2 * i + 1] = 2 * j + 1, 2 * j
    return tuple(he)


def aut_group(g: DualGraph, a: Optional[CentralAlignment] = None) -> AutGroup:
    """Generators (on the canonical relabelling) and the group order."""
    _, (h, b) = canonical_form(g, a)
    coder = _Coder(h, b)
    top = (b is not None, coder.core_code()[0])
    order = aut_order_from_code(top)
    nv = h.num_vertices
    gens = []

    def subtree_map(x, y, vp):
        vp[x] = y
        cx = sorted(coder.kids[x], key=coder.code)
        cy = sorted(coder.kids[y], key=coder.code)
        for u, w in zip(cx, cy):
            subtree_map(u, w, vp)

    def swap(x, y):
        vp = list(range(nv))
        subtree_map(x, y, vp)
        subtree_map(y, x, vp)
        return vp

    for v in h.vertices():
        kids = sorted(coder.kids[v], key=coder.code)
        for u, w in zip(kids, kids[1:]):
            if coder.code(u) == coder.code(w):
                vp = swap(u, w)
                gens.append(Automorphism(tuple(vp), _half_edge_perm(h, vp)))

    kind, _ = top[1]
    if kind == "cyc":
        cyc = cycle_vertices(h)
        seq = [coder.code(v) for v in cyc]
        k = len(cyc)
        for img, refl, pos in dihedral_images(seq):
            if img != tuple(seq):
                continue
            vp = list(range(nv))
            for i in range(k):
                if pos[i] != i:
                    subtree_map(cyc[i], cyc[pos[i]], vp)
            if k == 1 and refl:
                gens.append(Automorphism(tuple(vp), _half_edge_perm(h, vp, flip_loop=True), True))
            elif k == 2 and refl == (pos == (0, 1)):
                # fixing both vertices or rotating exchanges the two edges
                gens.append(Automorphism(tuple(vp), _half_edge_perm(h, vp, swap_multi=True), refl))
            elif any(pos[i] != i for i in range(k)):
                gens.append(Automorphism(tuple(vp), _half_edge_perm(h, vp), refl))
    # drop duplicates and the identity
    ident = tuple(range(nv))
    uniq = []
    for s in gens:
        if s not in uniq and not (s.vertices == ident and s.half_edges == tuple(range(len(s.half_edges)))):
            uniq.append(s)
    return AutGroup(tuple(uniq), order, nv, 2 * len(h.edges))
