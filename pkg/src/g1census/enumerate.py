"""Enumeration of nonempty coarse strata of centrally aligned genus-one graphs.

Strata are produced directly as canonical nested codes (see canon.py):

    vertex code = ((genus, degree, level, marks), sorted child codes)
    top code    = (aligned?, ("g1", core vertex code) | ("cyc", dihedral-min sequence))

Tails have level -1 and no children.  Unaligned strata give their core level 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Optional

from .canon import canonical_form, dihedral_images
from .graphs import CentralAlignment, CoarseClass, DualGraph, is_stable, validate_alignment

KINDS = ("interior", "positive-genus1-core", "positive-cycle-core",
         "aligned-genus1-core", "aligned-cycle-core")


class DimensionMismatch(Exception):
    def __init__(self, key, detail):
        super().__init__(f"dimension cross-check failed for {key.canonical}: {detail}")
        self.key = key
        self.detail = detail


# ---- code helpers --------------------------------------------------------

def tail_code(delta, marks=()):
    return ((0, delta, -1, tuple(sorted(marks))), ())


def is_tail(code):
    return code[0][2] == -1


def walk(code):
    """All vertex codes in a subtree, root first."""
    out = [code]
    for c in code[1]:
        out.extend(walk(c))
    return out


def core_vertices(top):
    kind, body = top[1]
    return [body] if kind == "g1" else list(body)


def all_vertices(top):
    out = []
    for v in core_vertices(top):
        out.extend(walk(v))
    return out


def code_degree(top):
    return sum(v[0][1] for v in all_vertices(top))


def code_marks(top):
    out = []
    for v in all_vertices(top):
        out.extend(v[0][3])
    return sorted(out)


def code_tails(top):
    """(parent label, tail degree, tail marks) for every tail."""
    out = []

    def rec(v):
        for c in v[1]:
            if is_tail(c):
                out.append((v[0], c[0][1], c[0][3]))
            else:
                rec(c)

    for v in core_vertices(top):
        rec(v)
    return out


def code_depth(top):
    if not top[0]:
        return 0
    return max(v[0][2] for v in all_vertices(top))


def radius_vertices(top):
    D = code_depth(top)
    if D == 0:
        return []
    return [v for v in all_vertices(top) if v[0][2] == D]


def intermediate_vertices(top):
    D = code_depth(top)
    return [v for v in all_vertices(top) if 0 < v[0][2] < D]


def code_to_graph(top):
    """Build (DualGraph, alignment or None) from a code."""
    aligned, (kind, body) = top
    genus, degree, edges, marks, levels = [], [], [], {}, {}

    def add(code, parent):
        (w, dl, lev, mk), ch = code
        v = len(genus)
        genus.append(w)
        degree.append(dl)
        for m in mk:
            marks[m] = v
        if lev >= 0:
            levels[v] = lev
        if parent is not None:
            edges.append((parent, v))
        for c in ch:
            add(c, v)
        return v

    if kind == "g1":
        add(body, None)
    else:
        ids = [add(c, None) for c in body]
        k = len(ids)
        if k == 1:
            edges.append((ids[0], ids[0]))
        else:
            for i in range(k):
                edges.append((ids[i], ids[(i + 1) % k]))
    n = len(marks)
    g = DualGraph(genus, degree, edges, [marks[i] for i in range(1, n + 1)])
    a = CentralAlignment.from_dict(levels) if aligned else None
    return g, a


# ---- stratum record ------------------------------------------------------

@dataclass(frozen=True)
class StratumKey:
    code: tuple
    kind: str
    codim: int
    dim: int
    n: int
    r: int
    d: int
    canonical: str

    @property
    def depth(self):
        return code_depth(self.code)

    def coarse_class(self) -> CoarseClass:
        g, a = code_to_graph(self.code)
        s, (h, b) = canonical_form(g, a)
        return CoarseClass(h, b, s)

    def to_json(self):
        return {"canonical": self.canonical, "kind": self.kind, "codim": self.codim,
                "dim": self.dim, "depth": self.depth,
                "tails": [[d, list(m)] for _, d, m in code_tails(self.code)],
                "radius": [[v[0][1], list(v[0][3])] for v in radius_vertices(self.code)]}


def codimension(top) -> int:
    aligned, (kind, body) = top
    core_edges = 0 if kind == "g1" else len(body)
    return core_edges + code_depth(top) + len(code_tails(top))


def classify(top):
    aligned, (kind, body) = top
    if aligned:
        return "aligned-genus1-core" if kind == "g1" else "aligned-cycle-core"
    if kind == "g1":
        return "interior" if not body[1] else "positive-genus1-core"
    return "positive-cycle-core"


def legs(v):
    """Special points of a vertex other than its parent edge (and cycle edges)."""
    return len(v[0][3]) + len(v[1])


def factor_dims(top, r):
    """Dimensions of the product factors, keyed by name."""
    aligned, (kind, body) = top
    dims = {}
    tails = code_tails(top)
    for i, (_, dl, mk) in enumerate(tails):
        dims[f"tail{i}"] = dl * (r + 1) + len(mk) - 2
    if not aligned:
        if kind == "g1":
            dims["core"] = legs(body) + body[0][1] * (r + 1)
        else:
            dc = sum(v[0][1] for v in body)
            dims["core"] = sum(legs(v) for v in body) - len(body) + dc * (r + 1)
        return dims
    if kind == "g1":
        dims["core"] = legs(body)
    else:
        dims["core"] = sum(legs(v) + 2 - 3 for v in body)
    dims["P"] = r
    D = code_depth(top)
    inter = intermediate_vertices(top)
    for i, v in enumerate(inter):
        dims[f"gcc{i}"] = 1 + legs(v) - 3
    dims["torus"] = len(inter) - (D - 1)
    rad = radius_vertices(top)
    dims["MF"] = sum(v[0][1] * (r + 1) + legs(v) - 2 for v in rad) + (len(rad) - 1) - r
    return dims


def dimension_crosscheck(key: StratumKey):
    """(ok, factor dims); ok iff the factor dimensions add up to ambient - codim."""
    dims = factor_dims(key.code, key.r)
    ambient = key.n + key.d * (key.r + 1)
    ok = sum(dims.values()) == ambient - key.codim and all(v >= 0 for v in dims.values())
    return ok, dims


def make_key(top, n, r, d):
    g, a = code_to_graph(top)
    s, _ = canonical_form(g, a)
    codim = codimension(top)
    return StratumKey(top, classify(top), codim, n + d * (r + 1) - codim, n, r, d, s)


# ---- generation ----------------------------------------------------------

def _subsets(marks, min_size=0):
    ms = sorted(marks)
    for k in range(min_size, len(ms) + 1):
        for c in combinations(ms, k):
            yield c


@lru_cache(maxsize=None)
def _child_candidates(p, D, max_deg, marks, codim_left):
    """Branches that can hang below a support vertex at level p.

    Returns tuples (code, degree, marks, codim)."""
    out = []
    if codim_left >= 1:
        for dl in range(max_deg + 1):
            for mk in _subsets(marks):
                if dl == 0 and len(mk) < 2:
                    continue
                out.append((tail_code(dl, mk), dl, frozenset(mk), 1))
    if D >= 1:
        for lev in range(p + 1, D + 1):
            if lev == D:
                for dl in range(max_deg + 1):
                    for mk in _subsets(marks):
                        rest = marks - frozenset(mk)
                        tails = tuple(c for c in _child_candidates(lev, lev, max_deg - dl, rest, codim_left)
                                      if is_tail(c[0]))
                        for ch, cd, cm, cc in _all_exact(tails, max_deg - dl, rest, codim_left):
                            if dl == 0 and 1 + len(ch) + len(mk) < 3:
                                continue
                            code = ((0, dl, lev, tuple(mk)), ch)
                            out.append((code, dl + cd, frozenset(mk) | cm, cc))
            else:
                for mk in _subsets(marks):
                    rest = marks - frozenset(mk)
                    cands = _child_candidates(lev, D, max_deg, rest, codim_left)
                    for ch, cd, cm, cc in _all_exact(cands, max_deg, rest, codim_left):
                        if 1 + len(ch) + len(mk) < 3:
                            continue
                        code = ((0, 0, lev, tuple(mk)), ch)
                        out.append((code, cd, frozenset(mk) | cm, cc))
    out.sort(key=lambda x: x[0])
    return tuple(out)


_CAND_IDS = {}
_EXACT = {}


def _cand_id(cands):
    cid = _CAND_IDS.get(cands)
    if cid is None:
        cid = _CAND_IDS[cands] = len(_CAND_IDS)
    return cid


def _exact(cands, deg, marks, codim_left):
    """Multisets of candidates with total degree `deg`, marks exactly `marks`
    and codim at most codim_left: list of (children, codim)."""
    return _exact_rec(cands, _cand_id(cands), 0, deg, marks, codim_left)


def _exact_rec(cands, cid, start, deg, marks, cl):
    key = (cid, start, deg, marks, cl)
    hit = _EXACT.get(key)
    if hit is not None:
        return hit
    out = []
    if deg == 0 and not marks:
        out.append(((), 0))
    for i in range(start, len(cands)):
        code, dg, mk, cc = cands[i]
        if dg > deg or cc > cl or not mk <= marks:
            continue
        for rest, rc in _exact_rec(cands, cid, i, deg - dg, marks - mk, cl - cc):
            out.append(((code,) + rest, cc + rc))
    _EXACT[key] = out
    return out


def _all_exact(cands, max_deg, marks, codim_left):
    """Every multiset within the budgets: (children, degree, marks, codim)."""
    out = []
    for cd in range(max_deg + 1):
        for cm in _subsets(marks):
            cm = frozenset(cm)
            for ch, cc in _exact(cands, cd, cm, codim_left):
                out.append((ch, cd, cm, cc))
    return out


def _levels_ok(top, D):
    levs = {v[0][2] for v in all_vertices(top) if v[0][2] >= 0}
    if levs != set(range(D + 1)):
        return False
    rad = radius_vertices(top)
    return sum(v[0][1] for v in rad) >= 2


def _cycle_sequences(k, vertex_options, max_deg, marks, codim_left, positive):
    """Sequences of k cycle-vertex codes; vertex_options(max_deg, marks, codim_left)."""
    if k == 0:
        yield (), 0, frozenset(), 0
        return
    for code, dg, mk, cc in vertex_options(max_deg, marks, codim_left):
        for rest, rd, rm, rc in _cycle_sequences(k - 1, vertex_options, max_deg - dg, marks - mk,
                                                 codim_left - cc, positive):
            yield (code,) + rest, dg + rd, mk | rm, cc + rc


def dihedral_min(seq):
    return min(img for img, _, _ in dihedral_images(list(seq)))


def enumerate_codes(n, r, d, max_codim):
    marks = frozenset(range(1, n + 1))
    found = set()
    # interior and positive genus-one cores
    for dc in range(2, d + 1):
        for mk in _subsets(marks):
            rest = marks - frozenset(mk)
            tails = tuple(c for c in _child_candidates(0, 0, d - dc, rest, max_codim) if is_tail(c[0]))
            for ch, cc in _exact(tails, d - dc, rest, max_codim):
                found.add((False, ("g1", ((1, dc, 0, tuple(mk)), ch))))
    # positive cycle cores
    for k in range(1, max_codim + 1):
        def opts(max_deg, mks, cl):
            out = []
            for dv in range(max_deg + 1):
                for mk in _subsets(mks):
                    rest = mks - frozenset(mk)
                    tails = tuple(c for c in _child_candidates(0, 0, max_deg - dv, rest, cl) if is_tail(c[0]))
                    for ch, cd, cm, cc in _all_exact(tails, max_deg - dv, rest, cl):
                        if dv == 0 and len(mk) + len(ch) < 1:
                            continue
                        out.append((((0, dv, 0, tuple(mk)), ch), dv + cd, frozenset(mk) | cm, cc))
            return out

        for seq, dg, mk, cc in _cycle_sequences(k, opts, d, marks, max_codim - k, True):
            if dg != d or mk != marks:
                continue
            if sum(v[0][1] for v in seq) < 2:
                continue
            found.add((False, ("cyc", dihedral_min(seq))))
    # aligned strata
    for D in range(1, max_codim + 1):
        left = max_codim - D
        for mk in _subsets(marks):
            rest = marks - frozenset(mk)
            cands = _child_candidates(0, D, d, rest, left)
            for ch, cc in _exact(cands, d, rest, left):
                top = (True, ("g1", ((1, 0, 0, tuple(mk)), ch)))
                if _levels_ok(top, D):
                    found.add(top)
        for k in range(1, left + 1):
            def opts(max_deg, mks, cl, D=D):
                out = []
                for mk in _subsets(mks):
                    rest = mks - frozenset(mk)
                    cands = _child_candidates(0, D, max_deg, rest, cl)
                    for ch, cd, cm, cc in _all_exact(cands, max_deg, rest, cl):
                        if len(mk) + len(ch) < 1:
                            continue
                        out.append((((0, 0, 0, tuple(mk)), ch), cd, frozenset(mk) | cm, cc))
                return out

            for seq, dg, mk, cc in _cycle_sequences(k, opts, d, marks, left - k, False):
                if dg != d or mk != marks:
                    continue
                top = (True, ("cyc", dihedral_min(seq)))
                if _levels_ok(top, D):
                    found.add(top)
    return [t for t in found if codimension(t) <= max_codim]


def enumerate_coarse_classes(n, r, d, max_codim, check=True):
    keys = [make_key(t, n, r, d) for t in enumerate_codes(n, r, d, max_codim)]
    keys.sort(key=lambda k: (k.codim, k.canonical))
    if check:
        for k in keys:
            ok, dims = dimension_crosscheck(k)
            if not ok:
                raise DimensionMismatch(k, dims)
    return keys


def is_enumerated(top, n, d, max_codim=None):
    """Would enumerate_coarse_classes(n, ., d, max_codim) list this code?

    Checks the same rules directly, without enumerating."""
    if max_codim is not None and codimension(top) > max_codim:
        return False
    if sorted(m for v in all_vertices(top) for m in v[0][3]) != list(range(1, n + 1)):
        return False
    g, a = code_to_graph(top)
    if g.check() or g.d != d or not is_stable(g):
        return False
    for v in all_vertices(top):
        if is_tail(v) and v[1]:
            return False
    aligned, (kind, body) = top
    cores = [body] if kind == "g1" else list(body)
    core_deg = sum(c[0][1] for c in cores)
    if not aligned:
        if any(not is_tail(ch) for c in cores for ch in c[1]):
            return False
        return core_deg >= 2
    if core_deg:
        return False
    return validate_alignment(g, a)[0]


def boundary_divisors(n, r, d):
    return [k for k in enumerate_coarse_classes(n, r, d, 1) if k.codim == 1]


def key_from_graph(g: DualGraph, a: Optional[CentralAlignment], r):
    from .canon import graph_code
    from .graphs import contract_tails

    h, b = contract_tails(g, a)
    return make_key(graph_code(h, b), g.n, r, g.d)
