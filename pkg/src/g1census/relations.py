"""Relation ledger: images of off-by-one classes under the first differential.

Relations are stored symbolically: each record names the off-by-one class it
comes from and lists (stratum, class label, coefficient) terms on strata one
codimension deeper.  Terms whose target stratum is empty are kept in
`absent` with a reason instead of being silently dropped.

Degrees: an off-by-one class of cohomological degree e on a codim-c stratum
maps to classes of global cohomological degree e + 2c + 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .blocks import basepoint_basis, cycle_core_pieces, mapF_pieces
from .enumerate import (StratumKey, enumerate_coarse_classes, intermediate_vertices, is_enumerated, is_tail, legs,
                        make_key, radius_vertices, tail_code, _subsets, dihedral_min)
from .hodge import default_table, pure_m1n_basis

KINDS = ("basepoint-g1", "basepoint-cycle", "basepoint-g0-beta", "psi-equality",
         "wdvv-pullback", "getzler-pullback")


@dataclass(frozen=True)
class RelationTerm:
    stratum: str
    label: tuple
    coeff: int
    global_degree: int
    ambient_dim: int
    cusp: bool = False

    @property
    def degree(self):
        """Borel-Moore degree in the ambient space."""
        return 2 * self.ambient_dim - self.global_degree

    def to_json(self):
        return {"stratum": self.stratum, "label": repr(self.label), "coeff": self.coeff,
                "degree": self.degree, "global_degree": self.global_degree, "cusp": self.cusp}


@dataclass
class RelationRecord:
    kind: str
    source: tuple  # (stratum canonical, off-by-one label)
    global_degree: int
    terms: list = field(default_factory=list)
    absent: list = field(default_factory=list)  # (description, reason)
    extra_sources: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    def sources(self):
        return [self.source] + list(self.extra_sources)

    def degrees(self):
        return {t.degree for t in self.terms}

    def to_json(self):
        return {"kind": self.kind, "source": [self.source[0], repr(self.source[1])],
                "extra_sources": [[s, repr(l)] for s, l in self.extra_sources],
                "global_degree": self.global_degree,
                "terms": [t.to_json() for t in self.terms],
                "absent": [[a, b] for a, b in self.absent], "flags": list(self.flags)}


class _Ctx:
    def __init__(self, n, r, d, max_codim):
        self.n, self.r, self.d = n, r, d
        self.max_codim = max_codim
        self.dim = n + d * (r + 1)

    def lookup(self, top):
        key = make_key(top, self.n, self.r, self.d)
        found = is_enumerated(top, self.n, self.d, self.max_codim)
        return (key if found else None), key.canonical

    def term(self, rec, top, label, coeff, cusp=False):
        found, canon = self.lookup(top)
        if found is None:
            rec.absent.append((canon, "target is not a nonempty stratum"))
            return
        rec.terms.append(RelationTerm(canon, label, coeff, rec.global_degree, self.dim, cusp))


def _pulled_back(label, N, size, table):
    """Is the basis class `label` of M_{1,N} pulled back from M_{1,size}?"""
    if label == "1":
        return "1"
    for lab, _, _ in pure_m1n_basis(size, table):
        if lab == label:
            return lab
    return None


def _is_cusp(label):
    return label != "1"


# ---- genus-one basepoint relations -------------------------------------------

def basepoint_relations_g1(n, r, d, max_codim=1, table=None):
    """One record per basis class (alpha, theta, H^m) of the basepoint locus of the interior."""
    if d < 2:
        return []
    table = table or default_table()
    ctx = _Ctx(n, r, d, max(max_codim, 1))
    interior = (False, ("g1", ((1, d, 0, tuple(range(1, n + 1))), ())))
    src_canon = make_key(interior, n, r, d).canonical
    marks = frozenset(range(1, n + 1))
    out = []
    for alpha, theta, deg, _ in basepoint_basis(n, table):
        N = n + 2 if theta == 0 else n + 1
        for m in range((d - 1) * (r + 1)):
            e = 2 * r - 1 + deg + 2 * m
            rec = RelationRecord("basepoint-g1", (src_canon, ("bp", alpha, theta, m)), e + 1)
            for I in _subsets(marks):
                J = tuple(sorted(marks - frozenset(I)))
                size = len(I) + (2 if theta == 0 else 1)
                a_I = _pulled_back(alpha, N, size, table)
                if a_I is None:
                    continue
                # rational tail of degree delta carrying the marks outside I
                for delta in range(1, d + 1):
                    top = (False, ("g1", ((1, d - delta, 0, tuple(I)), (tail_code(delta, J),))))
                    expo = m - delta * (r + 1)
                    if d - delta < 2:
                        rec.absent.append((f"tail delta={delta} I={I}", "empty genus-one factor"))
                        continue
                    if expo < 0:
                        rec.absent.append((f"tail delta={delta} I={I}", "negative hyperplane exponent"))
                        continue
                    ctx.term(rec, top, (("alpha", a_I, theta), ("H", expo), "pt"), 1, _is_cusp(a_I))
                # single radius vertex carrying everything off the core
                top = (True, ("g1", ((1, 0, 0, tuple(I)), (((0, d, 1, J), ()),))))
                if theta != 0 or m > r or len(J) > 1:
                    rec.absent.append((f"radius I={I}", "no matching decoration"))
                    continue
                if _pulled_back(a_I, size, len(I) + 1, table) is None:
                    rec.absent.append((f"radius I={I}", "class not on the aligned core"))
                    continue
                ctx.term(rec, top, (("alpha", a_I), ("H", m), ("psi", r - 1), "pt"), -1,
                         _is_cusp(a_I))
            out.append(rec)
    return out


def basepoint_relations_core(key: StratumKey, max_codim=None, table=None):
    """Kunneth extensions for a positive genus-one core carrying rational tails."""
    aligned, (kind, body) = key.code
    if aligned or kind != "g1" or not body[1]:
        raise ValueError("need a positive genus-one core with tails")
    from .blocks import m1n_maps_pieces
    table = table or default_table()
    n, r, d = key.n, key.r, key.d
    ctx = _Ctx(n, r, d, (max_codim or key.codim) + 1)
    (g, dc, lev, mk), kids = body
    piece = m1n_maps_pieces(legs(body), r, dc, table)
    c = key.codim
    out = []
    for lab, e, _ in piece.off_labels:
        if lab[0] != "bp":
            continue
        _, alpha, theta, m = lab
        rec = RelationRecord("basepoint-g1", (key.canonical, lab), e + 2 * c + 1,
                             flags=["kunneth-extension"])
        for delta in range(1, dc + 1):
            expo = m - delta * (r + 1)
            desc = f"core splits a degree-{delta} tail"
            if expo < 0:
                rec.absent.append((desc, "negative hyperplane exponent"))
                continue
            if dc - delta < 2:
                rec.absent.append((desc, "empty genus-one factor"))
                continue
            top = (False, ("g1", ((g, dc - delta, lev, mk), tuple(sorted(kids + (tail_code(delta),))))))
            ctx.term(rec, top, (("alpha", alpha, theta), ("H", expo), "pt"), 1, _is_cusp(alpha))
        out.append(rec)
    return out


# ---- cycle basepoint relations ---------------------------------------------

def basepoint_relations_cycle(key: StratumKey, max_codim=None):
    """Records for the basepoint labels of a positive-degree cycle core."""
    aligned, (kind, seq) = key.code
    if aligned or kind != "cyc":
        raise ValueError("need a positive-degree cycle core")
    n, r, d = key.n, key.r, key.d
    ctx = _Ctx(n, r, d, (max_codim or key.codim) + 1)
    k = len(seq)
    piece = cycle_core_pieces(k, [v[0][1] for v in seq], [legs(v) for v in seq], r)
    c = key.codim
    out = []
    for lab, e, _ in piece.off_labels:
        if lab[0] != "bpc":
            continue
        _, v, m = lab
        rec = RelationRecord("basepoint-cycle", (key.canonical, lab), e + 2 * c + 1)
        (g, dv, lev, mk), kids = seq[v]
        for dt in range(1, dv + 1):
            expo = m - (dt - 1) * (r + 1)
            desc = f"vertex {v} splits a degree-{dt} tail"
            if expo < 0:
                rec.absent.append((desc, "negative hyperplane exponent"))
                continue
            new_v = ((g, dv - dt, lev, mk), tuple(sorted(kids + (tail_code(dt),))))
            new_seq = list(seq)
            new_seq[v] = new_v
            top = (False, ("cyc", dihedral_min(new_seq)))
            ctx.term(rec, top, (("cycle-pure", v), ("H", expo), "pt"), 1)
        out.append(rec)
    return out


# ---- genus-zero beta relations ---------------------------------------------

def _replace_vertex(code, target, new):
    if code == target:
        return new, True
    kids = list(code[1])
    for i, ch in enumerate(kids):
        rep, done = _replace_vertex(ch, target, new)
        if done:
            kids[i] = rep
            return (code[0], tuple(sorted(kids))), True
    return code, False


def beta_relations_g0(key: StratumKey, strict=True, max_codim=None):
    """Records for the beta classes of the radius vertices of an aligned stratum.

    strict: only depth-one strata without tails (the generating case); the
    remaining aligned strata get the same records as Kunneth extensions."""
    aligned, (kind, body) = key.code
    if not aligned:
        raise ValueError("need an aligned stratum")
    tails = [v for v in _all(key.code) if is_tail(v)]
    if strict and (key.depth != 1 or tails):
        raise ValueError("need depth one and no rational tails")
    n, r, d = key.n, key.r, key.d
    ctx = _Ctx(n, r, d, (max_codim or key.codim) + 1)
    rad = radius_vertices(key.code)
    piece = mapF_pieces([v[0][1] for v in rad], [legs(v) for v in rad], r)
    if piece.empty:
        return []
    labels = [lab for lab, _, _ in piece.off_labels if lab[0] in ("beta", "beta-diff")]
    diffs = {lab[2]: lab for lab in labels if lab[0] == "beta-diff"}
    betas = {lab[1]: lab for lab in labels if lab[0] == "beta"}
    c = key.codim
    out = []
    for i, v in enumerate(rad):
        if v[0][1] < 1:
            continue
        src = betas.get(i) or diffs.get(i) or ("beta", i)
        extra = [(key.canonical, diffs[i])] if (i in diffs and src != diffs[i]) else []
        rec = RelationRecord("basepoint-g0-beta", (key.canonical, src), 2 * r - 1 + 2 * c + 1,
                             extra_sources=extra)
        if not strict and (key.depth != 1 or tails):
            rec.flags.append("kunneth-extension")
        (g, dl, lev, mk), kids = v
        new_v = ((g, dl - 1, lev, mk), tuple(sorted(kids + (tail_code(1),))))
        top = _swap_top(key.code, v, new_v)
        ctx.term(rec, top, ("fundamental", "pt"), 1)
        if len(rad) > 1:
            rec.flags.append("multi-vertex radius: coefficient implicit")
        out.append(rec)
    return out


def _all(top):
    from .enumerate import all_vertices
    return all_vertices(top)


def _swap_top(top, old, new):
    aligned, (kind, body) = top
    if kind == "g1":
        rep, _ = _replace_vertex(body, old, new)
        return (aligned, ("g1", rep))
    seq = list(body)
    for i, v in enumerate(seq):
        rep, done = _replace_vertex(v, old, new)
        if done:
            seq[i] = rep
            break
    return (aligned, ("cyc", dihedral_min(seq)))


# ---- structural records ------------------------------------------------------

def structural_relations(n, r, d, max_codim=1, table=None):
    """psi-equality, WDVV and Getzler pullback records for every stratum."""
    table = table or default_table()
    out = []
    for key in enumerate_coarse_classes(n, r, d, max_codim, check=False):
        out.extend(_structural_for(key, table))
    return out


def _structural_for(key, table):
    aligned, (kind, body) = key.code
    c = key.codim
    out = []
    if aligned:
        rad = radius_vertices(key.code)
        light = [i for i, v in enumerate(rad) if legs(v) <= 1]
        for i in light[1:]:
            out.append(RelationRecord("psi-equality", (key.canonical, ("psi-torus", light[0], i)),
                                      1 + 2 * c + 1))
        for i, v in enumerate(rad):
            if legs(v) + 1 >= 4:
                out.append(RelationRecord("wdvv-pullback", (key.canonical, ("M0n-radius", i)),
                                          1 + 2 * c + 1))
        for i, v in enumerate(intermediate_vertices(key.code)):
            if legs(v) + 1 >= 4:
                out.append(RelationRecord("wdvv-pullback", (key.canonical, ("M0n-gcc", i)),
                                          1 + 2 * c + 1))
        if kind == "g1" and legs(body) >= 4:
            rec = RelationRecord("getzler-pullback", (key.canonical, ("getzler", legs(body))),
                                 3 + 2 * c + 1)
            out.append(rec)
    if kind == "cyc":
        for i, v in enumerate(body):
            if legs(v) + 2 >= 4:
                out.append(RelationRecord("wdvv-pullback", (key.canonical, ("M0n-cycle", i)),
                                          1 + 2 * c + 1))
    return out


# ---- ledger ------------------------------------------------------------------

def relation_ledger(n, r, d, max_codim=1, table=None):
    """All records for strata up to max_codim (targets up to max_codim + 1)."""
    table = table or default_table()
    out = []
    out.extend(basepoint_relations_g1(n, r, d, max_codim, table))
    for key in enumerate_coarse_classes(n, r, d, max_codim, check=False):
        aligned, (kind, _) = key.code
        if not aligned and kind == "cyc":
            out.extend(basepoint_relations_cycle(key, max_codim))
        elif not aligned and key.codim > 0:
            out.extend(basepoint_relations_core(key, max_codim, table))
        elif aligned:
            out.extend(beta_relations_g0(key, strict=False, max_codim=max_codim))
    out.extend(structural_relations(n, r, d, max_codim, table))
    return out


def relations_in_degree(ledger, degree):
    return [rec for rec in ledger if rec.global_degree == degree]


def degree_two_rank_check(n, r, d, table=None):
    """(generators at degree 2, relations at degree 2, picard rank)."""
    from .census import generator_counts, picard_rank
    gens = generator_counts(n, r, d, 1, table).get(2, 0)
    rels = len(relations_in_degree(relation_ledger(n, r, d, 1, table), 2))
    return gens, rels, picard_rank(n, r, d)
