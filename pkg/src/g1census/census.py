"""Per-stratum pure generators, automorphism invariants, the pure E1 table,
Picard ranks and the survey of odd-degree (cusp-form) classes.

Invariants are computed with a cycle-index Burnside sum: identical sibling
subtrees are permuted by symmetric groups, and for a permutation with cycle
type lambda the trace on the tensor power is prod_l psi^l(W) (Adams
operations on the child series).  The genus-one core twists this by the
character of the cusp-form multiplicity space on its legs.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .blocks import (GradedPiece, NeedsTable, cycle_core_pieces, m1n_maps_pieces, mapF_pieces,
                     tails_poincare)
from .canon import dihedral_images
from .enumerate import (StratumKey, code_tails, enumerate_coarse_classes,
                        intermediate_vertices, is_tail, legs, make_key, radius_vertices,
                        _child_candidates, _subsets)
from .hodge import (HodgeSeries, TableIncomplete, character_value, cusp_characters, default_table,
                    geometric_tate, num_json, pure_m1n)


# ---- partitions and cycle index ------------------------------------------

@lru_cache(maxsize=None)
def partitions(n, max_part=None):
    if max_part is None:
        max_part = n
    if n == 0:
        return ((),)
    out = []
    for p in range(min(n, max_part), 0, -1):
        for rest in partitions(n - p, p):
            out.append((p,) + rest)
    return tuple(out)


def z_lambda(lam):
    out = 1
    for part, m in Counter(lam).items():
        out *= part ** m * factorial(m)
    return out


def sign_of(cycle_type):
    return -1 if sum(l - 1 for l in cycle_type) % 2 else 1


def cycle_sum(W, c, sign=False, cap=None):
    """h_c[W] (or e_c[W] with sign=True) via the cycle index of S_c."""
    out = HodgeSeries()
    powers = {}
    for lam in partitions(c):
        term = HodgeSeries.one()
        for l in lam:
            if l not in powers:
                powers[l] = W.adams(l) if cap is None else W.adams(l).truncate(cap)
            term = term.multiply(powers[l], cap)
        coeff = Fraction(sign_of(lam) if sign else 1, z_lambda(lam))
        out = out + term.scale(coeff)
    return out


def _per_partition(W, c, cap):
    powers = {}
    out = []
    for lam in partitions(c):
        term = HodgeSeries.one()
        for l in lam:
            if l not in powers:
                powers[l] = W.adams(l).truncate(cap)
            term = term.multiply(powers[l], cap)
        out.append((lam, Fraction(1, z_lambda(lam)), term))
    return out


# ---- core characters -----------------------------------------------------

def m1n_trace(L, cycle_type, table):
    """Trace of a leg permutation on the pure cohomology of M_{1,L}."""
    out = HodgeSeries.one()
    for k, mult, tag in cusp_characters(L, table):
        ch = character_value(tag, cycle_type)
        out = out + HodgeSeries.monomial(k, 0, ((k, 1),), mult * ch)
    return out


def _char_kinds(L, table):
    return {tag if isinstance(tag, str) else "custom" for _, _, tag in cusp_characters(L, table)}


# ---- stratum assembly ----------------------------------------------------

@dataclass
class StratumRecord:
    key: StratumKey
    raw: GradedPiece
    invariant_pure: HodgeSeries
    bm_pure: HodgeSeries
    aut_order: int = 1
    notes: dict = field(default_factory=dict)

    @property
    def global_invariant(self):
        return self.invariant_pure.tate_twist(self.key.codim)

    @property
    def global_raw_off(self):
        return self.raw.off_by_one.tate_twist(self.key.codim)

    def to_json(self):
        return {
            "stratum": self.key.to_json(),
            "aut_order": self.aut_order,
            "raw_pure": self.raw.pure.to_json(),
            "invariant_pure": self.invariant_pure.to_json(),
            "bm_pure": self.bm_pure.to_json(),
            "invariant_dims": {str(k): num_json(v) for k, v in self.invariant_pure.dims().items()},
            "notes": {k: str(v) for k, v in self.notes.items()},
        }


class Assembler:
    def __init__(self, r, table=None, tails_budget=10):
        self.r = r
        self.table = table or default_table()
        self.budget = tails_budget
        self._subtree = {}
        self._sym = {}

    # local factors -------------------------------------------------------
    def tail_series(self, code):
        (_, dl, _, mk), _ = code
        return tails_poincare(len(mk), dl, self.r, self.budget)

    def radius_local(self, code):
        return geometric_tate(self.r) if legs(code) <= 1 else HodgeSeries.one()

    def subtree(self, code, D, cap):
        """(raw, invariant) series of a hanging subtree."""
        key = (code, D, cap)
        if key not in self._subtree:
            self._subtree[key] = self._subtree_uncached(code, D, cap)
        return self._subtree[key]

    def sym(self, code, D, cap, mult, sign=False):
        """h_mult (or e_mult) of a subtree's invariants."""
        key = (code, D, cap, mult, sign)
        if key not in self._sym:
            self._sym[key] = cycle_sum(self.subtree(code, D, cap)[1], mult, sign=sign, cap=cap)
        return self._sym[key]

    def _subtree_uncached(self, code, D, cap):
        if is_tail(code):
            s = self.tail_series(code)
            return s, s
        lev = code[0][2]
        local = self.radius_local(code) if lev == D else HodgeSeries.one()
        raw, inv = self.children(code[1], D, cap)
        return local.multiply(raw, cap), local.multiply(inv, cap)

    def children(self, kids, D, cap):
        raw = HodgeSeries.one()
        inv = HodgeSeries.one()
        for c, mult in sorted(Counter(kids).items()):
            r_c, i_c = self.subtree(c, D, cap)
            for _ in range(mult):
                raw = raw.multiply(r_c, cap)
            inv = inv.multiply(self.sym(c, D, cap, mult), cap)
        return raw, inv

    def core_invariant(self, kids, fixed_legs, D, cap, trace):
        """Burnside over sibling permutations at a core vertex with a leg character."""
        groups = []
        raw = HodgeSeries.one()
        for c, mult in sorted(Counter(kids).items()):
            r_c, i_c = self.subtree(c, D, cap)
            for _ in range(mult):
                raw = raw.multiply(r_c, cap)
            groups.append((c, i_c, mult))
        L = fixed_legs + len(kids)
        kinds = trace("kinds")
        if kinds <= {"trivial", "sign"}:
            triv = HodgeSeries.one()
            sgn = HodgeSeries.one()
            for code, W, c in groups:
                triv = triv.multiply(self.sym(code, D, cap, c), cap)
                if "sign" in kinds:
                    sgn = sgn.multiply(self.sym(code, D, cap, c, sign=True), cap)
            ident = trace(())
            core_sign = trace("sign-part")
            core_triv = ident - core_sign
            inv = core_triv.multiply(triv, cap) + core_sign.multiply(sgn, cap)
        else:
            tables = [_per_partition(W, c, cap) for _, W, c in groups]
            inv = HodgeSeries()

            def rec(i, ct, coeff, term):
                nonlocal inv
                if i == len(tables):
                    inv = inv + trace(tuple(sorted(ct))).multiply(term, cap).scale(coeff)
                    return
                for lam, z, t in tables[i]:
                    rec(i + 1, ct + list(lam), coeff * z, term.multiply(t, cap))

            rec(0, [], Fraction(1), HodgeSeries.one())
        return raw, inv, L

    def _g1_trace(self, L, positive):
        """Trace function on the core factor; extra point for the Picard stack."""
        table = self.table

        def trace(arg):
            if arg == "kinds":
                ks = _char_kinds(L, table)
                if positive:
                    ks |= _char_kinds(L + 1, table)
                return ks
            if arg == "sign-part":
                out = HodgeSeries()
                for k, mult, tag in cusp_characters(L + 1 if positive else L, table):
                    if tag == "sign":
                        out = out + HodgeSeries.monomial(k, 0, ((k, 1),), mult)
                if positive:
                    for k, mult, tag in cusp_characters(L, table):
                        if tag == "sign":
                            out = out + HodgeSeries.monomial(k + 2, 1, ((k, 1),), mult)
                return out
            ct = tuple(arg) + (1,) * 0
            if positive:
                return m1n_trace(L + 1, ct, table) + m1n_trace(L, ct, table).tate_twist(1)
            return m1n_trace(L, ct, table)

        return trace

    def stratum(self, key: StratumKey, max_degree=None) -> StratumRecord:
        """max_degree: only global degrees <= max_degree are computed (raw part skipped)."""
        r = self.r
        top = key.code
        aligned, (kind, body) = top
        cap = 2 * key.dim
        notes = {}
        if max_degree is not None:
            cap = min(cap, max_degree - 2 * key.codim)
            notes["window"] = max_degree
        D = key.depth
        if kind == "g1":
            marks = len(body[0][3])
            kids = body[1]
            L = marks + len(kids)
            # identity-only legs (marks) are fixed; sibling subtrees permute
            trace = self._g1_trace(L, positive=not aligned)
            raw_core, inv_core, _ = self.core_invariant(kids, marks, D, cap, trace)
            if aligned:
                core_raw = pure_m1n(L, self.table)
                hyper = geometric_tate(r + 1)
            else:
                core_raw = pure_m1n(L + 1, self.table) + pure_m1n(L, self.table).tate_twist(1)
                hyper = geometric_tate(r + 1)
            raw = core_raw.multiply(raw_core, cap).multiply(hyper, cap).truncate(cap)
            inv = inv_core.multiply(hyper, cap).truncate(cap)
        else:
            raw, inv = self.cycle(body, aligned, D, cap)
        if max_degree is None:
            raw_piece = self.raw_piece(key, raw)
        else:
            raw_piece = GradedPiece(raw, HodgeSeries(), key.dim)
        bm = inv.dual(key.dim)
        from .canon import aut_order_from_code
        return StratumRecord(key, raw_piece, inv, bm, aut_order_from_code(top), notes)

    def cycle(self, seq, aligned, D, cap):
        r = self.r
        k = len(seq)
        psi = geometric_tate(cap // 2 + 1)
        hyper = geometric_tate(r + 1) if aligned else geometric_tate(r)
        local_raw, local_inv = [], []
        for v in seq:
            rw, iv = self.children(v[1], D, cap)
            if not aligned and legs(v) == 0:
                rw = rw.multiply(psi, cap)
            local_raw.append(rw)
            local_inv.append(iv)
        raw = HodgeSeries.one()
        for rw in local_raw:
            raw = raw.multiply(rw, cap)
        total = HodgeSeries()
        count = 0
        for img, refl, pos in dihedral_images(list(seq)):
            if img != tuple(seq):
                continue
            count += 1
            seen = set()
            term = HodgeSeries.one()
            for i in range(k):
                if i in seen:
                    continue
                orbit = [i]
                j = pos[i]
                while j != i:
                    orbit.append(j)
                    j = pos[j]
                seen.update(orbit)
                ell = len(orbit)
                X = local_inv[i]
                if not aligned and legs(seq[i]) == 0:
                    sgn = -1 if (refl and ell % 2) else 1
                    ring = HodgeSeries({(2 * a, (a, ())): sgn ** a for a in range(cap // 2 + 1)})
                    X = X.multiply(ring, cap)
                term = term.multiply(X.adams(ell).truncate(cap), cap)
            total = total + term
        inv = total.scale(Fraction(1, count)).multiply(hyper, cap).truncate(cap)
        return raw.multiply(hyper, cap).truncate(cap), inv

    # raw off-by-one ----------------------------------------------------------
    def factors(self, key: StratumKey):
        """[(name, pure, off, off_labels)] Kunneth factors of the stratum."""
        r = self.r
        top = key.code
        aligned, (kind, body) = top
        out = []
        for i, (_, dl, mk) in enumerate(code_tails(top)):
            out.append((f"tail{i}", tails_poincare(len(mk), dl, r, self.budget), HodgeSeries(), []))
        if not aligned:
            if kind == "g1":
                L = legs(body)
                p = m1n_maps_pieces(L, r, body[0][1], self.table)
                out.insert(0, ("core", p.pure, p.off_by_one, p.off_labels))
            else:
                p = cycle_core_pieces(len(body), [v[0][1] for v in body], [legs(v) for v in body], r)
                out.insert(0, ("cycle", p.pure, p.off_by_one, p.off_labels))
            return out
        if kind == "g1":
            L = legs(body)
            off, labels = HodgeSeries(), []
            try:
                g = self.table.gr4h3(L)
                if g:
                    off = HodgeSeries.monomial(3, 2, (), g)
                    labels = [(("getzler", L, j), 3, (2, ())) for j in range(g)]
            except TableIncomplete:
                pass
            out.insert(0, ("core", pure_m1n(L, self.table), off, labels))
        else:
            for i, v in enumerate(body):
                N = legs(v) + 2
                rk = N * (N - 3) // 2
                out.append((f"cyc{i}", HodgeSeries.one(), HodgeSeries.monomial(1, 1, (), rk),
                            [(("wdvv", i, j), 1, (1, ())) for j in range(rk)]))
        out.append(("P", geometric_tate(r + 1), HodgeSeries(), []))
        inter = intermediate_vertices(top)
        for i, v in enumerate(inter):
            N = legs(v) + 1
            rk = N * (N - 3) // 2
            out.append((f"gcc{i}", HodgeSeries.one(), HodgeSeries.monomial(1, 1, (), rk),
                        [(("wdvv-gcc", i, j), 1, (1, ())) for j in range(rk)]))
        tor = len(inter) - (key.depth - 1)
        out.append(("torus", HodgeSeries.one(), HodgeSeries.monomial(1, 1, (), tor),
                    [(("torus", j), 1, (1, ())) for j in range(tor)]))
        rad = radius_vertices(top)
        mf = mapF_pieces([v[0][1] for v in rad], [legs(v) for v in rad], r)
        pure = HodgeSeries.one()
        for v in rad:
            pure = pure.multiply(self.radius_local(v))
        out.append(("MF", pure, mf.off_by_one, mf.off_labels))
        return out

    def raw_piece(self, key, raw_pure):
        cap = 2 * key.dim
        facs = self.factors(key)
        off = HodgeSeries()
        for i, (_, _, o, _) in enumerate(facs):
            if not o:
                continue
            term = o
            for j, (_, p, _, _) in enumerate(facs):
                if j != i:
                    term = term.multiply(p, cap)
            off = off + term
        labels = []
        for name, _, _, lab in facs:
            labels.extend((name, l, dg, mono) for l, dg, mono in lab)
        return GradedPiece(raw_pure, off.truncate(cap), key.dim, False, [], labels)


def stratum_pure(key: StratumKey, table=None) -> StratumRecord:
    return Assembler(key.r, table).stratum(key)


# ---- E1 table ---------------------------------------------------------------

@dataclass
class E1Table:
    n: int
    r: int
    d: int
    max_codim: int
    records: list
    entries: dict  # (p, j homological) -> [(canonical, rank)]

    def counts_by_degree(self):
        """Generator counts by global cohomological degree."""
        out = defaultdict(Fraction)
        for rec in self.records:
            for deg, rk in rec.global_invariant.dims().items():
                out[deg] += rk
        return dict(sorted(out.items()))

    def hodge_breakdown(self):
        out = defaultdict(lambda: defaultdict(Fraction))
        for rec in self.records:
            for (deg, mono), c in rec.global_invariant.terms.items():
                out[deg][mono] += c
        return out

    def odd_entries(self):
        return {j: c for j, c in self.counts_by_degree().items() if j % 2 and c}

    def to_json(self):
        return {
            "n": self.n, "r": self.r, "d": self.d, "max_codim": self.max_codim,
            "ambient_dim": self.n + self.d * (self.r + 1),
            "counts": {str(j): num_json(c) for j, c in self.counts_by_degree().items()},
            "entries": [{"p": p, "j": j, "strata": [[s, num_json(rk)] for s, rk in v]}
                        for (p, j), v in sorted(self.entries.items())],
            "strata": [rec.to_json() for rec in self.records],
        }


def e1_pure_table(n, r, d, max_codim, table=None, max_degree=None) -> E1Table:
    """Pure E1 generators over all strata up to max_codim.

    max_degree restricts to global degrees <= max_degree (cheaper; the
    Borel-Moore and raw parts of the records are then partial)."""
    asm = Assembler(r, table)
    keys = enumerate_coarse_classes(n, r, d, max_codim)
    if max_degree is not None:
        keys = [k for k in keys if 2 * k.codim <= max_degree]
    records = [asm.stratum(k, max_degree) for k in keys]
    entries = defaultdict(list)
    for rec in records:
        p = rec.key.dim
        for deg, rk in rec.invariant_pure.dims().items():
            j = 2 * p - deg
            entries[(p, j)].append((rec.key.canonical, rk))
    return E1Table(n, r, d, max_codim, records, dict(entries))


def generator_counts(n, r, d, max_codim, table=None):
    return e1_pure_table(n, r, d, max_codim, table).counts_by_degree()


# ---- Picard -------------------------------------------------------------------

def picard_rank(n, r, d):
    from .enumerate import boundary_divisors
    if d < 2:
        raise ValueError("need d >= 2 for a nonempty interior")
    return 2 + len(boundary_divisors(n, r, d))


def h2_basis(n, r, d):
    from .enumerate import boundary_divisors
    return ["Theta", "H"] + [k.canonical for k in boundary_divisors(n, r, d)]


# ---- odd survey --------------------------------------------------------------

MIN_CUSP = 11


def _cusp_monos(series):
    return {k: v for k, v in series.terms.items() if k[1][1]}


@dataclass
class OddSurvey:
    n: int
    r: int
    d: int
    max_codim: int
    max_degree: object
    degrees: dict  # global degree -> surviving lower bound
    generators: dict  # global degree -> generator count (upper side)
    witnesses: list  # (canonical, stratum degree, global degree, codim, rank)
    skipped: list
    headline: object = None

    @property
    def nonzero(self):
        return any(v > 0 for v in self.degrees.values())

    @property
    def min_degree(self):
        ds = [j for j, v in self.degrees.items() if v > 0]
        return min(ds) if ds else None

    def to_json(self):
        return {
            "n": self.n, "r": self.r, "d": self.d, "max_codim": self.max_codim,
            "max_degree": self.max_degree,
            "nonzero": self.nonzero,
            "min_degree": self.min_degree,
            "headline": self.headline,
            "degrees": {str(j): num_json(v) for j, v in sorted(self.degrees.items())},
            "generators": {str(j): num_json(v) for j, v in sorted(self.generators.items())},
            "witnesses": [[w[0], *(num_json(x) for x in w[1:])] for w in self.witnesses],
            "skipped": self.skipped,
        }


def _check_legs_covered(L, table):
    """Raise TableIncomplete unless every cusp multiplicity of M_{1,L} is known."""
    for k in table.cusp_weights(L):
        table.lookup(L, k)


def cusp_strata(n, r, d, max_codim, max_degree=None, table=None):
    """Strata whose core factor can carry a cusp class (core with >= 11 legs).

    Returns (keys, skipped) where skipped lists leg counts lacking table data."""
    table = table or default_table()
    if max_degree is not None:
        max_codim = min(max_codim, max(0, (max_degree - MIN_CUSP) // 2))
    marks = frozenset(range(1, n + 1))
    found = set()
    skipped = []

    asm = Assembler(r, table)
    max_legs = n + d + max_codim
    for L in range(MIN_CUSP, max_legs + 1):
        try:
            _check_legs_covered(L, table)
        except TableIncomplete as exc:
            skipped.append({"core_legs": L, "missing": exc.what})
            continue
        sign_only = _char_kinds(L, table) <= {"sign"}
        for positive in (False, True):
            Ds = [0] if positive else range(1, max_codim + 1)
            for D in Ds:
                if positive:
                    _check_positive(L, table, skipped)
                    if not _positive_ok(L, table):
                        continue
                for mk in _subsets(marks):
                    need = L - len(mk)
                    if need < 0:
                        continue
                    rest = marks - frozenset(mk)
                    for dc in ([0] if not positive else range(2, d + 1)):
                        left = max_codim - D
                        cands = _child_candidates(0, D, d - dc, rest, left)
                        if positive:
                            cands = tuple(c for c in cands if is_tail(c[0]))
                        cands = tuple(sorted(cands, key=lambda c: (c[1], c[0])))
                        cost = budget = None
                        if max_degree is not None and sign_only and not positive:
                            cost = _sign_cost(asm, D, 2 * (n + d * (r + 1)))
                            budget = max_degree - MIN_CUSP - 2 * D
                        for kids in _pick(cands, need, d - dc, rest, left, cost, budget):
                            top = (not positive, ("g1", ((1, dc, 0, tuple(mk)), kids)))
                            if not positive:
                                from .enumerate import _levels_ok
                                if not _levels_ok(top, D):
                                    continue
                            key = make_key(top, n, r, d)
                            if key.codim > max_codim:
                                continue
                            found.add(key)
    uniq = []
    for s_ in skipped:
        if s_ not in uniq:
            uniq.append(s_)
    return sorted(found, key=lambda k: (k.codim, k.canonical)), uniq


def _sign_cost(asm, D, cap):
    """cost(code, j): j-th smallest degree of a subtree's invariants (sign twist
    forces identical siblings into distinct degrees)."""
    memo = {}

    def cost(code, j):
        if code not in memo:
            W = asm.subtree(code, D, cap)[1]
            memo[code] = sorted(dg for (dg, _), cf in W.terms.items() for _ in range(int(cf)))
        degs = memo[code]
        return degs[j] if j < len(degs) else None

    return cost


def _check_positive(L, table, skipped):
    try:
        _check_legs_covered(L + 1, table)
    except TableIncomplete as exc:
        entry = {"core_legs": L + 1, "missing": exc.what}
        if entry not in skipped:
            skipped.append(entry)


def _positive_ok(L, table):
    try:
        _check_legs_covered(L + 1, table)
        return True
    except TableIncomplete:
        return False


def _pick(cands, count, max_deg, marks, codim_left, cost=None, budget=None):
    """Multisets of exactly `count` candidates (sorted by degree) using all marks and degree.

    With cost(code, j) (degree added by the j-th copy of code, None if
    impossible) and an integer budget, branches over budget are pruned;
    each candidate's codim also uses 2 units of the budget."""
    out = []

    def rec(i, need, deg_left, mk_left, cl, acc, room, prev, copies):
        if need == 0:
            if deg_left == 0 and not mk_left:
                out.append(tuple(sorted(acc)))
            return
        for j in range(i, len(cands)):
            code, dg, mk, cc = cands[j]
            if dg > deg_left or cc > cl or not mk <= mk_left:
                continue
            # remaining picks have degree >= dg (candidates sorted by degree)
            if dg * need > deg_left:
                break
            nroom = room
            ncopies = copies + 1 if code == prev else 0
            if cost is not None:
                c = cost(code, ncopies)
                if c is None:
                    continue
                nroom = room - c - 2 * cc
                if nroom < 0:
                    continue
            acc.append(code)
            rec(j, need - 1, deg_left - dg, mk_left - mk, cl - cc, acc, nroom, code, ncopies)
            acc.pop()

    rec(0, count, max_deg, marks, codim_left, [], budget, None, -1)
    return out


def odd_survey(n, r, d, max_codim=3, max_degree=None, table=None, ledger=None):
    """Lower bounds for odd cohomology carried by cusp classes.

    A generator (invariant pure class with an S-factor) is counted as
    surviving after (a) subtracting, degree by degree and Hodge type by Hodge
    type, every raw off-by-one class of the cusp-carrying strata one codimension
    lower (and of the interior), and (b) discarding buckets hit by a cusp-labelled
    relation record.
    """
    table = table or default_table()
    keys, skipped = cusp_strata(n, r, d, max_codim, max_degree, table)
    asm = Assembler(r, table)
    interior = make_key((False, ("g1", ((1, d, 0, tuple(range(1, n + 1))), ()))), n, r, d)
    if d >= 2 and interior not in keys:
        keys = [interior] + keys
    records = []
    for k in keys:
        try:
            records.append(asm.stratum(k))
        except (TableIncomplete, NeedsTable) as exc:
            skipped.append({"stratum": k.canonical, "missing": exc.what})
    by_codim = defaultdict(list)
    for rec in records:
        by_codim[rec.key.codim].append(rec)
    off_by_codim = {}
    for c, recs in by_codim.items():
        acc = HodgeSeries()
        for rec in recs:
            acc = acc + HodgeSeries(_cusp_monos(rec.global_raw_off))
        off_by_codim[c] = acc
    killed = set()
    if ledger is not None:
        for rel in ledger:
            for term in rel.terms:
                if term.cusp:
                    killed.add((term.stratum, term.global_degree))
    degrees = defaultdict(Fraction)
    generators = defaultdict(Fraction)
    witnesses = []
    for rec in records:
        c = rec.key.codim
        gl = HodgeSeries(_cusp_monos(rec.global_invariant))
        lower = off_by_codim.get(c - 1, HodgeSeries())
        for (deg, mono), coeff in sorted(gl.terms.items()):
            if deg % 2 == 0 or coeff <= 0:
                continue
            if max_degree is not None and deg > max_degree:
                continue
            rank = HodgeSeries({(deg, mono): coeff}).evaluate_rank()
            generators[deg] += rank
            if (rec.key.canonical, deg) in killed:
                continue
            hit = lower.coefficient(deg - 1, mono)
            surv = max(Fraction(0), coeff - hit)
            if surv:
                rk = HodgeSeries({(deg, mono): surv}).evaluate_rank()
                degrees[deg] += rk
                witnesses.append((rec.key.canonical, deg - 2 * c, deg, c, rk))
    witnesses.sort(key=lambda w: (w[3], w[2], w[0]))
    headline = None
    if witnesses:
        cmin = min(w[3] for w in witnesses)
        best = min((w for w in witnesses if w[3] == cmin), key=lambda w: w[2])
        headline = {"global_degree": best[2], "stratum_degree": best[1], "codim": best[3],
                    "stratum": best[0]}
    return OddSurvey(n, r, d, max_codim, max_degree, dict(degrees), dict(generators),
                     witnesses, skipped, headline)


# ---- Betti bounds ---------------------------------------------------------------

def betti_bounds(n, r, d, max_codim, table=None):
    """{degree: (lower, upper)} for the cohomology of the ambient space.

    upper = invariant generators; lower = upper minus every raw off-by-one
    class one degree below (the most the first differential can kill), with
    the exact values in degrees 0, 1, 2.  Only degrees 2 * codim < 2 *
    (max_codim + 1) are fully covered by the truncated stratification."""
    tab = e1_pure_table(n, r, d, max_codim, table)
    upper = tab.counts_by_degree()
    off = defaultdict(Fraction)
    for rec in tab.records:
        for deg, rk in rec.global_raw_off.dims().items():
            off[deg] += rk
    out = {}
    top = 2 * (n + d * (r + 1))
    for j in range(top + 1):
        u = upper.get(j, Fraction(0))
        lo = max(Fraction(0), u - off.get(j - 1, 0))
        out[j] = (lo, u)
    out[0] = (Fraction(1), upper.get(0, Fraction(0)))
    if d >= 2:
        p = picard_rank(n, r, d)
        out[2] = (Fraction(min(p, out[2][1])), out[2][1])
    return out
