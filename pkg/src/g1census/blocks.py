"""Cohomology of the building blocks that appear as Kunneth factors of strata.

Everything is in cohomological grading: a pure class of degree j has weight
j, an off-by-one class has weight j + 1.  Off-by-one pieces carry labels
because the relation ledger keys on them.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from pathlib import Path

import sympy

from .hodge import (HodgeSeries, ONE_MONO, TableIncomplete, default_table, geometric_tate,
                    pure_m1n, pure_m1n_basis)


class NeedsTable(Exception):
    def __init__(self, what):
        super().__init__(f"needs-table: {what}")
        self.what = what


class InexactDivision(ArithmeticError):
    pass


@dataclass
class GradedPiece:
    pure: HodgeSeries = field(default_factory=HodgeSeries)
    off_by_one: HodgeSeries = field(default_factory=HodgeSeries)
    dim: int = 0
    empty: bool = False
    pure_labels: list = field(default_factory=list)  # (label, degree, mono)
    off_labels: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @classmethod
    def empty_space(cls, reason=""):
        return cls(empty=True, notes={"empty": reason})

    def to_json(self):
        if self.empty:
            return {"empty": True, "reason": self.notes.get("empty", "")}
        return {
            "dim": self.dim,
            "pure": self.pure.to_json(),
            "off_by_one": self.off_by_one.to_json(),
            "off_labels": [[repr(l), d] for l, d, _ in self.off_labels],
            "notes": {k: str(v) for k, v in self.notes.items()},
        }


def _series_from_labels(labels):
    s = HodgeSeries()
    for _, deg, mono in labels:
        s = s + HodgeSeries({(deg, mono): 1})
    return s


def _piece(pure, off_labels, dim, pure_labels=None, **notes):
    return GradedPiece(pure, _series_from_labels(off_labels), dim, False,
                       pure_labels or [], off_labels, notes)


BETA_MONO = lambda r: (r, ())  # noqa: E731
TORUS_MONO = (1, ())


def beta_label(v, r):
    return (("beta", v), 2 * r - 1, BETA_MONO(r))


# ---- map spaces and factorisation spaces ---------------------------------

def map_w_cohomology(delta, r, w_nonzero=True):
    """Based maps of degree delta from a marked line, split by w = 0 / w != 0."""
    if delta >= 2:
        return _piece(HodgeSeries.one(), [(("beta",), 2 * r - 1, BETA_MONO(r))],
                      delta * (r + 1) - r)
    if delta == 1 and w_nonzero:
        return _piece(HodgeSeries.one(), [], 1, space="A1")
    return GradedPiece.empty_space("delta = 1 with w = 0")


def _reduce(delta_vector):
    nonzero = [d for d in delta_vector if d > 0]
    zeros = len(delta_vector) - len(nonzero)
    return nonzero, zeros


def dtilde_pieces(delta_vector, r):
    delta_vector = list(delta_vector)
    k = len(delta_vector)
    if k < 1:
        raise ValueError("need at least one entry")
    red, zeros = _reduce(delta_vector)
    if not red:
        return GradedPiece.empty_space("all degrees zero")
    if len(red) == 1 and red[0] == 1:
        return GradedPiece.empty_space("reduces to a single degree-one entry")
    dim = (r + 1) * (len(red) - 1) + zeros
    labels = []
    for i, dl in enumerate(delta_vector):
        if dl == 1:
            labels.append((("beta", i), 2 * r - 1, BETA_MONO(r)))
    for i in range(1, k):
        labels.append((("torus", i), 1, TORUS_MONO))
    return _piece(HodgeSeries.one(), labels, dim, bm_fundamental_degree=2 * dim)


def mapF_parametrised_pieces(delta_vector, r):
    base = dtilde_pieces(delta_vector, r)
    if base.empty:
        return base
    labels = list(base.off_labels)
    for i, dl in enumerate(delta_vector):
        if dl >= 2:
            labels.append(beta_label(i, r))
    # fibres are products of based map spaces over the parameter space
    fibre = sum(map_w_cohomology(dl, r).dim for dl in delta_vector if dl >= 1)
    return _piece(HodgeSeries.one(), labels, base.dim + fibre)


def uni_bivalent(m_vector):
    """Radius vertices with one inward edge and at most one further leg."""
    return all(m <= 1 for m in m_vector)


def mapF_dim(delta_vector, m_vector, r):
    k = len(delta_vector)
    return sum(dl * (r + 1) + m - 2 for dl, m in zip(delta_vector, m_vector)) + (k - 1) - r


def mapF_pieces(delta_vector, m_vector, r):
    """Maps with the factorisation property on the radius vertices."""
    delta_vector, m_vector = list(delta_vector), list(m_vector)
    if len(delta_vector) != len(m_vector):
        raise ValueError("vectors of different length")
    red, _ = _reduce(delta_vector)
    if sum(delta_vector) < 2:
        return GradedPiece.empty_space("radius degrees sum to less than two")
    k = len(delta_vector)
    dim = mapF_dim(delta_vector, m_vector, r)
    if uni_bivalent(m_vector):
        pure = geometric_tate(r)
        plabels = [(("psi", i), 2 * i, (i, ())) for i in range(r)]
        off = [(("beta-diff", 0, i), 2 * r - 1, BETA_MONO(r)) for i in range(1, k)]
    else:
        pure = HodgeSeries.one()
        plabels = [(("psi", 0), 0, ONE_MONO)]
        off = []
        heavy = [i for i, m in enumerate(m_vector) if m >= 2]
        for i, m in enumerate(m_vector):
            if m + 1 >= 4:
                for j in range((m + 1) * (m - 2) // 2):
                    off.append((("M0n", i, j), 1, TORUS_MONO))
        for i in heavy[1:]:
            off.append((("alpha-diff", heavy[0], i), 1, TORUS_MONO))
        for i, dl in enumerate(delta_vector):
            if dl >= 1:
                off.append(beta_label(i, r))
    return GradedPiece(pure, _series_from_labels(off), dim, False, plabels, off,
                       {"uni_bivalent": uni_bivalent(m_vector)})


# ---- Picard stacks and smooth genus-one maps ------------------------------

def _m1n(n, table):
    return pure_m1n(max(n, 0), table)


def pic_pure(n, table=None):
    table = table or default_table()
    return _m1n(n + 1, table) + _m1n(n, table).tate_twist(1)


def pic_pair_pure(n, table=None):
    table = table or default_table()
    return (_m1n(n + 2, table) + _m1n(n + 1, table).tate_twist(1).scale(2)
            + _m1n(n, table).tate_twist(2))


def pic_off(n, table=None):
    table = table or default_table()
    a = table.gr4h3(n + 1)
    b = table.gr4h3(n)
    return (HodgeSeries.monomial(3, 2, (), a) + HodgeSeries.monomial(5, 3, (), b))


def m1n_maps_pure(n, r, d, table=None):
    return m1n_maps_pieces(n, r, d, table)


def m1n_maps_pieces(n, r, d, table=None):
    """Smooth genus-one maps with n marks: Picard pure part times r+1 hyperplane powers."""
    table = table or default_table()
    dim = n + d * (r + 1)
    pure = pic_pure(n, table).multiply(geometric_tate(r + 1)).truncate(2 * dim)
    off = []
    if d >= 2:
        for alpha, theta, cb0, mono in basepoint_basis(n, table):
            for m in range((d - 1) * (r + 1)):
                cb = cb0 + 2 * m
                off.append((("bp", alpha, theta, m), 2 * r - 1 + cb, (mono[0] + m + r, mono[1])))
    try:
        po = pic_off(n, table)
        for (deg, mono), c in po.items():
            for i in range(r + 1):
                for j in range(int(c)):
                    off.append((("pic-off", deg, j, i), deg + 2 * i, (mono[0] + i, mono[1])))
    except TableIncomplete:
        pass
    return _piece(pure, off, dim, hyperplane_powers=r + 1)


def basepoint_basis(n, table=None):
    """Basis of the pure Picard part with one extra mark: (alpha, theta, degree, mono)."""
    table = table or default_table()
    out = []
    for lab, deg, mono in pure_m1n_basis(n + 2, table):
        out.append((lab, 0, deg, mono))
    for lab, deg, mono in pure_m1n_basis(n + 1, table):
        out.append((lab, 1, deg + 2, (mono[0] + 1, mono[1])))
    return out


# ---- cycle cores ---------------------------------------------------------

def cycle_dim(delta_vector, m_vector, r):
    return sum(m_vector) - len(delta_vector) + sum(delta_vector) * (r + 1)


def cycle_core_pieces(k, delta_vector, m_vector, r):
    """Positive-degree cycle of k rational components."""
    delta_vector, m_vector = list(delta_vector), list(m_vector)
    if len(delta_vector) != k or len(m_vector) != k:
        raise ValueError("vectors must have length k")
    d = sum(delta_vector)
    if d < 2:
        return GradedPiece.empty_space("cycle of total degree below two")
    dim = cycle_dim(delta_vector, m_vector, r)
    pure = geometric_tate(r)
    free = [v for v in range(k) if m_vector[v] == 0]
    for _ in free:
        pure = pure.multiply(geometric_tate(dim + 1), 2 * dim)
    pure = pure.truncate(2 * dim)
    off = [(("torus-sign",), 1, TORUS_MONO)]
    for v in range(k):
        if m_vector[v] + 2 >= 4:
            mm = m_vector[v] + 1
            for j in range((mm + 1) * (mm - 2) // 2):
                off.append((("wdvv", v, j), 1, TORUS_MONO))
    for v in range(k):
        if delta_vector[v] >= 1:
            # one unit of degree at v split off: fibre P^{(r+1)(d-1)-1}
            for m in range((r + 1) * (d - 1)):
                off.append((("bpc", v, m), 2 * r - 1 + 2 * m, (r + m, ())))
    return GradedPiece(pure, _series_from_labels(off), dim, False, [], off,
                       {"psi_vertices": free, "hyperplane_powers": r})


# ---- genus-zero pieces ---------------------------------------------------

q = sympy.Symbol("q")


def _qint(n):
    return sum((q ** i for i in range(n)), sympy.Integer(0))


@lru_cache(maxsize=None)
def _basepoint_free(delta, r):
    """Basepoint-free (r+1)-tuples of binary forms of degree delta (with scalars)."""
    if delta == 0:
        return sympy.expand(q ** (r + 1) - 1)
    out = q ** ((r + 1) * (delta + 1)) - 1
    for e in range(1, delta + 1):
        out -= _qint(e + 1) * _basepoint_free(delta - e, r)
    return sympy.expand(out)


def _root_factor(delta, r):
    if delta == 0:
        return sympy.Integer(1)
    num = sympy.Poly(_basepoint_free(delta, r), q)
    den = sympy.Poly((q - 1) * _qint(r + 1), q)
    quo, rem = num.div(den)
    if not rem.is_zero:
        raise InexactDivision("map count not divisible")
    return quo.as_expr()


def _irreducibles(ell):
    return sympy.Rational(1, ell) * sum(sympy.mobius(dd) * q ** (ell // dd)
                                        for dd in sympy.divisors(ell))


def _falling(x, k):
    out = sympy.Integer(1)
    for i in range(k):
        out *= (x - i)
    return out


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _int_partitions(n, max_part=None):
    if max_part is None:
        max_part = n
    if n == 0:
        yield []
        return
    for p in range(min(n, max_part), 0, -1):
        for rest in _int_partitions(n - p, p):
            yield [p] + rest


def _orbit_splits(m):
    """Ways to write m = sum_l l * m_l; yields dicts l -> m_l."""
    for part in _int_partitions(m):
        out = {}
        for p in part:
            out[p] = out.get(p, 0) + 1
        yield out


class TailsOracle:
    """Point count of the evaluation fibre of genus-zero stable maps.

    T(delta, s) counts F_q points of the fibre over a fixed point of P^r of
    the space of genus-zero stable maps of degree delta with s labelled marks
    plus the attaching point.  It is assembled recursively over the root
    component: a based map from (P^1, infinity), labelled special points on
    A^1, Frobenius orbits of unlabelled subtrees, all divided by Aut(A^1).
    """

    def __init__(self, r, budget=10):
        self.r = r
        self.budget = budget
        self.memo = {}

    def count(self, delta, s):
        if delta + s > self.budget:
            raise NeedsTable(f"tails(m={s}, delta={delta}, r={self.r}) beyond oracle budget")
        key = (delta, s)
        if key not in self.memo:
            self.memo[key] = self._count(delta, s)
        return self.memo[key]

    def _unlabelled(self, parts, used):
        """Unordered configurations of unlabelled subtrees with degrees `parts`."""
        mult = {}
        for e in parts:
            mult[e] = mult.get(e, 0) + 1
        types = sorted(mult)
        total = sympy.Integer(0)

        def rec(i, per_len, acc_fact, acc_t):
            nonlocal total
            if i == len(types):
                term = acc_t / acc_fact
                for ell, cnt in per_len.items():
                    pts = q - used if ell == 1 else _irreducibles(ell)
                    term *= _falling(pts, cnt)
                total += term
                return
            e = types[i]
            for split in _orbit_splits(mult[e]):
                pl = dict(per_len)
                f = acc_fact
                t = acc_t
                te = self.count(e, 0)
                for ell, me in split.items():
                    pl[ell] = pl.get(ell, 0) + me
                    f *= factorial(me)
                    t *= te.subs(q, q ** ell) ** me
                rec(i + 1, pl, f, t)

        rec(0, {}, 1, sympy.Integer(1))
        return total

    def _count(self, delta, s):
        r = self.r
        total = sympy.Integer(0)
        marks = list(range(s))
        for dv in range(delta + 1):
            root = _root_factor(dv, r)
            for a in range(s + 1):
                for onroot in combinations(marks, a):
                    rest = [x for x in marks if x not in onroot]
                    for blocks in _set_partitions(rest):
                        for degs in self._block_degrees(blocks, delta - dv):
                            left = delta - dv - sum(degs)
                            lab = a + len(blocks)
                            child = None
                            for parts in _int_partitions(left):
                                if dv == 0 and 1 + lab + len(parts) < 3:
                                    continue
                                if child is None:
                                    child = sympy.Integer(1)
                                    for b, e in zip(blocks, degs):
                                        child *= self.count(e, len(b))
                                total += root * _falling(q, lab) * child * self._unlabelled(parts, lab)
        num = sympy.Poly(sympy.expand(total), q)
        quo, rem = num.div(sympy.Poly(q * (q - 1), q))
        if not rem.is_zero:
            raise InexactDivision(f"tails count T({delta},{s}) not divisible by |AGL1|")
        return quo.as_expr()

    def _block_degrees(self, blocks, budget):
        def rec(i, left):
            if i == len(blocks):
                yield []
                return
            lo = 0 if len(blocks[i]) >= 2 else 1
            for e in range(lo, left + 1):
                for rest in rec(i + 1, left - e):
                    yield [e] + rest
        yield from rec(0, budget)


_ORACLES = {}
_TAILS_TABLE = {}


def load_tails_table(path):
    raw = json.loads(Path(path).read_text())
    for row in raw:
        key = (int(row["m"]), int(row["delta"]), int(row["r"]))
        _TAILS_TABLE[key] = [int(c) for c in row["coefficients"]]


def tails_oracle(r, budget=10):
    if (r, budget) not in _ORACLES:
        _ORACLES[(r, budget)] = TailsOracle(r, budget)
    return _ORACLES[(r, budget)]


def _poly_to_series(coeffs):
    return HodgeSeries({(2 * i, (i, ())): c for i, c in enumerate(coeffs) if c})


def _check_palindromic(coeffs, dim, what):
    if len(coeffs) - 1 != dim or coeffs != coeffs[::-1]:
        raise InexactDivision(f"{what} is not palindromic of degree {dim}")


def tails_coefficients(m, delta, r, budget=10):
    if (m, delta, r) in _TAILS_TABLE:
        coeffs = _TAILS_TABLE[(m, delta, r)]
    else:
        expr = tails_oracle(r, budget).count(delta, m)
        coeffs = [int(c) for c in reversed(sympy.Poly(expr, q).all_coeffs())]
    _check_palindromic(coeffs, delta * (r + 1) + m - 2, f"tails(m={m}, delta={delta}, r={r})")
    return coeffs


@lru_cache(maxsize=None)
def tails_poincare(m, delta, r, budget=10):
    """Poincare series of the evaluation fibre of genus-zero maps (m marks + attaching point)."""
    if delta == 0 and m < 2:
        raise ValueError("unstable tail")
    return _poly_to_series(tails_coefficients(m, delta, r, budget))


def mbar0n_coefficients(n):
    """Keel's recursion for the Poincare polynomial of M_{0,n} bar, coefficients in q."""
    if n < 3:
        raise ValueError("need n >= 3")
    P = {3: [1]}

    def add(a, b):
        out = [0] * max(len(a), len(b))
        for i, c in enumerate(a):
            out[i] += c
        for i, c in enumerate(b):
            out[i] += c
        return out

    def mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return out

    for m in range(3, n):
        nxt = mul([1, 1], P[m])
        acc = [0]
        for j in range(2, m - 1):
            acc = add(acc, [comb(m, j) * c for c in mul(P[j + 1], P[m - j + 1])])
        nxt = add(nxt, [0] + [Fraction(c, 2) for c in acc])
        P[m + 1] = [int(c) for c in nxt]
        while len(P[m + 1]) > 1 and P[m + 1][-1] == 0:
            P[m + 1].pop()
    return P[n]


def mbar0n_poincare(n):
    coeffs = mbar0n_coefficients(n)
    _check_palindromic(coeffs, n - 3, f"M0,{n} bar")
    return _poly_to_series(coeffs)
