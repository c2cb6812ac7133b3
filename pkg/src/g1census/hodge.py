"""Graded Hodge-type series with exact coefficients.

A term is keyed by (cohomological degree, monomial).  A monomial is a pair
(a, ((k1, e1), (k2, e2), ...)) standing for L^a * S_{k1+1}^e1 * ...; L has
degree/weight 2 and S_{k+1} has degree/weight k.  Coefficients are Fractions.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from pathlib import Path


class TableIncomplete(Exception):
    """A required cusp-table entry is missing."""

    def __init__(self, what):
        super().__init__(f"table-incomplete: {what}")
        self.what = what


ONE_MONO = (0, ())


def mono_mul(m1, m2):
    a = m1[0] + m2[0]
    if not m1[1]:
        return (a, m2[1])
    if not m2[1]:
        return (a, m1[1])
    s = dict(m1[1])
    for k, e in m2[1]:
        s[k] = s.get(k, 0) + e
    return (a, tuple(sorted((k, e) for k, e in s.items() if e)))


def mono_pow(m, p):
    return (m[0] * p, tuple((k, e * p) for k, e in m[1]))


def mono_weight(m):
    return 2 * m[0] + sum(k * e for k, e in m[1])


def mono_rank(m):
    r = 1
    for k, e in m[1]:
        r *= rank_S(k) ** e
    return r


def mono_str(m):
    parts = []
    if m[0] == 1:
        parts.append("L")
    elif m[0]:
        parts.append(f"L^{m[0]}")
    for k, e in m[1]:
        parts.append(f"S{k + 1}" + (f"^{e}" if e != 1 else ""))
    return "*".join(parts)


def num_json(c):
    """JSON form of an exact number: int when integral, else "p/q"."""
    c = Fraction(c)
    return int(c) if c.denominator == 1 else str(c)


def _norm(c):
    """Exact coefficient: int when integral (fast path), Fraction otherwise."""
    if type(c) is int:
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class HodgeSeries:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for key, c in terms.items():
                if c:
                    t[key] = _norm(c)
        self.terms = t

    # constructors
    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({(0, ONE_MONO): 1})

    @classmethod
    def monomial(cls, degree, lexp=0, cusp=(), coeff=1):
        return cls({(degree, (lexp, tuple(sorted(cusp)))): coeff})

    @classmethod
    def tate_geometric(cls, count, start=0):
        """sum_{i=start}^{start+count-1} t^{2i} L^i"""
        return cls({(2 * i, (i, ())): 1 for i in range(start, start + count)})

    # arithmetic
    def __add__(self, other):
        t = dict(self.terms)
        for key, c in other.terms.items():
            t[key] = t.get(key, 0) + c
        return HodgeSeries(t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return HodgeSeries({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        return self.multiply(other)

    def multiply(self, other, max_degree=None):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out = {}
        for (d1, m1), c1 in self.terms.items():
            for (d2, m2), c2 in other.terms.items():
                d = d1 + d2
                if max_degree is not None and d > max_degree:
                    continue
                key = (d, mono_mul(m1, m2))
                out[key] = out.get(key, 0) + c1 * c2
        return HodgeSeries(out)

    def __pow__(self, p):
        out = HodgeSeries.one()
        for _ in range(p):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, HodgeSeries):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def truncate(self, max_degree):
        return HodgeSeries({k: v for k, v in self.terms.items() if k[0] <= max_degree})

    def tate_twist(self, j):
        """Multiply by t^{2j} L^j."""
        return HodgeSeries({(d + 2 * j, (m[0] + j, m[1])): c for (d, m), c in self.terms.items()})

    def shift(self, degree, lexp=0):
        return HodgeSeries({(d + degree, (m[0] + lexp, m[1])): c for (d, m), c in self.terms.items()})

    def dual(self, dim):
        """Poincare duality flip: degree i -> 2 dim - i, type M -> L^dim M^vee."""
        out = {}
        for (d, m), c in self.terms.items():
            cusp_w = sum(k * e for k, e in m[1])
            out[(2 * dim - d, (dim - m[0] - cusp_w, m[1]))] = c
        return HodgeSeries(out)

    def adams(self, ell):
        """psi^ell: t^j X -> (-1)^{(ell-1) j} t^{ell j} X^ell."""
        if ell == 1:
            return self
        out = {}
        for (d, m), c in self.terms.items():
            sign = -1 if ((ell - 1) * d) % 2 else 1
            key = (ell * d, mono_pow(m, ell))
            out[key] = out.get(key, 0) + sign * c
        return HodgeSeries(out)

    def substitute_degree(self, f):
        return HodgeSeries({(f(d), m): c for (d, m), c in self.terms.items()})

    # inspection
    def coefficient(self, degree, mono=ONE_MONO):
        return self.terms.get((degree, mono), Fraction(0))

    def degree_part(self, degree):
        return HodgeSeries({k: v for k, v in self.terms.items() if k[0] == degree})

    def degrees(self):
        return sorted({d for d, _ in self.terms})

    def max_degree(self):
        return max((d for d, _ in self.terms), default=-1)

    def dims(self):
        out = {}
        for (d, m), c in self.terms.items():
            out[d] = out.get(d, 0) + c * mono_rank(m)
        return {d: v for d, v in sorted(out.items()) if v}

    def is_pure(self):
        return all(mono_weight(m) == d for d, m in self.terms)

    def is_off_by_one(self):
        return all(mono_weight(m) == d + 1 for d, m in self.terms)

    def is_tate(self):
        return all(not m[1] for _, m in self.terms)

    def cusp_part(self):
        return HodgeSeries({k: v for k, v in self.terms.items() if k[1][1]})

    def odd_part(self):
        return HodgeSeries({k: v for k, v in self.terms.items() if k[0] % 2})

    def nonnegative_integral(self):
        return all(c >= 0 and c.denominator == 1 for c in self.terms.values())

    def evaluate_rank(self):
        return sum(self.dims().values(), Fraction(0))

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1]))

    def to_json(self):
        rows = []
        for (d, m), c in self.items():
            rows.append({
                "degree": d,
                "L": m[0],
                "S": [[k + 1, e] for k, e in m[1]],
                "weight": mono_weight(m),
                "coeff": num_json(c),
            })
        return rows

    @classmethod
    def from_json(cls, rows):
        t = {}
        for row in rows:
            mono = (row["L"], tuple(sorted((w - 1, e) for w, e in row["S"])))
            t[(row["degree"], mono)] = Fraction(row["coeff"])
        return cls(t)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (d, m), c in self.items():
            ms = mono_str(m)
            body = (f"t^{d}" if d else "") + ("*" + ms if ms and d else ms)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts)


def geometric_tate(count):
    """H*(P^{count-1}) = sum_{i<count} t^{2i} L^i."""
    return HodgeSeries.tate_geometric(count)


def psi_ring(max_degree):
    """Q[psi] with psi in degree 2, truncated."""
    return HodgeSeries.tate_geometric(max_degree // 2 + 1) if max_degree >= 0 else HodgeSeries()


# ---- cusp forms ---------------------------------------------------------

def cusp_dim(weight):
    """Dimension of weight-`weight` cusp forms for SL2(Z)."""
    if weight < 12 or weight % 2:
        return 0
    if weight % 12 == 2:
        return weight // 12 - 1
    return weight // 12


def rank_S(k):
    """Rank of the Hodge structure S_{k+1}."""
    return 2 * cusp_dim(k + 1)


class CuspTable:
    """Multiplicities of S_{k+1} in the weight-k part of H^k(M_{1,n}).

    Built in: zero for even k, k < 11 or n < k, and mult(k, k) = 1 with the
    sign character.  Everything else comes from a loaded table.
    """

    def __init__(self, entries=None, gr4h3=None):
        self.entries = dict(entries or {})
        self.gr4h3_table = dict(gr4h3 or {})

    @classmethod
    def load(cls, path):
        raw = json.loads(Path(path).read_text())
        entries = {}
        gr4 = {}
        rows = raw["entries"] if isinstance(raw, dict) else raw
        for row in rows:
            if "gr4h3" in row:
                gr4[int(row["n"])] = int(row["gr4h3"])
                continue
            tag = row.get("character", "sign")
            if isinstance(tag, dict):
                tag = ("custom", {tuple(sorted(int(x) for x in ct.split(",") if x)): Fraction(v)
                                  for ct, v in tag["custom"].items()})
            entries[(int(row["n"]), int(row["k"]))] = (int(row["mult"]), tag)
        if isinstance(raw, dict):
            for n, v in raw.get("gr4h3", {}).items():
                gr4[int(n)] = int(v)
        return cls(entries, gr4)

    def lookup(self, n, k):
        """(mult, character) for S_{k+1} in M_{1,n}."""
        if k % 2 == 0 or k < 11 or n < k:
            return 0, "trivial"
        if (n, k) in self.entries:
            return self.entries[(n, k)]
        if n == k:
            return 1, "sign"
        raise TableIncomplete(f"mult(n={n}, k={k})")

    def mult(self, n, k):
        return self.lookup(n, k)[0]

    def cusp_weights(self, n):
        return [k for k in range(11, n + 1, 2)]

    def gr4h3(self, m):
        """Rank of gr^W_4 H^3(M_{1,m}); 1 at m = 4 (Getzler's relation)."""
        if m <= 3:
            return 0
        if m == 4:
            return 1
        if m in self.gr4h3_table:
            return self.gr4h3_table[m]
        raise TableIncomplete(f"gr4h3(m={m})")


_DEFAULT_TABLE = [CuspTable()]


def default_table():
    return _DEFAULT_TABLE[0]


def set_default_table(table):
    _DEFAULT_TABLE[0] = table
    pure_m1n_cached.cache_clear()


def character_value(tag, cycle_type):
    """Trace of a permutation with the given cycle type on the multiplicity space."""
    if tag == "trivial":
        return 1
    if tag == "sign":
        return -1 if sum(l - 1 for l in cycle_type) % 2 else 1
    kind, table = tag
    key = tuple(sorted(l for l in cycle_type if l > 1))
    if key not in table:
        raise TableIncomplete(f"character value for cycle type {key}")
    return table[key]


def pure_m1n_basis(n, table=None):
    """Basis labels of the pure cohomology of M_{1,n}: '1' and cusp copies."""
    table = table or default_table()
    labels = [("1", 0, ONE_MONO)]
    for k in table.cusp_weights(n):
        mult, _ = table.lookup(n, k)
        for i in range(mult):
            labels.append((f"S{k + 1}#{i}", k, (0, ((k, 1),))))
    return labels


@lru_cache(maxsize=None)
def pure_m1n_cached(n):
    return pure_m1n(n)


def pure_m1n(n, table=None):
    """1 + sum_k mult(n,k) t^k S_{k+1}.  n = 0 is treated like n = 1."""
    table = table or default_table()
    s = HodgeSeries.one()
    for k in table.cusp_weights(n):
        mult = table.mult(n, k)
        if mult:
            s = s + HodgeSeries.monomial(k, 0, ((k, 1),), mult)
    return s


def cusp_characters(n, table=None):
    """[(k, mult, character tag)] for the nonzero cusp pieces of M_{1,n}."""
    table = table or default_table()
    out = []
    for k in table.cusp_weights(n):
        mult, tag = table.lookup(n, k)
        if mult:
            out.append((k, mult, tag))
    return out
