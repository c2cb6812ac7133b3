"""End-to-end checks.  Each check returns (ok, detail); `run_all` runs them in order."""
from __future__ import annotations

import json
import time
from collections import Counter
from itertools import permutations, product
from math import comb
from pathlib import Path

from .blocks import (cycle_core_pieces, dtilde_pieces, m1n_maps_pure, map_w_cohomology, mapF_pieces,
                     mapF_parametrised_pieces, mbar0n_coefficients, pic_off, pic_pure, tails_coefficients,
                     tails_poincare)
from .census import Assembler, betti_bounds, e1_pure_table, odd_survey, picard_rank
from .enumerate import (boundary_divisors, code_tails, dimension_crosscheck, enumerate_coarse_classes,
                        legs, make_key, radius_vertices)
from .hodge import HodgeSeries, geometric_tate, rank_S
from .relations import degree_two_rank_check, relation_ledger

DEFAULT_GOLDEN = Path(__file__).resolve().parents[2] / "tests" / "golden"


def degodd_code(degrees):
    """Aligned genus-one core with one radius vertex per entry of `degrees`."""
    kids = tuple(sorted(((0, dl, 1, ()), ()) for dl in degrees))
    return (True, ("g1", ((1, 0, 0, ()), kids)))


def odd_rank(series):
    return sum(rk for deg, rk in series.dims().items() if deg % 2)


# ---- individual checks --------------------------------------------------------

def check_odd_vanishing(budget=60.0):
    t0 = time.time()
    bad = []
    for n in range(4):
        for r in (2, 3):
            for d in range(5):
                tab = e1_pure_table(n, r, d, 3, max_degree=10)
                odd = {j: c for j, c in tab.odd_entries().items() if j < 11}
                if odd:
                    bad.append(((n, r, d), odd))
    dt = time.time() - t0
    return not bad and dt < budget, f"violations={bad} runtime={dt:.1f}s"


def check_degodd_threshold():
    zero = {}
    for d in range(11):
        s = odd_survey(0, 11, d, max_codim=3)
        zero[d] = not s.nonzero
    s = odd_survey(0, 11, 11, max_codim=3)
    h = s.headline or {}
    ok = all(zero.values()) and s.nonzero and h.get("global_degree") == 123 \
        and h.get("stratum_degree") == 121 == 11 + 2 * comb(11, 2)
    return ok, f"zero for d<=10: {all(zero.values())}; headline {h}"


def check_min_odd_degree():
    s = odd_survey(0, 11, 66, max_codim=3, max_degree=13)
    target = make_key(degodd_code(range(1, 12)), 0, 11, 66).canonical
    hit = [w for w in s.witnesses if w[2] == 13 and w[0] == target]
    no11 = []
    for d in list(range(2, 13)) + [66]:
        for r in (2, 11):
            t = odd_survey(0, r, d, max_codim=3, max_degree=11)
            if t.degrees.get(11):
                no11.append((r, d))
    ok = bool(s.degrees.get(13)) and bool(hit) and not no11
    return ok, f"degree 13 rank {s.degrees.get(13)}; witness {bool(hit)}; degree-11 hits {no11}"


def brute_sign_dims(degrees, k):
    """Graded rank of the sign-isotypic part of V^{(x)k}, V having basis in `degrees`.

    Averages sgn(g) times the number of g-fixed basis tuples over every g in S_k.
    """
    perms = list(permutations(range(k)))
    acc = Counter()
    for tup in product(range(len(degrees)), repeat=k):
        deg = sum(degrees[i] for i in tup)
        for g in perms:
            if all(tup[g[i]] == tup[i] for i in range(k)):
                acc[deg] += _perm_sign(g)
    out = {}
    for deg, v in acc.items():
        assert v % len(perms) == 0
        if v:
            out[deg] = v // len(perms)
    return out


def _perm_sign(g):
    sign, seen = 1, set()
    for i in range(len(g)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = g[j]
            length += 1
        sign *= -1 if length % 2 == 0 else 1
    return sign


def check_s11_invariants():
    rows = {}
    ok = True
    for r in (9, 10, 11, 12):
        key = make_key(degodd_code([1] * 11), 0, r, 11)
        rec = Assembler(r).stratum(key)
        got = odd_rank(rec.invariant_pure)
        want = rank_S(11) * comb(r, 11) * (r + 1)
        rows[r] = (got, want)
        ok &= got == want and ((got == 0) == (r <= 10))
    from .census import cycle_sum
    small = []
    for r in (2, 3, 4, 5):
        W = geometric_tate(r)
        got = {j: c for j, c in cycle_sum(W, 4, sign=True).dims().items() if c}
        want = brute_sign_dims([2 * i for i in range(r)], 4)
        small.append((r, sum(got.values()), sum(want.values())))
        ok &= got == want
    return ok, f"S11 rows {rows}; S4 sign check {small}"


def divisor_descriptor(key):
    aligned, (kind, body) = key.code
    if not aligned and kind == "cyc":
        (v,) = body
        return ["loop", v[0][1], list(v[0][3])]
    if not aligned:
        ((_, dl, mk),) = code_tails(key.code)
        return ["tail", body[0][1], list(body[0][3]), dl, list(mk)]
    rad = sorted([v[0][1], list(v[0][3])] for v in radius_vertices(key.code))
    return ["radius", list(body[0][3]), rad]


def check_picard(golden_dir=None):
    golden_dir = Path(golden_dir or DEFAULT_GOLDEN)
    problems = []
    cases = 0
    for n in range(3):
        for r in (2, 3):
            for d in (2, 3):
                cases += 1
                path = golden_dir / f"divisors_n{n}_r{r}_d{d}.json"
                if not path.exists():
                    problems.append(f"missing {path.name}")
                    continue
                want = sorted(json.loads(path.read_text()))
                divs = boundary_divisors(n, r, d)
                got = sorted(divisor_descriptor(k) for k in divs)
                if got != want:
                    problems.append(f"divisors differ at {(n, r, d)}")
                p = picard_rank(n, r, d)
                if p != 2 + len(want):
                    problems.append(f"picard {p} != 2 + {len(want)} at {(n, r, d)}")
                gens, rels, pic = degree_two_rank_check(n, r, d)
                if gens - rels != pic:
                    problems.append(f"degree-2 check {gens} - {rels} != {pic} at {(n, r, d)}")
    return not problems, "; ".join(problems) or f"{cases} cases agree"


def _same(series, terms):
    return series == HodgeSeries(terms)


def block_cases():
    L = lambda i: (i, ())  # noqa: E731
    cases = []

    def add(name, fn):
        cases.append((name, fn))

    add("map_w d=2 r=3", lambda: (lambda p: _same(p.pure, {(0, L(0)): 1})
                                  and p.off_by_one == HodgeSeries({(5, L(3)): 1}))(map_w_cohomology(2, 3)))
    add("map_w d=3 r=2 dim", lambda: map_w_cohomology(3, 2).dim == 3 * 3 - 2)
    add("map_w d=1 w!=0", lambda: (lambda p: not p.empty and p.dim == 1 and not p.off_by_one)(
        map_w_cohomology(1, 2)))
    add("map_w d=1 w=0 empty", lambda: map_w_cohomology(1, 2, w_nonzero=False).empty)
    add("dtilde (1,1) r=2", lambda: (lambda p: p.off_by_one.dims() == {3: 2, 1: 1})(dtilde_pieces([1, 1], 2)))
    add("dtilde (2,2,2) r=2", lambda: 2 * dtilde_pieces([2, 2, 2], 2).dim == 12)
    add("dtilde (1,0) empty", lambda: dtilde_pieces([1, 0], 2).empty)
    add("dtilde (2,0) dim", lambda: dtilde_pieces([2, 0], 2).dim == 1)
    add("mapF-param (2,2) r=3", lambda: (lambda p: p.off_by_one.dims() == {5: 2, 1: 1})(
        mapF_parametrised_pieces([2, 2], 3)))
    add("mapF-param (3) r=2", lambda: (lambda p: p.off_by_one.dims() == {3: 1})(mapF_parametrised_pieces([3], 2)))
    add("mapF (2,2) m=(0,0) r=3", lambda: mapF_pieces([2, 2], [0, 0], 3).pure == geometric_tate(3))
    add("mapF (2) m=(3) r=3", lambda: mapF_pieces([2], [3], 3).pure == HodgeSeries.one())
    add("mapF (1,1) m=(0,0) r=2", lambda: mapF_pieces([1, 1], [0, 0], 2).pure == geometric_tate(2))
    add("mapF (1) single empty", lambda: mapF_pieces([1], [0], 2).empty)
    add("pic_pure(1)", lambda: pic_pure(1) == geometric_tate(2))
    add("pic_off(2) zero", lambda: not pic_off(2))
    add("m1n_maps (1,1,2)", lambda: m1n_maps_pure(1, 1, 2).pure == HodgeSeries(
        {(0, L(0)): 1, (2, L(1)): 2, (4, L(2)): 1}))
    add("m1n_maps degree-2 rank", lambda: all(m1n_maps_pure(n, 2, 2).pure.dims().get(2) == 2
                                              for n in range(1, 10)))
    add("cycle C1 d=2 r=2", lambda: (lambda p: p.pure.dims() == {i: 2 for i in range(0, 11, 2)} | {0: 1}
                                     and p.dim == 5)(cycle_core_pieces(1, [2], [0], 2)))
    add("cycle (1,1) marked", lambda: cycle_core_pieces(2, [1, 1], [1, 1], 2).pure == geometric_tate(2))
    return cases


def check_blocks():
    bad = []
    cases = block_cases()
    for name, fn in cases:
        try:
            if not fn():
                bad.append(name)
        except Exception as exc:  # noqa: BLE001
            bad.append(f"{name}: {exc}")
    return not bad and len(cases) >= 20, f"{len(cases)} cases, failures {bad}"


def check_dimensions():
    count = 0
    bad = []
    for n in range(4):
        for r in range(1, 4):
            for d in range(6):
                for key in enumerate_coarse_classes(n, r, d, 2, check=False):
                    count += 1
                    ok, dims = dimension_crosscheck(key)
                    if not ok:
                        bad.append(key.canonical)
    return not bad, f"{count} classes, mismatches {bad[:5]}"


def euler_mbar0n(n):
    """Euler characteristic of M_{0,n} bar summed over stable trees.

    Root the tree at leaf n; a vertex whose subtree carries m leaves and
    splits them into k >= 2 blocks contributes chi(M_{0,k+1}) = (-1)^(k-2) (k-2)!."""
    from functools import lru_cache
    from math import factorial

    def chi_open(k):
        return (-1) ** (k - 3) * factorial(k - 3)

    @lru_cache(maxsize=None)
    def F(m):
        if m == 1:
            return 1
        return sum(chi_open(k + 1) * P(m, k) for k in range(2, m + 1))

    @lru_cache(maxsize=None)
    def P(size, k):
        # set partitions of `size` leaves into k blocks, weighted by prod F(block)
        if k == 0:
            return 1 if size == 0 else 0
        return sum(comb(size - 1, b - 1) * F(b) * P(size - b, k - 1) for b in range(1, size - k + 2))

    return F(n - 1)


def check_tails():
    bad = []
    for r in range(1, 6):
        if tails_poincare(0, 1, r) != geometric_tate(r):
            bad.append(f"tails(0,1,{r})")
    for n in range(3, 8):
        if sum(mbar0n_coefficients(n)) != euler_mbar0n(n):
            bad.append(f"euler M0,{n}")
    for r in (1, 2, 3):
        for m, dl in [(0, 1), (1, 1), (0, 2), (2, 0), (3, 0), (1, 2), (2, 1)]:
            c = tails_coefficients(m, dl, r)
            if c != c[::-1]:
                bad.append(f"palindrome {(m, dl, r)}")
    return not bad, f"failures {bad}"


def blocks_labels(key):
    """(stratum, label) pairs of beta and basepoint classes produced by the building blocks."""
    from .blocks import m1n_maps_pieces
    aligned, (kind, body) = key.code
    out = []
    if not aligned and kind == "g1":
        p = m1n_maps_pieces(legs(body), key.r, body[0][1])
        out = [lab for lab, _, _ in p.off_labels if lab[0] == "bp"]
    elif not aligned:
        p = cycle_core_pieces(len(body), [v[0][1] for v in body], [legs(v) for v in body], key.r)
        out = [lab for lab, _, _ in p.off_labels if lab[0] == "bpc"]
    else:
        rad = radius_vertices(key.code)
        p = mapF_pieces([v[0][1] for v in rad], [legs(v) for v in rad], key.r)
        out = [lab for lab, _, _ in p.off_labels if lab[0] in ("beta", "beta-diff")]
    return [(key.canonical, lab) for lab in out]


def check_ledger(max_codim=2):
    bad = []
    total = 0
    for n in range(3):
        for r in (2, 3):
            for d in (2, 3):
                ledger = relation_ledger(n, r, d, max_codim)
                seen = Counter()
                for rec in ledger:
                    for s in rec.sources():
                        seen[s] += 1
                for key in enumerate_coarse_classes(n, r, d, max_codim, check=False):
                    for s in blocks_labels(key):
                        total += 1
                        if seen[s] != 1:
                            bad.append((n, r, d, s, seen[s]))
    return not bad, f"{total} labels, problems {bad[:3]}"


def check_bounds():
    bad = []
    for n, r, d in [(0, 2, 2), (1, 2, 2), (0, 2, 3), (0, 3, 2)]:
        b = betti_bounds(n, r, d, 3)
        for j, (lo, up) in b.items():
            if not (up >= lo >= 0):
                bad.append((n, r, d, j))
        for j in (0, 1, 2):
            if b[j][0] != b[j][1]:
                bad.append((n, r, d, j, "not exact"))
    return not bad, f"problems {bad}"


CHECKS = [
    ("odd vanishing below 11", check_odd_vanishing),
    ("odd threshold d=11 (123/121)", check_degodd_threshold),
    ("minimal odd degree 13 at d=66", check_min_odd_degree),
    ("S11 sign invariants", check_s11_invariants),
    ("Picard rank and degree-2 check", check_picard),
    ("building-block grid", check_blocks),
    ("dimension cross-check", check_dimensions),
    ("tails and M0n-bar oracles", check_tails),
    ("ledger completeness", check_ledger),
    ("bound consistency", check_bounds),
]


def run_all(echo=print):
    results = []
    for i, (name, fn) in enumerate(CHECKS, 1):
        try:
            ok, detail = fn()
        except Exception as exc:  # noqa: BLE001
            ok, detail = False, f"error: {exc!r}"
        results.append((i, name, ok, detail))
        if echo:
            echo(f"{'PASS' if ok else 'FAIL'} [{i}] {name}: {detail}")
    return results
