"""Euler characteristics of M0n-bar by summing over stable trees.

chi(M0n-bar) = sum over stable labelled trees of prod_v chi(M_{0,val(v)}),
with chi(M_{0,m}) = (-1)^(m-3) (m-3)!.  Trees are built by brute force:
a tree with marks S is either a single vertex or a root vertex carrying some
marks and subtrees on blocks of the remaining marks (rooted at mark 1).
"""
from functools import lru_cache
from math import factorial


def chi_open(m):
    return (-1) ** (m - 3) * factorial(m - 3)


def set_partitions(items):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[head]] + part
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1:]


@lru_cache(maxsize=None)
def _rooted(labels):
    """Sum over stable trees on `labels` plus one root half-edge (frozen tuple)."""
    total = 0
    for part in set_partitions(list(labels)):
        # each block of size 1 is a leg at the root vertex; larger blocks may be a leg bundle or a subtree
        if len(part) + 1 < 3:
            continue
        prod = 1
        for block in part:
            if len(block) == 1:
                continue
            prod *= _rooted(tuple(block))
        total += prod * chi_open(len(part) + 1)
    return total


def euler_mbar0n(n):
    if n == 3:
        return 1
    # root the tree at the vertex carrying mark n: its half-edge is the root
    return _rooted(tuple(range(1, n)))


POINCARE_MBAR0N = {
    3: [1],
    4: [1, 1],
    5: [1, 5, 1],
    6: [1, 16, 16, 1],
    7: [1, 42, 127, 42, 1],
}
