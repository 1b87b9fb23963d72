"""Combinatorics of strictly increasing multi-indices.

A degree-p basis element of the p-th exterior power of R^n is named by a
strictly increasing tuple of p integers in [0, n).  This module provides
enumeration in lexicographic order, the rank/unrank bijection onto
[0, C(n,p)), and the sign bookkeeping (shuffle and complement parities)
needed by the exterior product and the Hodge star.
"""

from __future__ import annotations

import itertools
from math import comb

MultiIndex = tuple[int, ...]


def check_index(index, n, p=None):
    """Validate a multi-index: strictly increasing entries in [0, n).

    Returns the index as a tuple.  Raises ValueError when malformed.
    """
    idx = tuple(int(i) for i in index)
    if p is not None and len(idx) != p:
        raise ValueError(f"multi-index {idx} does not have length {p}")
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise ValueError(f"multi-index {idx} is not strictly increasing")
    if idx and (idx[0] < 0 or idx[-1] >= n):
        raise ValueError(f"multi-index {idx} has entries outside [0, {n})")
    return idx


def enumerate_basis(n, p):
    """All C(n,p) increasing p-indices on [0, n), in lexicographic order."""
    if p < 0 or p > n:
        raise ValueError(f"degree p={p} outside [0, {n}]")
    return [tuple(c) for c in itertools.combinations(range(n), p)]


def rank_of(index, n):
    """Lexicographic rank of an increasing multi-index among C(n,p) peers."""
    p = len(index)
    r = 0
    prev = -1
    for pos, v in enumerate(index):
        for w in range(prev + 1, v):
            r += comb(n - 1 - w, p - pos - 1)
        prev = v
    return r


def unrank(r, n, p):
    """Inverse of rank_of: the increasing p-index of lexicographic rank r."""
    if not 0 <= r < comb(n, p):
        raise ValueError(f"rank {r} outside [0, C({n},{p}))")
    out = []
    v = 0
    for pos in range(p):
        while True:
            block = comb(n - 1 - v, p - pos - 1)
            if r < block:
                break
            r -= block
            v += 1
        out.append(v)
        v += 1
    return tuple(out)


def merge_sign(left, right):
    """Merge two disjoint increasing indices, tracking the shuffle parity.

    Returns (sign, merged) where sign is the parity of the permutation
    sorting the concatenation left + right, or None when the indices
    overlap (the wedge of repeated basis vectors vanishes).
    """
    inversions = 0
    for a in left:
        for b in right:
            if a == b:
                return None
            if a > b:
                inversions += 1
    merged = tuple(sorted(left + right))
    return (-1 if inversions % 2 else 1, merged)


def complement_sign(index, n):
    """Complement of an index in [0, n) with the permutation sign.

    The sign makes e_index wedge e_complement equal sign * e_{0..n-1},
    i.e. it is the parity of the concatenation index + complement read
    as a permutation of (0, ..., n-1).
    """
    members = set(index)
    complement = tuple(i for i in range(n) if i not in members)
    inversions = sum(1 for a in index for b in complement if a > b)
    return (-1 if inversions % 2 else 1, complement)
