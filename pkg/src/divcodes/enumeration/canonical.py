"""Canonical forms of binary codes under column permutations.

A code with column multiset ``M`` over ``F_2^k`` is encoded as a coloured
bipartite graph: one vertex per nonzero message (codeword), one vertex per
distinct column value, and an edge where the codeword is 1 on that column.
Column vertices are coloured by multiplicity.  Two codes are equivalent iff
the graphs are isomorphic, because a codeword is determined by its support.

nauty (through pynauty) supplies the canonical labelling, the automorphism
group and its orbits.  The canonical generator matrix uses as rows the first
``k`` independent codewords in canonical order.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import total_ordering
from math import factorial, prod

import numpy as np
import pynauty

from ..gf2 import ColumnMultiset, GeneratorMatrix, column_multiset, rref

__all__ = ["CanonicalKey", "CanonicalResult", "canonical_form", "canonical_multiset", "marked_certificate"]


@total_ordering
@dataclass(frozen=True)
class CanonicalKey:
    """Canonical sorted column list; equal keys mean equivalent codes."""

    n: int
    k: int
    columns: tuple[int, ...]

    def __lt__(self, other: "CanonicalKey") -> bool:
        return (self.n, self.k, self.columns) < (other.n, other.k, other.columns)

    def hex(self) -> str:
        text = f"{self.n} {self.k} " + " ".join(format(c, "x") for c in self.columns)
        return hashlib.blake2b(text.encode(), digest_size=12).hexdigest()

    def matrix(self) -> GeneratorMatrix:
        return GeneratorMatrix.from_columns(self.k, self.columns)


@dataclass(frozen=True)
class CanonicalResult:
    key: CanonicalKey
    aut_order: int
    # orbit id per column value of the *input* multiset (Aut(C) orbits on points)
    orbits: dict
    # canonical rank of each input column value (smaller = earlier in canonical order)
    rank: dict

    @property
    def matrix(self) -> GeneratorMatrix:
        return self.key.matrix()


def _parity_table(k: int, values: np.ndarray) -> np.ndarray:
    msgs = np.arange(1, 1 << k, dtype=np.int64)
    anded = msgs[:, None] & values[None, :]
    return (np.bitwise_count(anded) & 1).astype(bool)


def _exact_order(generators, size1: float, size2: int) -> int:
    approx = size1 * 10.0 ** size2
    if size2 == 0 and approx < 2 ** 50:
        return int(round(size1))
    if not generators:
        return 1
    from sympy.combinatorics import Permutation, PermutationGroup

    return int(PermutationGroup([Permutation(g) for g in generators]).order())


def canonical_multiset(ms: ColumnMultiset) -> CanonicalResult:
    """Canonicalise a spanning column multiset over ``F_2^k``."""
    k = ms.k
    values = list(ms.counts)
    mults = [ms.counts[u] for u in values]
    n = sum(mults)
    perm_part = prod(factorial(m) for m in mults)
    if k == 0:
        key = CanonicalKey(n, 0, (0,) * n)
        return CanonicalResult(key, perm_part, {0: 0} if n else {}, {0: 0} if n else {})

    if rref(GeneratorMatrix.from_columns(k, values))[1] < k:
        raise ValueError("column multiset does not span F_2^k")
    n_msg = (1 << k) - 1
    n_vert = n_msg + len(values)
    table = _parity_table(k, np.array(values, dtype=np.int64))
    adjacency = {}
    for ci in range(len(values)):
        nb = np.nonzero(table[:, ci])[0]
        if len(nb):
            adjacency[n_msg + ci] = nb.tolist()
    cells = [set(range(n_msg))]
    for m in sorted(set(mults)):
        cells.append({n_msg + ci for ci, mm in enumerate(mults) if mm == m})
    graph = pynauty.Graph(n_vert, directed=False, adjacency_dict=adjacency, vertex_coloring=cells)
    gens, size1, size2, orbit_ids, _ = pynauty.autgrp(graph)
    lab = pynauty.canon_label(graph)

    echelon: dict[int, int] = {}
    chosen: list[int] = []
    for v in lab[:n_msg]:
        h = v + 1
        x = h
        for p in sorted(echelon, reverse=True):
            if (x >> p) & 1:
                x ^= echelon[p]
        if x:
            echelon[x.bit_length() - 1] = x
            chosen.append(h)
            if len(chosen) == k:
                break
    if len(chosen) < k:
        raise ValueError("column multiset does not span F_2^k")

    new_values = {}
    for ci, u in enumerate(values):
        nu = 0
        for i, h in enumerate(chosen):
            if (h & u).bit_count() & 1:
                nu |= 1 << i
        new_values[u] = nu
    cols = []
    for u, m in zip(values, mults):
        cols.extend([new_values[u]] * m)
    key = CanonicalKey(n, k, tuple(sorted(cols)))
    graph_order = _exact_order(gens, size1, size2)
    position = {v: i for i, v in enumerate(lab)}
    orbits = {u: orbit_ids[n_msg + ci] for ci, u in enumerate(values)}
    rank = {u: position[n_msg + ci] for ci, u in enumerate(values)}
    return CanonicalResult(key, graph_order * perm_part, orbits, rank)


def marked_certificate(ms: ColumnMultiset, marked, frame=None) -> tuple:
    """Invariant of a code with a distinguished block of columns.

    ``ms`` holds the free columns and ``marked`` lists the columns of the
    distinguished block in order.  Without ``frame`` the marked columns are
    held in place: two pairs get equal certificates iff a permutation of
    the free columns carries one code onto the other.

    ``frame`` is a pair ``(outer, inner)`` of lists of codewords (bit ``j``
    = marked position ``j``), with ``inner`` a subset of ``outer``.  The
    marked block may then also be permuted by any permutation mapping the
    set ``outer`` onto itself and ``inner`` onto itself.
    """
    k = ms.k
    values = [u for u in ms.counts if ms.counts[u]]
    mults = [ms.counts[u] for u in values]
    order = sorted(range(len(values)), key=lambda i: mults[i])
    values = [values[i] for i in order]
    mults = [mults[i] for i in order]
    marked = list(marked)
    n_msg = (1 << k) - 1
    allv = values + marked
    table = _parity_table(k, np.array(allv, dtype=np.int64))
    adjacency = {}
    for ci in range(len(allv)):
        nb = np.nonzero(table[:, ci])[0]
        if len(nb):
            adjacency[n_msg + ci] = nb.tolist()
    cells = [set(range(n_msg))]
    for m in sorted(set(mults)):
        cells.append({n_msg + ci for ci, mm in enumerate(mults) if mm == m})
    base = n_msg + len(values)
    n_vert = n_msg + len(allv)
    if frame is None:
        cells.extend({base + j} for j in range(len(marked)))
        shape = None
    else:
        outer, inner = frame
        inner = set(inner)
        cells.append(set(range(base, base + len(marked))))
        words = sorted(set(outer), key=lambda c: (c not in inner, c))
        first = n_vert
        for i, c in enumerate(words):
            adjacency[first + i] = [base + j for j in range(len(marked)) if (c >> j) & 1]
        n_in = sum(1 for c in words if c in inner)
        cells.append(set(range(first, first + n_in)))
        cells.append(set(range(first + n_in, first + len(words))))
        n_vert += len(words)
        shape = (len(words), n_in)
    cells = [c for c in cells if c]
    graph = pynauty.Graph(n_vert, directed=False, adjacency_dict=adjacency, vertex_coloring=cells)
    return (k, tuple(mults), len(marked), shape, pynauty.certificate(graph))


def canonical_form(g: GeneratorMatrix) -> CanonicalResult:
    """Canonical key and automorphism order of the code spanned by ``g``."""
    red, r, _ = rref(g)
    if r < g.k:
        g = GeneratorMatrix(g.n, red.rows[:r])
    return canonical_multiset(column_multiset(g))
