"""Extension of base codes by a prescribed residual code.

A code of length ``n0 + m`` containing a codeword ``d`` of weight ``n0`` has a
generator matrix of block form

    ( R  M1 )
    ( 0  M2 )

where ``R`` (``r`` rows, ``m`` columns) generates the residual code of ``d``
and ``M2`` generates a code of length ``n0`` all of whose codewords are
codewords of the big code.  Starting from every candidate ``M2`` tracked on
``n0 + m`` columns, the rows of ``R`` are appended one at a time (last row
first).  On the ``m`` residual positions the new row is prescribed, so the
extension search only decides the entries of ``M1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from ..gf2 import ColumnMultiset, GeneratorMatrix
from .canonical import marked_certificate
from .database import CodeDatabase, CodeRecord
from .extension import ExtensionProblem, extensions

__all__ = ["ResidualOutput", "ResidualSearchStats", "residual_prescribed_search", "small_weight_cut"]


@dataclass(frozen=True)
class ResidualOutput:
    base: CodeRecord
    counts: ColumnMultiset

    @property
    def matrix(self) -> GeneratorMatrix:
        return self.counts.to_matrix()

    @property
    def projective(self) -> bool:
        return self.counts[0] == 0 and all(c <= 1 for c in self.counts.counts.values())


@dataclass
class ResidualSearchStats:
    bases: int = 0
    nodes: list[int] = field(default_factory=list)
    pruned: int = 0


def _message_weights(ms: ColumnMultiset) -> np.ndarray:
    hs = np.arange(1 << ms.k, dtype=np.int64)
    w = np.zeros(1 << ms.k, dtype=np.int64)
    for u, c in ms.counts.items():
        if u and c:
            w += c * (np.bitwise_count(hs & u) & 1)
    return w


def small_weight_cut(final_k: int, bound=Fraction(128, 3), offset: int = 8):
    """Predicate rejecting subcodes with too many words of weight 8 or 16.

    The words of weight at most 16 of a subcode stay in the final code, so a
    subcode with ``A8 + A16 > bound * 2^final_k / 4096 - offset`` has no
    admissible completion of dimension ``final_k``.
    """
    limit = Fraction(bound) * (1 << final_k) / 4096 - offset

    def keep(ms: ColumnMultiset) -> bool:
        w = _message_weights(ms)
        return int(np.count_nonzero((w == 8) | (w == 16))) <= limit

    return keep


def _residual_classes(residual: GeneratorMatrix, rows_added: int, shift: int) -> list[int]:
    """Current class of each residual position after ``rows_added`` rows."""
    r = residual.k
    out = []
    for j in range(residual.n):
        u = 0
        for s in range(rows_added):
            if (residual.rows[r - 1 - s] >> j) & 1:
                u |= 1 << (shift + s)
        out.append(u)
    return out


def _prescription(residual: GeneratorMatrix, step: int, shift: int) -> dict[int, tuple[int, int]]:
    row = residual.rows[residual.k - 1 - step]
    pres: dict[int, list[int]] = {}
    for j, u in enumerate(_residual_classes(residual, step, shift)):
        pres.setdefault(u, [0, 0])[(row >> j) & 1] += 1
    return {u: (x0, x1) for u, (x0, x1) in pres.items()}


def _movable(ms: ColumnMultiset, fixed: list[int]) -> ColumnMultiset:
    counts = dict(ms.counts)
    for u in fixed:
        counts[u] -= 1
    return ColumnMultiset(ms.k, {u: c for u, c in counts.items() if c})


def residual_prescribed_search(
    residual: GeneratorMatrix,
    base_db: CodeDatabase | Iterable[CodeRecord],
    delta: int = 8,
    base_length: int = 40,
    weights: Iterable[int] | None = None,
    projective_only: bool = False,
    cut=None,
    stats: ResidualSearchStats | None = None,
) -> list[ResidualOutput]:
    """All codes with the block structure above, up to equivalence.

    ``base_db`` supplies candidate codes of effective length at most
    ``base_length``; they are padded with zero columns.  ``weights`` defaults
    to the multiples of ``delta`` up to ``base_length``.  With
    ``projective_only`` intermediate codes whose column multiplicities can no
    longer become a set are dropped, so only projective outputs are emitted.
    ``cut`` is an optional predicate on intermediate column multisets.

    After every step, intermediate codes are merged when a column
    permutation maps one onto the other, moving base columns among
    themselves and residual positions by a symmetry of the residual code
    that fixes the span of the rows added so far.  Merged codes have the
    same completions up to equivalence.
    """
    stats = stats if stats is not None else ResidualSearchStats()
    stats.nodes = [0] * (residual.k + 1)
    outer = [c for c in residual.codewords() if c]
    if weights is None:
        weights = range(delta, base_length + 1, delta)
    weights = frozenset(weights)
    records = base_db.records() if isinstance(base_db, CodeDatabase) else list(base_db)
    m = residual.n
    level: list[tuple[CodeRecord, ColumnMultiset]] = []
    for rec in records:
        if rec.n > base_length:
            continue
        stats.bases += 1
        counts: dict[int, int] = {}
        for c in rec.key.columns:
            counts[c] = counts.get(c, 0) + 1
        counts[0] = counts.get(0, 0) + base_length - rec.n + m
        level.append((rec, ColumnMultiset(rec.k, counts)))
    stats.nodes[0] = len(level)
    for step in range(residual.k):
        rows_left = residual.k - step - 1
        seen = set()
        nxt = []
        added = GeneratorMatrix(residual.n, residual.rows[residual.k - 1 - step:])
        frame = (outer, [c for c in added.codewords() if c])
        for rec, ms in level:
            pres = _prescription(residual, step, rec.k)
            fixed = _residual_classes(residual, step + 1, rec.k)
            cap = 1 << rows_left if projective_only else None
            problem = ExtensionProblem(ms, weights, delta, pres, column_cap=cap)
            for ext in extensions(problem):
                child = ext.multiset()
                if cut is not None and not cut(child):
                    stats.pruned += 1
                    continue
                cert = marked_certificate(_movable(child, fixed), fixed, frame)
                if cert in seen:
                    continue
                seen.add(cert)
                nxt.append((rec, child))
        level = nxt
        stats.nodes[step + 1] = len(level)
        if not level:
            break
    return [ResidualOutput(rec, ms) for rec, ms in level]
