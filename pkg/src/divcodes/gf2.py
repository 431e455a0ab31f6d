"""Bit-packed linear algebra over GF(2).

Rows are Python ints with bit ``j`` holding column ``j``.  Columns are ints
with bit ``i`` holding the entry of row ``i`` (row 0 least significant); this
is the bijection used by the text format and by column multisets.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

__all__ = [
    "BitVector",
    "GeneratorMatrix",
    "ColumnMultiset",
    "RankDeficient",
    "FormatError",
    "popcount",
    "rref",
    "rank",
    "systematic_form",
    "column_multiset",
    "is_projective",
    "in_row_space",
    "row_basis",
    "parse_matrix_line",
    "format_matrix_line",
    "read_matrices",
]


class RankDeficient(ValueError):
    pass


class FormatError(ValueError):
    pass


def popcount(x: int) -> int:
    return x.bit_count() if hasattr(x, "bit_count") else bin(x).count("1")


@dataclass(frozen=True)
class BitVector:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("negative length")
        if self.bits >> self.length:
            raise ValueError("bits set beyond length")

    @property
    def weight(self) -> int:
        return popcount(self.bits)

    def __getitem__(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        return BitVector(max(self.length, other.length), self.bits ^ other.bits)

    @classmethod
    def unit(cls, length: int, i: int) -> "BitVector":
        return cls(length, 1 << i)

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> "BitVector":
        bits = 0
        for j, e in enumerate(entries):
            if e & 1:
                bits |= 1 << j
        return cls(len(entries), bits)

    def to_list(self) -> list[int]:
        return [(self.bits >> j) & 1 for j in range(self.length)]


def _as_bits(v) -> int:
    return v.bits if isinstance(v, BitVector) else int(v)


@dataclass(frozen=True)
class GeneratorMatrix:
    """A ``k x n`` binary matrix stored as ``k`` row bitmasks."""

    n: int
    rows: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        if self.n < 0:
            raise ValueError("negative length")
        limit = 1 << self.n
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError(f"row {r:#x} does not fit in {self.n} columns")

    @property
    def k(self) -> int:
        return len(self.rows)

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], n: int | None = None) -> "GeneratorMatrix":
        if n is None:
            n = len(rows[0]) if rows else 0
        packed = []
        for row in rows:
            if len(row) != n:
                raise ValueError("ragged matrix")
            packed.append(BitVector.from_list(row).bits)
        return cls(n, tuple(packed))

    @classmethod
    def from_columns(cls, k: int, columns: Sequence[int]) -> "GeneratorMatrix":
        rows = [0] * k
        for j, col in enumerate(columns):
            if col >> k:
                raise ValueError(f"column {col:#x} does not fit in {k} rows")
            c = col
            while c:
                low = c & -c
                rows[low.bit_length() - 1] |= 1 << j
                c ^= low
        return cls(len(columns), tuple(rows))

    @classmethod
    def identity(cls, k: int) -> "GeneratorMatrix":
        return cls(k, tuple(1 << i for i in range(k)))

    def columns(self) -> list[int]:
        cols = [0] * self.n
        for i, r in enumerate(self.rows):
            bit = 1 << i
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= bit
                r ^= low
        return cols

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    def codeword(self, message: int) -> int:
        word = 0
        i = 0
        while message:
            if message & 1:
                word ^= self.rows[i]
            message >>= 1
            i += 1
        return word

    def codewords(self) -> Iterator[int]:
        """All ``2**k`` codewords in Gray-code order (one XOR per step)."""
        word = 0
        yield word
        for step in range(1, 1 << self.k):
            word ^= self.rows[(step & -step).bit_length() - 1]
            yield word

    def permute_columns(self, perm: Sequence[int]) -> "GeneratorMatrix":
        """Column ``j`` of the result is column ``perm[j]`` of ``self``."""
        cols = self.columns()
        return GeneratorMatrix.from_columns(self.k, [cols[p] for p in perm])

    def select_columns(self, idx: Sequence[int]) -> "GeneratorMatrix":
        return self.permute_columns(idx)

    def __str__(self) -> str:
        return "\n".join("".join(str(b) for b in row) for row in self.to_lists())


def rref(m: GeneratorMatrix) -> tuple[GeneratorMatrix, int, list[int]]:
    """Reduced row-echelon form, rank and pivot columns.

    Zero rows are dropped from the front and kept at the bottom so the row
    count is preserved.
    """
    work = list(m.rows)
    pivots: list[int] = []
    r = 0
    for col in range(m.n):
        bit = 1 << col
        piv = None
        for i in range(r, len(work)):
            if work[i] & bit:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return GeneratorMatrix(m.n, tuple(work)), r, pivots


def rank(m: GeneratorMatrix) -> int:
    return rref(m)[1]


def row_basis(n: int, vectors: Iterable[int]) -> GeneratorMatrix:
    """Reduced basis of the span of ``vectors``."""
    red, r, _ = rref(GeneratorMatrix(n, tuple(vectors)))
    return GeneratorMatrix(n, red.rows[:r])


def in_row_space(m: GeneratorMatrix, v) -> bool:
    v = _as_bits(v)
    red, r, pivots = rref(m)
    for row, col in zip(red.rows[:r], pivots):
        if (v >> col) & 1:
            v ^= row
    return v == 0


def systematic_form(m: GeneratorMatrix) -> tuple[GeneratorMatrix, list[int]]:
    """Return ``(G_sys, perm)`` with ``G_sys`` starting with an identity block.

    ``perm[j]`` is the column of ``m`` that became column ``j`` of ``G_sys``.
    """
    red, r, pivots = rref(m)
    if r < m.k:
        raise RankDeficient(f"rank {r} < {m.k} rows")
    pivset = set(pivots)
    perm = pivots + [j for j in range(m.n) if j not in pivset]
    return GeneratorMatrix(m.n, red.rows).permute_columns(perm), perm


@dataclass(frozen=True)
class ColumnMultiset:
    """Multiplicities of column vectors of ``F_2^k`` (zero included)."""

    k: int
    counts: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(u): int(c) for u, c in self.counts.items() if c}
        for u, c in clean.items():
            if c < 0 or u < 0 or u >> self.k:
                raise ValueError(f"bad entry {u}:{c}")
        object.__setattr__(self, "counts", dict(sorted(clean.items())))

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, u: int) -> int:
        return self.counts.get(u, 0)

    def sorted_columns(self) -> list[int]:
        out: list[int] = []
        for u, c in self.counts.items():
            out.extend([u] * c)
        return out

    def to_matrix(self) -> GeneratorMatrix:
        return GeneratorMatrix.from_columns(self.k, self.sorted_columns())

    def __hash__(self):
        return hash((self.k, tuple(self.counts.items())))


def column_multiset(m: GeneratorMatrix, padding: int = 0) -> ColumnMultiset:
    if padding < 0:
        raise ValueError("padding must be nonnegative")
    counts = Counter(m.columns())
    if padding:
        counts[0] += padding
    return ColumnMultiset(m.k, dict(counts))


def is_projective(m: GeneratorMatrix) -> bool:
    cols = m.columns()
    return 0 not in cols and len(set(cols)) == len(cols)


# text format: "n k c_1 ... c_n" with hex columns


def format_matrix_line(m: GeneratorMatrix, canonical: bool = True, extra: str = "") -> str:
    cols = m.columns()
    if canonical:
        cols = sorted(cols)
    fields = [str(m.n), str(m.k)] + [format(c, "x") for c in cols]
    if extra:
        fields.append(extra)
    return " ".join(fields)


def parse_matrix_line(line: str) -> tuple[GeneratorMatrix, dict[str, str]]:
    """Parse one record; trailing ``key=value`` fields are returned as a dict."""
    parts = line.split()
    if len(parts) < 2:
        raise FormatError(f"expected 'n k cols...': {line!r}")
    try:
        n, k = int(parts[0]), int(parts[1])
        cols = [int(p, 16) for p in parts[2:2 + n]]
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    if len(cols) != n:
        raise FormatError(f"expected {n} columns, got {len(cols)}")
    extra = {}
    for p in parts[2 + n:]:
        key, sep, value = p.partition("=")
        if not sep:
            raise FormatError(f"trailing field without '=': {p!r}")
        extra[key] = value
    try:
        g = GeneratorMatrix.from_columns(k, cols)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    return g, extra


def read_matrices(lines: Iterable[str]) -> list[GeneratorMatrix]:
    out = []
    for line in lines:
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(parse_matrix_line(line)[0])
    return out
