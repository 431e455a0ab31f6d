"""Point sets of projective binary codes and the constructions built on them.

A projective ``[n, k]`` code is the same thing as a spanning set of ``n``
points of ``F_2^k`` (its columns).  Points are ints under the usual
row-``i``-is-bit-``i`` convention.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .gf2 import (
    ColumnMultiset,
    GeneratorMatrix,
    format_matrix_line,
    in_row_space,
    parse_matrix_line,
    popcount,
    rank,
    row_basis,
)
from .spectra import DEFAULT_MAX_K, DimensionTooLarge, weight_distribution

__all__ = [
    "NotACodeword",
    "PointInSet",
    "PreconditionViolated",
    "PointSet",
    "SubcodeSpectrum",
    "residual_code",
    "restriction_code",
    "span_points",
    "switch",
    "solid_lines",
    "switched_solid",
    "construct_named",
    "shorten",
    "subcode_spectrum",
    "length_fibers",
    "residual_fiber_prediction",
    "project_through",
    "secant_external_cover",
    "NAMED_CODES",
]


class NotACodeword(ValueError):
    pass


class PointInSet(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


@dataclass(frozen=True)
class PointSet:
    k: int
    points: frozenset

    def __post_init__(self):
        pts = frozenset(int(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        for p in pts:
            if p <= 0 or p >> self.k:
                raise ValueError(f"{p:#x} is not a nonzero vector of F_2^{self.k}")

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p) -> bool:
        return p in self.points

    def __iter__(self):
        return iter(sorted(self.points))

    @property
    def rank(self) -> int:
        return rank(GeneratorMatrix.from_columns(self.k, sorted(self.points))) if self.points else 0

    @property
    def spanning(self) -> bool:
        return self.rank == self.k

    @classmethod
    def from_matrix(cls, g: GeneratorMatrix) -> "PointSet":
        cols = g.columns()
        if 0 in cols or len(set(cols)) != len(cols):
            raise ValueError("matrix is not projective")
        return cls(g.k, frozenset(cols))

    def to_matrix(self) -> GeneratorMatrix:
        return GeneratorMatrix.from_columns(self.k, sorted(self.points))

    def to_line(self) -> str:
        return format_matrix_line(self.to_matrix())

    @classmethod
    def from_line(cls, line: str) -> "PointSet":
        g, _ = parse_matrix_line(line)
        return cls.from_matrix(g)


@dataclass(frozen=True)
class SubcodeSpectrum:
    """Two-dimensional subcodes through a fixed codeword, by type.

    Keys are ``(sorted weight triple, effective length)``.
    """

    weight: int
    entries: dict

    def total(self) -> int:
        return sum(self.entries.values())

    def by_length(self) -> dict[int, int]:
        out: Counter = Counter()
        for (_, length), c in self.entries.items():
            out[length] += c
        return dict(sorted(out.items()))

    def lines(self) -> list[str]:
        return [
            f"{{{','.join(map(str, ws))}}}\t{length}\t{c}" for (ws, length), c in sorted(self.entries.items())
        ]


def _check_codeword(g: GeneratorMatrix, c: int) -> int:
    c = int(c)
    if c == 0:
        raise NotACodeword("the zero word has no residual")
    if not in_row_space(g, c):
        raise NotACodeword(f"{c:#x} is not in the row space")
    return c


def _keep(word: int, positions: list[int]) -> int:
    out = 0
    for i, p in enumerate(positions):
        if (word >> p) & 1:
            out |= 1 << i
    return out


def residual_code(g: GeneratorMatrix, c: int) -> GeneratorMatrix:
    """Restriction of the code to the zero positions of ``c``, as a row basis."""
    c = _check_codeword(g, c)
    keep = [j for j in range(g.n) if not (c >> j) & 1]
    return row_basis(len(keep), (_keep(r, keep) for r in g.rows))


def restriction_code(g: GeneratorMatrix, c: int) -> GeneratorMatrix:
    """Projection of the code onto ``supp(c)``, as a row basis."""
    c = _check_codeword(g, c)
    keep = [j for j in range(g.n) if (c >> j) & 1]
    return row_basis(len(keep), (_keep(r, keep) for r in g.rows))


def span_points(vectors: Iterable[int]) -> frozenset:
    """All nonzero vectors in the span of ``vectors``."""
    span = {0}
    for v in vectors:
        span |= {s ^ v for s in span}
    return frozenset(span - {0})


def switch(P: PointSet, L: Iterable[int], E: Iterable[int]) -> PointSet:
    """Replace the line ``L`` of ``P`` by the affine plane ``E \\ L``."""
    L, E = frozenset(L), frozenset(E)
    if len(L) != 3 or span_points(L) != L:
        raise PreconditionViolated("L is not a line (3 points closed under addition)")
    if len(E) != 7 or span_points(E) != E:
        raise PreconditionViolated("E is not a plane (7 points closed under addition)")
    if not L <= P.points:
        raise PreconditionViolated("L is not contained in P")
    if not L <= E:
        raise PreconditionViolated("L is not contained in E")
    if E & P.points != L:
        raise PreconditionViolated("E meets P in more than L")
    return PointSet(P.k, (P.points - L) | (E - L))


def solid_lines() -> list[frozenset]:
    """Four pairwise skew lines of the solid on bits 0..3, and the fifth line
    completing the spread (returned last)."""
    gens = [(0b0001, 0b0010), (0b0101, 0b1010), (0b1101, 0b0110), (0b1001, 0b1110), (0b0100, 0b1000)]
    return [span_points(g) for g in gens]


def switched_solid(k: int, directions: Iterable[int]) -> PointSet:
    """Switch line ``L_i`` of the solid in the plane ``L_i + <d_i>``."""
    lines = solid_lines()
    P = PointSet(k, span_points([1, 2, 4, 8]))
    for line, d in zip(lines[:4], directions):
        P = switch(P, line, span_points(list(line) + [d]))
    return P


def _from_rows(text: str) -> GeneratorMatrix:
    rows = [[int(ch) for ch in line.split()] for line in text.strip().splitlines()]
    return GeneratorMatrix.from_lists(rows)


_C1 = """
0 0 0 0 1 0 1 0 1 0 1 0 1 0 1 0 1 0 1
0 0 0 0 0 1 1 0 0 1 1 0 0 1 1 0 0 1 1
1 0 1 0 0 0 0 0 1 0 1 0 1 1 0 0 0 1 1
0 1 1 0 0 0 0 0 0 1 1 0 1 0 1 0 1 1 0
0 0 0 1 1 1 1 0 0 0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 1 1 1 1 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 0 0 0 0 1 1 1 1 0 0 0 0
0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 1 1 1 1
"""

_C2 = """
0 0 0 0 1 0 1 0 1 0 1 0 1 0 1 0 1 0 1
0 0 0 0 0 1 1 0 0 1 1 0 0 1 1 0 0 1 1
1 0 1 0 0 0 0 0 1 0 1 0 1 1 0 0 0 1 1
0 1 1 0 0 0 0 0 0 1 1 0 1 0 1 0 1 1 0
0 0 0 1 1 1 1 0 0 0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 1 1 1 1 0 0 0 0 1 1 1 1
0 0 0 0 0 0 0 0 0 0 0 1 1 1 1 1 1 1 1
"""

_C3 = """
0 0 0 0 1 0 1 0 1 0 1 0 1 0 1 0 1 0 1
0 0 0 0 0 1 1 0 0 1 1 0 0 1 1 0 0 1 1
1 0 1 0 0 0 0 0 1 0 1 0 1 1 0 0 0 1 1
0 1 1 0 0 0 0 0 0 1 1 0 1 0 1 0 1 1 0
0 0 0 1 1 1 1 0 0 0 0 0 0 0 0 1 1 1 1
0 0 0 0 0 0 0 1 1 1 1 0 0 0 0 1 1 1 1
0 0 0 0 0 0 0 0 0 0 0 1 1 1 1 1 1 1 1
"""

_M19 = """
1 0 0 0 0 0 1 1 1 1 0 0 0 1 1 0 1 0 0
0 1 0 0 0 0 1 1 1 0 0 1 0 1 0 1 0 1 0
0 0 1 0 0 0 1 1 0 0 1 1 0 0 1 1 1 0 0
0 0 0 1 0 0 0 1 0 1 1 0 1 0 1 0 1 1 0
0 0 0 0 1 0 1 0 0 1 1 0 0 1 1 1 0 1 0
0 0 0 0 0 1 1 0 0 1 1 0 0 1 0 1 1 1 0
0 0 0 0 0 0 1 0 1 0 0 0 1 0 1 1 1 1 1
"""

# F_4 = {0, 1, w, w^2} as a + b*w  <->  bits (a, b); w^2 = w + 1
_F4_MUL = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]]
_HEXACODE = [(1, 0, 0, 1, 2, 2), (0, 1, 0, 2, 1, 2), (0, 0, 1, 2, 2, 1)]


def _hexacode18() -> GeneratorMatrix:
    """Hexacode over ``F_4`` with each symbol ``a + b w`` sent to ``(a, b, a+b)``."""
    rows = []
    for row in _HEXACODE:
        for scalar in (1, 2):
            word = 0
            for j, x in enumerate(row):
                v = _F4_MUL[scalar][x]
                a, b = v & 1, v >> 1
                word |= (a | b << 1 | (a ^ b) << 2) << (3 * j)
            rows.append(word)
    return GeneratorMatrix(18, tuple(rows))


def _golay24() -> GeneratorMatrix:
    """Cyclic ``[23, 12]`` Golay code from ``x^11+x^10+x^6+x^5+x^4+x^2+1``,
    extended by an overall parity bit."""
    gpoly = 0b110001110101
    rows = []
    for i in range(12):
        word = gpoly << i
        rows.append(word | (popcount(word) & 1) << 23)
    return GeneratorMatrix(24, tuple(rows))


NAMED_CODES = ("C1", "C2", "C3", "M19", "hexacode18", "golay24")


def construct_named(name: str) -> GeneratorMatrix:
    if name == "C1":
        return _from_rows(_C1)
    if name == "C2":
        return _from_rows(_C2)
    if name == "C3":
        return _from_rows(_C3)
    if name == "M19":
        return _from_rows(_M19)
    if name == "hexacode18":
        return _hexacode18()
    if name == "golay24":
        return _golay24()
    raise KeyError(f"unknown code {name!r}; choose from {', '.join(NAMED_CODES)}")


def shorten(g: GeneratorMatrix, positions: Iterable[int]) -> GeneratorMatrix:
    """Codewords vanishing on ``positions``, with those columns deleted."""
    positions = sorted(set(int(p) for p in positions))
    if any(p < 0 or p >= g.n for p in positions):
        raise IndexError("position out of range")
    rows = [r for r in g.rows if r]
    for p in positions:
        bit = 1 << p
        idx = next((i for i, r in enumerate(rows) if r & bit), None)
        if idx is None:
            continue
        piv = rows.pop(idx)
        rows = [r ^ piv if r & bit else r for r in rows]
        rows = [r for r in rows if r]
    keep = [j for j in range(g.n) if j not in set(positions)]
    return row_basis(len(keep), (_keep(r, keep) for r in rows))


def _words(g: GeneratorMatrix) -> list[int]:
    out = [0]
    for r in g.rows:
        out += [w ^ r for w in out]
    return out


def subcode_spectrum(g: GeneratorMatrix, c: int, max_k: int = DEFAULT_MAX_K) -> SubcodeSpectrum:
    """Types of all ``2^(k-1) - 1`` two-dimensional subcodes containing ``c``."""
    if g.k > max_k:
        raise DimensionTooLarge(f"k={g.k} exceeds enumeration budget {max_k}")
    red = row_basis(g.n, g.rows)
    if red.k < 2:
        raise ValueError("need a code of dimension at least 2")
    c = _check_codeword(red, c)
    wc = popcount(c)
    entries: Counter = Counter()
    for x in _words(red):
        xc = x ^ c
        if x == 0 or xc == 0 or x > xc:
            continue
        wx, wxc = popcount(x), popcount(xc)
        length = popcount(c | x)
        if 2 * length != wc + wx + wxc:
            raise ArithmeticError("effective length differs from half the weight sum")
        entries[(tuple(sorted((wc, wx, wxc))), length)] += 1
    return SubcodeSpectrum(wc, dict(entries))


def length_fibers(g: GeneratorMatrix, c: int) -> dict[int, int]:
    """Count subcodes ``<c, x>`` by their extra length ``j = len - w(c)``."""
    spec = subcode_spectrum(g, c)
    return {length - spec.weight: cnt for length, cnt in spec.by_length().items()}


def residual_fiber_prediction(g: GeneratorMatrix, c: int) -> dict[int, int]:
    """``z - 1`` at ``j = 0`` and ``z * A_j`` of the residual code otherwise.

    Each residual word has ``2^(dim C - dim D)`` preimages, i.e. ``z`` pairs
    ``{x, x + c}`` with ``z = 2^(dim C - dim D - 1)``; the zero word loses the
    pair ``{0, c}``.
    """
    red = row_basis(g.n, g.rows)
    d = residual_code(red, c)
    z = 1 << (red.k - d.k - 1)
    out = {0: z - 1} if z > 1 else {}
    for j, a in weight_distribution(d).as_dict().items():
        if j:
            out[j] = z * a
    return out


def project_through(P: PointSet, Q: int) -> ColumnMultiset:
    """Image of ``P`` in ``F_2^k / <Q>`` identified with ``F_2^(k-1)``."""
    Q = int(Q)
    if Q <= 0 or Q >> P.k:
        raise ValueError("Q must be a nonzero vector of the ambient space")
    if Q in P.points:
        raise PointInSet(f"{Q:#x} lies in the point set")
    p = Q.bit_length() - 1
    low = (1 << p) - 1
    counts: Counter = Counter()
    for v in P.points:
        if (v >> p) & 1:
            v ^= Q
        counts[(v & low) | ((v >> (p + 1)) << p)] += 1
    return ColumnMultiset(P.k - 1, dict(counts))


def secant_external_cover(P: PointSet) -> tuple[int, int]:
    """Points outside ``P`` on a secant of ``P``, and all points outside ``P``."""
    third = {a ^ b for a, b in combinations(P.points, 2)}
    covered = len(third - P.points)
    return covered, (1 << P.k) - 1 - len(P.points)
