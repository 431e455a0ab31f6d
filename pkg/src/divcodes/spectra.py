"""Weight distributions, Krawtchouk values and the binary MacWilliams transform."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .gf2 import GeneratorMatrix, popcount

__all__ = [
    "DimensionTooLarge",
    "NotACodeDistribution",
    "WeightDistribution",
    "DEFAULT_MAX_K",
    "weight_distribution",
    "krawtchouk",
    "macwilliams_transform",
    "dual_counts",
    "is_divisible",
    "is_self_orthogonal",
]

DEFAULT_MAX_K = 28


class DimensionTooLarge(ValueError):
    pass


class NotACodeDistribution(ValueError):
    pass


@dataclass(frozen=True)
class WeightDistribution:
    """Counts ``A_0 .. A_n`` (also used for dual distributions ``B``)."""

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    @property
    def n(self) -> int:
        return len(self.counts) - 1

    def __getitem__(self, w: int) -> int:
        return self.counts[w] if 0 <= w < len(self.counts) else 0

    def __len__(self):
        return len(self.counts)

    @property
    def size(self) -> int:
        return sum(self.counts)

    def support(self) -> list[int]:
        return [w for w, a in enumerate(self.counts) if a]

    @classmethod
    def from_dict(cls, n: int, counts: dict[int, int]) -> "WeightDistribution":
        vec = [0] * (n + 1)
        for w, a in counts.items():
            vec[w] = a
        return cls(tuple(vec))

    def as_dict(self) -> dict[int, int]:
        return {w: a for w, a in enumerate(self.counts) if a}

    def enumerator(self) -> str:
        """Exponent notation, e.g. ``(0^1 4^4 8^150 12^100 16^1)``."""
        return "(" + " ".join(f"{w}^{a}" for w, a in enumerate(self.counts) if a) + ")"

    def polynomial(self) -> str:
        terms = []
        for w, a in enumerate(self.counts):
            if not a:
                continue
            terms.append(str(a) if w == 0 else f"{a}*x^{w}")
        return " + ".join(terms)

    def tsv(self) -> str:
        return "\n".join(f"{w}\t{a}" for w, a in enumerate(self.counts) if a)

    @classmethod
    def parse_enumerator(cls, text: str, n: int | None = None) -> "WeightDistribution":
        items = {}
        for tok in text.strip().strip("()").split():
            w, _, a = tok.partition("^")
            items[int(w)] = int(a)
        if n is None:
            n = max(items)
        return cls.from_dict(n, items)


def _message_weights_small(rows: Sequence[int]) -> list[int]:
    out = [0]
    for r in rows:
        out += [w ^ r for w in out]
    return [popcount(w) for w in out]


def weight_distribution(g: GeneratorMatrix, max_k: int = DEFAULT_MAX_K) -> WeightDistribution:
    if g.k > max_k:
        raise DimensionTooLarge(f"k={g.k} exceeds enumeration budget {max_k}")
    counts = [0] * (g.n + 1)
    if g.k <= 20:
        for w in _message_weights_small(g.rows):
            counts[w] += 1
    else:
        for word in g.codewords():
            counts[popcount(word)] += 1
    return WeightDistribution(tuple(counts))


@lru_cache(maxsize=None)
def krawtchouk(i: int, j: int, n: int) -> int:
    if not (0 <= i <= n and 0 <= j <= n):
        raise ValueError(f"need 0 <= i, j <= n, got i={i}, j={j}, n={n}")
    return sum((-1) ** s * comb(n - j, i - s) * comb(j, s) for s in range(0, i + 1))


def dual_counts(a: Sequence, k: int, n: int | None = None) -> list[Fraction]:
    """Exact ``B_i = 2^-k sum_j K_i(j) A_j`` without integrality checks."""
    if n is None:
        n = len(a) - 1
    a = list(a) + [0] * (n + 1 - len(a))
    scale = Fraction(1, 1 << k)
    return [scale * sum(krawtchouk(i, j, n) * a[j] for j in range(n + 1) if a[j]) for i in range(n + 1)]


def macwilliams_transform(a: WeightDistribution | Sequence[int], k: int) -> WeightDistribution:
    counts = a.counts if isinstance(a, WeightDistribution) else tuple(a)
    if sum(counts) != 1 << k:
        raise NotACodeDistribution(f"sum of A is {sum(counts)}, expected 2^{k}")
    b = dual_counts(counts, k)
    for i, bi in enumerate(b):
        if bi.denominator != 1 or bi < 0:
            raise NotACodeDistribution(f"B_{i} = {bi} is not a nonnegative integer")
    return WeightDistribution(tuple(int(x) for x in b))


def is_divisible(a: WeightDistribution, delta: int) -> bool:
    if delta < 1:
        raise ValueError("delta must be positive")
    return all(w % delta == 0 for w, c in enumerate(a.counts) if c and w)


def is_self_orthogonal(g: GeneratorMatrix) -> bool:
    rows = g.rows
    for i, r in enumerate(rows):
        for s in rows[i:]:
            if popcount(r & s) & 1:
                return False
    return True


def weights_of(g: GeneratorMatrix) -> Iterable[int]:
    """Codeword weights indexed by message (bit ``i`` selects row ``i``)."""
    return _message_weights_small(g.rows)
