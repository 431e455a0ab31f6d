"""One-row extensions of a divisible code.

A parent ``[n, k]`` code is tracked on ``n' >= n`` columns (the extra ones are
zero placeholders).  Appending a row splits every column class ``u`` into
``x(u,0) + x(u,1) = c(u)``.  Only the counts ``y(u) = x(u,1)`` matter, and the
weight of the codeword selected by ``(h, 1)`` is

    w(h) = sum_u c(u) [h.u = 1] + sum_u y(u) (-1)^(h.u)

so every functional weight is an affine function of ``y``.  The search is a
depth-first enumeration of ``y`` with interval pruning on all ``2^k`` new
weights at once.  Two reductions keep it small:

* with ``systematic`` set, one copy of each class in a basis of the parent's
  columns is forced to 0 (adding parent codewords to the new row does not
  change the code, and this picks one row per coset; with prescriptions only
  codewords vanishing on the prescribed classes are used);
* divisibility by ``2^a`` turns into congruences on sums of ``y`` over the
  classes lying under an intersection of parent rows; the last class of each
  such sum in the search order only runs through one residue class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Iterator, Mapping

import numpy as np

from ..gf2 import ColumnMultiset, GeneratorMatrix, column_multiset

__all__ = [
    "ExtensionProblem",
    "Extension",
    "InconsistentPrescription",
    "InfeasibleBudget",
    "extensions",
    "work_units",
]


class InconsistentPrescription(ValueError):
    pass


class InfeasibleBudget(ValueError):
    pass


@dataclass(frozen=True)
class ExtensionProblem:
    """Constraint data for appending one row.

    ``counts`` is the tracked column multiset (zero class = placeholders).
    ``weights`` are the admissible nonzero weights of the extended code.
    ``prescribed`` maps a class ``u`` to a fixed split ``(x(u,0), x(u,1))`` of
    part of that class; the rest of the class stays free.  ``column_cap``
    bounds every column multiplicity of the extended code (the zero column
    by ``column_cap - 1``).
    """

    counts: ColumnMultiset
    weights: frozenset
    delta: int = 1
    prescribed: Mapping[int, tuple[int, int]] = field(default_factory=dict)
    systematic: bool = True
    allow_zero: bool = False
    column_cap: int | None = None

    @classmethod
    def build(
        cls,
        g: GeneratorMatrix,
        delta: int,
        a: int | None = None,
        b: int | None = None,
        n_prime: int | None = None,
        weights=None,
        prescribed=None,
        systematic: bool = True,
        allow_zero: bool = False,
    ) -> "ExtensionProblem":
        n_prime = g.n if n_prime is None else n_prime
        if n_prime < g.n:
            raise ValueError("tracked length n' must be >= n")
        if weights is None:
            if a is None or b is None:
                raise ValueError("give either a weight set or bounds a, b")
            if b < a:
                raise InfeasibleBudget(f"b*delta={b * delta} < a*delta={a * delta}")
            weights = range(a * delta, b * delta + 1, delta)
        weights = frozenset(int(w) for w in weights if 0 < w <= n_prime)
        return cls(column_multiset(g, n_prime - g.n), weights, delta, dict(prescribed or {}), systematic, allow_zero)

    @property
    def k(self) -> int:
        return self.counts.k

    @property
    def n_prime(self) -> int:
        return self.counts.total

    @property
    def a(self) -> int:
        return min(self.weights) // self.delta if self.weights else 0

    @property
    def b(self) -> int:
        return max(self.weights) // self.delta if self.weights else 0


@dataclass(frozen=True)
class Extension:
    """A solution: ``y[u]`` copies of free class ``u`` receive a 1."""

    k: int
    y: tuple[tuple[int, int], ...]
    counts: ColumnMultiset

    def multiset(self) -> ColumnMultiset:
        """Column multiset of the extended ``k+1``-row code."""
        top = 1 << self.k
        out: dict[int, int] = {}
        for u, c in self.counts.counts.items():
            out[u] = out.get(u, 0) + c
        for u, yy in self.y:
            out[u] -= yy
            out[u | top] = out.get(u | top, 0) + yy
        return ColumnMultiset(self.k + 1, out)

    def matrix(self) -> GeneratorMatrix:
        return self.multiset().to_matrix()


def _two_adic(x: int) -> int:
    return (x & -x).bit_length() - 1


class _Plan:
    """Precomputed DFS order, bounds and congruences for one problem."""

    def __init__(self, p: ExtensionProblem):
        k = p.k
        self.k = k
        self.problem = p
        if not p.weights:
            raise InfeasibleBudget("empty weight set")
        for u, (x0, x1) in p.prescribed.items():
            if u < 0 or u >> k or x0 < 0 or x1 < 0:
                raise InconsistentPrescription(f"bad prescription {u}: {(x0, x1)}")
            if x0 + x1 > p.counts[u]:
                raise InconsistentPrescription(
                    f"class {u:x} has {p.counts[u]} columns, prescription uses {x0 + x1}"
                )
        free = {u: c - sum(p.prescribed.get(u, (0, 0))) for u, c in p.counts.counts.items()}
        free = {u: c for u, c in free.items() if c > 0}
        hs = np.arange(1 << k, dtype=np.int64)

        def odd(u):
            return (np.bitwise_count(hs & u) & 1).astype(np.int64)

        const = np.zeros(1 << k, dtype=np.int64)
        parent = np.zeros(1 << k, dtype=np.int64)
        for u, c in p.counts.counts.items():
            parent += c * odd(u)
        for u, c in free.items():
            const += c * odd(u)
        for u, (x0, x1) in p.prescribed.items():
            o = odd(u)
            const += x0 * o + x1 * (1 - o)
        self.const = const

        lo = {u: 0 for u in free}
        hi = dict(free)
        if p.systematic:
            for u in _normalising_classes(k, free, p.prescribed):
                hi[u] -= 1
        # Without prescriptions the new row must put a 1 on a placeholder;
        # with them, independence is up to the prescribed part.
        needs_new = p.systematic and not p.prescribed
        if 0 in free and needs_new:
            lo[0] = 1
        capped_out = False
        if p.column_cap is not None:
            for u in set(free) | set(p.prescribed):
                x0, x1 = p.prescribed.get(u, (0, 0))
                cap0 = p.column_cap - (1 if u == 0 else 0)
                if u in free:
                    hi[u] = min(hi[u], p.column_cap - x1)
                    lo[u] = max(lo[u], free[u] + x0 - cap0)
                    capped_out |= lo[u] > hi[u]
                else:
                    capped_out |= x1 > p.column_cap or x0 > cap0
        if capped_out or any(lo[u] > hi[u] for u in free):
            self.empty = True
        elif 0 in free and lo[0] > hi[0]:
            self.empty = True
        elif 0 not in free and needs_new:
            self.empty = True
        else:
            self.empty = False

        # Classes meeting many parent rows first and the zero class last, so
        # that the congruences below close as early as possible.
        order = sorted(free, key=lambda u: (-u.bit_count(), -(hi[u] - lo[u]), u))
        self.order = order
        q = len(order)
        self.lo = [lo[u] for u in order]
        self.hi = [hi[u] for u in order]
        self.signs = np.array([1 - 2 * odd(u) for u in order], dtype=np.int64).reshape(q, 1 << k)
        lo_a = np.array(self.lo, dtype=np.int64).reshape(q, 1)
        hi_a = np.array(self.hi, dtype=np.int64).reshape(q, 1)
        mins = np.minimum(self.signs * lo_a, self.signs * hi_a)
        maxs = np.maximum(self.signs * lo_a, self.signs * hi_a)
        self.rem_min = np.zeros((q + 1, 1 << k), dtype=np.int64)
        self.rem_max = np.zeros((q + 1, 1 << k), dtype=np.int64)
        for i in range(q - 1, -1, -1):
            self.rem_min[i] = self.rem_min[i + 1] + mins[i]
            self.rem_max[i] = self.rem_max[i + 1] + maxs[i]

        self._congruences(p, parent)

        top = p.n_prime
        ok = np.zeros(top + 2, dtype=bool)
        for w in p.weights:
            if 0 < w <= top:
                ok[w] = True
        if p.allow_zero:
            ok[0] = True
        # next admissible weight >= x; lower bounds are never negative since
        # y(u) never exceeds the free count already included in const
        nxt = np.full(top + 2, top + 1, dtype=np.int64)
        nxt[top + 1] = 1 << 40
        for x in range(top, -1, -1):
            nxt[x] = x if ok[x] else nxt[x + 1]
        self.ok = ok
        self.next_ok = nxt
        self.top = top

    def _congruences(self, p: ExtensionProblem, parent: np.ndarray) -> None:
        """Divisibility of the extended code as congruences on sums of ``y``.

        If all parent weights and all admissible weights are multiples of
        ``2^a``, the extended code is ``2^a``-divisible exactly when the new
        row meets the intersection of any ``t < a`` parent rows in a multiple
        of ``2^(a-t)`` (inclusion-exclusion on the weight of a sum).  For a
        row set ``T`` those columns are the classes ``u`` containing ``T``.
        """
        k, order = self.k, self.order
        g = 0
        for w in p.weights:
            g = gcd(g, w)
        for w in parent[1:].tolist():
            g = gcd(g, w)
        cap = p.n_prime.bit_length() + 1
        a = min(_two_adic(g), cap) if g else cap
        self.member_of: list[list[int]] = [[] for _ in order]
        self.closing: list[list[tuple[int, int]]] = [[] for _ in order]
        self.base: list[int] = []
        self.contradiction = False
        for t in range(min(a, k + 1)):
            mod = 1 << (a - t)
            for rows in combinations(range(k), t):
                mask = sum(1 << r for r in rows)
                base = sum(x1 for u, (_, x1) in p.prescribed.items() if u & mask == mask)
                members = [i for i, u in enumerate(order) if u & mask == mask]
                if not members:
                    if base % mod:
                        self.contradiction = True
                    continue
                idx = len(self.base)
                self.base.append(base)
                for i in members:
                    self.member_of[i].append(idx)
                self.closing[members[-1]].append((idx, mod))

    def feasible(self, cur: np.ndarray, i: int) -> bool:
        low = cur + self.rem_min[i]
        high = cur + self.rem_max[i]
        if high.min() < 0:
            return False
        top = self.top
        return bool((self.next_ok[np.minimum(low, top + 1)] <= high).all())


def _annihilator(k: int, vectors) -> list[int]:
    """Basis of ``{h in F_2^k : h.u = 0 for all u in vectors}``."""
    echelon: dict[int, int] = {}
    for v in vectors:
        x = v
        for p in sorted(echelon, reverse=True):
            if (x >> p) & 1:
                x ^= echelon[p]
        if x:
            for p in list(echelon):
                if (echelon[p] >> (x.bit_length() - 1)) & 1:
                    echelon[p] ^= x
            echelon[x.bit_length() - 1] = x
    out = []
    for f in range(k):
        if f in echelon:
            continue
        h = 1 << f
        for p, row in echelon.items():
            if (row >> f) & 1:
                h |= 1 << p
        out.append(h)
    return out


def _normalising_classes(k: int, free, prescribed) -> list[int]:
    """Free classes fixing the coset of the new row.

    Adding a parent codeword ``h`` to the new row gives the same code.  Only
    ``h`` orthogonal to every prescribed class keeps the prescriptions; if
    those form a space of dimension ``d``, pick ``d`` free classes on which
    they act independently and force one copy of each to stay 0.
    """
    hs = _annihilator(k, [u for u in prescribed])
    if not hs:
        return []
    signature = {}
    for u in sorted(free):
        sig = 0
        for j, h in enumerate(hs):
            if (h & u).bit_count() & 1:
                sig |= 1 << j
        if sig:
            signature[u] = sig
    prefer = [1 << i for i in range(k) if (1 << i) in signature]
    rest = [u for u in signature if u not in prefer]
    echelon: dict[int, int] = {}
    chosen = []
    for u in prefer + rest:
        x = signature[u]
        for p in sorted(echelon, reverse=True):
            if (x >> p) & 1:
                x ^= echelon[p]
        if x:
            echelon[x.bit_length() - 1] = x
            chosen.append(u)
    if len(chosen) < len(hs):
        raise ValueError("parent columns do not span; cannot normalise")
    return chosen


def _independent(vectors, prefer=()):
    """Greedy maximal independent subset, trying ``prefer`` first."""
    pool = [v for v in prefer if v in set(vectors)] + [v for v in vectors if v not in set(prefer)]
    echelon: dict[int, int] = {}
    out = []
    for v in pool:
        x = v
        for p in sorted(echelon, reverse=True):
            if (x >> p) & 1:
                x ^= echelon[p]
        if x:
            echelon[x.bit_length() - 1] = x
            out.append(v)
    return out


def _search(plan: _Plan, prefix=(), stop: int | None = None) -> Iterator[list[int]]:
    """Depth-first enumeration of ``y`` in ``plan.order``.

    Values in ``prefix`` are replayed and checked first; with ``stop`` the
    feasible partial assignments of that length are produced instead.
    """
    q = len(plan.order)
    if plan.contradiction:
        return
    stop = q if stop is None else min(stop, q)
    sums = list(plan.base)
    ys: list[int] = []
    signs, member_of, closing = plan.signs, plan.member_of, plan.closing
    n_prefix = len(prefix)

    def rec(i: int, cur: np.ndarray):
        if i == stop:
            if i < q or (cur.min() >= 0 and cur.max() <= plan.top and plan.ok[cur].all()):
                yield list(ys)
            return
        lo, hi = plan.lo[i], plan.hi[i]
        mod, res = 1, 0
        for idx, m in closing[i]:
            r = -sums[idx] % m
            if m >= mod:
                if r % mod != res:
                    return
                mod, res = m, r
            elif r != res % m:
                return
        lo += (res - lo) % mod
        if i < n_prefix:
            y = prefix[i]
            if y < lo or y > hi or (y - lo) % mod:
                return
            values = (y,)
        else:
            values = range(lo, hi + 1, mod)
        sign = signs[i]
        mem = member_of[i]
        for y in values:
            nxt = cur + sign * y if y else cur
            if i + 1 < q and not plan.feasible(nxt, i + 1):
                continue
            for idx in mem:
                sums[idx] += y
            ys.append(y)
            yield from rec(i + 1, nxt)
            ys.pop()
            for idx in mem:
                sums[idx] -= y

    if q and not plan.feasible(plan.const, 0):
        return
    yield from rec(0, plan.const)


def _to_extension(plan: _Plan, ys) -> Extension:
    p = plan.problem
    y = {u: v for u, v in zip(plan.order, ys) if v}
    for u, (_, x1) in p.prescribed.items():
        if x1:
            y[u] = y.get(u, 0) + x1
    return Extension(plan.k, tuple(sorted(y.items())), p.counts)


def extensions(p: ExtensionProblem, prefix: tuple[int, ...] = ()) -> Iterator[Extension]:
    """Every solution of the extension constraints (optionally below a shard prefix)."""
    plan = _Plan(p)
    if plan.empty:
        return
    for ys in _search(plan, prefix):
        yield _to_extension(plan, ys)



def work_units(p: ExtensionProblem, depth: int) -> list[tuple[int, ...]]:
    """Feasible assignment prefixes of length ``depth``; each is an independent shard."""
    plan = _Plan(p)
    if plan.empty:
        return []
    return [tuple(ys) for ys in _search(plan, stop=max(depth, 0))]
