"""Exact solving of truncated MacWilliams systems.

For a code of length ``n`` with nonzero weights in a prescribed set, the first
``m`` MacWilliams identities

    sum_j K_i(j) A_j = 2^k B_i        (0 <= i < m, A_0 = B_0 = 1)

are linear in the unknown ``A_w`` and in the unknown low dual counts once the
dimension ``k`` is fixed.  Everything here is exact ``Fraction`` arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, comb, floor
from typing import Iterable, Mapping, Sequence

from .spectra import dual_counts, krawtchouk

__all__ = [
    "FeasibilityInstance",
    "Solution",
    "ParametricSolution",
    "UnboundedPolytope",
    "UnknownParameterRegime",
    "solve_truncated_system",
    "parametric_solution",
    "parametric_59",
    "derived_inequalities_59",
    "filter_self_orthogonality",
    "known_length_status",
    "secant_dimension_bound",
    "OPEN_LENGTHS_BINARY_R4",
    "OPEN_LENGTHS_TERNARY_R2",
]


class UnboundedPolytope(ValueError):
    def __init__(self, parameter: str, k: int):
        super().__init__(f"parameter {parameter} is unbounded above for k={k}")
        self.parameter = parameter
        self.k = k


class UnknownParameterRegime(ValueError):
    pass


@dataclass(frozen=True)
class FeasibilityInstance:
    """A truncated system: length, allowed nonzero weights, optional fixed ``k``.

    ``fixed_dual`` pins dual counts (``B_0 = 1`` always; projective codes also
    pin ``B_1 = B_2 = 0``).  Dual counts with index below ``m`` that are not
    pinned become nonnegative integer unknowns.  With ``dual_check`` a
    solution must also have a nonnegative integral full MacWilliams transform,
    which every genuine weight distribution has.
    """

    n: int
    weights: frozenset
    projective: bool = True
    k: int | None = None
    m: int = 4
    fixed_dual: Mapping[int, int] | None = None
    dual_check: bool = True

    def __post_init__(self):
        object.__setattr__(self, "weights", frozenset(int(w) for w in self.weights))
        if any(w < 1 or w > self.n for w in self.weights):
            raise ValueError(f"weights must lie in 1..{self.n}")
        if self.m < 1:
            raise ValueError("need at least one identity")

    def dual_pins(self) -> dict[int, int]:
        pins = {0: 1}
        if self.projective:
            pins.update({1: 0, 2: 0})
        if self.fixed_dual:
            pins.update({int(i): int(b) for i, b in self.fixed_dual.items()})
        return {i: b for i, b in pins.items() if i < self.m}

    def dual_unknowns(self) -> list[int]:
        pins = self.dual_pins()
        return [i for i in range(1, self.m) if i not in pins]


@dataclass(frozen=True)
class Solution:
    k: int
    a: tuple[tuple[int, int], ...]  # (weight, count) including (0, 1)
    b: tuple[tuple[int, int], ...]  # unknown dual counts, e.g. ((3, B_3),)
    n: int = 0

    @property
    def A(self) -> dict[int, int]:
        return dict(self.a)

    @property
    def B(self) -> dict[int, int]:
        return dict(self.b)

    def vector(self) -> list[int]:
        vec = [0] * (self.n + 1)
        for w, c in self.a:
            vec[w] = c
        return vec

    def enumerator(self) -> str:
        return "(" + " ".join(f"{w}^{c}" for w, c in self.a if c) + ")"

    def sort_key(self):
        return (self.k, tuple(c for _, c in self.a), tuple(c for _, c in self.b))


def _solve_linear(rows: list[list[Fraction]], n_cols: int, order: Sequence[int]):
    """Gauss-Jordan on augmented rows, choosing pivots along ``order``.

    Returns ``(pivots, reduced rows)`` or ``None`` if inconsistent.  Row ``r``
    of the result expresses ``x[pivots[r]]`` by ``rhs - sum coef * free``.
    """
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in order:
        pr = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][col]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if all(x == 0 for x in rows[i][:n_cols]) and rows[i][n_cols] != 0:
            return None
    return pivots, rows[:r]


def _system(inst: FeasibilityInstance, y: int):
    """Rows ``[coefs | rhs]`` of the identities for ``2^k = y``."""
    ws = sorted(inst.weights)
    duals = inst.dual_unknowns()
    pins = inst.dual_pins()
    names = [f"A{w}" for w in ws] + [f"B{i}" for i in duals]
    rows = []
    for i in range(inst.m):
        coefs = [Fraction(krawtchouk(i, w, inst.n)) for w in ws]
        coefs += [Fraction(-y) if i == d else Fraction(0) for d in duals]
        rhs = Fraction(y * pins.get(i, 0) - krawtchouk(i, 0, inst.n))
        rows.append(coefs + [rhs])
    return names, rows


def _variable_order(inst: FeasibilityInstance) -> list[int]:
    """Pivot preference: larger weights first, the smallest weight and the
    dual unknowns last, so they become the free parameters."""
    ws = sorted(inst.weights)
    nw = len(ws)
    duals = inst.dual_unknowns()
    return list(range(1, nw)) + ([0] if nw else []) + [nw + j for j in range(len(duals))]


def _bounds(constraints, var: int):
    """Lower/upper bound on ``t[var]`` from ``c0 + sum c_j t_j >= 0`` with all
    other free parameters eliminated by Fourier-Motzkin."""
    cons = [tuple(c) for c in constraints]
    n_free = len(cons[0]) - 1 if cons else 0
    for j in range(n_free):
        if j == var:
            continue
        pos = [c for c in cons if c[1 + j] > 0]
        neg = [c for c in cons if c[1 + j] < 0]
        zero = [c for c in cons if c[1 + j] == 0]
        new = list(zero)
        for p in pos:
            for q in neg:
                a, b = p[1 + j], -q[1 + j]
                new.append(tuple(b * x + a * y for x, y in zip(p, q)))
        cons = list(dict.fromkeys(new))
    lo, hi = None, None
    for c in cons:
        coef = c[1 + var]
        if coef > 0:
            v = -c[0] / coef
            lo = v if lo is None or v > lo else lo
        elif coef < 0:
            v = -c[0] / coef
            hi = v if hi is None or v < hi else hi
        elif c[0] < 0:
            return Fraction(1), Fraction(0)
    return lo, hi


def _integer_points(constraints, n_free: int, names, k: int):
    """All integer ``t`` with every ``c0 + c.t >= 0``."""

    def rec(cons, fixed):
        i = len(fixed)
        if i == n_free:
            if all(c[0] >= 0 for c in cons):
                yield tuple(fixed)
            return
        sub = [(c[0],) + tuple(c[1 + i :]) for c in cons]
        lo, hi = _bounds(sub, 0)
        if hi is None:
            raise UnboundedPolytope(names[i], k)
        lo = 0 if lo is None else max(0, ceil(lo))
        for t in range(lo, floor(hi) + 1):
            nxt = [(c[0] + c[1 + i] * t,) + tuple(c[1:]) for c in cons]
            yield from rec(nxt, fixed + [t])

    return rec([tuple(c) for c in constraints], [])


def _solve_for_k(inst: FeasibilityInstance, k: int) -> list[Solution]:
    y = 1 << k
    names, rows = _system(inst, y)
    nv = len(names)
    if nv == 0:
        return [] if any(r[-1] != 0 for r in rows) else [Solution(k, ((0, 1),), (), inst.n)]
    res = _solve_linear(rows, nv, _variable_order(inst))
    if res is None:
        return []
    pivots, red = res
    free = [j for j in _variable_order(inst) if j not in pivots]
    # every variable (pivot or free) as c0 + sum c_f t_f; all must be >= 0
    expr: dict[int, tuple[Fraction, ...]] = {}
    for f_i, j in enumerate(free):
        expr[j] = (Fraction(0),) + tuple(Fraction(int(f == f_i)) for f in range(len(free)))
    for row, j in zip(red, pivots):
        expr[j] = (row[nv],) + tuple(-row[f] for f in free)
    constraints = [expr[j] for j in range(nv)]
    out = []
    for t in _integer_points(constraints, len(free), [names[j] for j in free], k):
        vals = []
        for j in range(nv):
            e = expr[j]
            v = e[0] + sum(c * x for c, x in zip(e[1:], t))
            if v.denominator != 1 or v < 0:
                break
            vals.append(int(v))
        else:
            ws = sorted(inst.weights)
            a = ((0, 1),) + tuple((w, vals[i]) for i, w in enumerate(ws))
            b = tuple((d, vals[len(ws) + i]) for i, d in enumerate(inst.dual_unknowns()))
            sol = Solution(k, a, b, inst.n)
            if inst.dual_check and not _genuine(sol):
                continue
            out.append(sol)
    return out


def _genuine(sol: Solution) -> bool:
    return all(x >= 0 and x.denominator == 1 for x in dual_counts(sol.vector(), sol.k, sol.n))


def solve_truncated_system(inst: FeasibilityInstance, k_max: int = 64) -> list[Solution]:
    """Every nonnegative integer solution, sorted by ``k`` then by ``A``.

    Without a fixed ``k`` every dimension from 1 to ``min(n, k_max)`` is
    tried (a projective code has ``k <= n``; with repeated columns allowed
    the cap is ``k_max`` alone).
    """
    if inst.k is not None:
        ks = [inst.k]
    else:
        top = min(inst.n, k_max) if inst.projective else k_max
        ks = range(1, top + 1)
    out = []
    for k in ks:
        out.extend(_solve_for_k(inst, k))
    return sorted(out, key=Solution.sort_key)


def filter_self_orthogonality(solutions: Iterable[Solution], check: Iterable[int] = (4,)) -> list[Solution]:
    """Drop solutions with ``A_w > B_w`` for a checked weight ``w``.

    A self-orthogonal code lies inside its dual, so ``A_w <= B_w``.
    """
    check = tuple(check)
    kept = []
    for s in solutions:
        b = dual_counts(s.vector(), s.k, s.n)
        if all(s.A.get(w, 0) <= b[w] for w in check if w <= s.n):
            kept.append(s)
    return kept


# -- parametric solutions -----------------------------------------------------

Affine = dict  # symbol -> Fraction, symbol "1" for the constant term


@dataclass(frozen=True)
class ParametricSolution:
    """Dependent counts as affine forms in the symbols ``1, A_w0, y, y*B3``.

    ``y = 2^k`` enters only through the identities' right-hand sides, so for
    projective codes (``B_1 = B_2 = 0``) the solution is affine in ``y`` and
    in the product ``y*B_3``.
    """

    free: tuple[str, ...]
    expressions: dict = field(default_factory=dict)  # weight -> Affine

    def evaluate(self, **values) -> dict[int, Fraction]:
        env = {"1": Fraction(1)}
        y = Fraction(values.get("y", 0))
        for name, v in values.items():
            env[name] = Fraction(v)
        if "B3" in values:
            env["y*B3"] = y * Fraction(values["B3"])
        return {w: sum((c * env[s] for s, c in form.items()), Fraction(0)) for w, form in self.expressions.items()}

    def coefficient(self, weight: int, symbol: str) -> Fraction:
        return self.expressions[weight].get(symbol, Fraction(0))

    def describe(self) -> str:
        lines = []
        for w, form in sorted(self.expressions.items()):
            terms = " + ".join(f"({c})*{s}" if s != "1" else f"({c})" for s, c in form.items() if c)
            lines.append(f"A{w} = {terms}")
        return "\n".join(lines)


def parametric_solution(n: int, weights: Iterable[int], m: int = 4) -> ParametricSolution:
    """Solve the first ``m`` identities of a projective code symbolically.

    The smallest weight stays free; the remaining ``m`` weight counts are
    expressed in ``1, A_min, y`` and ``y*B_3``.
    """
    ws = sorted(int(w) for w in weights)
    w0, dep = ws[0], ws[1:]
    if len(dep) != m:
        raise ValueError(f"need exactly {m} dependent weights, got {len(dep)}")
    symbols = ["1", f"A{w0}", "y", "y*B3"]
    rows = []
    for i in range(m):
        coefs = [Fraction(krawtchouk(i, w, n)) for w in dep]
        # move A_0 and A_w0 to the right; y*B_i stays there
        rhs = {s: Fraction(0) for s in symbols}
        rhs["1"] = Fraction(-krawtchouk(i, 0, n))
        rhs[f"A{w0}"] = Fraction(-krawtchouk(i, w0, n))
        if i == 0:
            rhs["y"] = Fraction(1)
        elif i == 3:
            rhs["y*B3"] = Fraction(1)
        rows.append((coefs, rhs))
    size = len(dep)
    mat = [list(c) + [r[s] for s in symbols] for c, r in rows]
    for col in range(size):
        pr = next((i for i in range(col, size) if mat[i][col] != 0), None)
        if pr is None:
            raise ValueError("identities do not determine the dependent counts")
        mat[col], mat[pr] = mat[pr], mat[col]
        piv = mat[col][col]
        mat[col] = [x / piv for x in mat[col]]
        for i in range(size):
            if i != col and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[col])]
    exprs = {w: {s: mat[r][size + j] for j, s in enumerate(symbols)} for r, w in enumerate(dep)}
    return ParametricSolution((f"A{w0}", "B3", "y"), exprs)


@lru_cache(maxsize=None)
def _p59() -> ParametricSolution:
    return parametric_solution(59, (8, 16, 24, 32, 40))


def parametric_59(y: int, A8: int, B3: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """``(A16, A24, A32, A40)`` of a projective length-59 code with weights in
    ``{8, ..., 40}`` as forced by the first four identities."""
    vals = _p59().evaluate(y=y, A8=A8, B3=B3)
    return vals[16], vals[24], vals[32], vals[40]


def derived_inequalities_59(y: int) -> list[tuple[str, Fraction]]:
    """Bounds implied by nonnegativity of the length-59 parametric forms.

    Each bound is computed from the coefficients of the forms (with
    ``A8 >= 0``), not copied:

    * ``B3_min``: ``A16 >= 0``
    * ``B3_max``: ``A16 + 4 A40 >= 0``
    * ``A8_plus_A16_max``: ``A8 + A16`` at ``B3 = B3_max``
    * ``A8_max``: ``A16 + A40 >= 0``
    * ``A16_plus_A40_max``: ``A16 + A40`` at ``A8 = 0`` (negative means no code)
    """
    p = _p59()
    y = Fraction(y)

    def form(*parts):
        out: dict[str, Fraction] = {}
        for mult, w in parts:
            for s, c in p.expressions[w].items():
                out[s] = out.get(s, Fraction(0)) + mult * c
        return out

    def at(f, A8=Fraction(0), B3=Fraction(0)):
        return f.get("1", 0) + f.get("A8", 0) * A8 + f.get("y", 0) * y + f.get("y*B3", 0) * y * B3

    a16 = form((1, 16))
    # A16 >= 0 is increasing in B3 and decreasing in A8; worst case A8 = 0
    b3_min = -at(a16) / (a16["y*B3"] * y)
    s = form((1, 16), (4, 40))
    b3_max = -at(s) / (s["y*B3"] * y)
    a8a16 = form((1, 16))
    a8a16["A8"] = a8a16.get("A8", 0) + 1
    if a8a16["A8"] > 0:
        raise ArithmeticError("A8 + A16 is not decreasing in A8")
    a8_a16_max = at(a8a16, B3=b3_max)
    t = form((1, 16), (1, 40))
    if t.get("y*B3", 0) != 0:
        raise ArithmeticError("A16 + A40 unexpectedly depends on B3")
    a8_max = -(at(t)) / t["A8"]
    return [
        ("B3_min", b3_min),
        ("B3_max", b3_max),
        ("A8_max", a8_max),
        ("A8_plus_A16_max", a8_a16_max),
        ("A16_plus_A40_max", at(t)),
    ]


# -- known lengths --------------------------------------------------------------

OPEN_LENGTHS_BINARY_R4 = frozenset(
    {130, 163, 164, 165, 185, 215, 216, 232, 233, 244, 245, 246, 247, 274, 275, 277, 278, 306, 309}
)
OPEN_LENGTHS_TERNARY_R2 = frozenset({70, 77, 99, 100, 101, 102, 113, 114, 115, 128})

_R3_SMALL = frozenset({15, 16, 30, 31, 32, 45, 46, 47, 48, 49, 50, 51})


def _sum_of(n: int, a: int, b: int) -> bool:
    return any((n - a * i) % b == 0 for i in range(n // a + 1))


def known_length_status(r: int, n: int, q: int = 2) -> str:
    """Existence of a projective ``q^r``-divisible code of effective length ``n``.

    Returns ``"exists"``, ``"not_exists"`` or ``"open"``.  Binary ``r <= 3`` is
    fully characterised (length 59 included).  For binary ``r = 4`` only the
    undecided list, the disjoint unions of 31-point subspaces and 32-point
    affine spaces, and lengths below the minimum size 31 are known here;
    ternary ``r = 2`` knows only its undecided list.
    """
    if n < 1:
        raise ValueError("length must be positive")
    if q == 2 and r == 1:
        return "exists" if n >= 3 else "not_exists"
    if q == 2 and r == 2:
        return "exists" if n in (7, 8) or n >= 14 else "not_exists"
    if q == 2 and r == 3:
        return "exists" if n in _R3_SMALL or n >= 60 else "not_exists"
    if q == 2 and r == 4:
        if n in OPEN_LENGTHS_BINARY_R4:
            return "open"
        if n < 31:
            return "not_exists"
        if _sum_of(n, 31, 32):
            return "exists"
        raise UnknownParameterRegime(f"no tabulated status for q=2, r=4, n={n}")
    if q == 3 and r == 2:
        if n in OPEN_LENGTHS_TERNARY_R2:
            return "open"
        raise UnknownParameterRegime(f"no tabulated status for q=3, r=2, n={n}")
    raise UnknownParameterRegime(f"no tabulated data for q={q}, r={r}")


def secant_dimension_bound(n: int) -> int:
    """Largest ``k`` with ``2^k - (n + 1) <= C(n, 2)``.

    If every point outside an ``n``-set in ``F_2^k`` lies on one of its at most
    ``C(n, 2)`` secants, this bounds ``k``.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    k = 1
    while (1 << (k + 1)) - (n + 1) <= comb(n, 2):
        k += 1
    return k
