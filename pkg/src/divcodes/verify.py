"""Mechanical check of the arithmetic behind the nonexistence of a projective
8-divisible binary code of length 59.

Each step recomputes what it can from the other modules and names every
input it takes on trust.  Inputs are labelled ``recomputed`` or
``axiom: <description>``; a run passes iff every step holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .feasibility import (
    FeasibilityInstance,
    derived_inequalities_59,
    known_length_status,
    parametric_59,
    parametric_solution,
    secant_dimension_bound,
    solve_truncated_system,
)

__all__ = ["ProofStepReport", "StepFailed", "verify59", "STEPS", "LENGTH", "DIVISOR"]

LENGTH = 59
DIVISOR = 8

RECOMPUTED = "recomputed"
AXIOM_SUBCODE_COUNTING = "axiom: counting two-dimensional subcodes through a weight-40 word by effective length"
AXIOM_RESIDUAL_DIM = "axiom: a weight-40 residual of a k=10 code has dimension 7 (other residuals excluded)"
AXIOM_HYPERPLANE_INCIDENCE = "axiom: hyperplane incidences around two 19-point residuals meeting in 3 points"


@dataclass
class ProofStepReport:
    step: int
    name: str
    statement: str
    inputs: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    verdict: str = "holds"

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    def line(self) -> str:
        parts = [f"step={self.step}", f"verdict={self.verdict}", f"name={self.name}"]
        parts += [f"{k}={_fmt(v)}" for k, v in self.inputs.items()]
        return " ".join(parts)

    def text(self) -> str:
        out = [f"[{self.step}] {self.name}: {self.verdict}", f"    {self.statement}"]
        for k, v in self.inputs.items():
            out.append(f"    {k} = {_fmt(v)}  ({self.provenance.get(k, RECOMPUTED)})")
        return "\n".join(out)


class StepFailed(RuntimeError):
    def __init__(self, report: ProofStepReport, reports: list[ProofStepReport]):
        super().__init__(f"step {report.step} ({report.name}) fails")
        self.report = report
        self.reports = reports


def _fmt(v) -> str:
    if isinstance(v, (set, frozenset, list, tuple)):
        return ",".join(_fmt(x) for x in (sorted(v) if isinstance(v, (set, frozenset)) else v))
    return str(v)


def _report(step, name, statement, ok, inputs, axioms=()):
    prov = {k: RECOMPUTED for k in inputs}
    for key, label in axioms:
        prov[key] = label
    return ProofStepReport(step, name, statement, inputs, prov, "holds" if ok else "fails")


def _forms():
    """Affine forms of the dependent counts as coefficient dicts."""
    return parametric_solution(LENGTH, range(8, 41, 8)).expressions


def _combine(*parts) -> dict:
    ex = _forms()
    out: dict[str, Fraction] = {}
    for mult, w in parts:
        for s, c in ex[w].items():
            out[s] = out.get(s, Fraction(0)) + mult * c
    return {s: c for s, c in out.items() if c}


def step_weights(length_status=known_length_status, **_) -> ProofStepReport:
    allowed, excluded = [], []
    for w in range(DIVISOR, LENGTH, DIVISOR):
        status = length_status(2, LENGTH - w)
        (allowed if status != "not_exists" else excluded).append(w)
    ok = allowed == [8, 16, 24, 32, 40]
    return _report(
        1,
        "weight-confinement",
        "residuals of nonzero words are projective 4-divisible of length 59-w, so only w in {8,...,40} survive",
        ok,
        {"allowed": allowed, "excluded": excluded, "residual_lengths_excluded": [LENGTH - w for w in excluded]},
    )


def step_lower_dimension(**_) -> ProofStepReport:
    form = _combine((1, 16), (1, 40))
    # A16 + A40 = c + a*A8 + b*y must stay >= 0 with A8 >= 0
    c, a, b = form.get("1", 0), form.get("A8", 0), form.get("y", 0)
    ok = form.get("y*B3", 0) == 0 and a < 0 and b > 0
    y_min = -c / b if ok else None
    k_min = next(k for k in range(1, 64) if (1 << k) >= y_min) if ok else None
    ok = ok and y_min == 768 and k_min == 10
    return _report(
        2,
        "dimension-lower-bound",
        "A16 + A40 = -6 - 3 A8 + y/128 >= 0 forces y >= 768, hence k >= 10",
        ok,
        {"const": c, "coef_A8": a, "coef_y": b, "y_min": y_min, "k_min": k_min},
    )


def step_upper_dimension(**_) -> ProofStepReport:
    k_max = secant_dimension_bound(LENGTH)
    secants = LENGTH * (LENGTH - 1) // 2
    ok = k_max == 10 and (1 << k_max) - (LENGTH + 1) <= secants < (1 << (k_max + 1)) - (LENGTH + 1)
    return _report(
        3,
        "dimension-upper-bound",
        "a minimal-dimension code has every external point on a secant: 2^k - 60 <= 1711, so k <= 10",
        ok,
        {"secants": secants, "k_max": k_max},
    )


LEMMA2_EXPECTED = {
    ((0, 1), (4, 1), (8, 75), (12, 51)): (7, 1440),
    ((0, 1), (8, 78), (12, 48), (16, 1)): (7, 5760),
    ((0, 1), (4, 4), (8, 150), (12, 100), (16, 1)): (8, 18432),
}


@lru_cache(maxsize=None)
def _length_19_classes() -> tuple:
    from .enumeration.classify import classify

    db = classify(4, (4, 8, 12, 16), 19, projective_only=True)
    return tuple((tuple(sorted(rec.weights.as_dict().items())), (rec.k, rec.aut)) for rec in db.records(n=19))


def step_residual_codes(**_) -> ProofStepReport:
    found = dict(_length_19_classes())
    ok = found == LEMMA2_EXPECTED
    return _report(
        4,
        "length-19-residuals",
        "exactly three projective 4-divisible codes of length 19 exist",
        ok,
        {
            "classes": len(found),
            "enumerators": ["(" + " ".join(f"{w}^{c}" for w, c in e) + ")" for e in sorted(found)],
            "k_aut": [f"{k}:{a}" for k, a in (found[e] for e in sorted(found))],
        },
    )


def step_exclude_dim7_a16(k: int = 10, **_) -> ProofStepReport:
    y = 1 << k
    dim_d = 7
    z = 1 << (k - dim_d - 1)
    e10 = z * 1  # z * A16[D]
    e1_e2 = z - 1
    small = e1_e2 + 1 + e10  # A8 + A16 + A40 >= (e1 + e2) + (1 + e10)
    mid = _combine((1, 24), (1, 32))
    ok_form = mid.get("y*B3", 0) == 0 and mid.get("A8", 0) > 0
    # total with A8 = 0 is the smallest; the middle form only grows with A8
    total = small + mid.get("1", 0) + mid.get("y", 0) * y
    ok = ok_form and small == 1 << (k - 7) and total > y - 1
    return _report(
        5,
        "exclude-dim7-with-weight16",
        "e10 = 2^(k-8) and e1+e2 = 2^(k-8)-1 give A8+A16+A40 >= 2^(k-7); with A24+A32 = 5+2A8+127y/128 the count exceeds 2^k - 1",
        ok,
        {
            "k": k,
            "z": z,
            "e10": e10,
            "e1_plus_e2": e1_e2,
            "A8_A16_A40_min": small,
            "A24_A32_const": mid.get("1", 0),
            "A24_A32_coef_y": mid.get("y", 0),
            "nonzero_words_min": total,
            "nonzero_words": y - 1,
        },
        axioms=[("e10", AXIOM_SUBCODE_COUNTING), ("e1_plus_e2", AXIOM_SUBCODE_COUNTING)],
    )


def step_exclude_k10(k: int = 10, **_) -> ProofStepReport:
    y = 1 << k
    dim_d = 7
    need = (1 << (k - dim_d - 1)) - 1
    bound = dict(derived_inequalities_59(y))["A8_plus_A16_max"]
    ok = need > bound
    return _report(
        6,
        "exclude-weight40-at-k",
        "with a 7-dimensional residual, A8 + A16 >= e1 + e2 = 2^(k-8) - 1, above the bound A8 + A16 <= (42+2/3) y/4096 - 8",
        ok,
        {"k": k, "y": y, "dim_residual": dim_d, "A8_A16_min": need, "A8_A16_max": bound},
        axioms=[("dim_residual", AXIOM_RESIDUAL_DIM), ("A8_A16_min", AXIOM_SUBCODE_COUNTING)],
    )


def step_exclude_dim8(k: int = 10, length_status=known_length_status, **_) -> ProofStepReport:
    a40_min = 1 << (k - 8)
    two_a8_a16_min = (1 << (k - 8)) - 2
    leftover = 43 - 32
    no_small_set = length_status(2, leftover) == "not_exists"
    # 2 A8 + A16 + A40 as a form in A8 and y
    f = _combine((1, 16), (1, 40))
    f["A8"] = f.get("A8", Fraction(0)) + 2
    ok_form = f.get("y*B3", 0) == 0 and f.get("A8", 0) < 0
    y = 1 << k
    rhs = a40_min + two_a8_a16_min
    # f(A8) >= rhs  <=>  A8 <= (rhs - const - coef_y y) / coef_A8
    a8_max = (rhs - f.get("1", 0) - f.get("y", 0) * y) / f["A8"] if ok_form else None
    ok = ok_form and no_small_set and a8_max is not None and a8_max < 0
    return _report(
        7,
        "exclude-dim8-residual",
        "-6 - A8 + 2^(k-7) = 2A8 + A16 + A40 >= 2^(k-8) - 2 + 2^(k-8) forces A8 <= -4",
        ok,
        {
            "k": k,
            "A40_min": a40_min,
            "2A8_A16_min": two_a8_a16_min,
            "no_4div_set_of_size_11": no_small_set,
            "form_const": f.get("1", 0),
            "form_coef_A8": f.get("A8", 0),
            "form_coef_y": f.get("y", 0),
            "A8_max": a8_max,
        },
        axioms=[("A40_min", AXIOM_HYPERPLANE_INCIDENCE), ("2A8_A16_min", AXIOM_HYPERPLANE_INCIDENCE)],
    )


def step_unique_solution(k: int = 10, **_) -> ProofStepReport:
    sols = solve_truncated_system(FeasibilityInstance(LENGTH, frozenset({8, 16, 24, 32}), projective=True, k=k))
    y = 1 << k
    # at A40 = 0 eliminate B3 between the A40 and A16 forms
    a16_at = [parametric_59(y, a8, _b3_for_zero_a40(y, a8))[0] for a8 in (0, 1)]
    slope = a16_at[1] - a16_at[0]
    found = [s.A for s in sols]
    expected = {0: 1, 16: 2, 24: 312, 32: 709}
    ok = len(found) == 1 and {w: c for w, c in found[0].items() if c} == expected and a16_at[0] == 2 and slope == -3
    return _report(
        8,
        "unique-distribution",
        "with A40 = 0 and k = 10, A16 = 2 - 3 A8, so A8 = 0 and (A16, A24, A32) = (2, 312, 709)",
        ok,
        {
            "k": k,
            "solutions": len(found),
            "distribution": sols[0].enumerator() if sols else "none",
            "B3": sols[0].B.get(3) if sols else "none",
            "A16_at_A8_0": a16_at[0],
            "A16_slope_in_A8": slope,
        },
    )


def _b3_for_zero_a40(y: int, a8: int) -> Fraction:
    ex = _forms()[40]
    return -(ex.get("1", 0) + ex.get("A8", 0) * a8 + ex.get("y", 0) * y) / (ex["y*B3"] * y)


def step_restriction(k: int = 10, **_) -> ProofStepReport:
    sols = solve_truncated_system(FeasibilityInstance(LENGTH, frozenset({8, 16, 24, 32}), projective=True, k=k))
    if len(sols) != 1:
        return _report(9, "restriction-to-weight16", "needs the unique distribution", False, {"solutions": len(sols)})
    a = {w: c for w, c in sols[0].A.items() if c and w}
    w_c = 16
    w_max = max(a)
    # x vanishing on supp(c): w(x + c) = w(x) + 16 <= w_max, and x != c
    kernel_words = 1 + sum(cnt for w, cnt in a.items() if w + w_c <= w_max) - (1 if w_c + w_c <= w_max else 0)
    kernel_dim = kernel_words.bit_length() - 1
    dim_restricted = k - kernel_dim
    # weights on supp(c): (w(x) + 16 - w(x + c)) / 2 with all weights = 0 mod 8
    divisor = 4
    so_cap = w_c // 2
    ok = a.get(16, 0) >= 1 and dim_restricted > so_cap
    return _report(
        9,
        "restriction-to-weight16",
        "restricting to a weight-16 word gives a 4-divisible, hence self-orthogonal, length-16 code of dimension >= 9 > 8",
        ok,
        {
            "k": k,
            "max_weight": w_max,
            "kernel_words_max": kernel_words,
            "dim_restriction_min": dim_restricted,
            "restriction_divisor": divisor,
            "self_orthogonal_dim_max": so_cap,
        },
    )


STEPS: list[Callable[..., ProofStepReport]] = [
    step_weights,
    step_lower_dimension,
    step_upper_dimension,
    step_residual_codes,
    step_exclude_dim7_a16,
    step_exclude_k10,
    step_exclude_dim8,
    step_unique_solution,
    step_restriction,
]


def verify59(length_status=known_length_status, y: int | None = None, steps=None, halt: bool = True):
    """Run the proof steps in order.

    ``length_status`` replaces the known-lengths lookup and ``y`` replaces
    the dimension ``2^k`` the later steps plug in (both for fault injection).
    ``steps`` selects step numbers.  With ``halt`` the first failing step
    raises :class:`StepFailed`.
    """
    k = 10
    if y is not None:
        if y <= 0 or y & (y - 1):
            raise ValueError("y must be a power of two")
        k = y.bit_length() - 1
    wanted = set(steps) if steps is not None else None
    reports: list[ProofStepReport] = []
    for i, fn in enumerate(STEPS, 1):
        if wanted is not None and i not in wanted:
            continue
        rep = fn(k=k, length_status=length_status)
        reports.append(rep)
        if halt and not rep.holds:
            raise StepFailed(rep, reports)
    return reports
