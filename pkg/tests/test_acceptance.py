"""Acceptance checks, one test per criterion.

Each test carries a ``criterion`` marker; ``conftest.py`` prints one
PASS/FAIL line per criterion at the end of the run.  The property suites run
at least 100 seeded instances each and compare against the brute-force
oracles in ``_oracles``.
"""

import random
import subprocess
import sys
import time
from collections import Counter

import pytest

from _oracles import (
    brute_extensions,
    extension_classes,
    multiset_from,
    random_divisible,
    random_extension_instance,
    random_full_rank,
    random_permuted,
    random_subcode,
    weight_counts,
    words_of,
)
from divcodes.enumeration import ExtensionProblem, canonical_form, classify, extensions
from divcodes.feasibility import FeasibilityInstance, filter_self_orthogonality, parametric_59, solve_truncated_system
from divcodes.gf2 import GeneratorMatrix
from divcodes.geometry import (
    construct_named,
    length_fibers,
    residual_code,
    residual_fiber_prediction,
    shorten,
    subcode_spectrum,
)
from divcodes.spectra import dual_counts, is_divisible, is_self_orthogonal, macwilliams_transform, weight_distribution

INSTANCES = 100


def criterion(label, title):
    return pytest.mark.criterion(label, title)


def announce(label, ok, detail=""):
    print(f"criterion {label}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())


# -- 1: the three projective 4-divisible codes of length 19 -------------------


@criterion("1", "projective 4-divisible classes at length 19 via the CLI")
def test_length_19_classes_from_cli():
    start = time.monotonic()
    proc = subprocess.run(
        [sys.executable, "-m", "divcodes.cli", "classify", "--weights", "4,8,12,16", "--projective",
         "--max-n", "19", "--records"],
        capture_output=True,
        text=True,
    )
    elapsed = time.monotonic() - start
    rows = [line.split("\t") for line in proc.stdout.splitlines() if line.startswith("19\t")]
    got = sorted((r[2], int(r[3].removeprefix("aut="))) for r in rows)
    want = sorted([
        ("(0^1 4^1 8^75 12^51)", 1440),
        ("(0^1 8^78 12^48 16^1)", 5760),
        ("(0^1 4^4 8^150 12^100 16^1)", 18432),
    ])
    ok = proc.returncode == 0 and got == want and elapsed <= 300
    announce("1", ok, f"{len(rows)} classes in {elapsed:.1f}s")
    assert proc.returncode == 0, proc.stderr
    assert got == want
    assert elapsed <= 300


# -- 2: truncated system at length 19 ------------------------------------------


@criterion("2", "length-19 truncated system and self-orthogonality filter")
def test_length_19_feasibility_oracle():
    sols = solve_truncated_system(FeasibilityInstance(19, {4, 8, 12, 16}, projective=True))
    kept = filter_self_orthogonality(sols)
    dropped = [s for s in sols if s not in kept]
    ok = (
        len(sols) == 4
        and len(dropped) == 1
        and dropped[0].k == 8
        and dropped[0].A.get(4) == 5
        and dual_counts(dropped[0].vector(), 8, 19)[4] == 2
    )
    announce("2", ok, f"raw={len(sols)} dropped={len(dropped)}")
    assert len(sols) == 4
    assert len(dropped) == 1
    assert dropped[0].k == 8 and dropped[0].A[4] == 5
    assert dual_counts(dropped[0].vector(), 8, 19)[4] == 2


# -- 3: unique distribution of a [59, 10] code with weights 8..32 -------------


@criterion("3", "unique [59,10] distribution and its parametric form")
def test_length_59_unique_distribution():
    start = time.monotonic()
    sols = solve_truncated_system(FeasibilityInstance(59, {8, 16, 24, 32}, projective=True, k=10))
    param = parametric_59(1024, 0, 93)
    elapsed = time.monotonic() - start
    want = {0: 1, 8: 0, 16: 2, 24: 312, 32: 709}
    got = [{w: s.A.get(w, 0) for w in want} for s in sols]
    ok = got == [want] and sols[0].B[3] == 93 and param == (2, 312, 709, 0) and elapsed < 1
    announce("3", ok, f"{elapsed:.3f}s")
    assert got == [want]
    assert sols[0].B[3] == 93
    assert param == (2, 312, 709, 0)
    assert elapsed < 1


# -- 4: classification with weights in {8, ..., 40} up to length 30 -----------

TABLE_UP_TO_30 = """
k/n 8 12 14 15 16 20 22 23 24 26 27 28 29 30
1   1  0  0  0  1  0  0  0  1  0  0  0  0  0
2   .  1  0  0  1  1  0  0  2  0  0  2  0  0
3   .  .  1  0  1  1  1  0  3  1  0  4  0  3
4   .  .  .  1  1  1  1  1  4  1  1  6  1  6
5   .  .  .  .  1  0  0  1  4  2  1  7  1  8
6   .  .  .  .  .  .  .  .  1  0  1  6  2  7
7   .  .  .  .  .  .  .  .  .  .  .  1  1  6
8   .  .  .  .  .  .  .  .  .  .  .  .  .  2
"""


def table_cells(text: str) -> dict[tuple[int, int], int]:
    lines = text.split("\n")[1:-1]
    lengths = [int(x) for x in lines[0].split()[1:]]
    out = {}
    for line in lines[1:]:
        k, *cells = line.split()
        for n, c in zip(lengths, cells):
            if c != "." and int(c):
                out[(n, int(k))] = int(c)
    return out


@criterion("4", "class counts with weights in {8,...,40} for lengths up to 30")
def test_table_up_to_length_30():
    start = time.monotonic()
    db = classify(8, range(8, 41, 8), 30)
    elapsed = time.monotonic() - start
    counts = {nk: c for nk, c in db.counts().items() if c}
    want = table_cells(TABLE_UP_TO_30)
    ok = counts == want and elapsed <= 900
    announce("4", ok, f"{sum(counts.values())} classes in {elapsed:.1f}s")
    assert counts.get((24, 4)) == 4 and counts.get((28, 7)) == 1 and counts.get((30, 8)) == 2
    assert counts == want
    assert elapsed <= 900


# -- 5: construction identities ------------------------------------------------


@criterion("5", "shortened Golay code and the hexacode point set")
def test_construction_identities():
    rng = random.Random(5)
    golay = construct_named("golay24")
    target = canonical_form(construct_named("C3")).key
    shortened_ok = all(canonical_form(shorten(golay, rng.sample(range(24), 5))).key == target for _ in range(20))
    g = construct_named("hexacode18")
    cols = g.columns()
    lines = [cols[3 * j : 3 * j + 3] for j in range(6)]
    hexa_ok = (
        (g.n, g.k) == (18, 6)
        and all(w % 4 == 0 for w in weight_counts(g))
        and len(set(cols)) == 18
        and 0 not in cols
        and all(a ^ b == c for a, b, c in lines)
    )
    announce("5", shortened_ok and hexa_ok)
    assert shortened_ok
    assert hexa_ok


# -- 6: the length-59 proof pipeline ------------------------------------------


def verify_cli(*extra):
    start = time.monotonic()
    proc = subprocess.run([sys.executable, "-m", "divcodes.cli", "verify59", *extra], capture_output=True, text=True)
    return proc, time.monotonic() - start


@criterion("6", "proof pipeline holds and fault injection fails at the right step")
def test_verify59_pipeline():
    clean, t0 = verify_cli()
    longer, t1 = verify_cli("--allow-length", "11")
    doubled, t2 = verify_cli("--y", "2048")
    clean_ok = clean.returncode == 0 and len(clean.stdout.splitlines()) == 9 and all(
        " verdict=holds " in line for line in clean.stdout.splitlines()
    )
    longer_ok = longer.returncode == 1 and "step 1 fails" in longer.stderr
    doubled_ok = doubled.returncode == 1 and "step 6 fails" in doubled.stderr
    fast = max(t0, t1, t2) < 60
    announce("6", clean_ok and longer_ok and doubled_ok and fast, f"slowest {max(t0, t1, t2):.1f}s")
    assert clean_ok, clean.stdout + clean.stderr
    assert longer_ok, longer.stderr
    assert doubled_ok, doubled.stderr
    assert fast


# -- 7: property suites --------------------------------------------------------


def brute_dual_counts(g: GeneratorMatrix) -> dict[int, int]:
    out: Counter = Counter()
    for v in range(1 << g.n):
        if all(bin(v & r).count("1") % 2 == 0 for r in g.rows):
            out[bin(v).count("1")] += 1
    return dict(out)


@criterion("7a", "MacWilliams transform is an involution and matches the dual code")
def test_macwilliams_involution():
    rng = random.Random(71)
    for _ in range(INSTANCES):
        k = rng.randint(1, 6)
        n = rng.randint(k, 12)
        g = random_full_rank(rng, k, n)
        a = weight_distribution(g)
        b = macwilliams_transform(a, k)
        assert {w: c for w, c in b.as_dict().items() if c} == brute_dual_counts(g)
        assert macwilliams_transform(b, n - k) == a
    announce("7a", True, f"{INSTANCES} instances")


@criterion("7b", "vanishing dual counts B1 and B2 characterise projective codes")
def test_projective_iff_small_dual_weights_vanish():
    rng = random.Random(72)
    seen = Counter()
    for _ in range(INSTANCES):
        k = rng.randint(2, 5)
        n = rng.randint(k, min(12, (1 << k) - 1))
        g = random_full_rank(rng, k, n, zero_ok=rng.random() < 0.3)
        cols = g.columns()
        projective = 0 not in cols and len(set(cols)) == len(cols)
        b = macwilliams_transform(weight_distribution(g), k)
        assert (b[1] == 0 and b[2] == 0) == projective
        seen[projective] += 1
    assert seen[True] and seen[False]
    announce("7b", True, f"{seen[True]} projective, {seen[False]} not")


@criterion("7c", "residual codes lose exactly one factor of two in divisibility")
def test_residual_divisibility_drop():
    rng = random.Random(73)
    for _ in range(INSTANCES):
        g, r = random_divisible(rng)
        c = rng.choice([w for w in words_of(g.rows) if w])
        d = residual_code(g, c)
        assert all(w % (1 << (r - 1)) == 0 for w in weight_counts(d))
        assert is_divisible(weight_distribution(d), 1 << (r - 1))
    announce("7c", True, f"{INSTANCES} instances")


@criterion("7d", "4-divisible codes are self-orthogonal")
def test_four_divisible_is_self_orthogonal():
    rng = random.Random(74)
    for _ in range(INSTANCES):
        g, _ = random_divisible(rng, min_r=2)
        assert all(bin(a & b).count("1") % 2 == 0 for a in g.rows for b in g.rows)
        assert is_self_orthogonal(g)
    announce("7d", True, f"{INSTANCES} instances")


@criterion("7e", "two-dimensional subcodes through a word: count and half-sum length")
def test_subcode_spectrum_counts():
    rng = random.Random(75)
    for i in range(INSTANCES):
        if i % 2:
            g, _ = random_divisible(rng)
            if g.k < 2:
                g = construct_named(rng.choice(["C1", "C2", "C3", "M19"]))
        else:
            k = rng.randint(2, 8)
            g = random_full_rank(rng, k, rng.randint(k, 16))
        c = rng.choice([w for w in words_of(g.rows) if w])
        spec = subcode_spectrum(g, c)
        assert spec.total() == (1 << (g.k - 1)) - 1
        want: Counter = Counter()
        for x in words_of(g.rows):
            if x in (0, c) or x > x ^ c:
                continue
            ws = (bin(c).count("1"), bin(x).count("1"), bin(x ^ c).count("1"))
            length = bin(c | x).count("1")
            assert 2 * length == sum(ws)
            want[(tuple(sorted(ws)), length)] += 1
        assert spec.entries == dict(want)
    announce("7e", True, f"{INSTANCES} instances")


@criterion("7f", "length fibres agree with the scaled residual distribution for k <= 14")
def test_length_fibers_regrouping():
    rng = random.Random(76)
    large = 0
    for i in range(INSTANCES):
        k = rng.randint(12, 14) if i % 5 == 0 else rng.randint(2, 11)
        n = rng.randint(k, k + 10)
        g = random_full_rank(rng, k, n)
        c = rng.choice([w for w in words_of(g.rows) if w])
        fibers = length_fibers(g, c)
        # direct count of pairs {x, x + c} by the length they add outside supp(c)
        direct: Counter = Counter()
        for x in words_of(g.rows):
            if x not in (0, c) and x < x ^ c:
                direct[bin(x & ~c).count("1")] += 1
        assert fibers == dict(direct)
        assert fibers == residual_fiber_prediction(g, c)
        large += k >= 12
    assert large >= 10
    announce("7f", True, f"{INSTANCES} instances, {large} with k >= 12")


@criterion("7g", "canonical form is invariant under column permutation and basis change")
def test_canonical_permutation_invariance():
    rng = random.Random(77)
    for _ in range(INSTANCES):
        k = rng.randint(1, 7)
        g = random_full_rank(rng, k, rng.randint(k, 20))
        h = random_permuted(rng, g)
        a, b = canonical_form(g), canonical_form(h)
        assert a.key == b.key and a.aut_order == b.aut_order
    # and a divisible subcode family, where many codes share a distribution
    golay = construct_named("golay24")
    for _ in range(INSTANCES):
        g = random_subcode(rng, golay, rng.randint(1, 6))
        assert canonical_form(g).key == canonical_form(random_permuted(rng, g)).key
    announce("7g", True, f"{2 * INSTANCES} instances")


@criterion("7h", "extension search agrees with brute force for n <= 12, k <= 3")
def test_extension_brute_force():
    rng = random.Random(78)
    modes = Counter()
    for i in range(INSTANCES + 20):
        k, cols, weights, delta = random_extension_instance(rng, max_n=12, max_k=3)
        if i % 2:
            allow_zero = rng.random() < 0.5
            p = ExtensionProblem(multiset_from(k, cols), weights, delta, systematic=False, allow_zero=allow_zero)
            got = {e.y for e in extensions(p)}
            assert got == brute_extensions(cols, k, weights, systematic=False, allow_zero=allow_zero)
            modes["raw"] += 1
        else:
            p = ExtensionProblem(multiset_from(k, cols), weights, delta)
            got = {e.y for e in extensions(p)}
            want = brute_extensions(cols, k, weights)
            assert got <= want
            assert extension_classes(k, got, cols) == extension_classes(k, want, cols)
            modes["systematic"] += 1
    announce("7h", True, f"{modes['systematic']} systematic, {modes['raw']} raw")
