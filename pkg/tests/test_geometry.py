import random

import pytest

from _oracles import random_divisible, random_full_rank, words_of
from divcodes.enumeration import canonical_form
from divcodes.gf2 import GeneratorMatrix, is_projective, rank
from divcodes.geometry import (
    NAMED_CODES,
    NotACodeword,
    PointInSet,
    PointSet,
    PreconditionViolated,
    construct_named,
    length_fibers,
    project_through,
    residual_code,
    residual_fiber_prediction,
    restriction_code,
    secant_external_cover,
    shorten,
    solid_lines,
    span_points,
    subcode_spectrum,
    switch,
    switched_solid,
)
from divcodes.spectra import is_divisible, weight_distribution


def key(g):
    return canonical_form(g).key


@pytest.mark.parametrize(
    "name, n, k, enumerator, aut",
    [
        ("C1", 19, 8, "(0^1 4^4 8^150 12^100 16^1)", 18432),
        ("C2", 19, 7, "(0^1 4^1 8^75 12^51)", 1440),
        ("C3", 19, 7, "(0^1 8^78 12^48 16^1)", 5760),
        ("M19", 19, 7, "(0^1 4^1 8^75 12^51)", 1440),
        ("hexacode18", 18, 6, "(0^1 8^45 12^18)", 2160),
        ("golay24", 24, 12, "(0^1 8^759 12^2576 16^759 24^1)", 244823040),
    ],
)
def test_named_codes(name, n, k, enumerator, aut):
    g = construct_named(name)
    assert (g.n, g.k, rank(g)) == (n, k, k)
    assert weight_distribution(g).enumerator() == enumerator
    assert canonical_form(g).aut_order == aut


def test_unknown_name():
    with pytest.raises(KeyError):
        construct_named("nope")
    assert set(NAMED_CODES) >= {"C1", "C2", "C3", "hexacode18", "golay24"}


def test_residual_matrix_is_the_second_length_19_code():
    assert key(construct_named("M19")) == key(construct_named("C2"))


@pytest.mark.parametrize(
    "name, k, directions",
    [
        ("C1", 8, [16, 32, 64, 128]),
        ("C2", 7, [16, 32, 64, 96]),
        ("C3", 7, [16, 32, 64, 112]),
        ("hexacode18", 6, [16, 32, 48]),
    ],
)
def test_switching_the_solid(name, k, directions):
    P = switched_solid(k, directions)
    assert key(P.to_matrix()) == key(construct_named(name))


def test_solid_lines_form_a_spread():
    lines = solid_lines()
    assert len(lines) == 5
    assert all(len(L) == 3 and span_points(L) == L for L in lines)
    assert frozenset().union(*lines) == frozenset(range(1, 16))


def test_hexacode_is_six_disjoint_lines():
    g = construct_named("hexacode18")
    cols = g.columns()
    assert len(set(cols)) == 18 and 0 not in cols
    for j in range(6):
        a, b, c = cols[3 * j : 3 * j + 3]
        assert a ^ b == c
    assert is_divisible(weight_distribution(g), 4)


def test_shortened_golay_is_c3():
    rng = random.Random(24)
    golay = construct_named("golay24")
    target = key(construct_named("C3"))
    for _ in range(5):
        assert key(shorten(golay, rng.sample(range(24), 5))) == target


def test_shorten_semantics():
    g = GeneratorMatrix.from_lists([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]])
    s = shorten(g, [0])
    # words vanishing on position 0: span of 0110, 0011 -> delete position 0
    assert sorted(s.codewords()) == sorted([0, 0b011, 0b110, 0b101])
    with pytest.raises(IndexError):
        shorten(g, [9])


def test_switch_preconditions():
    P = PointSet(4, span_points([1, 2, 4, 8]) - {8})
    L = span_points([1, 2])
    with pytest.raises(PreconditionViolated):
        switch(P, {1, 2}, span_points([1, 2, 8]))
    with pytest.raises(PreconditionViolated):
        switch(P, L, span_points([1, 2, 4]))
    with pytest.raises(PreconditionViolated):
        switch(PointSet(4, {4}), L, span_points([1, 2, 8]))
    with pytest.raises(PreconditionViolated):
        switch(P, L, {1, 2, 3, 8})
    Q = PointSet(5, span_points([1, 2, 4, 8]))
    out = switch(Q, L, span_points([1, 2, 16]))
    assert len(out) == 16 and is_divisible(weight_distribution(out.to_matrix()), 4)


def test_pointset_round_trip_and_validation():
    P = PointSet.from_matrix(construct_named("C3"))
    assert len(P) == 19 and P.spanning
    assert PointSet.from_line(P.to_line()) == P
    with pytest.raises(ValueError):
        PointSet(3, {8})
    with pytest.raises(ValueError):
        PointSet.from_matrix(GeneratorMatrix.from_columns(2, [1, 1]))


def test_residual_and_restriction_codes():
    g = construct_named("C3")
    c = next(w for w in words_of(g.rows) if bin(w).count("1") == 16)
    d = residual_code(g, c)
    assert d.n == 3 and d.k == 2
    r = restriction_code(g, c)
    assert r.n == 16
    with pytest.raises(NotACodeword):
        residual_code(g, 0)
    with pytest.raises(NotACodeword):
        residual_code(g, 1)


def test_residual_of_divisible_code_halves_divisibility():
    rng = random.Random(9)
    for _ in range(25):
        g, r = random_divisible(rng)
        c = rng.choice([w for w in words_of(g.rows) if w])
        d = residual_code(g, c)
        assert is_divisible(weight_distribution(d), 1 << (r - 1))


def test_subcode_spectrum_counts_and_lengths():
    g = construct_named("C2")
    c = next(w for w in words_of(g.rows) if bin(w).count("1") == 4)
    spec = subcode_spectrum(g, c)
    assert spec.total() == (1 << (g.k - 1)) - 1
    for (ws, length), _ in spec.entries.items():
        assert 2 * length == sum(ws) and 4 in ws
    assert spec.lines()[0].count("\t") == 2


def test_subcode_spectrum_needs_dimension_two():
    with pytest.raises(ValueError):
        subcode_spectrum(GeneratorMatrix.from_lists([[1, 1]]), 0b11)


def test_length_fibers_match_residual_prediction():
    rng = random.Random(10)
    for _ in range(20):
        k = rng.randint(2, 8)
        g = random_full_rank(rng, k, rng.randint(k, 16))
        c = rng.choice([w for w in words_of(g.rows) if w])
        assert length_fibers(g, c) == residual_fiber_prediction(g, c)


def test_projection_through_an_outside_point():
    rng = random.Random(11)
    for _ in range(20):
        k = rng.randint(3, 6)
        pts = rng.sample(range(1, 1 << k), rng.randint(k, min(12, (1 << k) - 2)))
        P = PointSet(k, pts)
        if not P.spanning:
            continue
        Q = rng.choice([v for v in range(1, 1 << k) if v not in P])
        img = project_through(P, Q)
        assert img.k == k - 1 and img.total == len(P)
        # the projected code consists of the words from functionals vanishing on Q
        want = sorted(
            sum(bin(h & p).count("1") & 1 for p in P.points) for h in range(1 << k) if not bin(h & Q).count("1") & 1
        )
        got = [w for w, a in enumerate(weight_distribution(img.to_matrix()).counts) for _ in range(a)]
        assert got == want
    with pytest.raises(PointInSet):
        project_through(PointSet(3, {1, 2, 4}), 1)


def test_secant_cover():
    assert secant_external_cover(PointSet(3, {1, 2, 4, 7})) == (3, 3)
    assert secant_external_cover(PointSet(3, {1, 2, 3})) == (0, 4)
    assert secant_external_cover(PointSet(3, set(range(1, 8)))) == (0, 0)


def test_projective_check_on_switched_sets():
    assert is_projective(switched_solid(8, [16, 32, 64, 128]).to_matrix())
