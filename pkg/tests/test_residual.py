from collections import Counter
from fractions import Fraction

import pytest

from _oracles import multiset_from, words_of
from divcodes.enumeration import (
    CodeDatabase,
    CodeRecord,
    canonical_form,
    canonical_multiset,
    classify,
    residual_prescribed_search,
)
from divcodes.enumeration.residual import ResidualSearchStats, small_weight_cut
from divcodes.gf2 import ColumnMultiset, GeneratorMatrix, rank
from divcodes.geometry import construct_named
from divcodes.spectra import weight_distribution


def brute_block_codes(residual, db, n0, weights, projective):
    """Canonical keys of all codes ``[[R, M1], [0, M2]]`` by trying every ``M1``."""
    m, r = residual.n, residual.k
    out = set()
    for rec in db.records():
        if rec.n > n0:
            continue
        base = list(rec.key.columns) + [0] * (n0 - rec.n)
        m2 = [0] * rec.k
        for j, c in enumerate(base):
            for i in range(rec.k):
                if (c >> i) & 1:
                    m2[i] |= 1 << (m + j)
        for bits in range(1 << (r * n0)):
            rows = [residual.rows[i] | ((bits >> (i * n0)) & ((1 << n0) - 1)) << m for i in range(r)]
            g = GeneratorMatrix(m + n0, tuple(rows + m2))
            if rank(g) < g.k:
                continue
            if any(w and bin(w).count("1") not in weights for w in words_of(g.rows)):
                continue
            cols = g.columns()
            if projective and (0 in cols or len(set(cols)) < len(cols)):
                continue
            out.add(canonical_multiset(multiset_from(g.k, [c for c in cols if c])).key)
    return out


def output_keys(outputs):
    keys = set()
    for o in outputs:
        eff = ColumnMultiset(o.counts.k, {u: c for u, c in o.counts.counts.items() if u})
        keys.add(canonical_multiset(eff).key)
    return keys


@pytest.mark.parametrize(
    "rows, n0, weights, projective",
    [
        ((0b011, 0b101), 4, (2, 4, 6), False),
        ((0b011, 0b101), 5, (2, 4, 6), True),
        ((0b0111, 0b1011), 4, (2, 4, 6, 8), False),
        ((0b0011, 0b0101, 0b1001), 4, (2, 4, 6, 8), False),
        ((0b0011, 0b0101, 0b1001), 4, (2, 4, 6, 8), True),
    ],
)
def test_matches_block_brute_force(rows, n0, weights, projective):
    residual = GeneratorMatrix(max(r.bit_length() for r in rows), rows)
    db = classify(2, [w for w in weights if w <= n0], n0)
    stats = ResidualSearchStats()
    outs = residual_prescribed_search(
        residual, db, delta=2, base_length=n0, weights=weights, projective_only=projective, stats=stats
    )
    assert output_keys(outs) == brute_block_codes(residual, db, n0, set(weights), projective)
    assert stats.bases == len(db.records()) and len(stats.nodes) == residual.k + 1
    if projective:
        assert all(o.projective for o in outs)


def test_outputs_contain_the_residual_block():
    residual = GeneratorMatrix(3, (0b011, 0b101))
    db = classify(2, (2, 4), 4)
    outs = residual_prescribed_search(residual, db, delta=2, base_length=4, weights=(2, 4, 6))
    assert outs
    for out in outs:
        k0 = out.base.k
        assert out.counts.k == k0 + 2 and out.counts.total == 7
        # residual position j carries R's column j (last row first) above the base rows
        for j in range(3):
            col = sum(((residual.rows[1 - s] >> j) & 1) << (k0 + s) for s in range(2))
            assert out.counts[col] >= 1
        # the base rows vanish on the residual positions, so their columns are in the top bits only
        low = (1 << k0) - 1
        assert sum(c for u, c in out.counts.counts.items() if not u & low) >= 3


def test_small_weight_cut():
    keep = small_weight_cut(10)
    # limit (128/3) * 1024 / 4096 - 8 = 8/3: at most two words of weight 8 or 16
    ones8 = ColumnMultiset(2, {1: 8, 2: 8, 3: 8})
    assert not keep(ones8)
    one = ColumnMultiset(2, {1: 8, 2: 4, 3: 4, 0: 1})
    assert keep(one)
    assert small_weight_cut(10, bound=Fraction(0), offset=0)(ColumnMultiset(1, {1: 24}))


@pytest.mark.slow
def test_relaxed_run_emits_a_non_projective_witness():
    # base: all-ones plus a first-order Reed-Muller [16,5] on part of the 21 columns
    # outside the copy of R; the words (r, r, 0) together with (0, b) form a witness
    full = (1 << 40) - 1
    rm = [0xFFFF] + [sum(1 << j for j in range(16) if (j >> i) & 1) for i in range(4)]
    base = GeneratorMatrix(40, (full,) + tuple(r << 19 for r in rm))
    cf = canonical_form(base)
    db = CodeDatabase()
    db.insert(CodeRecord(cf.key, cf.aut_order))
    residual = construct_named("M19")
    outs = residual_prescribed_search(residual, db)
    assert [o.projective for o in outs] == [False]
    rows = [r | r << 19 for r in residual.rows] + [b << 19 for b in base.rows]
    witness = GeneratorMatrix(59, tuple(rows))
    assert all(bin(w).count("1") % 8 == 0 and bin(w).count("1") <= 40 for w in words_of(witness.rows))
    # canonical keys of a [59,13] code are slow to compute, so compare shapes instead
    (out,) = outs
    assert (out.counts.k, out.counts.total) == (13, 59)
    assert weight_distribution(out.matrix) == weight_distribution(witness)
    assert sorted(out.counts.counts.values()) == sorted(Counter(witness.columns()).values())
