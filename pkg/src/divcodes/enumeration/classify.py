"""Isomorph-free classification of codes with a prescribed weight set.

Codes are grown one row at a time.  Every ``[n, k+1]`` code arises from one
of its ``k``-dimensional subcodes by appending a row that adds at least one
new column (take a systematic generator matrix and drop its last row), so
extending every class of dimension ``k`` with all lengths ``<= n_max`` is
complete.

Isomorph rejection is either canonical augmentation (a child is kept only
when its new point lies in the automorphism orbit of a canonically chosen
column, so each class has one canonical parent) or a global
hash-and-canonicalise dictionary.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from ..gf2 import ColumnMultiset
from .canonical import CanonicalResult, canonical_multiset
from .database import CodeDatabase, CodeRecord
from .extension import ExtensionProblem, extensions, work_units

__all__ = ["ClassifyStats", "ResumeMismatch", "classify", "extend_record", "projective_dimension_cap"]

log = logging.getLogger(__name__)


class ResumeMismatch(ValueError):
    pass


@dataclass
class ClassifyStats:
    candidates: int = 0
    accepted: int = 0
    duplicates: int = 0
    pruned: int = 0


def _params(delta, weights, n_max, projective_only, mode, k_max, cut) -> dict[str, str]:
    return {
        "delta": str(delta),
        "weights": ",".join(str(w) for w in sorted(weights)),
        "max_n": str(n_max),
        "projective": str(int(bool(projective_only))),
        "mode": mode,
        "max_k": "" if k_max is None else str(k_max),
        "cut": str(int(bool(cut))),
    }


def projective_dimension_cap(weights, n_max: int) -> int | None:
    """Largest dimension the MacWilliams identities allow for a projective code.

    Taken over all lengths up to ``n_max``; ``None`` when some length leaves
    the system unbounded.
    """
    from ..feasibility import FeasibilityInstance, UnboundedPolytope, solve_truncated_system

    cap = 0
    for n in range(1, n_max + 1):
        ws = sorted(w for w in weights if w <= n)
        if not ws:
            continue
        try:
            sols = solve_truncated_system(FeasibilityInstance(n, frozenset(ws), projective=True))
        except UnboundedPolytope:
            return None
        if sols:
            cap = max(cap, max(s.k for s in sols))
    return cap


def _effective(ms: ColumnMultiset) -> ColumnMultiset:
    return ColumnMultiset(ms.k, {u: c for u, c in ms.counts.items() if u})


def _within_cap(ms: ColumnMultiset, cap: int | None) -> bool:
    """Subcodes of a projective code of dimension <= cap have bounded multiplicities."""
    if cap is None:
        return True
    if ms.k > cap:
        return False
    limit = 1 << (cap - ms.k)
    return all(c <= limit for c in ms.counts.values())


def extend_record(
    parent: ColumnMultiset,
    delta: int,
    weights: frozenset,
    n_max: int,
    mode: str = "augment",
    cap: int | None = None,
    prefix: tuple[int, ...] | None = None,
    stats: ClassifyStats | None = None,
) -> list[tuple[CanonicalResult, ColumnMultiset]]:
    """Children of one parent class (one work unit when ``prefix`` is given)."""
    stats = stats if stats is not None else ClassifyStats()
    m = parent.total
    if m >= n_max:
        return []
    counts = dict(parent.counts)
    counts[0] = n_max - m
    problem = ExtensionProblem(ColumnMultiset(parent.k, counts), weights, delta)
    new_point = 1 << parent.k
    seen = {}
    for ext in extensions(problem, prefix or ()):
        stats.candidates += 1
        child = _effective(ext.multiset())
        if not _within_cap(child, cap):
            stats.pruned += 1
            continue
        res = canonical_multiset(child)
        if mode == "augment":
            best = min(res.rank, key=res.rank.get)
            if res.orbits[best] != res.orbits[new_point]:
                continue
        if res.key in seen:
            stats.duplicates += 1
            continue
        seen[res.key] = (res, child)
    return list(seen.values())


def _units(parent: ColumnMultiset, delta, weights, n_max, shard_depth):
    if shard_depth <= 0:
        return [None]
    counts = dict(parent.counts)
    counts[0] = n_max - parent.total
    if counts[0] <= 0:
        return []
    return work_units(ExtensionProblem(ColumnMultiset(parent.k, counts), weights, delta), shard_depth)


def _run_unit(args):
    parent, delta, weights, n_max, mode, cap, prefix = args
    stats = ClassifyStats()
    out = extend_record(parent, delta, weights, n_max, mode, cap, prefix, stats)
    return [(res.key, res.aut_order) for res, _ in out], stats


def classify(
    delta: int,
    weights: Iterable[int],
    n_max: int,
    projective_only: bool = False,
    resume: CodeDatabase | str | Path | None = None,
    mode: str = "augment",
    k_max: int | None = None,
    macwilliams_cut: bool = False,
    checkpoint: str | Path | None = None,
    shard_depth: int = 0,
    jobs: int = 1,
    stats: ClassifyStats | None = None,
    progress: Callable[[str], None] | None = None,
) -> CodeDatabase:
    """One representative per equivalence class of codes with weights in ``weights``.

    All ``[n, k]`` codes with ``n <= n_max`` (and ``k <= k_max``) are
    classified; with ``projective_only`` only projective ones are returned.
    ``macwilliams_cut`` (projective runs only) discards intermediate codes
    that cannot lie below any projective code allowed by the first four
    MacWilliams identities.
    """
    weights = frozenset(int(w) for w in weights)
    if any(w % delta for w in weights):
        raise ValueError(f"weights {sorted(weights)} are not all multiples of {delta}")
    if mode not in ("augment", "global"):
        raise ValueError(f"unknown isomorph rejection mode {mode!r}")
    stats = stats if stats is not None else ClassifyStats()
    params = _params(delta, weights, n_max, projective_only, mode, k_max, macwilliams_cut)
    cap = None
    if macwilliams_cut and projective_only:
        cap = projective_dimension_cap(weights, n_max)

    if resume is not None:
        db = resume if isinstance(resume, CodeDatabase) else CodeDatabase.read(resume)
        given = {k: v for k, v in db.params.items() if k in params}
        if given != params:
            diff = {k: (given.get(k), params[k]) for k in params if given.get(k) != params[k]}
            raise ResumeMismatch(f"resume parameters differ: {diff}")
        if db.params.get("status") == "complete":
            return db
        level = int(db.params.get("level", "1"))
        pending = set(db.frontier)
        if not pending:
            # stopped between levels: the saved level is finished
            level += 1
            pending = None
    else:
        db = CodeDatabase(params)
        for w in sorted(weights):
            if w <= n_max:
                ms = ColumnMultiset(1, {1: w})
                res = canonical_multiset(ms)
                db.insert(CodeRecord(res.key, res.aut_order))
        level = 1
        pending = None

    def save(level, pending_keys):
        if checkpoint is None:
            return
        db.params.update(params)
        db.params["status"] = "partial"
        db.params["level"] = str(level)
        db.frontier = sorted(pending_keys)
        db.write(checkpoint)

    pool = None
    if jobs > 1:
        import multiprocessing

        pool = multiprocessing.Pool(jobs)
    try:
        while k_max is None or level < k_max:
            parents = [r for r in db.records(k=level) if r.n < n_max]
            if pending is not None:
                parents = [r for r in parents if r.key.hex() in pending]
                pending = None
            if not parents:
                break
            if cap is not None and level >= cap:
                break
            todo = {r.key.hex() for r in parents}
            save(level, todo)
            for rec in parents:
                parent = ColumnMultiset(level, _multiset_of(rec))
                if not _within_cap(parent, cap):
                    todo.discard(rec.key.hex())
                    continue
                units = _units(parent, delta, weights, n_max, shard_depth)
                args = [(parent, delta, weights, n_max, mode, cap, u) for u in units]
                results = pool.map(_run_unit, args) if pool else map(_run_unit, args)
                for children, st in results:
                    stats.candidates += st.candidates
                    stats.pruned += st.pruned
                    stats.duplicates += st.duplicates
                    for key, aut in children:
                        if db.insert(CodeRecord(key, aut)):
                            stats.accepted += 1
                        else:
                            stats.duplicates += 1
                todo.discard(rec.key.hex())
                save(level, todo)
            if progress:
                progress(f"dimension {level + 1}: {len(db.records(k=level + 1))} classes")
            level += 1
    finally:
        if pool:
            pool.close()
            pool.join()

    if projective_only:
        db = db.filtered(lambda r: r.projective)
    db.params.update(params)
    db.params["status"] = "complete"
    db.params.pop("level", None)
    db.frontier = []
    if checkpoint is not None:
        db.write(checkpoint)
    return db


def _multiset_of(rec: CodeRecord) -> dict[int, int]:
    out: dict[int, int] = {}
    for c in rec.key.columns:
        out[c] = out.get(c, 0) + 1
    return out
