"""Command-line entry point.

Exit status: 0 on success, 1 when a mathematical check fails, 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from math import gcd

from . import feasibility, geometry, spectra
from .gf2 import ColumnMultiset, FormatError, GeneratorMatrix, format_matrix_line, popcount, read_matrices

log = logging.getLogger("divcodes")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _read_input_matrices(args) -> list[GeneratorMatrix]:
    if getattr(args, "matrix", None):
        lines = [args.matrix]
    elif getattr(args, "name", None):
        return [geometry.construct_named(args.name)]
    else:
        lines = sys.stdin.read().splitlines()
    try:
        mats = read_matrices(lines)
    except FormatError as exc:
        raise UsageError(f"bad matrix input: {exc}") from None
    if not mats:
        raise UsageError("no matrix given (use --matrix, --name or stdin)")
    return mats


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- subcommands ------------------------------------------------------------------


def cmd_classify(args) -> int:
    from .enumeration.classify import ClassifyStats, classify

    delta = args.delta or _gcd(args.weights)
    stats = ClassifyStats()
    db = classify(
        delta,
        args.weights,
        args.max_n,
        projective_only=args.projective,
        resume=args.resume,
        mode=args.mode,
        k_max=args.max_k,
        macwilliams_cut=args.cut,
        checkpoint=args.output,
        shard_depth=args.shard_depth,
        jobs=args.jobs,
        stats=stats,
        progress=log.info,
    )
    log.info("candidates=%d accepted=%d duplicates=%d pruned=%d", stats.candidates, stats.accepted, stats.duplicates, stats.pruned)
    if args.records:
        for rec in db.records():
            _out(f"{rec.n}\t{rec.k}\t{rec.weights.enumerator()}\taut={rec.aut}\t{format_matrix_line(rec.matrix)}")
    elif args.format == "database":
        _out(db.to_text())
    else:
        _out(db.table(args.format))
    return EXIT_OK


def _gcd(ws) -> int:
    g = 0
    for w in ws:
        g = gcd(g, w)
    return g or 1


def cmd_tables(args) -> int:
    from .enumeration.classify import classify
    from .enumeration.database import CodeDatabase

    if args.database:
        db = CodeDatabase.read(args.database)
    else:
        if not args.weights or args.max_n is None:
            raise UsageError("tables needs --database or both --weights and --max-n")
        db = classify(args.delta or _gcd(args.weights), args.weights, args.max_n, projective_only=args.projective)
    _out(db.table("tsv" if args.format == "tsv" else "paper-table"))
    return EXIT_OK


def cmd_extend(args) -> int:
    from .enumeration.canonical import canonical_multiset
    from .enumeration.extension import ExtensionProblem, extensions

    (g,) = _read_input_matrices(args)[:1]
    weights = args.weights
    prescribed = {}
    for item in args.prescribe or []:
        try:
            u, x0, x1 = item.split(":")
            prescribed[int(u, 16)] = (int(x0), int(x1))
        except ValueError:
            raise UsageError(f"--prescribe expects hexclass:x0:x1, got {item!r}") from None
    problem = ExtensionProblem.build(
        g,
        args.delta,
        a=args.a,
        b=args.b,
        n_prime=args.n_prime,
        weights=weights,
        prescribed=prescribed,
        systematic=not args.no_systematic,
    )
    seen = set()
    count = 0
    for ext in extensions(problem):
        ms = ext.multiset()
        if args.classes:
            eff = ColumnMultiset(ms.k, {u: c for u, c in ms.counts.items() if u and c})
            key = canonical_multiset(eff).key
            if key in seen:
                continue
            seen.add(key)
        count += 1
        if not args.count:
            _out(format_matrix_line(ms.to_matrix()))
    if args.count:
        _out(str(count))
    return EXIT_OK


def cmd_macwilliams(args) -> int:
    if args.enumerator:
        a = spectra.WeightDistribution.parse_enumerator(args.enumerator, args.n)
        if args.k is None:
            total = sum(a.counts)
            if total & (total - 1):
                raise UsageError("counts do not sum to a power of two; give --k")
            k = total.bit_length() - 1
        else:
            k = args.k
    else:
        (g,) = _read_input_matrices(args)[:1]
        a, k = spectra.weight_distribution(g), g.k
    try:
        b = spectra.macwilliams_transform(a, k)
    except spectra.NotACodeDistribution as exc:
        sys.stderr.write(f"not a code distribution: {exc}\n")
        return EXIT_FAIL
    _out(b.enumerator() if args.format == "enumerator" else b.tsv())
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = feasibility.FeasibilityInstance(
        args.n, frozenset(args.weights), projective=args.projective, k=args.k, m=args.m
    )
    try:
        sols = feasibility.solve_truncated_system(inst)
    except feasibility.UnboundedPolytope as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_FAIL
    if args.self_orthogonal:
        sols = feasibility.filter_self_orthogonality(sols, args.check)
    if args.format == "enumerator":
        for s in sols:
            _out(f"k={s.k} " + " ".join(f"B{i}={b}" for i, b in s.b) + f" {s.enumerator()}")
    else:
        ws = sorted(inst.weights)
        duals = inst.dual_unknowns()
        _out("\t".join(["k"] + [f"B{i}" for i in duals] + [f"A{w}" for w in ws]))
        for s in sols:
            _out("\t".join([str(s.k)] + [str(s.B.get(i, 0)) for i in duals] + [str(s.A.get(w, 0)) for w in ws]))
    return EXIT_OK


def cmd_construct(args) -> int:
    g = geometry.construct_named(args.name)
    if args.format == "rows":
        _out("\n".join("".join(map(str, r)) for r in g.to_lists()))
    else:
        _out(format_matrix_line(g, canonical=False))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    for g in _read_input_matrices(args):
        if args.codeword_weight is None and args.codeword is None:
            wd = spectra.weight_distribution(g)
            _out(wd.tsv() if args.format == "tsv" else wd.enumerator())
            continue
        if args.codeword is not None:
            c = int(args.codeword, 16)
        else:
            c = next((w for w in g.codewords() if w and popcount(w) == args.codeword_weight), None)
            if c is None:
                sys.stderr.write(f"no codeword of weight {args.codeword_weight}\n")
                return EXIT_FAIL
        try:
            spec = geometry.subcode_spectrum(g, c)
        except geometry.NotACodeword as exc:
            sys.stderr.write(f"{exc}\n")
            return EXIT_FAIL
        _out("\n".join(spec.lines()))
        _out(f"total\t{spec.total()}")
    return EXIT_OK


def cmd_lengths(args) -> int:
    try:
        _out(feasibility.known_length_status(args.r, args.n, args.q))
    except feasibility.UnknownParameterRegime as exc:
        raise UsageError(str(exc)) from None
    return EXIT_OK


def cmd_verify59(args) -> int:
    from .verify import StepFailed, verify59

    allowed = set(args.allow_length or ())

    def status(r, n, q=2):
        return "exists" if n in allowed else feasibility.known_length_status(r, n, q)

    try:
        reports = verify59(length_status=status, y=args.y, steps=args.step)
        failed = None
    except StepFailed as exc:
        reports, failed = exc.reports, exc.report
    for rep in reports:
        _out(rep.text() if args.format == "text" else rep.line())
    if failed is not None:
        sys.stderr.write(f"step {failed.step} fails\n")
        return EXIT_FAIL
    return EXIT_OK


def cmd_residual(args) -> int:
    from .enumeration.database import CodeDatabase
    from .enumeration.residual import ResidualSearchStats, residual_prescribed_search, small_weight_cut

    residual = geometry.construct_named(args.residual)
    db = CodeDatabase.read(args.base)
    stats = ResidualSearchStats()
    outs = []
    if args.cut and not (args.projective and args.delta == 8 and args.base_length + residual.n == 59):
        raise UsageError("--cut holds only for projective length-59 searches (--projective, delta 8, 40 + 19)")
    if args.cut:
        by_k: dict[int, list] = {}
        for rec in db.records():
            by_k.setdefault(rec.k, []).append(rec)
        for k0, recs in sorted(by_k.items()):
            cut = small_weight_cut(k0 + residual.k)
            outs += residual_prescribed_search(
                residual, recs, args.delta, args.base_length, projective_only=args.projective, cut=cut, stats=stats
            )
    else:
        outs = residual_prescribed_search(
            residual, db, args.delta, args.base_length, projective_only=args.projective, stats=stats
        )
    for o in outs:
        _out(f"{format_matrix_line(o.matrix)} projective={int(o.projective)}")
    log.info("bases=%d nodes=%s", stats.bases, stats.nodes)
    _out(f"# outputs={len(outs)} projective={sum(o.projective for o in outs)}")
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="divcodes", description="Divisible binary linear codes workbench")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify codes with a prescribed weight set")
    c.add_argument("--weights", type=_int_list, required=True)
    c.add_argument("--delta", type=int, help="divisor (default: gcd of the weights)")
    c.add_argument("--max-n", type=int, required=True)
    c.add_argument("--max-k", type=int)
    c.add_argument("--projective", action="store_true")
    c.add_argument("--mode", choices=("augment", "global"), default="augment")
    c.add_argument("--cut", action="store_true", help="prune with the MacWilliams dimension cap")
    c.add_argument("--resume", help="database checkpoint to resume from")
    c.add_argument("--output", "-o", help="database file (also used for checkpoints)")
    c.add_argument("--shard-depth", type=int, default=0)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--records", action="store_true", help="list the classes instead of the count table")
    c.add_argument("--format", choices=("paper-table", "tsv", "database"), default="paper-table")
    c.set_defaults(func=cmd_classify)

    t = sub.add_parser("tables", help="k-by-n count table")
    t.add_argument("--weights", type=_int_list)
    t.add_argument("--delta", type=int)
    t.add_argument("--max-n", type=int)
    t.add_argument("--projective", action="store_true")
    t.add_argument("--database", help="read counts from a database file instead of classifying")
    t.add_argument("--format", choices=("paper-table", "tsv"), default="paper-table")
    t.set_defaults(func=cmd_tables)

    e = sub.add_parser("extend", help="one-row extensions of a code")
    e.add_argument("--matrix", help="matrix line 'n k c_1 ... c_n' (default: stdin)")
    e.add_argument("--delta", type=int, required=True)
    e.add_argument("--weights", type=_int_list)
    e.add_argument("--a", type=int)
    e.add_argument("--b", type=int)
    e.add_argument("--n-prime", type=int)
    e.add_argument("--prescribe", action="append", metavar="U:X0:X1")
    e.add_argument("--no-systematic", action="store_true")
    e.add_argument("--classes", action="store_true", help="one output per equivalence class")
    e.add_argument("--count", action="store_true")
    e.set_defaults(func=cmd_extend)

    m = sub.add_parser("macwilliams", help="dual weight distribution")
    m.add_argument("--matrix")
    m.add_argument("--enumerator", help="weight distribution like '(0^1 4^7)'")
    m.add_argument("--n", type=int, help="length for --enumerator (default: largest weight)")
    m.add_argument("--k", type=int)
    m.add_argument("--format", choices=("tsv", "enumerator"), default="enumerator")
    m.set_defaults(func=cmd_macwilliams)

    s = sub.add_parser("solve", help="integer solutions of the first MacWilliams identities")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--weights", type=_int_list, required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--m", type=int, default=4)
    s.add_argument("--projective", action="store_true")
    s.add_argument("--self-orthogonal", action="store_true", help="apply the A_w <= B_w filter")
    s.add_argument("--check", type=_int_list, default=[4])
    s.add_argument("--format", choices=("tsv", "enumerator"), default="tsv")
    s.set_defaults(func=cmd_solve)

    k = sub.add_parser("construct", help="print a named code")
    k.add_argument("--name", choices=geometry.NAMED_CODES, required=True)
    k.add_argument("--format", choices=("line", "rows"), default="line")
    k.set_defaults(func=cmd_construct)

    sp = sub.add_parser("spectrum", help="weight distribution or subcode spectrum")
    sp.add_argument("--matrix")
    sp.add_argument("--codeword-weight", type=int)
    sp.add_argument("--codeword", help="codeword as hex (bit j = position j)")
    sp.add_argument("--format", choices=("enumerator", "tsv"), default="enumerator")
    sp.set_defaults(func=cmd_spectrum)

    ln = sub.add_parser("lengths", help="existence status of projective q^r-divisible codes")
    ln.add_argument("--q", type=int, default=2)
    ln.add_argument("--r", type=int, required=True)
    ln.add_argument("--n", type=int, required=True)
    ln.set_defaults(func=cmd_lengths)

    v = sub.add_parser("verify59", help="check the length-59 nonexistence argument")
    v.add_argument("--format", choices=("records", "text"), default="records")
    v.add_argument("--step", type=_int_list, help="run only these steps")
    v.add_argument("--allow-length", type=_int_list, help="pretend these 4-divisible lengths exist")
    v.add_argument("--y", type=int, help="use this 2^k in place of the derived dimension")
    v.set_defaults(func=cmd_verify59)

    r = sub.add_parser("residual", help="extend base codes by a prescribed residual code")
    r.add_argument("--residual", choices=geometry.NAMED_CODES, required=True)
    r.add_argument("--base", required=True, help="database of base codes")
    r.add_argument("--delta", type=int, default=8)
    r.add_argument("--base-length", type=int, default=40)
    r.add_argument("--projective", action="store_true")
    r.add_argument("--cut", action="store_true", help="prune with the A8 + A16 bound")
    r.set_defaults(func=cmd_residual)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, KeyError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
