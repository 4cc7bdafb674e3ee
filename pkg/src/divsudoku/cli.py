"""Command-line front end: ``divsudoku <command> ...``.

Every command prints a text report or, with ``--format json``, a JSON object
with the keys ``command``, ``inputs``, ``results``, ``timings`` and ``pass``.
The exit status is 0 exactly when every requested check passes.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from divsudoku.core import TriPartition, count_associative_triples, division_sudoku_violation, render_partition
from divsudoku.formats import FormatError, parse_partition, parse_squares, render_square


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _load(path: str, strict: bool = True):
    return parse_squares(_read_text(path), strict=strict)


def _tri_from_args(args):
    if args.partition:
        return TriPartition.synchronized(parse_partition(args.partition))
    if args.tri:
        return TriPartition(*(parse_partition(t) for t in args.tri))
    return None


# --- commands ----------------------------------------------------------------------

def cmd_check(args):
    tri = _tri_from_args(args)
    out = []
    for label, L, _ in _load(args.file, strict=False):
        problem = division_sudoku_violation(L, tri)
        out.append({"label": label, "order": L.n, "division_sudoku": problem is None, "violation": problem})
    return out, all(r["division_sudoku"] for r in out)


def cmd_invariants(args):
    from divsudoku.invariants import canonical_key, intercalate_invariant, minisquare_invariant

    out = []
    for label, L, _ in _load(args.file):
        iota, mu = intercalate_invariant(L), minisquare_invariant(L)
        out.append({"label": label, "iota": iota.render(), "mu": mu.render(),
                    "iota_key": repr(canonical_key(iota)[1]), "mu_key": repr(canonical_key(mu)[1])})
    return out, True


def cmd_enumerate(args):
    from divsudoku.enumeration import CLASS_FACTOR, extensions

    E = extensions(args.threads)
    res = {"extensions": len(E), "class_factor": CLASS_FACTOR, "standard_division_sudokus": CLASS_FACTOR * len(E)}
    if not args.count_only:
        res["squares"] = [render_square(L) for L in E]
    return res, len(E) == 7741


def cmd_classify(args):
    from divsudoku.corpus import appendix
    from divsudoku.classification import _ds_classes_cached, isotopism_classes, main_ds_classes

    if args.level == "ds":
        part = _ds_classes_cached(args.threads)
        sizes = dict(sorted(part.sizes.items()))
        res = {"classes": len(part), "sizes": sizes}
        if not args.count_only:
            res["representatives"] = [render_square(L) for L in part.representatives]
        return res, len(part) == 186
    A = appendix()
    labels = sorted(A)
    fn = main_ds_classes if args.level == "main" else isotopism_classes
    part = fn([A[i] for i in labels], labels)
    groups = part.labelled()
    res = {"classes": len(part)}
    if args.level == "main":
        if not args.count_only:
            res["table"] = ["{" + ", ".join(map(str, g)) + "}" for g in groups]
        return res, len(part) == 45
    res["merged"] = [g for g in groups if len(g) > 1]
    return res, len(part) == 183


def cmd_tripartitions(args):
    from divsudoku.multipart import tri_partitions

    out = []
    for label, L, _ in _load(args.file):
        tps = tri_partitions(L)
        row = {"label": label, "pi": len(tps)}
        if not args.count_only:
            row["tripartitions"] = [" ".join(render_partition(p) for p in t) for t in tps]
        out.append(row)
    return out, True


def cmd_synchronize(args):
    from divsudoku.multipart import synchronization

    out = []
    for label, L, _ in _load(args.file):
        res = synchronization(L)
        out.append({"label": label, "sigma": res.sigma,
                    "partitions": [render_partition(p) for p in res.partitions],
                    "square": render_square(res.square)})
    return out, True


def cmd_construct(args):
    from divsudoku.algebra import construction_report

    rep = construction_report(args.q, args.kind, args.c)
    L = rep["square"]
    parts = rep["verified_line_partitions"] + rep["quartic_partitions"]
    res = {
        "q": args.q, "kind": args.kind, "c": rep["c"],
        "square": render_square(L),
        "partitions": [render_partition(p) for p in parts],
        "line_partitions_verified": len(rep["verified_line_partitions"]),
        "line_partitions_total": len(rep["line_partitions"]),
        "quartic_partitions_verified": len(rep["quartic_partitions"]),
        "affine": rep["affine"],
        "isotopic_to_group": rep["isotopic_to_group"],
    }
    if "sigma" in rep:
        res["sigma"] = rep["sigma"]
    if "ds_class" in rep:
        res["ds_class"] = f"DS(9,{rep['ds_class']})"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(f"# DS(q={args.q}, {args.kind}, c={rep['c']})\n")
            for p in parts:
                fh.write(f"# partition: {render_partition(p)}\n")
            fh.write(render_square(L))
    ok = (not rep["c_in_subfield"]) and len(rep["verified_line_partitions"]) == args.q + 1 and rep["affine"]
    return res, ok


def cmd_assoc_count(args):
    out = [{"label": label, "associative_triples": count_associative_triples(L)} for label, L, _ in _load(args.file)]
    return out, True


def cmd_corpus_verify(args):
    from divsudoku.verify import corpus_verify

    text = _read_text(args.appendix) if args.appendix else None
    rep = corpus_verify(text, quick=args.quick, threads=args.threads)
    failed = [c for c in rep["checks"] if not c["pass"]]
    res = {"checks": len(rep["checks"]), "failed": failed}
    if not args.count_only:
        res["all"] = rep["checks"]
    return res, rep["pass"]


COMMANDS = {
    "check": cmd_check,
    "invariants": cmd_invariants,
    "enumerate": cmd_enumerate,
    "classify": cmd_classify,
    "tripartitions": cmd_tripartitions,
    "synchronize": cmd_synchronize,
    "construct": cmd_construct,
    "assoc-count": cmd_assoc_count,
    "corpus-verify": cmd_corpus_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--threads", type=int, default=1, help="worker processes for enumeration")
    common.add_argument("--count-only", action="store_true", help="omit bulky listings")

    parser = argparse.ArgumentParser(prog="divsudoku", description="Division sudoku toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="test squares for the division sudoku property")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--partition", help="synchronized partition, e.g. '{159 267 348}'")
    g.add_argument("--tri", nargs=3, metavar=("ROWS", "COLS", "SYMS"))

    for name, helptext in (("invariants", "intercalate and minisquare structure invariants"),
                           ("tripartitions", "all sudoku tri-partitions (order 9)"),
                           ("synchronize", "ds-isotopic copy with the most sudoku partitions"),
                           ("assoc-count", "number of associative triples")):
        sub.add_parser(name, parents=[common], help=helptext).add_argument("file")

    sub.add_parser("enumerate", parents=[common], help="complete the rank-3 template")

    p = sub.add_parser("classify", parents=[common], help="ds, main ds or isotopism classes")
    p.add_argument("--level", choices=("ds", "main", "isotopism"), default="ds")

    p = sub.add_parser("construct", parents=[common], help="Stein-type division sudoku over GF(q^2)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--kind", choices=("field", "nearfield"), default="field")
    p.add_argument("--c", type=int, default=None, help="element encoding of c (default: smallest outside GF(q))")
    p.add_argument("-o", "--output", help="write the square and partition manifest here")

    p = sub.add_parser("corpus-verify", parents=[common], help="check the embedded corpus")
    p.add_argument("--appendix", help="verify this appendix file instead of the embedded one")
    p.add_argument("--quick", action="store_true", help="skip class computations")
    return parser


def _text(command: str, results, ok: bool) -> str:
    lines = []

    def emit(obj, indent=""):
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, str) and "\n" in v:
                    lines.append(f"{indent}{k}:")
                    lines.extend(indent + "  " + s for s in v.rstrip("\n").split("\n"))
                elif isinstance(v, (dict, list)):
                    lines.append(f"{indent}{k}:")
                    emit(v, indent + "  ")
                else:
                    lines.append(f"{indent}{k}: {v}")
        elif isinstance(obj, list):
            for item in obj:
                if isinstance(item, (dict, list)):
                    emit(item, indent)
                    if isinstance(item, dict):
                        lines.append("")
                else:
                    lines.append(f"{indent}{item}")
        else:
            lines.append(f"{indent}{obj}")

    emit(results)
    lines.append(f"{command}: {'PASS' if ok else 'FAIL'}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        results, ok = COMMANDS[args.command](args)
    except (FormatError, ValueError, OSError) as exc:
        results, ok = {"error": f"{type(exc).__name__}: {exc}"}, False
    elapsed = time.perf_counter() - start
    inputs = {k: v for k, v in vars(args).items() if k not in ("command", "format")}
    if args.format == "json":
        report = {"command": args.command, "inputs": inputs, "results": results,
                  "timings": {"seconds": round(elapsed, 3)}, "pass": ok}
        sys.stdout.write(json.dumps(report, indent=2, default=str) + "\n")
    else:
        sys.stdout.write(_text(args.command, results, ok))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
