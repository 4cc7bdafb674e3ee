"""Machine checks binding the embedded corpus to the published facts."""

from __future__ import annotations

from typing import Callable

from divsudoku.core import conjugate, count_associative_triples, division_sudoku_violation, is_idempotent, render_partition
from divsudoku.corpus import _read, appendix, named, tables
from divsudoku.enumeration import extends_template
from divsudoku.formats import parse_squares


def _check(name: str, fn: Callable[[], tuple[bool, str]]) -> dict:
    try:
        ok, detail = fn()
    except Exception as exc:  # a crashing check is a failed check
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return {"name": name, "pass": bool(ok), "detail": detail}


def corpus_verify(appendix_text: str | None = None, quick: bool = False, threads: int = 1) -> dict:
    """Run every corpus check; returns ``{"checks": [...], "pass": bool}``.

    ``appendix_text`` replaces the embedded appendix (used to verify edited
    copies).  ``quick`` skips the class computations.
    """
    if appendix_text is None:
        squares = dict(appendix())
    else:
        squares = {}
        for label, L, _ in parse_squares(appendix_text, strict=False):
            squares[label] = L
        squares = {int(k.split(",")[1].rstrip(")")) if k.startswith("DS(") else k: v for k, v in squares.items()}
    checks = []

    for i, L in squares.items():
        label = f"DS(9,{i})" if isinstance(i, int) else str(i)

        def ds_check(L=L):
            v = division_sudoku_violation(L)
            return v is None, v or "division sudoku"

        checks.append(_check(f"{label}: division sudoku", ds_check))
        checks.append(_check(f"{label}: extends template", lambda L=L: (extends_template(L), "")))

    for label, L, _ in parse_squares(_read("named.txt")):
        checks.append(_check(f"{label}: division sudoku",
                             lambda label=label: ((v := division_sudoku_violation(named(label))) is None, v or "")))

    T = tables()

    def views():
        target = squares.get(18)
        same = [named(f"DS18_view{k}") == target for k in (1, 2, 3)]
        return all(same), f"views equal DS(9,18): {same}"

    def q_facts():
        from divsudoku.invariants import find_intercalates

        Q = named("Q")
        ok = (is_idempotent(Q) and len(find_intercalates(Q)) == 18
              and named("Q_rdiv").rows == tuple(map(tuple, Q.rdiv_table()))
              and named("Q_ldiv").rows == tuple(map(tuple, Q.ldiv_table())))
        return ok, "idempotent, 18 intercalates, division tables match"

    def l0_facts():
        n = count_associative_triples(named("L0"))
        return n == 9, f"{n} associative triples"

    def table2():
        from divsudoku.multipart import tri_partitions

        bad = []
        for k, rows in T["tripartitions"].items():
            got = [[render_partition(p) for p in t] for t in tri_partitions(squares[int(k)])]
            if got != rows or len(got) != T["pi"][k]:
                bad.append(k)
        return not bad, f"mismatching squares: {bad}" if bad else "all seven listings reproduced"

    def sigma_sets():
        from divsudoku.multipart import sigma

        bad = []
        for label, parts in T["sigma_partitions"].items():
            got = [render_partition(p) for p in sigma(named(label))[1]]
            if got != parts:
                bad.append(label)
        return not bad, f"mismatch: {bad}" if bad else "L17, L175, L179 reproduced"

    checks += [_check("DS(9,18) relabeled displays", views), _check("(Q,.) facts", q_facts),
               _check("L0 associative triples", l0_facts), _check("Table 2", table2),
               _check("sigma partition lists", sigma_sets)]

    if not quick:
        from divsudoku.classification import _ds_classes_cached, ds_class_lookup, main_ds_classes

        def bijection():
            part = _ds_classes_cached(threads)
            lookup = ds_class_lookup(threads)
            seen: dict[int, object] = {}
            dup = []
            for label, L in squares.items():
                if division_sudoku_violation(L) is not None:
                    continue
                k = lookup(L)
                if k in seen:
                    dup.append((seen[k], label))
                seen[k] = label
            missing = sorted(set(range(len(part))) - set(seen))
            detail = []
            if dup:
                detail.append(f"ds-isotopic corpus pairs: {dup}")
            if missing:
                detail.append(f"{len(missing)} computed class(es) with no corpus square: {missing[:10]}")
            return not dup and not missing, "; ".join(detail) or f"bijection with {len(part)} classes"

        def table1():
            labels = sorted(k for k in squares if isinstance(k, int))
            if labels != list(range(1, 187)):
                return False, "needs the full appendix"
            P = main_ds_classes([squares[i] for i in labels], labels)
            got = sorted(sorted(c) for c in P.labelled())
            exp = sorted(sorted(c) for c in T["main_classes"])
            return got == exp, f"{len(got)} main classes"

        def q_family():
            from divsudoku.classification import appendix_class_map

            look = ds_class_lookup(threads)
            inv = {v: k for k, v in appendix_class_map(threads).items()}
            Q, R, Ld = named("Q"), named("Q_rdiv"), named("Q_ldiv")
            forms = {"id": Q, "(12)": conjugate(Q, "(12)"), "rdiv": R, "rdiv(12)": conjugate(R, "(12)"),
                     "ldiv": Ld, "ldiv(12)": conjugate(Ld, "(12)")}
            got = {k: inv[look(v)] for k, v in forms.items()}
            return got == T["q_conjugate_classes"], str(got)

        checks += [_check("appendix/class bijection", bijection), _check("Table 1", table1),
                   _check("(Q,.) conjugate classes", q_family)]

    return {"checks": checks, "pass": all(c["pass"] for c in checks)}
