"""Text formats: squares as whitespace-separated 1-based rows, partitions in
compact ``{123 456 789}`` or pipe-delimited ``1,2|3,4`` form."""

from __future__ import annotations

import re

from divsudoku.core import LatinSquare, SudokuPartition, latin_violation, render_partition


class FormatError(ValueError):
    pass


class MalformedLine(FormatError):
    pass


class SymbolOutOfRange(FormatError):
    pass


class LatinViolation(FormatError):
    pass


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_square(text: str) -> LatinSquare:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        try:
            rows.append([int(tok) for tok in line.split()])
        except ValueError:
            raise MalformedLine(f"line {lineno}: non-integer token in {raw.strip()!r}") from None
    return _square_from_rows(rows)


def _square_from_rows(rows: list[list[int]], strict: bool = True) -> LatinSquare:
    n = len(rows)
    if n == 0:
        raise MalformedLine("empty square")
    for i, r in enumerate(rows):
        if len(r) != n:
            raise MalformedLine(f"row {i + 1} has {len(r)} entries, expected {n}")
        for j, v in enumerate(r):
            if not 1 <= v <= n:
                raise SymbolOutOfRange(f"row {i + 1}, column {j + 1}: symbol {v} outside 1..{n}")
    zero = [[v - 1 for v in r] for r in rows]
    if not strict:
        return LatinSquare(zero, check=False)
    problem = latin_violation(zero)
    if problem:
        raise LatinViolation(problem)
    return LatinSquare(zero, check=False)


def render_square(L: LatinSquare) -> str:
    width = len(str(L.n))
    return "\n".join(" ".join(str(v + 1).rjust(width) for v in r) for r in L.rows) + "\n"


def parse_squares(text: str, strict: bool = True) -> list[tuple[str, LatinSquare, dict]]:
    """Parse a multi-square file.

    Squares are separated by blank lines.  The last ``# label`` comment
    before a block names it; ``# key: value`` comments become metadata.
    With ``strict=False`` non-latin arrays are returned unchecked.
    """
    out = []
    label, meta, rows = None, {}, []

    def flush():
        nonlocal label, meta, rows
        if rows:
            name = label if label is not None else f"square{len(out) + 1}"
            out.append((name, _square_from_rows(rows, strict), meta))
        label, meta, rows = None, {}, []

    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s:
            flush()
            continue
        if s.startswith("#"):
            body = s[1:].strip()
            m = re.match(r"^(\w+):\s*(.*)$", body)
            if m:
                meta[m.group(1)] = m.group(2)
            elif body:
                label = body
            continue
        try:
            rows.append([int(tok) for tok in _strip(s).split()])
        except ValueError:
            raise MalformedLine(f"line {lineno}: non-integer token in {s!r}") from None
    flush()
    return out


def render_squares(items) -> str:
    chunks = []
    for label, L in items:
        chunks.append(f"# {label}\n" + render_square(L))
    return "\n".join(chunks)


def parse_partition(text: str) -> SudokuPartition:
    s = text.strip()
    if "|" in s or "," in s:
        blocks = [[int(t) - 1 for t in blk.split(",") if t.strip()] for blk in s.strip("{}").split("|")]
    else:
        body = s.strip("{}").split()
        blocks = [[int(ch) - 1 for ch in tok] for tok in body]
    try:
        return SudokuPartition.from_blocks(blocks)
    except ValueError as exc:
        raise FormatError(f"not a sudoku partition: {text!r} ({exc})") from None


__all__ = [
    "FormatError", "MalformedLine", "SymbolOutOfRange", "LatinViolation",
    "parse_square", "render_square", "parse_squares", "render_squares",
    "parse_partition", "render_partition",
]
