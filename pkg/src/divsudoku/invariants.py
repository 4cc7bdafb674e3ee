"""Intercalate and minisquare structure invariants of rank-3 standard
division sudokus, with equivalence testing and canonical keys.

Types are numbered 0 = band (rows), 1 = stack (columns), 2 = pile (symbols),
matching the coordinate order of a cell triple.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import NamedTuple

from divsudoku.core import LatinSquare, is_division_sudoku

TYPE_NAMES = "BSP"
_S3 = tuple(permutations(range(3)))
_RELABELINGS = tuple(product(_S3, repeat=3))


class Intercalate(NamedTuple):
    rows: tuple[int, int]
    cols: tuple[int, int]
    symbols: tuple[int, int]


def find_intercalates(L: LatinSquare) -> list[Intercalate]:
    """Every 2x2 latin subsquare, each listed once with sorted rows/columns."""
    n = L.n
    rows = L.rows
    pos = [{v: y for y, v in enumerate(r)} for r in rows]
    out = []
    for r1 in range(n):
        for r2 in range(r1 + 1, n):
            a_row, b_row = rows[r1], rows[r2]
            for c1 in range(n):
                a, b = a_row[c1], b_row[c1]
                c2 = pos[r1][b]
                if c2 > c1 and b_row[c2] == a:
                    out.append(Intercalate((r1, r2), (c1, c2), tuple(sorted((a, b)))))
    return out


def _require_rank3(L: LatinSquare) -> None:
    if L.n != 9:
        raise ValueError("structure invariants are defined for rank 3 only")
    if not is_division_sudoku(L):
        raise ValueError("input is not a standard division sudoku")


def _block_of(pair: tuple[int, int]) -> tuple[int, bool]:
    """Block containing both coordinates, or the block avoiding both."""
    b1, b2 = pair[0] // 3, pair[1] // 3
    if b1 == b2:
        return b1, True
    return 3 - b1 - b2, False


@dataclass(frozen=True)
class IntercalateInvariant:
    hyperedges: frozenset  # of (band, stack, pile)

    @property
    def bits(self) -> tuple:
        return tuple(tuple(tuple(int((b, s, p) in self.hyperedges) for p in range(3))
                           for s in range(3)) for b in range(3))

    def relabel(self, perms) -> "IntercalateInvariant":
        pb, ps, pp = perms
        return IntercalateInvariant(frozenset((pb[b], ps[s], pp[p]) for b, s, p in self.hyperedges))

    def serialize(self) -> tuple:
        return tuple(sorted(self.hyperedges))

    def render(self) -> str:
        return " ".join(f"(B{b + 1},S{s + 1},P{p + 1})" for b, s, p in self.serialize())


@dataclass(frozen=True)
class MinisquareInvariant:
    edges: frozenset  # of ((type, block), (type, block))

    def relabel(self, perms) -> "MinisquareInvariant":
        return MinisquareInvariant(frozenset(
            ((t1, perms[t1][v1]), (t2, perms[t2][v2])) for (t1, v1), (t2, v2) in self.edges))

    def serialize(self) -> tuple:
        return tuple(sorted(self.edges))

    def render(self) -> str:
        return " ".join(f"{TYPE_NAMES[t1]}{v1 + 1}->{TYPE_NAMES[t2]}{v2 + 1}"
                        for (t1, v1), (t2, v2) in self.serialize())


def intercalate_invariant(L: LatinSquare) -> IntercalateInvariant:
    _require_rank3(L)
    edges = set()
    for ic in find_intercalates(L):
        band, in_band = _block_of(ic.rows)
        stack, in_stack = _block_of(ic.cols)
        pile, in_pile = _block_of(ic.symbols)
        if in_band + in_stack + in_pile > 1:
            raise AssertionError(f"intercalate {ic} lies in more than one block type")
        edges.add((band, stack, pile))
    return IntercalateInvariant(frozenset(edges))


def minisquare_invariant(L: LatinSquare) -> MinisquareInvariant:
    """Edges ``X -> Y`` between blocks of different types.

    For an X-block ``x`` and a Y-block ``y``, each Y-coordinate ``c`` outside
    ``y`` carries the set of Z-values over cells with X-coordinate in ``x``
    and Y-coordinate ``c``; the edge exists when the two other Y-blocks carry
    equal families of such sets.  With X, Y = rows, columns these are the
    minicolumn symbol sets; the other pairs are the same rule applied to
    conjugates.
    """
    _require_rank3(L)
    triples = list(L.triples())
    edges = set()
    for X in range(3):
        for Y in range(3):
            if X == Y:
                continue
            Z = 3 - X - Y
            sets = {}
            for t in triples:
                sets.setdefault((t[X] // 3, t[Y]), set()).add(t[Z])
            for x in range(3):
                fam = [frozenset(frozenset(sets[(x, c)]) for c in range(3 * b, 3 * b + 3)) for b in range(3)]
                for y in range(3):
                    o1, o2 = [b for b in range(3) if b != y]
                    if fam[o1] == fam[o2]:
                        edges.add(((X, x), (Y, y)))
    return MinisquareInvariant(frozenset(edges))


def _kind(a) -> str:
    if isinstance(a, IntercalateInvariant):
        return "iota"
    if isinstance(a, MinisquareInvariant):
        return "mu"
    raise TypeError(f"not a structure invariant: {type(a).__name__}")


def invariants_equivalent(a, b) -> bool:
    if _kind(a) != _kind(b):
        raise TypeError("cannot compare invariants of different kinds")
    return any(a.relabel(p) == b for p in _RELABELINGS)


def canonical_key(a) -> tuple:
    """Minimum serialized form over the 216 within-type relabelings."""
    return (_kind(a), min(a.relabel(p).serialize() for p in _RELABELINGS))


def joint_key(iota: IntercalateInvariant, mu: MinisquareInvariant) -> tuple:
    """Canonical key of the pair under a common relabeling."""
    return min((iota.relabel(p).serialize(), mu.relabel(p).serialize()) for p in _RELABELINGS)


def square_keys(L: LatinSquare) -> tuple:
    return canonical_key(intercalate_invariant(L)), canonical_key(minisquare_invariant(L))
