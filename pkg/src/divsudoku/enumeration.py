"""Template completion search and canonicalization into template form."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Iterator, Sequence

from divsudoku.core import (
    Isotopism,
    LatinSquare,
    Permutation,
    apply_isotopism,
    is_division_sudoku,
)

# Figure-1 partial table, 1-based, '.' = empty.
_TEMPLATE_TEXT = """\
1 4 7 2 . . 3 . .
8 2 5 . 3 . . 1 .
6 9 3 . . 1 . . 2
2 . . . . . . . .
. 3 . . . . . . .
. . 1 . . . . . .
3 . . . . . . . .
. 1 . . . . . . .
. . 2 . . . . . .
"""

# Identification factor per template extension: |Sym(3)|^4 * 2 * (6^2 * 2)^2.
CLASS_FACTOR = 6 ** 4 * 2 * (6 ** 2 * 2) ** 2

PartialSquare = tuple[tuple[int | None, ...], ...]


def template() -> PartialSquare:
    rows = []
    for line in _TEMPLATE_TEXT.splitlines():
        rows.append(tuple(None if t == "." else int(t) - 1 for t in line.split()))
    return tuple(rows)


@lru_cache(maxsize=None)
def _template_cells() -> tuple[tuple[int, int, int], ...]:
    return tuple((x, y, v) for x, r in enumerate(template()) for y, v in enumerate(r) if v is not None)


def extends_template(L: LatinSquare) -> bool:
    return L.n == 9 and all(L.rows[x][y] == v for x, y, v in _template_cells())


class SearchState:
    """Bitmask bookkeeping for completing a partial standard division sudoku.

    A symbol may go in a cell when it is new to the row, the column and the
    minisquare, and its pile is new to the minirow and the minicolumn.  For
    full squares these conditions are exactly the division-sudoku property.
    """

    def __init__(self, partial: Sequence[Sequence[int | None]], m: int = 3):
        n = m * m
        self.m, self.n = m, n
        self.full = (1 << n) - 1
        self.grid = [list(r) for r in partial]
        self.row = [0] * n
        self.col = [0] * n
        self.box = [0] * n
        self.minirow = [[0] * m for _ in range(n)]  # pile bits per (row, stack)
        self.minicol = [[0] * n for _ in range(m)]  # pile bits per (band, column)
        self.pile_syms = [sum(1 << (p * m + k) for k in range(m)) for p in range(m)]
        self.pile_union = [0] * (1 << m)
        for bits in range(1 << m):
            self.pile_union[bits] = sum(self.pile_syms[p] for p in range(m) if bits >> p & 1)
        self.ok = True
        for x in range(n):
            for y in range(n):
                v = self.grid[x][y]
                if v is not None:
                    if not self.allowed(x, y) >> v & 1:
                        self.ok = False
                    self.place(x, y, v)

    def allowed(self, x: int, y: int) -> int:
        m = self.m
        used = self.row[x] | self.col[y] | self.box[(x // m) * m + y // m]
        used |= self.pile_union[self.minirow[x][y // m] | self.minicol[x // m][y]]
        return self.full & ~used

    def place(self, x: int, y: int, v: int) -> None:
        m = self.m
        bit = 1 << v
        self.grid[x][y] = v
        self.row[x] |= bit
        self.col[y] |= bit
        self.box[(x // m) * m + y // m] |= bit
        self.minirow[x][y // m] |= 1 << (v // m)
        self.minicol[x // m][y] |= 1 << (v // m)

    def unplace(self, x: int, y: int, v: int) -> None:
        m = self.m
        bit = ~(1 << v)
        self.grid[x][y] = None
        self.row[x] &= bit
        self.col[y] &= bit
        self.box[(x // m) * m + y // m] &= bit
        self.minirow[x][y // m] &= ~(1 << (v // m))
        self.minicol[x // m][y] &= ~(1 << (v // m))

    def empty_cells(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.n) for y in range(self.n) if self.grid[x][y] is None]

    def solutions(self) -> Iterator[tuple[tuple[int, ...], ...]]:
        """Yield every completion (unordered; the caller sorts)."""
        if not self.ok:
            return
        empty = self.empty_cells()
        yield from self._search(empty)

    def _search(self, empty):
        if not empty:
            yield tuple(tuple(r) for r in self.grid)
            return
        # most constrained cell first
        best_i, best_mask, best_cnt = -1, 0, 99
        for i, (x, y) in enumerate(empty):
            mask = self.allowed(x, y)
            cnt = bin(mask).count("1")
            if cnt < best_cnt:
                best_i, best_mask, best_cnt = i, mask, cnt
                if cnt == 0:
                    return
        x, y = empty[best_i]
        rest = empty[:best_i] + empty[best_i + 1:]
        mask = best_mask
        while mask:
            low = mask & -mask
            v = low.bit_length() - 1
            mask ^= low
            self.place(x, y, v)
            yield from self._search(rest)
            self.unplace(x, y, v)


def complete(partial: Sequence[Sequence[int | None]], m: int = 3) -> list[LatinSquare]:
    """All standard division sudokus of rank ``m`` extending ``partial``, sorted."""
    sols = sorted(SearchState(partial, m).solutions())
    return [LatinSquare(s, check=False) for s in sols]


def _split_tasks(partial, depth: int = 2) -> list[PartialSquare]:
    """Subproblems fixing the first ``depth`` empty cells (row-major)."""
    st = SearchState(partial)
    tasks = [tuple(tuple(r) for r in partial)]
    for x, y in st.empty_cells()[:depth]:
        nxt = []
        for p in tasks:
            s = SearchState(p)
            mask = s.allowed(x, y)
            for v in range(9):
                if mask >> v & 1:
                    g = [list(r) for r in p]
                    g[x][y] = v
                    nxt.append(tuple(tuple(r) for r in g))
        tasks = nxt
    return tasks


def _solve_task(p):
    return list(SearchState(p).solutions())


def subtree_counts(depth: int = 2) -> dict[PartialSquare, int]:
    return {p: len(_solve_task(p)) for p in _split_tasks(template(), depth)}


@lru_cache(maxsize=4)
def _extensions(threads: int = 1) -> tuple[LatinSquare, ...]:
    if threads > 1:
        tasks = _split_tasks(template())
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(_solve_task, tasks)
            sols = [s for part in parts for s in part]
    else:
        sols = list(SearchState(template()).solutions())
    sols.sort()
    return tuple(LatinSquare(s, check=False) for s in sols)


def enumerate_extensions(threads: int = 1) -> Iterator[LatinSquare]:
    """Every standard division sudoku of rank 3 extending the template, in
    lexicographic (row-major) order."""
    return iter(_extensions(threads))


def extensions(threads: int = 1) -> tuple[LatinSquare, ...]:
    return _extensions(threads)


def total_standard_count(threads: int = 1) -> int:
    return CLASS_FACTOR * len(_extensions(threads))


# --- canonicalization -------------------------------------------------------

def _diagonal_perm(L: LatinSquare, band: int, stack: int, by_rows: bool) -> list[int]:
    """Within-block row (or column) permutation putting symbols 0,1,2 of the
    minisquare on its main diagonal.  Returns old-index -> new-index."""
    lo_r, lo_c = 3 * band, 3 * stack
    perm = list(range(9))
    for x in range(lo_r, lo_r + 3):
        for y in range(lo_c, lo_c + 3):
            z = L.rows[x][y]
            if z < 3:
                # symbol z sits in row x, col y; its target diagonal slot is
                # given by the partner coordinate that stays fixed
                if by_rows:
                    perm[x] = lo_r + (y - lo_c)
                else:
                    perm[y] = lo_c + (x - lo_r)
    return perm


def canonicalize_to_template(L: LatinSquare) -> tuple[LatinSquare, Isotopism]:
    """Bring a standard rank-3 division sudoku into template form by a
    ds-isotopism; returns the template extension and the isotopism used."""
    if L.n != 9 or not is_division_sudoku(L):
        raise ValueError("input is not a standard division sudoku of rank 3")
    ident = Permutation.identity(9)
    iso = Isotopism(ident, ident, ident)

    def step(sq, a=ident, b=ident, g=ident):
        nonlocal iso
        s = Isotopism(Permutation(a), Permutation(b), Permutation(g))
        iso = iso.then(s)
        return apply_isotopism(sq, s)

    M = L
    # (a) top-left minisquare: make the pile pattern constant on the main diagonal
    piles = [[M.rows[x][y] // 3 for y in range(3)] for x in range(3)]
    if not (piles[0][0] == piles[1][1] == piles[2][2]):
        M = step(M, b=(0, 2, 1, 3, 4, 5, 6, 7, 8))
        piles = [[M.rows[x][y] // 3 for y in range(3)] for x in range(3)]
    # relabel symbols so the minisquare reads 1 4 7 / 8 2 5 / 6 9 3
    target = ((0, 3, 6), (7, 1, 4), (5, 8, 2))
    g = [0] * 9
    for x in range(3):
        for y in range(3):
            g[M.rows[x][y]] = target[x][y]
    M = step(M, g=g)
    # (b) band 1: diagonals of the other two minisquares carry 1,2,3
    b = list(range(9))
    for stack in (1, 2):
        p = _diagonal_perm(M, 0, stack, by_rows=False)
        for y in range(3 * stack, 3 * stack + 3):
            b[y] = p[y]
    M = step(M, b=b)
    if M.rows[0][3] != 1:  # row 1 must read 1 . . 2 . . 3 . .
        M = step(M, b=(0, 1, 2, 6, 7, 8, 3, 4, 5))
    # (c) stack 1, dually with rows
    a = list(range(9))
    for band in (1, 2):
        p = _diagonal_perm(M, band, 0, by_rows=True)
        for x in range(3 * band, 3 * band + 3):
            a[x] = p[x]
    M = step(M, a=a)
    if M.rows[3][0] != 1:
        M = step(M, a=(0, 1, 2, 6, 7, 8, 3, 4, 5))
    if not extends_template(M):
        raise AssertionError("canonicalization failed to reach template form")
    return M, iso
