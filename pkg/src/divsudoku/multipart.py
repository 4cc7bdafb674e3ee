"""Sudoku tri-partitions, pi and sigma, and synchronization by group action."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations, product
from math import comb, factorial, isqrt
from typing import NamedTuple, Sequence

import numpy as np

from divsudoku.core import (
    Isotopism,
    LatinSquare,
    Permutation,
    SudokuPartition,
    TriPartition,
    apply_isotopism,
    is_division_sudoku,
    standard_partition,
)


# --- the universe of sudoku partitions ---------------------------------------

def universe_size(m: int) -> int:
    return factorial(m * m) // (factorial(m) ** m * factorial(m))


@lru_cache(maxsize=4)
def partition_array(m: int) -> np.ndarray:
    """All sudoku partitions of ``m*m`` points as canonical block labels,
    one row each, in lexicographic order of their block lists."""
    n = m * m
    labels = np.full((1, n), -1, dtype=np.int8)
    for level in range(m):
        k = labels.shape[0]
        r = n - level * m
        rem = np.nonzero(labels == -1)[1].reshape(k, r)
        # the least remaining point opens the next block
        picks = np.array([(0,) + c for c in combinations(range(1, r), m - 1)], dtype=np.intp)
        new = np.repeat(labels, len(picks), axis=0)
        chosen = rem[:, picks].reshape(-1, m)
        rows = np.repeat(np.arange(new.shape[0]), m)
        new[rows, chosen.ravel()] = level
        labels = new
    assert labels.shape[0] == universe_size(m)
    return labels


@lru_cache(maxsize=4)
def universe(m: int) -> tuple[SudokuPartition, ...]:
    return tuple(SudokuPartition(row, m) for row in partition_array(m).tolist())


# --- the group preserving the standard partition -----------------------------

class PartitionGroup:
    """Permutations of ``0..m*m-1`` preserving the standard partition."""

    def __init__(self, m: int):
        self.m = m
        n = m * m
        within = list(permutations(range(m)))
        elems = []
        for outer in permutations(range(m)):
            for inner in product(within, repeat=m):
                p = [0] * n
                for b in range(m):
                    for i in range(m):
                        p[b * m + i] = outer[b] * m + inner[b][i]
                elems.append(tuple(p))
        self.elements = tuple(sorted(elems))
        assert len(self.elements) == factorial(m) ** (m + 1)

    def __len__(self):
        return len(self.elements)

    def transporters(self, src: SudokuPartition, dst: SudokuPartition) -> int:
        """Bitset of group elements ``g`` with ``g(src) = dst``."""
        bits = 0
        for i, g in enumerate(self.elements):
            if src.image(g) == dst:
                bits |= 1 << i
        return bits

    def orbit(self, p: SudokuPartition) -> set[SudokuPartition]:
        return {p.image(g) for g in self.elements}


@lru_cache(maxsize=2)
def partition_group(m: int = 3) -> PartitionGroup:
    return PartitionGroup(m)


# --- tri-partitions -----------------------------------------------------------

_TRIPLES = tuple(combinations(range(9), 3))


def transversal_partitions(rows: Sequence[int], cols: Sequence[int]) -> list[list[list[tuple[int, int]]]]:
    """The partitions of a 3x3 grid into three transversals: broken diagonals
    and broken antidiagonals."""
    diag = [[(rows[i], cols[(i + k) % 3]) for i in range(3)] for k in range(3)]
    anti = [[(rows[i], cols[(k - i) % 3]) for i in range(3)] for k in range(3)]
    return [diag, anti]


def full_subsquare_columns(L: LatinSquare, B: Sequence[int]) -> list[tuple[int, ...]]:
    """Column triples ``S`` such that ``B x S`` holds all nine symbols."""
    masks = [0] * 9
    for c in range(9):
        for r in B:
            masks[c] |= 1 << L.rows[r][c]
    return [S for S in _TRIPLES if masks[S[0]] | masks[S[1]] | masks[S[2]] == 0x1FF]


def tri_partitions(L: LatinSquare) -> list[TriPartition]:
    """All tri-partitions making ``L`` (order 9) a division sudoku.

    Listed in search order: row partitions, then column partitions, in
    lexicographic order, broken diagonals before broken antidiagonals.
    """
    if L.n != 9:
        raise ValueError("tri-partition search is implemented for order 9")
    U = universe(3)
    cand = {B: set(full_subsquare_columns(L, B)) for B in _TRIPLES}
    found: dict[TriPartition, None] = {}
    for rp in U:
        B1, B2, B3 = rp.blocks
        common = cand[B1] & cand[B2] & cand[B3]
        if len(common) < 3:
            continue
        for cp in U:
            if not all(S in common for S in cp.blocks):
                continue
            for family in transversal_partitions(B1, cp.blocks[0]):
                pp = SudokuPartition.from_blocks([[L.rows[x][y] for x, y in t] for t in family])
                tri = TriPartition(rp, cp, pp)
                if is_division_sudoku(L, tri):
                    found[tri] = None
    return list(found)


def pi(L: LatinSquare) -> int:
    return len(tri_partitions(L))


def tri_partitions_pairwise(L: LatinSquare) -> list[TriPartition]:
    """Oracle: join the admissible (rows, cols), (rows, piles) and
    (cols, piles) pairs over the whole universe."""
    U = universe(3)
    trip = list(L.triples())

    def ok(a, b, pa, pb, third):
        seen = set()
        for t in trip:
            key = (pa.block_of[t[a]], pb.block_of[t[b]], t[third])
            if key in seen:
                return False
            seen.add(key)
        return True

    rc = [(p, q) for p in U for q in U if ok(0, 1, p, q, 2)]
    rs = {(p, q) for p in U for q in U if ok(0, 2, p, q, 1)}
    cs = {(p, q) for p in U for q in U if ok(1, 2, p, q, 0)}
    out = []
    for p, q in rc:
        for s in U:
            if (p, s) in rs and (q, s) in cs:
                out.append(TriPartition(p, q, s))
    return sorted(out)


# --- sigma ------------------------------------------------------------------

def _sigma_mask(L: LatinSquare, labels: np.ndarray) -> np.ndarray:
    """Boolean mask over partition rows for which ``L`` is a division sudoku
    with respect to the synchronized partition."""
    n = L.n
    cells = np.array(list(L.triples()), dtype=np.intp)  # (n*n, 3)
    alive = np.ones(labels.shape[0], dtype=bool)
    for a, b, free in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        idx = np.nonzero(alive)[0]
        if idx.size == 0:
            break
        lab = labels[idx].astype(np.int32)
        m = isqrt(n)
        keys = (lab[:, cells[:, a]] * m + lab[:, cells[:, b]]) * n + cells[:, free][None, :]
        keys.sort(axis=1)
        good = ~(keys[:, 1:] == keys[:, :-1]).any(axis=1)
        alive[idx[~good]] = False
    return alive


def sigma_partitions(L: LatinSquare, chunk: int = 50000) -> list[SudokuPartition]:
    """Every sudoku partition making ``L`` a division sudoku, by full scan."""
    m = isqrt(L.n)
    if m * m != L.n:
        raise ValueError("order must be a perfect square")
    labels = partition_array(m)
    hits = []
    for start in range(0, labels.shape[0], chunk):
        block = labels[start:start + chunk]
        mask = _sigma_mask(L, block)
        hits.extend(SudokuPartition(row, m) for row in block[mask].tolist())
    out = sorted(hits)
    for p in out:
        if not is_division_sudoku(L, p):
            raise AssertionError(f"scan accepted {p} but the predicate rejects it")
    return out


def sigma(L: LatinSquare) -> tuple[int, list[SudokuPartition]]:
    if L.n == 9:
        parts = [t.rows for t in tri_partitions(L) if t.is_synchronized]
    else:
        parts = sigma_partitions(L)
    return len(parts), parts


# --- synchronization ------------------------------------------------------------

class Synchronization(NamedTuple):
    square: LatinSquare
    sigma: int
    partitions: list[SudokuPartition]
    isotopism: Isotopism


def synchronization(L: LatinSquare) -> Synchronization:
    """Find a ds-isotopic copy of ``L`` with the most sudoku partitions.

    A set of tri-partitions can be synchronized at once by ``(1, g, h)`` with
    ``g, h`` preserving the standard partition exactly when the sets
    ``{g : g(Y^S) = Y^B}`` share an element and so do ``{h : h(Y^P) = Y^B}``.
    The largest such set is found by backtracking over bitsets.
    """
    if L.n != 9 or not is_division_sudoku(L):
        raise ValueError("input is not a standard division sudoku of rank 3")
    G = partition_group(3)
    tris = tri_partitions(L)
    full = (1 << len(G)) - 1
    cands = []
    for Y in tris:
        gs = G.transporters(Y.cols, Y.rows)
        hs = G.transporters(Y.syms, Y.rows)
        if gs and hs:
            cands.append((Y, gs, hs))

    best: list = []
    best_masks = (full, full)

    def search(i, chosen, gm, hm):
        nonlocal best, best_masks
        if len(chosen) > len(best):
            best, best_masks = list(chosen), (gm, hm)
        if len(chosen) + len(cands) - i <= len(best):
            return
        for j in range(i, len(cands)):
            Y, gs, hs = cands[j]
            g2, h2 = gm & gs, hm & hs
            if g2 and h2:
                chosen.append(Y)
                search(j + 1, chosen, g2, h2)
                chosen.pop()

    search(0, [], full, full)
    gm, hm = best_masks
    g = G.elements[(gm & -gm).bit_length() - 1]
    h = G.elements[(hm & -hm).bit_length() - 1]
    iso = Isotopism(Permutation.identity(9), Permutation(g), Permutation(h))
    M = apply_isotopism(L, iso)
    count, parts = sigma(M)
    if count != len(best):
        raise AssertionError(f"expected sigma {len(best)}, found {count}")
    return Synchronization(M, count, parts, iso)


def synchronize(L: LatinSquare) -> tuple[LatinSquare, int]:
    res = synchronization(L)
    return res.square, res.sigma


def is_affine_collection(partitions: Sequence[SudokuPartition]) -> bool:
    """Blocks from distinct partitions always meet in exactly one point."""
    ranks = {p.rank for p in partitions}
    if len(ranks) > 1:
        raise ValueError("partitions of different ranks")
    for p, q in combinations(partitions, 2):
        for a in p.blocks:
            for b in q.blocks:
                if len(set(a) & set(b)) != 1:
                    return False
    return True


def standard_universe_checks(m: int) -> dict:
    return {
        "universe": len(universe(m)) if m <= 3 else int(partition_array(m).shape[0]),
        "closed_form": universe_size(m),
        "product_form": int(np.prod([comb(m * m - i * m - 1, m - 1) for i in range(m)])),
    }


__all__ = [
    "PartitionGroup", "Synchronization", "full_subsquare_columns", "is_affine_collection",
    "partition_array", "partition_group", "pi", "sigma", "sigma_partitions",
    "standard_partition", "synchronization", "synchronize", "transversal_partitions",
    "tri_partitions", "tri_partitions_pairwise", "universe", "universe_size",
]
