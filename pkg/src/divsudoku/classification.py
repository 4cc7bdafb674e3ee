"""ds-isotopism, ds-paratopism and isotopism classification of division sudokus."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from math import isqrt
from typing import Sequence

from divsudoku.core import (
    CONJUGATES,
    Isotopism,
    LatinSquare,
    Permutation,
    apply_isotopism,
    conjugate,
    is_sudoku,
)
from divsudoku.enumeration import _template_cells, canonicalize_to_template, extends_template, extensions
from divsudoku.invariants import canonical_key, find_intercalates, intercalate_invariant


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if y < x:
            x, y = y, x
        self.parent[y] = x  # smallest index stays the root
        return True

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return sorted(out.values())


@dataclass
class ClassPartition:
    """Classes over an indexed list of squares; class ``k`` is ``classes[k]``."""

    squares: Sequence[LatinSquare]
    classes: list[list[int]]
    labels: Sequence | None = None
    class_of: dict[int, int] = field(init=False)

    def __post_init__(self):
        self.classes = sorted(sorted(c) for c in self.classes)
        self.class_of = {i: k for k, c in enumerate(self.classes) for i in c}

    @property
    def representatives(self) -> list[LatinSquare]:
        return [min(self.squares[i] for i in c) for c in self.classes]

    @property
    def sizes(self) -> Counter:
        return Counter(len(c) for c in self.classes)

    def __len__(self):
        return len(self.classes)

    def labelled(self) -> list[list]:
        if self.labels is None:
            return self.classes
        return [[self.labels[i] for i in c] for c in self.classes]


def _block_third(e: int, a: int, b: int) -> int:
    lo = (e // 3) * 3
    (c,) = {lo, lo + 1, lo + 2} - {a, b}
    return c


def _is_block_preserving(p: Sequence[int], m: int) -> bool:
    for lo in range(0, m * m, m):
        blk = {p[e] // m for e in range(lo, lo + m)}
        if len(blk) != 1:
            return False
    return True


def _is_perm(p) -> bool:
    return len(set(p)) == len(p)


def _template_chase(Q1: LatinSquare, ldiv1, rdiv1, a1, a2, b1, b2):
    """Reconstruct a ds-isotopism from ``Q1`` onto a template extension from
    ``alpha^-1(1), alpha^-1(2), beta^-1(1), beta^-1(2)`` (0-based 0 and 1).

    Returns the inverse maps ``(ainv, binv, ginv)`` or None.
    """
    rows = Q1.rows
    ainv = [-1] * 9
    binv = [-1] * 9
    ainv[0], ainv[1], ainv[2] = a1, a2, _block_third(a1, a1, a2)
    binv[0], binv[1], binv[2] = b1, b2, _block_third(b1, b1, b2)
    ginv = [-1] * 9
    for x, y, z in _template_cells():
        if x < 3 and y < 3:
            ginv[z] = rows[ainv[x]][binv[y]]
    if not _is_block_preserving(ginv, 3):
        return None
    for x, y, z in _template_cells():
        if x < 3 <= y:
            binv[y] = ldiv1[ainv[x]][ginv[z]]
    if not (_is_perm(binv) and _is_block_preserving(binv, 3)):
        return None
    for x, y, z in _template_cells():
        if y < 3 <= x:
            ainv[x] = rdiv1[ginv[z]][binv[y]]
    if not (_is_perm(ainv) and _is_block_preserving(ainv, 3)):
        return None
    return ainv, binv, ginv


def _parameter_tuples():
    for a1 in range(9):
        lo = (a1 // 3) * 3
        for a2 in range(lo, lo + 3):
            if a2 == a1:
                continue
            for b1 in range(9):
                lo2 = (b1 // 3) * 3
                for b2 in range(lo2, lo2 + 3):
                    if b2 != b1:
                        yield a1, a2, b1, b2


def template_images(Q1: LatinSquare):
    """Yield ``(Q2, isotopism)`` for every template extension ``Q2`` reachable
    from ``Q1`` by a ds-isotopism, one per parameter tuple that succeeds."""
    ldiv1, rdiv1 = Q1.ldiv_table(), Q1.rdiv_table()
    for params in _parameter_tuples():
        res = _template_chase(Q1, ldiv1, rdiv1, *params)
        if res is None:
            continue
        ainv, binv, ginv = res
        iso = Isotopism(Permutation(ainv).inverse(), Permutation(binv).inverse(), Permutation(ginv).inverse())
        Q2 = apply_isotopism(Q1, iso)
        if extends_template(Q2):
            yield Q2, iso


def ds_isotopism_between_template_extensions(Q1: LatinSquare, Q2: LatinSquare) -> Isotopism | None:
    if not (extends_template(Q1) and extends_template(Q2)):
        raise ValueError("both squares must extend the template")
    for img, iso in template_images(Q1):
        if img == Q2:
            return iso
    return None


def ds_isotopism_general(Q1: LatinSquare, Q2: LatinSquare, m: int | None = None) -> Isotopism | None:
    """Search ds-isotopisms ``Q1 -> Q2`` for the standard partition of rank ``m``.

    Fixes the images of the first ``m-1`` rows and columns of block 1 inside
    a common block, then completes the maps from the multiplication tables.
    """
    n = Q1.n
    m = m or isqrt(n)
    if m * m != n or Q2.n != n:
        raise ValueError("orders must be equal to m*m")
    if not (is_sudoku(Q1) and is_sudoku(Q2)):
        raise ValueError("both squares must be standard sudokus")
    r1, r2 = Q1.rows, Q2.rows
    ldiv2, rdiv2 = Q2.ldiv_table(), Q2.rdiv_table()

    def partial_maps():
        for blk in range(m):
            members = range(blk * m, blk * m + m)
            for imgs in permutations(members, m - 1):
                last = (set(members) - set(imgs)).pop()
                yield list(imgs) + [last]

    block_maps = list(partial_maps())
    for amap in block_maps:
        for bmap in block_maps:
            gamma = [-1] * n
            ok = True
            for a in range(m):
                for b in range(m):
                    z = r1[a][b]
                    gamma[z] = r2[amap[a]][bmap[b]]
            if not (_is_perm(gamma) and _is_block_preserving(gamma, m)):
                continue
            b0 = 0
            alpha = [rdiv2[gamma[r1[x][b0]]][bmap[b0]] for x in range(n)]
            if not (_is_perm(alpha) and _is_block_preserving(alpha, m)):
                continue
            a0 = 0
            beta = [ldiv2[alpha[a0]][gamma[r1[a0][y]]] for y in range(n)]
            if not (_is_perm(beta) and _is_block_preserving(beta, m)):
                continue
            for x in range(n):
                ax, rx = r2[alpha[x]], r1[x]
                for y in range(n):
                    if ax[beta[y]] != gamma[rx[y]]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return Isotopism(Permutation(alpha), Permutation(beta), Permutation(gamma))
    return None


def isotopy_invariant(L: LatinSquare):
    """Intercalate count plus row-pair and column-pair cycle-type multisets."""
    def pair_types(rows):
        n = len(rows)
        pos = [{v: j for j, v in enumerate(r)} for r in rows]
        types = []
        for i in range(n):
            for k in range(i + 1, n):
                p = Permutation(pos[k][v] for v in rows[i])
                types.append(p.cycle_type())
        return tuple(sorted(types))

    cols = [L.col_perm(y) for y in range(L.n)]
    return (len(find_intercalates(L)), pair_types(L.rows), pair_types(cols))


def isotopism_general(Q1: LatinSquare, Q2: LatinSquare, prescreen: bool = True) -> Isotopism | None:
    """Search isotopisms ``Q1 -> Q2`` by fixing alpha and beta on the first
    block of a sudoku ``Q1``; gamma, then alpha and beta, follow by division."""
    n = Q1.n
    if Q2.n != n:
        return None
    if prescreen and isotopy_invariant(Q1) != isotopy_invariant(Q2):
        return None
    m = isqrt(n)
    A = list(range(m))
    r1, r2 = Q1.rows, Q2.rows
    if len({r1[a][b] for a in A for b in A}) != n:
        raise ValueError("first minisquare of Q1 must contain every symbol")
    ldiv2, rdiv2 = Q2.ldiv_table(), Q2.rdiv_table()

    for amap in permutations(range(n), m):
        rows2 = [r2[amap[a]] for a in A]
        gamma = [-1] * n
        used = [False] * n
        bmap = [0] * m

        def extend_beta(j):
            if j == m:
                return finish()
            for bv in range(n):
                if bv in bmap[:j]:
                    continue
                assigned = []
                ok = True
                for a in A:
                    z, w = r1[a][j], rows2[a][bv]
                    if gamma[z] == -1:
                        if used[w]:
                            ok = False
                            break
                        gamma[z] = w
                        used[w] = True
                        assigned.append(z)
                    elif gamma[z] != w:
                        ok = False
                        break
                if ok:
                    bmap[j] = bv
                    res = extend_beta(j + 1)
                    if res is not None:
                        return res
                for z in assigned:
                    used[gamma[z]] = False
                    gamma[z] = -1
            return None

        def finish():
            alpha = [rdiv2[gamma[r1[x][0]]][bmap[0]] for x in range(n)]
            if not _is_perm(alpha):
                return None
            beta = [ldiv2[alpha[0]][gamma[r1[0][y]]] for y in range(n)]
            if not _is_perm(beta):
                return None
            for x in range(n):
                ax, rx = r2[alpha[x]], r1[x]
                for y in range(n):
                    if ax[beta[y]] != gamma[rx[y]]:
                        return None
            return Isotopism(Permutation(alpha), Permutation(beta), Permutation(gamma))

        res = extend_beta(0)
        if res is not None:
            return res
    return None


# --- class computations -----------------------------------------------------

@lru_cache(maxsize=2)
def _ds_classes_cached(threads: int = 1) -> ClassPartition:
    return ds_classes(list(extensions(threads)))


def ds_classes(exts: Sequence[LatinSquare], exhaustive: bool = False) -> ClassPartition:
    """Partition template extensions into ds-isotopism classes.

    Each square's ds-images in template form are generated from the 324
    parameter tuples and merged by union-find.  Unless ``exhaustive``, a
    square already merged into a processed class is skipped, because its
    images are exactly that class.
    """
    index = {L: i for i, L in enumerate(exts)}
    if len(index) != len(exts):
        raise ValueError("duplicate squares in input")
    uf = UnionFind(len(exts))
    done = [False] * len(exts)
    for i, Q1 in enumerate(exts):
        if done[i] and not exhaustive:
            continue
        for Q2, _ in template_images(Q1):
            j = index.get(Q2)
            if j is None:
                raise ValueError("input is missing a template extension ds-isotopic to a member")
            uf.union(i, j)
            done[j] = True
    return ClassPartition(exts, uf.groups())


def ds_class_lookup(threads: int = 1):
    """Map any standard rank-3 division sudoku to its ds-class id among the
    template extensions."""
    part = _ds_classes_cached(threads)
    index = {L: i for i, L in enumerate(part.squares)}

    def lookup(L: LatinSquare) -> int:
        M, _ = canonicalize_to_template(L)
        return part.class_of[index[M]]

    return lookup


def appendix_class_map(threads: int = 1) -> dict[int, int]:
    """Appendix label -> computed ds-class id."""
    from divsudoku.corpus import appendix

    lookup = ds_class_lookup(threads)
    return {i: lookup(L) for i, L in appendix().items()}


def main_ds_classes(reps: Sequence[LatinSquare], labels: Sequence | None = None) -> ClassPartition:
    """Group ds-class representatives into main ds-classes.

    Each conjugate of each representative is matched against the
    representatives with the same intercalate-invariant key by a
    general ds-isotopism search.
    """
    keys = [canonical_key(intercalate_invariant(L)) for L in reps]
    by_key: dict = {}
    for j, k in enumerate(keys):
        by_key.setdefault(k, []).append(j)
    uf = UnionFind(len(reps))
    for i, L in enumerate(reps):
        for theta in CONJUGATES.values():
            if theta == (0, 1, 2):
                continue
            C = conjugate(L, theta)
            for j in by_key.get(canonical_key(intercalate_invariant(C)), ()):
                if uf.find(i) == uf.find(j):
                    continue
                if ds_isotopism_general(C, reps[j], 3) is not None:
                    uf.union(i, j)
    return ClassPartition(reps, uf.groups(), labels)


def isotopism_classes(reps: Sequence[LatinSquare], labels: Sequence | None = None) -> ClassPartition:
    inv = [isotopy_invariant(L) for L in reps]
    uf = UnionFind(len(reps))
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if inv[i] != inv[j] or uf.find(i) == uf.find(j):
                continue
            if isotopism_general(reps[i], reps[j], prescreen=False) is not None:
                uf.union(i, j)
    return ClassPartition(reps, uf.groups(), labels)


def loop_isotope(L: LatinSquare) -> LatinSquare:
    """Principal loop isotope ``x o y = (x / b) * (a \\ y)`` with ``a = b = 0``."""
    n = L.n
    rdiv, ldiv = L.rdiv_table(), L.ldiv_table()
    rows = L.rows
    return LatinSquare([[rows[rdiv[x][0]][ldiv[0][y]] for y in range(n)] for x in range(n)], check=False)


def is_associative(L: LatinSquare) -> bool:
    r = L.rows
    n = L.n
    return all(r[x][r[y][z]] == r[r[x][y]][z] for x in range(n) for y in range(n) for z in range(n))


def is_isotopic_to_group(L: LatinSquare) -> bool:
    # a loop isotopic to a group is isomorphic to it
    return is_associative(loop_isotope(L))


def not_isotopic_to_transpose(Q: LatinSquare) -> bool:
    """True when no isotopism maps ``Q`` onto its transpose.

    Symmetric squares are answered directly; otherwise ``Q`` must be a
    sudoku so the block-driven isotopism search applies.
    """
    T = conjugate(Q, "(12)")
    if T == Q:
        return False
    return isotopism_general(Q, T) is None


def translation_has_cycle(perm: Sequence[int], length: int) -> bool:
    return length in Permutation(perm).cycle_type()
