"""Latin squares, permutations, sudoku partitions and division-sudoku predicates.

Symbols, rows and columns are 0-based internally.  Rendering and parsing
(see :mod:`divsudoku.formats`) use 1-based labels.
"""

from __future__ import annotations

from itertools import product
from math import isqrt
from typing import Iterable, Iterator, NamedTuple, Sequence


class LatinSquare:
    """An immutable n x n latin square over the symbols ``0..n-1``."""

    __slots__ = ("n", "rows", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]], check: bool = True):
        rows = tuple(tuple(int(v) for v in r) for r in rows)
        self.n = len(rows)
        self.rows = rows
        self._hash = hash(rows)
        if check:
            problem = latin_violation(rows)
            if problem is not None:
                raise ValueError(problem)

    def __call__(self, x: int, y: int) -> int:
        return self.rows[x][y]

    def __eq__(self, other):
        return isinstance(other, LatinSquare) and self.rows == other.rows

    def __lt__(self, other):
        return self.rows < other.rows

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"LatinSquare(n={self.n}, rows={self.rows!r})"

    @property
    def order(self) -> int:
        return self.n

    def flat(self) -> tuple[int, ...]:
        return tuple(v for r in self.rows for v in r)

    def triples(self):
        for x, r in enumerate(self.rows):
            for y, z in enumerate(r):
                yield (x, y, z)

    def row_perm(self, x: int) -> tuple[int, ...]:
        """Left translation ``y -> x*y``."""
        return self.rows[x]

    def col_perm(self, y: int) -> tuple[int, ...]:
        """Right translation ``x -> x*y``."""
        return tuple(r[y] for r in self.rows)

    def ldiv_table(self) -> list[list[int]]:
        """``T[x][z]`` is the unique ``y`` with ``x*y = z``."""
        n = self.n
        t = [[0] * n for _ in range(n)]
        for x, r in enumerate(self.rows):
            for y, z in enumerate(r):
                t[x][z] = y
        return t

    def rdiv_table(self) -> list[list[int]]:
        """``T[z][y]`` is the unique ``x`` with ``x*y = z``."""
        n = self.n
        t = [[0] * n for _ in range(n)]
        for x, r in enumerate(self.rows):
            for y, z in enumerate(r):
                t[z][y] = x
        return t

    def transpose(self) -> "LatinSquare":
        return LatinSquare(zip(*self.rows), check=False)


def latin_violation(rows: Sequence[Sequence[int]]) -> str | None:
    """Return a human-readable description of the first latin violation, or None."""
    n = len(rows)
    full = set(range(n))
    for i, r in enumerate(rows):
        if len(r) != n:
            return f"row {i + 1} has {len(r)} entries, expected {n}"
        for v in r:
            if not 0 <= v < n:
                return f"row {i + 1} contains out-of-range symbol {v + 1}"
        if set(r) != full:
            return f"row {i + 1} repeats a symbol"
    for j in range(n):
        if {rows[i][j] for i in range(n)} != full:
            return f"column {j + 1} repeats a symbol"
    return None


class Permutation(tuple):
    """A permutation of ``0..n-1`` stored as its tuple of images."""

    def __new__(cls, images: Iterable[int]):
        self = super().__new__(cls, images)
        if sorted(self) != list(range(len(self))):
            raise ValueError(f"not a permutation: {tuple(self)}")
        return self

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @property
    def degree(self) -> int:
        return len(self)

    def __call__(self, x: int) -> int:
        return self[x]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, v in enumerate(self):
            inv[v] = i
        return Permutation(inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """``self o other``: apply ``other`` first."""
        return Permutation(self[v] for v in other)

    def cycle_type(self) -> tuple[int, ...]:
        seen = [False] * len(self)
        lengths = []
        for i in range(len(self)):
            if not seen[i]:
                k, j = 0, i
                while not seen[j]:
                    seen[j] = True
                    j = self[j]
                    k += 1
                lengths.append(k)
        return tuple(sorted(lengths))

    def __repr__(self):
        return f"Permutation({tuple(self)})"


class Isotopism(NamedTuple):
    alpha: Permutation
    beta: Permutation
    gamma: Permutation

    @classmethod
    def identity(cls, n: int) -> "Isotopism":
        e = Permutation.identity(n)
        return cls(e, e, e)

    def inverse(self) -> "Isotopism":
        return Isotopism(self.alpha.inverse(), self.beta.inverse(), self.gamma.inverse())

    def then(self, other: "Isotopism") -> "Isotopism":
        """Apply ``self`` first, then ``other``."""
        return Isotopism(other.alpha.compose(self.alpha),
                         other.beta.compose(self.beta),
                         other.gamma.compose(self.gamma))


def apply_isotopism(L: LatinSquare, iso: Isotopism) -> LatinSquare:
    """Return ``M`` with ``M(alpha(x), beta(y)) = gamma(L(x, y))``."""
    a, b, g = iso
    n = L.n
    if not (len(a) == len(b) == len(g) == n):
        raise ValueError("isotopism degree does not match the order of the square")
    out = [[0] * n for _ in range(n)]
    for x, r in enumerate(L.rows):
        ax = out[a[x]]
        for y, z in enumerate(r):
            ax[b[y]] = g[z]
    return LatinSquare(out, check=False)


# Conjugate labels: theta as a tuple of 0-based images (theta(1), theta(2), theta(3)).
CONJUGATES = {
    "id": (0, 1, 2),
    "(12)": (1, 0, 2),
    "(13)": (2, 1, 0),
    "(23)": (0, 2, 1),
    "(123)": (1, 2, 0),
    "(132)": (2, 0, 1),
}


def conjugate_label(theta) -> tuple[int, int, int]:
    if isinstance(theta, str):
        return CONJUGATES[theta]
    theta = tuple(theta)
    if sorted(theta) != [0, 1, 2]:
        raise ValueError(f"not an element of Sym(3): {theta}")
    return theta


def compose_labels(theta, phi) -> tuple[int, int, int]:
    """Label ``psi`` with ``conjugate(conjugate(L, theta), phi) == conjugate(L, psi)``."""
    t, p = conjugate_label(theta), conjugate_label(phi)
    return (t[p[0]], t[p[1]], t[p[2]])


def conjugate(L: LatinSquare, theta) -> LatinSquare:
    """The conjugate whose orthogonal array is ``{(t[theta1], t[theta2], t[theta3])}``."""
    th = conjugate_label(theta)
    n = L.n
    out = [[0] * n for _ in range(n)]
    for t in L.triples():
        out[t[th[0]]][t[th[1]]] = t[th[2]]
    return LatinSquare(out, check=False)


class SudokuPartition:
    """A partition of ``0..m*m-1`` into ``m`` blocks of size ``m``.

    ``block_of`` is stored canonically: blocks are numbered in order of their
    least element.
    """

    __slots__ = ("rank", "block_of", "_hash")

    def __init__(self, block_of: Sequence[int], rank: int | None = None):
        block_of = tuple(block_of)
        m = isqrt(len(block_of)) if rank is None else rank
        if m * m != len(block_of) or m < 1:
            raise ValueError(f"a sudoku partition needs m*m elements, got {len(block_of)}")
        relabel: dict[int, int] = {}
        canon = []
        for b in block_of:
            if b not in relabel:
                relabel[b] = len(relabel)
            canon.append(relabel[b])
        sizes = [0] * len(relabel)
        for b in canon:
            sizes[b] += 1
        if len(sizes) != m or any(s != m for s in sizes):
            raise ValueError(f"blocks must be {m} blocks of size {m}, got sizes {sizes}")
        self.rank = m
        self.block_of = tuple(canon)
        self._hash = hash(self.block_of)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "SudokuPartition":
        blocks = [list(b) for b in blocks]
        n = sum(len(b) for b in blocks)
        block_of = [-1] * n
        for i, b in enumerate(blocks):
            for e in b:
                if not 0 <= e < n or block_of[e] != -1:
                    raise ValueError(f"element {e + 1} missing, repeated or out of range")
                block_of[e] = i
        if -1 in block_of:
            raise ValueError("blocks do not cover the ground set")
        return cls(block_of)

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.rank)]
        for e, b in enumerate(self.block_of):
            out[b].append(e)
        return tuple(tuple(b) for b in out)

    def __eq__(self, other):
        return isinstance(other, SudokuPartition) and self.block_of == other.block_of

    def __lt__(self, other):
        return self.blocks < other.blocks

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"SudokuPartition({render_partition(self)})"

    def image(self, perm: Sequence[int]) -> "SudokuPartition":
        """The partition ``{perm(B)}``."""
        block_of = [0] * len(perm)
        for e, b in enumerate(self.block_of):
            block_of[perm[e]] = b
        return SudokuPartition(block_of, self.rank)

    def is_preserved_by(self, perm: Sequence[int]) -> bool:
        return self.image(perm) == self


def render_partition(p: SudokuPartition) -> str:
    """``{123 456 789}`` for ground sets of at most 9 elements, else pipe-delimited."""
    if len(p.block_of) <= 9:
        return "{" + " ".join("".join(str(e + 1) for e in b) for b in p.blocks) + "}"
    return "|".join(",".join(str(e + 1) for e in b) for b in p.blocks)


def standard_partition(m: int) -> SudokuPartition:
    if m < 1:
        raise ValueError("rank must be at least 1")
    return SudokuPartition([e // m for e in range(m * m)], m)


class TriPartition(NamedTuple):
    rows: SudokuPartition
    cols: SudokuPartition
    syms: SudokuPartition

    @classmethod
    def synchronized(cls, p: SudokuPartition) -> "TriPartition":
        return cls(p, p, p)

    @classmethod
    def standard(cls, m: int) -> "TriPartition":
        return cls.synchronized(standard_partition(m))

    @property
    def rank(self) -> int:
        return self.rows.rank

    @property
    def is_synchronized(self) -> bool:
        return self.rows == self.cols == self.syms

    def render(self) -> str:
        return "( " + ", ".join(render_partition(p) for p in self) + " )"


def _tri(tri: TriPartition | SudokuPartition | None, n: int) -> TriPartition:
    if tri is None:
        m = isqrt(n)
        if m * m != n:
            raise ValueError(f"order {n} is not a perfect square")
        return TriPartition.standard(m)
    if isinstance(tri, SudokuPartition):
        tri = TriPartition.synchronized(tri)
    if not (tri.rows.rank == tri.cols.rank == tri.syms.rank):
        raise ValueError("tri-partition ranks disagree")
    if tri.rank ** 2 != n:
        raise ValueError(f"rank {tri.rank} does not match order {n}")
    return tri


def _no_repeat_in_cells(rows, rb, cb) -> bool:
    """No value repeats inside any (row block, column block) cell group."""
    seen = set()
    for x, r in enumerate(rows):
        bx = rb[x]
        for y, z in enumerate(r):
            key = (bx, cb[y], z)
            if key in seen:
                return False
            seen.add(key)
    return True


def is_sudoku(L: LatinSquare, tri=None) -> bool:
    """Every band/stack intersection contains every symbol (rows/cols partitions only)."""
    tri = _tri(tri, L.n)
    return _no_repeat_in_cells(L.rows, tri.rows.block_of, tri.cols.block_of)


def is_division_sudoku(L: LatinSquare, tri=None) -> bool:
    """Quasi-equational test on the three operations ``*``, ``/`` and ``\\``.

    For each operation, two distinct argument pairs in the same
    (row block, column block) must give different results.  For ``/`` the
    first argument is a symbol of ``L``; for ``\\`` the second one is.
    """
    tri = _tri(tri, L.n)
    r, c, s = tri.rows.block_of, tri.cols.block_of, tri.syms.block_of
    if not _no_repeat_in_cells(L.rows, r, c):
        return False
    rdiv = L.rdiv_table()  # rdiv[z][y] = z / y
    if not _no_repeat_in_cells(rdiv, s, c):
        return False
    ldiv = L.ldiv_table()  # ldiv[x][z] = x \ z
    return _no_repeat_in_cells(ldiv, r, s)


def is_division_sudoku_direct(L: LatinSquare, tri=None) -> bool:
    """Band/stack/pile coverage test, straight from the definition."""
    tri = _tri(tri, L.n)
    n, m = L.n, tri.rank
    r, c, s = tri.rows.block_of, tri.cols.block_of, tri.syms.block_of
    bs = [[set() for _ in range(m)] for _ in range(m)]
    bp = [[set() for _ in range(m)] for _ in range(m)]
    sp = [[set() for _ in range(m)] for _ in range(m)]
    for x, y, z in L.triples():
        bs[r[x]][c[y]].add(z)
        bp[r[x]][s[z]].add(y)
        sp[c[y]][s[z]].add(x)
    return all(len(cell) == n for grid in (bs, bp, sp) for row in grid for cell in row)


def division_sudoku_violation(L: LatinSquare, tri=None) -> str | None:
    """First failed coverage condition, 1-based, or None.  For arrays that
    are not latin the latin problem is appended."""
    tri = _tri(tri, L.n)
    n, m = L.n, tri.rank
    r, c, s = tri.rows.block_of, tri.cols.block_of, tri.syms.block_of
    grids = {
        ("band", "stack", "symbols"): [[set() for _ in range(m)] for _ in range(m)],
        ("band", "pile", "columns"): [[set() for _ in range(m)] for _ in range(m)],
        ("stack", "pile", "rows"): [[set() for _ in range(m)] for _ in range(m)],
    }
    g1, g2, g3 = grids.values()
    for x, y, z in L.triples():
        g1[r[x]][c[y]].add(z)
        g2[r[x]][s[z]].add(y)
        g3[c[y]][s[z]].add(x)
    for (a, b, what), grid in grids.items():
        for i in range(m):
            for j in range(m):
                missing = sorted(set(range(n)) - grid[i][j])
                if missing:
                    label = "minisquare " if (a, b) == ("band", "stack") else ""
                    found = (f"{label}{a} {i + 1} x {b} {j + 1} misses {what} "
                             + ",".join(str(v + 1) for v in missing))
                    problem = latin_violation(L.rows)
                    return f"{found}; {problem}" if problem else found
    return latin_violation(L.rows)


def is_division_sudoku_conjugates(L: LatinSquare, tri=None) -> bool:
    """``L``, ``L^(13)`` and ``L^(23)`` are sudokus for the matching tri-partitions."""
    tri = _tri(tri, L.n)
    R, C, S = tri
    return (is_sudoku(L, tri)
            and is_sudoku(conjugate(L, "(13)"), TriPartition(S, C, R))
            and is_sudoku(conjugate(L, "(23)"), TriPartition(R, S, C)))


def shreds(theta: Sequence[int], p: SudokuPartition) -> bool:
    """True iff every image block ``theta(X_i)`` meets every block ``X_j`` once."""
    if len(theta) != len(p.block_of):
        raise ValueError("degree mismatch")
    b = p.block_of
    m = p.rank
    seen = set()
    for u, v in enumerate(theta):
        key = (b[u], b[v])
        if key in seen:
            return False
        seen.add(key)
    return len(seen) == m * m


def is_division_sudoku_shred(L: LatinSquare, tri=None) -> bool:
    """Every left translation, right translation and ``y -> x/y`` shreds the partition."""
    tri = _tri(tri, L.n)
    if not tri.is_synchronized:
        raise ValueError("the translation test needs a synchronized tri-partition")
    p = tri.rows
    rdiv = L.rdiv_table()
    for x in range(L.n):
        if not shreds(L.row_perm(x), p):
            return False
        if not shreds(L.col_perm(x), p):
            return False
        if not shreds(rdiv[x], p):
            return False
    return True


def count_associative_triples(L: LatinSquare) -> int:
    rows = L.rows
    n = L.n
    count = 0
    for x, y in product(range(n), repeat=2):
        rx, xy = rows[x], rows[x][y]
        ry, rxy = rows[y], rows[xy]
        for z in range(n):
            if rx[ry[z]] == rxy[z]:
                count += 1
    return count


def is_idempotent(L: LatinSquare) -> bool:
    return all(L.rows[x][x] == x for x in range(L.n))


def make_idempotent(L: LatinSquare) -> tuple[LatinSquare, Isotopism]:
    """Permute rows and columns inside blocks 2 and 3 so that ``x*x = x``.

    The input must be a rank-3 standard division sudoku whose first diagonal
    minisquare already reads 1, 2, 3 on the diagonal (template form).
    Idempotent input is returned as is.
    """
    from divsudoku.enumeration import extends_template

    if is_idempotent(L):
        return L, Isotopism.identity(L.n)
    if L.n != 9 or not extends_template(L):
        raise ValueError("input does not extend the template")
    alpha = list(range(9))
    beta = list(range(9))
    for blk in (1, 2):
        lo = 3 * blk
        for x in range(lo, lo + 3):
            for y in range(lo, lo + 3):
                z = L.rows[x][y]
                if lo <= z < lo + 3:
                    alpha[x] = z
                    beta[y] = z
    iso = Isotopism(Permutation(alpha), Permutation(beta), Permutation.identity(9))
    out = apply_isotopism(L, iso)
    if not is_idempotent(out):
        raise ValueError("diagonal minisquares do not carry a block transversal")
    return out, iso


def random_partition_preserving(m: int, rng, partition: SudokuPartition | None = None) -> Permutation:
    """A uniformly random permutation mapping blocks of ``partition`` onto blocks."""
    p = partition or standard_partition(m)
    blocks = p.blocks
    order = list(range(m))
    rng.shuffle(order)
    img = [0] * (m * m)
    for i, blk in enumerate(blocks):
        target = list(blocks[order[i]])
        rng.shuffle(target)
        for e, t in zip(blk, target):
            img[e] = t
    return Permutation(img)


def random_ds_isotopism(m: int, rng) -> Isotopism:
    return Isotopism(*(random_partition_preserving(m, rng) for _ in range(3)))


def is_ds_isotopism(iso: Isotopism, m: int) -> bool:
    p = standard_partition(m)
    return all(p.is_preserved_by(g) for g in iso)


def latin_square_chain(n: int, rng, burn_in: int | None = None, thin: int | None = None) -> Iterator[LatinSquare]:
    """Jacobson-Matthews Markov chain on order-``n`` latin squares.

    Walks on the incidence cube ``M[x][y][z]`` with entries in {-1, 0, 1},
    at most one cell improper at a time.  Yields the current square after
    ``burn_in`` proper moves and then after every ``thin`` further ones.
    """
    nn = n * n
    M = [0] * (n * nn)
    for x in range(n):
        for y in range(n):
            M[x * nn + y * n + (x + y) % n] = 1
    burn_in = n ** 3 if burn_in is None else burn_in
    thin = nn if thin is None else max(thin, 1)
    target = burn_in
    improper = None
    done = 0
    rand = rng.randrange
    while True:
        if improper is None and done >= target:
            yield LatinSquare([[next(z for z in range(n) if M[x * nn + y * n + z] == 1)
                                for y in range(n)] for x in range(n)])
            target += thin
        if improper is None:
            while True:
                x, y, z = rand(n), rand(n), rand(n)
                if M[x * nn + y * n + z] == 0:
                    break
            base = x * nn + y * n
            z1 = next(k for k in range(n) if M[base + k] == 1)
            y1 = next(k for k in range(n) if M[x * nn + k * n + z] == 1)
            x1 = next(k for k in range(n) if M[k * nn + y * n + z] == 1)
            done += 1
        else:
            x, y, z = improper
            base = x * nn + y * n
            z1 = rng.choice([k for k in range(n) if M[base + k] == 1])
            y1 = rng.choice([k for k in range(n) if M[x * nn + k * n + z] == 1])
            x1 = rng.choice([k for k in range(n) if M[k * nn + y * n + z] == 1])
        M[x * nn + y * n + z] += 1
        M[x * nn + y1 * n + z] -= 1
        M[x1 * nn + y * n + z] -= 1
        M[x * nn + y * n + z1] -= 1
        M[x1 * nn + y1 * n + z] += 1
        M[x1 * nn + y * n + z1] += 1
        M[x * nn + y1 * n + z1] += 1
        M[x1 * nn + y1 * n + z1] -= 1
        improper = (x1, y1, z1) if M[x1 * nn + y1 * n + z1] == -1 else None


def random_latin_square(n: int, rng, steps: int | None = None) -> LatinSquare:
    """Approximately uniform latin square: an independent chain run for
    ``steps`` proper moves (default ``n**3``)."""
    return next(latin_square_chain(n, rng, burn_in=steps))


def random_latin_squares(n: int, rng, count: int, thin: int | None = None) -> list[LatinSquare]:
    """``count`` thinned samples from one chain; cheaper than independent runs."""
    chain = latin_square_chain(n, rng, thin=thin)
    return [next(chain) for _ in range(count)]
