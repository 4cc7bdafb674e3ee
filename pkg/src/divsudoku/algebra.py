"""Finite fields, quadratic nearfields, Stein squares and the coset-partition
constructions of division sudokus with many sudoku partitions."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

import numpy as np

from divsudoku.core import LatinSquare, Permutation, SudokuPartition, Isotopism, apply_isotopism, is_division_sudoku


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def prime_power(q: int) -> tuple[int, int]:
    """``(p, k)`` with ``q = p**k``; raises for non prime powers."""
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1 or not is_prime(p):
                break
            return p, k
    raise ValueError(f"{q} is not a prime power")


# --- polynomials over GF(p), coefficient lists low-to-high ----------------------

def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = a[:]
    inv = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        coef = a[-1] * inv % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * c) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def _monic_polys(deg: int, p: int) -> Iterable[list[int]]:
    """Monic polynomials of degree ``deg`` in lexicographic order of their
    coefficients read high-to-low."""
    for v in range(p ** deg):
        low = [(v // p ** (deg - 1 - i)) % p for i in range(deg)]  # high-to-low
        yield list(reversed(low)) + [1]


def is_irreducible(f: list[int], p: int) -> bool:
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for g in _monic_polys(d, p):
            if not _poly_mod(f, g, p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> list[int]:
    for f in _monic_polys(k, p):
        if is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")


class GaloisField:
    """GF(p**k) on ``0..q-1``; element ``sum a_i p**i`` is ``sum a_i x**i``."""

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if k < 1:
            raise ValueError("degree must be positive")
        self.p, self.k, self.q = p, k, p ** k
        self.modulus = smallest_irreducible(p, k)
        q = self.q
        digits = np.array([[(x // p ** i) % p for i in range(k)] for x in range(q)], dtype=np.int64)
        weights = p ** np.arange(k, dtype=np.int64)
        self.add_table = (((digits[:, None, :] + digits[None, :, :]) % p) @ weights).astype(np.int64)
        self.neg = (((-digits) % p) @ weights).astype(np.int64)
        self.sub_table = self.add_table[:, self.neg]
        # log tables from a primitive element
        self.generator, self.exp = self._find_generator()
        self.log = np.zeros(q, dtype=np.int64)
        self.log[self.exp] = np.arange(q - 1)
        mul = np.zeros((q, q), dtype=np.int64)
        nz = np.arange(1, q)
        mul[1:, 1:] = self.exp[(self.log[nz][:, None] + self.log[nz][None, :]) % (q - 1)]
        self.mul_table = mul
        self.inv = np.zeros(q, dtype=np.int64)
        self.inv[nz] = self.exp[(-self.log[nz]) % (q - 1)]

    def _poly_mul(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da = [(a // p ** i) % p for i in range(k)]
        db = [(b // p ** i) % p for i in range(k)]
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
        r = _poly_mod(prod, self.modulus, p)
        return sum(c * p ** i for i, c in enumerate(r))

    def _find_generator(self):
        q = self.q
        for g in range(1, q):
            powers = [1]
            for _ in range(q - 2):
                powers.append(self._poly_mul(powers[-1], g))
            if len(set(powers)) == q - 1:
                return g, np.array(powers, dtype=np.int64)
        raise AssertionError("multiplicative group is not cyclic")

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    @property
    def elements(self) -> range:
        return range(self.q)

    def add(self, a, b):
        return int(self.add_table[a, b])

    def sub(self, a, b):
        return int(self.sub_table[a, b])

    def mul(self, a, b):
        return int(self.mul_table[a, b])

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in a finite field")
        return int(self.mul_table[a, self.inv[b]])

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        return int(self.exp[(self.log[a] * e) % (self.q - 1)])

    def order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        r, n = a, 1
        while r != 1:
            r = self.mul(r, a)
            n += 1
        return n

    def subfield(self, r: int) -> frozenset[int]:
        """The subfield of order ``r``: fixed points of ``x -> x**r``."""
        if (self.q - 1) % (r - 1) or prime_power(r)[0] != self.p or self.k % prime_power(r)[1]:
            raise ValueError(f"GF({self.q}) has no subfield of order {r}")
        return frozenset(x for x in range(self.q) if self.power(x, r) == x)

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.power(a, (self.q - 1) // 2) == 1


@lru_cache(maxsize=None)
def gf(p: int, k: int) -> GaloisField:
    return GaloisField(p, k)


def gf_order(q: int) -> GaloisField:
    return gf(*prime_power(q))


class QuadraticNearfield:
    """``x o y = xy`` when ``x`` is a square in GF(q^2), ``x y^q`` otherwise."""

    def __init__(self, q: int):
        p, k = prime_power(q)
        if p == 2:
            raise ValueError("the quadratic nearfield needs odd q")
        self.q = q
        self.base = gf(p, 2 * k)
        F = self.base
        n = F.q
        frob = np.array([F.power(y, q) for y in range(n)], dtype=np.int64)
        sq = np.array([F.is_square(x) for x in range(n)])
        self.mul_table = np.where(sq[:, None], F.mul_table, F.mul_table[:, frob])
        self.inv = np.zeros(n, dtype=np.int64)
        for x in range(1, n):
            (y,) = np.nonzero(self.mul_table[x] == 1)[0]
            self.inv[x] = y

    @property
    def order(self) -> int:
        return self.base.q

    def mul(self, a, b) -> int:
        return int(self.mul_table[a, b])


@lru_cache(maxsize=None)
def nearfield(q: int) -> QuadraticNearfield:
    return QuadraticNearfield(q)


# --- Stein squares --------------------------------------------------------------

def default_c(q: int) -> int:
    """Smallest element of GF(q^2) outside GF(q) (hence not 0 or 1)."""
    F = _big_field(q)
    sub = F.subfield(q)
    return min(x for x in range(F.q) if x not in sub)


def _big_field(q: int) -> GaloisField:
    p, k = prime_power(q)
    return gf(p, 2 * k)


def _check_c(F: GaloisField, c: int) -> None:
    if not 0 <= c < F.q:
        raise ValueError(f"c={c} is not an element of GF({F.q})")
    if c in (0, 1):
        raise ValueError("c must differ from 0 and 1")


def stein_field_square(q: int, c: int) -> LatinSquare:
    """``x*y = x + (y - x)c`` over GF(q^2)."""
    F = _big_field(q)
    _check_c(F, c)
    n = F.q
    diff = F.sub_table.T  # diff[x, y] = y - x
    prod = F.mul_table[diff, c]
    rows = F.add_table[np.arange(n)[:, None], prod]
    return LatinSquare(rows.tolist())


def stein_nearfield_square(q: int, c: int) -> LatinSquare:
    """``x*y = x + (y - x) o c`` over the quadratic nearfield of order q^2."""
    D = nearfield(q)
    F = D.base
    _check_c(F, c)
    n = F.q
    diff = F.sub_table.T
    prod = D.mul_table[diff, c]
    rows = F.add_table[np.arange(n)[:, None], prod]
    return LatinSquare(rows.tolist())


# --- subspaces ------------------------------------------------------------------

class Subspace:
    """An F_r-subspace of a finite field, stored with its element set."""

    def __init__(self, field: GaloisField, r: int, basis: Iterable[int]):
        self.field, self.r = field, r
        self.basis = tuple(basis)
        scalars = sorted(field.subfield(r))
        elems = {0}
        for v in self.basis:
            elems = {field.add(e, field.mul(s, v)) for e in elems for s in scalars}
        self.elements = frozenset(elems)
        if len(self.elements) != r ** len(self.basis):
            raise ValueError("basis vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"Subspace(r={self.r}, {sorted(self.elements)})"

    def scaled(self, c: int) -> frozenset[int]:
        return frozenset(self.field.mul(w, c) for w in self.elements)


def subspaces(field: GaloisField, r: int, dim: int) -> list[Subspace]:
    """Every ``dim``-dimensional F_r-subspace, each once, sorted by element set."""
    scalars = sorted(field.subfield(r))
    seen: dict[frozenset, Subspace] = {}

    def grow(basis, span):
        if len(basis) == dim:
            if span not in seen:
                seen[span] = Subspace(field, r, basis)
            return
        for v in range(1, field.q):
            if v in span or (basis and v < basis[-1]):
                continue
            new = frozenset(field.add(e, field.mul(s, v)) for e in span for s in scalars)
            grow(basis + [v], new)

    grow([], frozenset({0}))
    return sorted(seen.values(), key=lambda W: sorted(W.elements))


def lemma_conditions(W: Subspace, c: int) -> tuple[bool, bool, bool]:
    """``W n Wc = 0``, ``W n W(c-1) = 0``, ``Wc n W(c-1) = 0``."""
    F = W.field
    Wc = W.scaled(c)
    Wc1 = W.scaled(F.sub(c, 1))
    return (W.elements & Wc == {0}, W.elements & Wc1 == {0}, Wc & Wc1 == {0})


def good_subspaces(r: int, s: int, c: int) -> list[Subspace]:
    """The s-dimensional F_r-subspaces W of GF(q^2), q = r^s, with W n Wc = 0."""
    q = r ** s
    F = _big_field(q)
    _check_c(F, c)
    out = []
    for W in subspaces(F, r, s):
        conds = lemma_conditions(W, c)
        if len(set(conds)) != 1:
            raise AssertionError(f"subspace conditions disagree for {W}: {conds}")
        if conds[0]:
            out.append(W)
    return out


def coset_partition(W: Subspace) -> SudokuPartition:
    F = W.field
    n = F.q
    if len(W) ** 2 != n:
        raise ValueError(f"subspace of size {len(W)} does not give a sudoku partition of {n} points")
    rep = [min(F.sub(x, w) for w in W.elements) for x in range(n)]
    return SudokuPartition(rep)


def line_subspaces(q: int) -> list[Subspace]:
    """The q+1 one-dimensional GF(q)-subspaces of GF(q^2)."""
    return subspaces(_big_field(q), q, 1)


def zero_sum_holds(q: int, c: int) -> bool:
    """Nearfield zero-sum property: ``a+b`` and ``a o c + b o c`` both in
    GF(q) force ``a + b = 0``."""
    D = nearfield(q)
    F = D.base
    sub = F.subfield(q)
    for a in range(F.q):
        for b in range(F.q):
            s = F.add(a, b)
            if s in sub and F.add(D.mul(a, c), D.mul(b, c)) in sub and s != 0:
                return False
    return True


def to_standard(L: LatinSquare, part: SudokuPartition) -> LatinSquare:
    """Relabel ``L`` by one permutation on all three coordinates so that
    ``part`` becomes the standard partition."""
    order = [e for blk in part.blocks for e in blk]
    perm = [0] * len(order)
    for new, old in enumerate(order):
        perm[old] = new
    P = Permutation(perm)
    return apply_isotopism(L, Isotopism(P, P, P))


def construction_report(q: int, kind: str = "field", c: int | None = None, exact_sigma: bool | None = None) -> dict:
    """Build the Stein square and verify the partitions the theory promises."""
    from divsudoku.classification import is_isotopic_to_group
    from divsudoku.multipart import is_affine_collection, sigma

    p, k = prime_power(q)
    if kind not in ("field", "nearfield"):
        raise ValueError(f"unknown kind {kind!r}")
    if kind == "nearfield" and p == 2:
        raise ValueError("nearfield construction needs odd q")
    F = _big_field(q)
    if c is None:
        c = default_c(q)
    L = stein_field_square(q, c) if kind == "field" else stein_nearfield_square(q, c)
    lines = [coset_partition(W) for W in line_subspaces(q)]
    verified = [P for P in lines if is_division_sudoku(L, P)]
    extra = []
    if kind == "field" and k % 2 == 0:
        r = p ** (k // 2)
        extra = [coset_partition(W) for W in good_subspaces(r, 2, c)]
        extra = [P for P in extra if is_division_sudoku(L, P)]
    report = {
        "q": q,
        "kind": kind,
        "c": c,
        "c_in_subfield": c in F.subfield(q),
        "square": L,
        "line_partitions": lines,
        "verified_line_partitions": verified,
        "quartic_partitions": extra,
        "affine": is_affine_collection(verified) if verified else False,
        "isotopic_to_group": is_isotopic_to_group(L),
    }
    if exact_sigma is None:
        exact_sigma = q <= 4
    if exact_sigma:
        count, parts = sigma(L)
        report["sigma"] = count
        report["sigma_partitions"] = parts
    if q == 3 and verified:
        from divsudoku.classification import ds_class_lookup, appendix_class_map

        S = to_standard(L, verified[0])
        cls = ds_class_lookup()(S)
        report["ds_class"] = next(i for i, v in appendix_class_map().items() if v == cls)
    return report


__all__ = [
    "GaloisField", "QuadraticNearfield", "Subspace", "coset_partition", "construction_report",
    "default_c", "gf", "gf_order", "good_subspaces", "is_irreducible", "lemma_conditions",
    "line_subspaces", "nearfield", "prime_power", "smallest_irreducible", "stein_field_square",
    "stein_nearfield_square", "subspaces", "to_standard", "zero_sum_holds",
]
