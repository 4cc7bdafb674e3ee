import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divsudoku.algebra import (
    GaloisField,
    coset_partition,
    construction_report,
    default_c,
    gf,
    good_subspaces,
    is_irreducible,
    lemma_conditions,
    line_subspaces,
    nearfield,
    prime_power,
    smallest_irreducible,
    stein_field_square,
    stein_nearfield_square,
    subspaces,
    to_standard,
    zero_sum_holds,
)
from divsudoku.classification import is_isotopic_to_group
from divsudoku.core import is_division_sudoku, is_idempotent
from divsudoku.multipart import is_affine_collection

FIELDS = [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (5, 1), (2, 4), (5, 2), (3, 3)]


def poly_mul_oracle(F, a, b):
    """Schoolbook product in F_p[x] reduced by the modulus."""
    p, k = F.p, F.k
    da = [(a // p ** i) % p for i in range(k)]
    db = [(b // p ** i) % p for i in range(k)]
    prod = [0] * (2 * k)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] += x * y
    mod = F.modulus
    for d in range(2 * k - 1, k - 1, -1):
        coef = prod[d] % p
        if coef:
            for i, m in enumerate(mod):
                prod[d - k + i] -= coef * m
    return sum((prod[i] % p) * p ** i for i in range(k))


class TestPrimePowers:
    def test_prime_power(self):
        assert prime_power(81) == (3, 4)
        assert prime_power(7) == (7, 1)
        with pytest.raises(ValueError):
            prime_power(12)

    def test_bad_characteristic(self):
        with pytest.raises(ValueError):
            GaloisField(4, 1)

    @pytest.mark.parametrize("p,k", [(2, 2), (2, 4), (3, 2), (3, 4), (5, 2)])
    def test_modulus_irreducible_and_smallest(self, p, k):
        f = smallest_irreducible(p, k)
        assert f[-1] == 1 and len(f) == k + 1 and is_irreducible(f, p)
        # brute force: no root-free factorization into two monic factors
        for d in range(1, k // 2 + 1):
            for a in itertools.product(range(p), repeat=d):
                for b in itertools.product(range(p), repeat=k - d):
                    prod = [0] * (k + 1)
                    for i, x in enumerate(list(a) + [1]):
                        for j, y in enumerate(list(b) + [1]):
                            prod[i + j] = (prod[i + j] + x * y) % p
                    assert prod != f

    def test_known_moduli(self):
        assert gf(3, 2).modulus == [1, 0, 1]
        assert gf(2, 4).modulus == [1, 1, 0, 0, 1]


class TestFieldAxioms:
    @pytest.mark.parametrize("p,k", FIELDS)
    def test_tables(self, p, k):
        F = gf(p, k)
        q = F.q
        A, M = F.add_table, F.mul_table
        e = np.arange(q)
        assert (A[0] == e).all() and (M[1] == e).all() and (M[0] == 0).all()
        assert (A == A.T).all() and (M == M.T).all()
        assert (A[e, F.neg] == 0).all()
        assert (M[e[1:], F.inv[1:]] == 1).all()
        # associativity and distributivity, exhaustively
        assert (A[A[:, :, None], e[None, None, :]] == A[e[:, None, None], A[None, :, :]]).all()
        assert (M[M[:, :, None], e[None, None, :]] == M[e[:, None, None], M[None, :, :]]).all()
        assert (M[e[:, None, None], A[None, :, :]] == A[M[:, :, None], M[:, None, :]]).all()

    @pytest.mark.parametrize("p,k", FIELDS)
    def test_mul_matches_polynomial_oracle(self, p, k):
        F = gf(p, k)
        for a in range(F.q):
            for b in range(F.q):
                assert F.mul(a, b) == poly_mul_oracle(F, a, b)

    def test_gf9_units_cyclic(self):
        F = gf(3, 2)
        assert max(F.order(a) for a in range(1, 9)) == 8
        assert len({F.power(F.generator, i) for i in range(8)}) == 8

    def test_gf16_frobenius_fixes_gf4(self):
        F = gf(2, 4)
        fixed = [x for x in range(16) if F.power(x, 4) == x]
        assert len(fixed) == 4
        assert F.subfield(4) == frozenset(fixed)
        assert all(F.add(a, b) in fixed and F.mul(a, b) in fixed for a in fixed for b in fixed)

    def test_gf9_squares(self):
        F = gf(3, 2)
        squares = {F.mul(x, x) for x in range(1, 9)}
        assert len(squares) == 4
        assert {x for x in range(1, 9) if F.power(x, 4) == 1} == squares
        assert all(F.is_square(x) == (x in squares) for x in range(1, 9))

    def test_division(self):
        F = gf(5, 2)
        with pytest.raises(ZeroDivisionError):
            F.div(3, 0)
        assert all(F.mul(F.div(a, b), b) == a for a in range(25) for b in range(1, 25))

    def test_no_such_subfield(self):
        with pytest.raises(ValueError):
            gf(2, 4).subfield(8)


class TestNearfield:
    @pytest.mark.parametrize("q", [3, 5])
    def test_axioms_exhaustive(self, q):
        D = nearfield(q)
        F = D.base
        n = F.q
        N, A = D.mul_table, F.add_table
        e = np.arange(n)
        assert (N[0] == 0).all() and (N[:, 0] == 0).all()
        assert (N[1] == e).all() and (N[:, 1] == e).all()
        assert (N[e[1:], D.inv[1:]] == 1).all() and (N[D.inv[1:], e[1:]] == 1).all()
        neg = F.neg
        assert (N[neg] == neg[N]).all() and (N[:, neg] == neg[N]).all()
        for x in range(n):
            # x o (y + z) = x o y + x o z
            assert (N[x][A] == A[N[x][:, None], N[x][None, :]]).all()
            # (x o y) o z = x o (y o z)
            assert (N[N[x]][:, :] == N[x][N]).all()

    def test_not_a_field(self):
        D = nearfield(3)
        M = D.mul_table
        assert not (M == M.T).all()

    def test_subfield_scalars(self):
        for q in (3, 5):
            D = nearfield(q)
            F = D.base
            for lam in F.subfield(q):
                for x in range(F.q):
                    assert D.mul(lam, x) == F.mul(lam, x) == D.mul(x, lam)

    def test_even_q_rejected(self):
        with pytest.raises(ValueError):
            nearfield(4)

    def test_zero_sum(self):
        F = gf(3, 2)
        for c in range(9):
            if c not in F.subfield(3):
                assert zero_sum_holds(3, c)


class TestStein:
    @pytest.mark.parametrize("q", [2, 3, 4, 5])
    def test_field_square_division_closed_forms(self, q):
        F = gf(*prime_power(q ** 2))
        c = default_c(q)
        L = stein_field_square(q, c)
        assert is_idempotent(L)
        ld, rd = L.ldiv_table(), L.rdiv_table()
        ci, c1 = F.inv[c], F.sub(1, c)
        for x in range(F.q):
            for z in range(F.q):
                # y = x + (z - x)/c and x = (z - yc)/(1 - c)
                assert ld[x][z] == F.add(x, F.mul(F.sub(z, x), int(ci)))
                assert rd[z][x] == F.div(F.sub(z, F.mul(x, c)), c1)

    def test_default_c(self):
        assert (default_c(3), default_c(4), default_c(9)) == (3, 2, 3)

    @pytest.mark.parametrize("c", [0, 1])
    def test_degenerate_c(self, c):
        with pytest.raises(ValueError):
            stein_field_square(3, c)
        with pytest.raises(ValueError):
            stein_nearfield_square(3, c)

    def test_c_in_base_field_breaks_subfield_partition(self):
        L = stein_field_square(3, 2)
        sub = next(W for W in line_subspaces(3) if 1 in W.elements)
        assert sorted(sub.elements) == sorted(gf(3, 2).subfield(3))
        assert not is_division_sudoku(L, coset_partition(sub))

    @pytest.mark.parametrize("q", [3, 5])
    def test_lines_verify(self, q):
        for kind, build in (("field", stein_field_square), ("nearfield", stein_nearfield_square)):
            L = build(q, default_c(q))
            parts = [coset_partition(W) for W in line_subspaces(q)]
            assert len(parts) == q + 1
            assert all(is_division_sudoku(L, P) for P in parts), kind
            assert is_affine_collection(parts)

    def test_group_isotopy(self):
        for q in (3, 4, 5):
            assert is_isotopic_to_group(stein_field_square(q, default_c(q)))
        for q in (3, 5):
            assert not is_isotopic_to_group(stein_nearfield_square(q, default_c(q)))

    def test_to_standard(self):
        L = stein_field_square(3, 3)
        P = coset_partition(line_subspaces(3)[0])
        assert is_division_sudoku(to_standard(L, P))


class TestSubspaces:
    def test_counts_q4(self):
        F = gf(2, 4)
        assert len(subspaces(F, 2, 2)) == 35
        assert len(good_subspaces(2, 2, default_c(4))) == 20

    def test_counts_q9(self):
        assert len(subspaces(gf(3, 4), 3, 2)) == 130
        assert len(good_subspaces(3, 2, default_c(9))) == 90

    def test_line_counts(self):
        assert len(line_subspaces(3)) == 4 and len(line_subspaces(4)) == 5

    def test_dependent_basis(self):
        from divsudoku.algebra import Subspace

        with pytest.raises(ValueError):
            Subspace(gf(2, 4), 2, [3, 3])

    def test_coset_partition_of_subfield(self):
        F = gf(3, 2)
        W = next(W for W in line_subspaces(3) if 1 in W.elements)
        P = coset_partition(W)
        for blk in P.blocks:
            assert len({F.sub(a, b) for a in blk for b in blk} - W.elements) == 0

    def test_coset_size_mismatch(self):
        with pytest.raises(ValueError):
            coset_partition(subspaces(gf(2, 4), 2, 1)[0])

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 4, 2), (3, 4, 3)]))
    def test_lemma_equivalence(self, seed, field_spec):
        p, k, r = field_spec
        F = gf(p, k)
        rng = random.Random(seed)
        W = rng.choice(subspaces(F, r, 2))
        c = rng.randrange(2, F.q)
        assert len(set(lemma_conditions(W, c))) == 1


class TestReports:
    def test_q3_field(self):
        rep = construction_report(3, "field")
        assert rep["sigma"] == 4 and rep["isotopic_to_group"] and rep["ds_class"] == 17

    def test_q3_nearfield(self):
        rep = construction_report(3, "nearfield")
        assert rep["sigma"] == 4 and not rep["isotopic_to_group"] and rep["ds_class"] == 179

    def test_q4_field_without_scan(self):
        rep = construction_report(4, "field", exact_sigma=False)
        assert len(rep["verified_line_partitions"]) == 5 and rep["affine"]
        assert len(rep["quartic_partitions"]) == 20
        assert set(rep["verified_line_partitions"]) <= set(rep["quartic_partitions"])

    def test_q5(self):
        for kind in ("field", "nearfield"):
            rep = construction_report(5, kind)
            assert len(rep["verified_line_partitions"]) == 6 and rep["affine"]

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            construction_report(3, "ring")
        with pytest.raises(ValueError):
            construction_report(4, "nearfield")
