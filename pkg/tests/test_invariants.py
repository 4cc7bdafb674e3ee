import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cyclic, klein_four
from divsudoku.core import apply_isotopism, conjugate, random_ds_isotopism
from divsudoku.corpus import appendix, ds, named
from divsudoku.invariants import (
    IntercalateInvariant,
    MinisquareInvariant,
    canonical_key,
    find_intercalates,
    intercalate_invariant,
    invariants_equivalent,
    joint_key,
    minisquare_invariant,
    square_keys,
)


def brute_intercalates(L):
    n, r = L.n, L.rows
    out = set()
    for r1, r2 in itertools.combinations(range(n), 2):
        for c1, c2 in itertools.combinations(range(n), 2):
            if r[r1][c1] == r[r2][c2] and r[r1][c2] == r[r2][c1]:
                out.add(((r1, r2), (c1, c2)))
    return out


def minicolumn_sets(L, band, stack):
    return {frozenset(L.rows[r][c] for r in range(3 * band, 3 * band + 3)) for c in range(3 * stack, 3 * stack + 3)}


def band_stack_edges(L):
    """B->S edges straight from minicolumn symbol sets."""
    out = set()
    for i in range(3):
        for j in range(3):
            a, b = [k for k in range(3) if k != j]
            if minicolumn_sets(L, i, a) == minicolumn_sets(L, i, b):
                out.add(f"B{i + 1}->S{j + 1}")
    return out


def swap_band_stack(text):
    return text.replace("B", "#").replace("S", "B").replace("#", "S")


class TestIntercalates:
    @pytest.mark.parametrize("L", [klein_four(), cyclic(4), ds(17), ds(121), named("Q")], ids=str)
    def test_matches_brute_force(self, L):
        assert {(i.rows, i.cols) for i in find_intercalates(L)} == brute_intercalates(L)

    def test_klein_four_count(self):
        # each of the 6 row pairs differs by an involution with two 2-cycles
        assert len(find_intercalates(klein_four())) == 12

    @pytest.mark.parametrize("n", [3, 5, 7, 9])
    def test_odd_cyclic_has_none(self, n):
        assert find_intercalates(cyclic(n)) == []

    def test_q_has_18(self):
        assert len(find_intercalates(named("Q"))) == 18


class TestIota:
    def test_worked_example(self):
        iota = intercalate_invariant(named("intercalate_example"))
        assert iota.render() == "(B1,S3,P3) (B2,S2,P1) (B3,S1,P2) (B3,S3,P1)"

    def test_highlighted_intercalate(self):
        L = named("intercalate_example")
        ics = {(i.rows, i.cols, i.symbols) for i in find_intercalates(L)}
        assert ((0, 3), (0, 3), (0, 1)) in ics
        # rows 1,4 span bands 1,2 -> band 3; same for columns; symbols 1,2 share pile 1
        assert (2, 2, 0) in intercalate_invariant(L).hyperedges

    def test_intercalate_free_is_empty(self):
        for L in appendix().values():
            if not find_intercalates(L):
                assert intercalate_invariant(L).hyperedges == frozenset()
                assert not any(any(any(r) for r in s) for s in intercalate_invariant(L).bits)
                break
        else:
            pytest.skip("no intercalate-free corpus square")

    def test_rejects_other_ranks(self):
        with pytest.raises(ValueError):
            intercalate_invariant(klein_four())
        with pytest.raises(ValueError):
            minisquare_invariant(cyclic(9))


class TestMu:
    def test_worked_example(self):
        mu = minisquare_invariant(named("minisquare_example"))
        assert mu.render() == "B1->S1 B2->S3 B3->S2 P1->S2 P2->S1 P3->S3"

    def test_b1_s1_minicolumns(self):
        L = named("minisquare_example")
        want = {frozenset({0, 4, 8}), frozenset({1, 5, 6}), frozenset({2, 3, 7})}
        assert minicolumn_sets(L, 0, 1) == want == minicolumn_sets(L, 0, 2)

    @pytest.mark.parametrize("i", [1, 4, 17, 18, 42, 121, 179, 186])
    def test_band_stack_edges_match_minicolumns(self, i):
        L = ds(i)
        got = {e for e in minisquare_invariant(L).render().split() if e.startswith("B") and "->S" in e}
        assert got == band_stack_edges(L)

    def test_q_edges_run_from_bands_and_stacks_to_piles(self):
        # the computed orientation; the published listing reverses every arrow (see acceptance 11)
        assert minisquare_invariant(named("Q")).render() == "B1->P1 B2->P2 B3->P3 S1->P1 S2->P2 S3->P3"

    @pytest.mark.parametrize("i", [3, 17, 42, 91, 175])
    def test_transpose_swaps_band_and_stack(self, i):
        L = ds(i)
        mu, mu_t = minisquare_invariant(L), minisquare_invariant(conjugate(L, "(12)"))
        assert set(swap_band_stack(mu.render()).split()) == set(mu_t.render().split())
        iota, iota_t = intercalate_invariant(L), intercalate_invariant(conjugate(L, "(12)"))
        assert iota_t.hyperedges == frozenset((s, b, p) for b, s, p in iota.hyperedges)


class TestEquivalence:
    def test_reflexive(self):
        a = intercalate_invariant(ds(18))
        assert invariants_equivalent(a, a)

    def test_kind_mismatch(self):
        with pytest.raises(TypeError):
            invariants_equivalent(intercalate_invariant(ds(1)), minisquare_invariant(ds(1)))

    def test_ds4_vs_ds17(self):
        assert not invariants_equivalent(intercalate_invariant(ds(4)), intercalate_invariant(ds(17)))

    def test_relabeling_is_equivalent(self):
        a = minisquare_invariant(ds(20))
        b = a.relabel(((1, 2, 0), (0, 2, 1), (2, 1, 0)))
        assert invariants_equivalent(a, b)
        assert canonical_key(a) == canonical_key(b)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 186))
    def test_keys_invariant_under_ds_isotopism(self, seed, i):
        L = ds(i)
        M = apply_isotopism(L, random_ds_isotopism(3, random.Random(seed)))
        assert square_keys(M) == square_keys(L)
        assert invariants_equivalent(intercalate_invariant(L), intercalate_invariant(M))
        assert invariants_equivalent(minisquare_invariant(L), minisquare_invariant(M))


class TestCounts:
    def test_distinct_values(self):
        keys = {i: square_keys(L) for i, L in appendix().items()}
        assert len({k[0] for k in keys.values()}) == 148
        assert len({k[1] for k in keys.values()}) == 139
        assert len(set(keys.values())) == 183

    def test_joint_key_agrees(self):
        joint = {joint_key(intercalate_invariant(L), minisquare_invariant(L)) for L in appendix().values()}
        assert len(joint) == 183

    def test_indistinguishable_pairs(self):
        groups = {}
        for i, L in appendix().items():
            groups.setdefault(square_keys(L), []).append(i)
        assert sorted(g for g in groups.values() if len(g) > 1) == [[91, 105], [121, 129], [160, 186]]

    def test_types(self):
        assert isinstance(intercalate_invariant(ds(1)), IntercalateInvariant)
        assert isinstance(minisquare_invariant(ds(1)), MinisquareInvariant)


def conjugate_route_edges(L):
    """mu via the minicolumn rule on conjugates: bands/piles on L^(23), stacks/piles on L^(13)."""
    def rule(M, a, b):
        return {f"{a}{i + 1}->{b}{j + 1}" for i, j in _bs(M)}

    A, C = conjugate(L, "(23)"), conjugate(L, "(13)")
    return (rule(L, "B", "S") | rule(conjugate(L, "(12)"), "S", "B")
            | rule(A, "B", "P") | rule(conjugate(A, "(12)"), "P", "B")
            | rule(C, "P", "S") | rule(conjugate(C, "(12)"), "S", "P"))


def _bs(L):
    return {(i, j) for i in range(3) for j in range(3)
            if len({frozenset(minicolumn_sets(L, i, k)) for k in range(3) if k != j}) == 1}


@pytest.mark.parametrize("i", [1, 17, 18, 42, 91, 121, 175, 179, 186])
def test_mu_matches_conjugate_route(i):
    assert conjugate_route_edges(ds(i)) == set(minisquare_invariant(ds(i)).render().split())


@pytest.mark.parametrize("label", ["minisquare_example", "Q", "L0"])
def test_mu_matches_conjugate_route_named(label):
    L = named(label)
    assert conjugate_route_edges(L) == set(minisquare_invariant(L).render().split())
