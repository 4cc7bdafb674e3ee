import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cyclic, klein_four
from divsudoku.classification import (
    UnionFind,
    _ds_classes_cached,
    appendix_class_map,
    ds_class_lookup,
    ds_isotopism_between_template_extensions,
    ds_isotopism_general,
    is_associative,
    is_isotopic_to_group,
    isotopism_classes,
    isotopism_general,
    isotopy_invariant,
    loop_isotope,
    main_ds_classes,
    not_isotopic_to_transpose,
    translation_has_cycle,
)
from divsudoku.core import (
    CONJUGATES,
    Isotopism,
    LatinSquare,
    Permutation,
    apply_isotopism,
    conjugate,
    is_ds_isotopism,
    random_ds_isotopism,
)
from divsudoku.corpus import appendix, ds, named, tables
from divsudoku.enumeration import canonicalize_to_template
from divsudoku.invariants import square_keys

seeds = st.integers(0, 2**32 - 1)


def random_isotopism(n, r):
    return Isotopism(*(Permutation(r.sample(range(n), n)) for _ in range(3)))


@pytest.fixture(scope="module")
def reps():
    A = appendix()
    labels = sorted(A)
    return [A[i] for i in labels], labels


class TestUnionFind:
    def test_groups(self):
        uf = UnionFind(6)
        assert uf.union(4, 1) and uf.union(1, 5) and not uf.union(5, 4)
        assert uf.find(5) == 1
        assert uf.groups() == [[0], [1, 4, 5], [2], [3]]


class TestDsIsotopisms:
    def test_identity_between_equal_extensions(self):
        iso = ds_isotopism_between_template_extensions(ds(1), ds(1))
        assert iso is not None and apply_isotopism(ds(1), iso) == ds(1)

    def test_distinct_representatives(self):
        assert ds_isotopism_between_template_extensions(ds(1), ds(4)) is None

    @settings(max_examples=15, deadline=None)
    @given(seeds, st.integers(1, 186))
    def test_round_trip_found(self, seed, i):
        L = ds(i)
        M, _ = canonicalize_to_template(apply_isotopism(L, random_ds_isotopism(3, random.Random(seed))))
        iso = ds_isotopism_between_template_extensions(L, M)
        assert iso is not None and is_ds_isotopism(iso, 3)
        assert apply_isotopism(L, iso) == M

    def test_q_to_itself(self):
        iso = ds_isotopism_general(named("Q"), named("Q"))
        assert iso is not None and apply_isotopism(named("Q"), iso) == named("Q")

    @settings(max_examples=15, deadline=None)
    @given(seeds, st.integers(1, 186))
    def test_general_finds_random_image(self, seed, i):
        L = ds(i)
        M = apply_isotopism(L, random_ds_isotopism(3, random.Random(seed)))
        iso = ds_isotopism_general(L, M)
        assert iso is not None and is_ds_isotopism(iso, 3)
        assert apply_isotopism(L, iso) == M
        assert square_keys(L) == square_keys(M)

    def test_17_18_not_ds_isotopic(self):
        assert ds_isotopism_general(ds(17), ds(18)) is None

    def test_1_paratopic_to_53(self):
        hits = [t for t, th in CONJUGATES.items() if ds_isotopism_general(conjugate(ds(53), th), ds(1)) is not None]
        assert hits


class TestIsotopisms:
    @pytest.mark.parametrize("a,b", [(18, 19), (33, 117), (21, 60)])
    def test_merged_pairs(self, a, b):
        iso = isotopism_general(ds(a), ds(b))
        assert iso is not None
        assert apply_isotopism(ds(a), iso) == ds(b)
        assert not is_ds_isotopism(iso, 3)

    def test_17_27_full_search(self):
        assert isotopism_general(ds(17), ds(27), prescreen=False) is None

    @settings(max_examples=20, deadline=None)
    @given(seeds, st.integers(1, 186))
    def test_prescreen_invariant_under_isotopism(self, seed, i):
        r = random.Random(seed)
        M = apply_isotopism(ds(i), random_isotopism(9, r))
        assert isotopy_invariant(M) == isotopy_invariant(ds(i))

    def test_general_finds_arbitrary_isotope(self, rng):
        M = apply_isotopism(ds(42), random_isotopism(9, rng))
        iso = isotopism_general(ds(42), M)
        assert iso is not None and apply_isotopism(ds(42), iso) == M


class TestClasses:
    def test_ds_classes(self):
        part = _ds_classes_cached(1)
        assert len(part) == 186
        assert dict(part.sizes) == {1: 1, 3: 9, 6: 3, 9: 22, 18: 7, 27: 15, 54: 129}
        assert sum(len(c) for c in part.classes) == 7741

    def test_appendix_bijection(self):
        m = appendix_class_map()
        assert sorted(m.values()) == list(range(186))

    @settings(max_examples=20, deadline=None)
    @given(seeds, st.integers(1, 186))
    def test_lookup_invariant(self, seed, i):
        lookup = ds_class_lookup()
        M = apply_isotopism(ds(i), random_ds_isotopism(3, random.Random(seed)))
        assert lookup(M) == lookup(ds(i))

    def test_main_classes(self, reps):
        part = main_ds_classes(*reps)
        assert len(part) == 45
        groups = sorted(sorted(g) for g in part.labelled())
        assert groups == sorted(sorted(g) for g in tables()["main_classes"])
        assert [3, 40, 42, 149, 163, 180] in groups
        assert [[i] for i in (4, 17, 51, 68, 175, 179, 183)] == [g for g in groups if len(g) == 1]
        assert [91, 105, 121, 129, 160, 186] in groups

    def test_isotopism_classes(self, reps):
        part = isotopism_classes(*reps)
        assert len(part) == 183
        assert sorted(g for g in part.labelled() if len(g) > 1) == [[18, 19], [21, 60], [33, 117]]

    def test_q_conjugates(self):
        look = ds_class_lookup()
        inv = {v: k for k, v in appendix_class_map().items()}
        Q = named("Q")
        forms = {"id": Q, "(12)": conjugate(Q, "(12)"), "rdiv": conjugate(Q, "(13)"),
                 "rdiv(12)": conjugate(conjugate(Q, "(13)"), "(12)"), "ldiv": conjugate(Q, "(23)"),
                 "ldiv(12)": conjugate(conjugate(Q, "(23)"), "(12)")}
        got = {k: inv[look(v)] for k, v in forms.items()}
        assert got == {"id": 121, "(12)": 129, "rdiv": 186, "rdiv(12)": 105, "ldiv": 91, "ldiv(12)": 160}


class TestGroupTests:
    def test_loop_isotope_has_identity(self):
        Lp = loop_isotope(ds(7))
        assert Lp.rows[0] == tuple(range(9))
        assert [r[0] for r in Lp.rows] == list(range(9))

    @pytest.mark.parametrize("L", [cyclic(9), klein_four(), cyclic(6)], ids=["C9", "V4", "C6"])
    def test_group_tables(self, L):
        assert is_associative(L) and is_isotopic_to_group(L)

    def test_c3xc3_isotope(self, rng):
        G = LatinSquare([[((x // 3 + y // 3) % 3) * 3 + (x + y) % 3 for y in range(9)] for x in range(9)])
        assert is_isotopic_to_group(apply_isotopism(G, random_isotopism(9, rng)))

    def test_q_not_group(self):
        assert not is_isotopic_to_group(named("Q"))

    def test_exactly_one_group_class(self):
        assert sum(is_isotopic_to_group(L) for L in appendix().values()) == 1
        assert is_isotopic_to_group(ds(17))

    def test_q_not_isotopic_to_transpose(self):
        assert not_isotopic_to_transpose(named("Q"))

    def test_symmetric_is_isotopic_to_transpose(self):
        assert not not_isotopic_to_transpose(cyclic(9))

    def test_translations(self):
        Q = named("Q")
        left = [Q.rows[x] for x in range(9)]
        right = [tuple(Q.rows[y][x] for y in range(9)) for x in range(9)]
        assert all(translation_has_cycle(p, 4) for p in left)
        assert not any(translation_has_cycle(p, 4) for p in right)
