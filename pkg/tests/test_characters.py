"""Exact character tables and the restriction/Clifford machinery built on them."""

import numpy as np
import pytest

from bohrsound.errors import (
    DegreeMismatch,
    NotInjective,
    NotNormal,
    NotProper,
    PrimeSearchFailure,
    SizeLimit,
    SourceMismatch,
)
from bohrsound.groups import (
    GroupHom,
    alternating,
    cyclic,
    dihedral,
    heisenberg,
    identity_hom,
    normal_subgroups,
    symmetric,
)
from bohrsound.characters import (
    Character,
    character_table,
    clifford_class,
    clifford_multiplicity,
    common_prime,
    coproduct_extension,
    equalizer_witness,
    fin_check,
    irreducible_character,
    regular_character,
    restricted_values,
    restriction_matrix,
    restriction_multiplicity,
    splitting_prime,
    trivial_character,
)

from oracles import check_orthonormal, regular_character_data


def a3_in_s3():
    s3 = symmetric(3)
    a3 = alternating(3)
    image = sorted(i for i in range(6) if s3.element_order(i) != 2)
    mapping = [0] * 3
    for h in range(3):
        target = [g for g in image if s3.element_order(g) == a3.element_order(h)]
        if a3.element_order(h) == 1:
            mapping[h] = 0
    three = [g for g in image if s3.element_order(g) == 3]
    mapping[1], mapping[2] = three[0], three[1]
    return s3, a3, GroupHom(a3, s3, mapping)


def center_z2_in_heisenberg(level):
    g = heisenberg(level)
    z2 = cyclic(2)
    half = 2 ** (level - 1)
    return g, z2, GroupHom(z2, g, [0, g.label_index(f"(0,0,{half})")])


class TestPrimes:
    def test_splitting_prime_smallest(self):
        for exponent, order in [(2, 2), (6, 6), (4, 8), (12, 24), (8, 8)]:
            p = splitting_prime(exponent, order)
            assert p % exponent == 1 and p > 2 * order
            for q in range(2 * order + 1, p):
                if q % exponent == 1:
                    for d in range(2, int(q ** 0.5) + 1):
                        if q % d == 0:
                            break
                    else:
                        pytest.fail(f"{q} admissible below {p}")

    def test_known_values(self):
        assert splitting_prime(6, 6) == 13
        assert splitting_prime(2, 2) == 5
        assert splitting_prime(16, 512) == 1153

    def test_common_prime_serves_all(self):
        groups = [symmetric(3), cyclic(4), cyclic(5)]
        p = common_prime(groups)
        for g in groups:
            assert p % g.exponent == 1 and p > 2 * g.order


class TestTableConstruction:
    def test_z2(self):
        tab = character_table(cyclic(2))
        assert tab.degrees == (1, 1)
        assert tab.n_irreducibles == 2

    def test_s3(self):
        tab = character_table(symmetric(3))
        assert sorted(tab.degrees) == [1, 1, 2]

    def test_heisenberg_1(self):
        tab = character_table(heisenberg(1))
        assert sorted(tab.degrees) == [1, 1, 1, 1, 2]

    def test_rows_match_classes(self, corpus_small):
        for g in corpus_small[::5]:
            tab = character_table(g)
            assert tab.n_irreducibles == len(g.conjugacy_classes)

    def test_degree_squares(self, corpus_small):
        for g in corpus_small[::5]:
            tab = character_table(g)
            assert sum(d * d for d in tab.degrees) == g.order

    def test_row_orthogonality(self):
        for g in (symmetric(4), dihedral(6), cyclic(12)):
            tab = character_table(g)
            for i in range(tab.n_irreducibles):
                for j in range(tab.n_irreducibles):
                    want = 1 if i == j else 0
                    assert tab.inner(tab.row(i), tab.row(j)) == want

    def test_trivial_is_row_zero(self, corpus_small):
        for g in corpus_small[::7]:
            tab = character_table(g)
            assert tab.trivial_index() == 0
            assert np.all(tab.row(0) == 1)

    def test_canonical_row_order(self):
        tab = character_table(symmetric(4))
        assert list(tab.degrees) == sorted(tab.degrees)
        for i in range(tab.n_irreducibles - 1):
            if tab.degrees[i] == tab.degrees[i + 1]:
                assert tuple(tab.row(i)) < tuple(tab.row(i + 1))

    def test_size_limit(self):
        with pytest.raises(SizeLimit):
            character_table(heisenberg(4))

    def test_supplied_prime_checked(self):
        with pytest.raises(PrimeSearchFailure):
            character_table(symmetric(3), prime=11)   # 11 % 6 != 1
        with pytest.raises(PrimeSearchFailure):
            character_table(symmetric(3), prime=7)    # not > 2*6

    def test_supplied_prime_accepted(self):
        tab = character_table(symmetric(3), prime=31)
        assert tab.prime == 31
        assert sorted(tab.degrees) == [1, 1, 2]

    def test_serialize_deterministic(self):
        a = character_table(symmetric(3)).serialize()
        b = character_table(symmetric(3)).serialize()
        assert a == b
        assert a["order"] == 6
        assert len(a["values"]) == 3

    def test_row_index_roundtrip(self):
        tab = character_table(dihedral(4))
        for i in range(tab.n_irreducibles):
            assert tab.row_index(tab.row(i)) == i
        with pytest.raises(SourceMismatch):
            tab.row_index(np.zeros(tab.n_irreducibles, dtype=np.int64))


class TestNumericOracle:
    """Cross-validate Dixon tables against regular-representation decomposition."""

    def test_degrees_match(self, corpus):
        for g in corpus:
            if g.order > 24:
                continue
            want, chars = regular_character_data(g)
            assert check_orthonormal(g, chars)
            tab = character_table(g)
            assert sorted(tab.degrees) == want

    def test_integer_rows_match(self, corpus):
        for g in corpus:
            if g.order > 24:
                continue
            _, chars = regular_character_data(g)
            tab = character_table(g)
            half = tab.prime // 2
            lifted = {
                tuple(int(v) if v <= half else int(v) - tab.prime
                      for v in tab.row(i))
                for i in range(tab.n_irreducibles)
            }
            for vec in chars:
                if np.allclose(vec.imag, 0, atol=1e-6) and np.allclose(
                        vec.real, np.round(vec.real), atol=1e-6):
                    assert tuple(int(round(x)) for x in vec.real) in lifted


class TestCharacterArithmetic:
    def test_regular_character_coeffs(self):
        tab = character_table(symmetric(3))
        reg = regular_character(tab)
        assert reg.coeffs == tab.degrees
        assert reg.degree == 6

    def test_addition(self):
        tab = character_table(cyclic(4))
        c = trivial_character(tab) + irreducible_character(tab, 1)
        assert c.degree == 2
        with pytest.raises(SourceMismatch):
            c + trivial_character(character_table(cyclic(2)))

    def test_negative_coeffs_rejected(self):
        tab = character_table(cyclic(2))
        with pytest.raises(DegreeMismatch):
            Character(tab, (1, -1))
        with pytest.raises(DegreeMismatch):
            Character(tab, (1,))


class TestRestriction:
    def test_trivial_to_trivial(self):
        s3, a3, emb = a3_in_s3()
        tg = character_table(s3)
        th = character_table(a3, prime=tg.prime)
        assert restriction_multiplicity(tg, 0, th, 0, emb) == 1

    def test_s3_two_dim_splits_on_a3(self):
        s3, a3, emb = a3_in_s3()
        tg = character_table(s3)
        th = character_table(a3, prime=tg.prime)
        two = next(i for i, d in enumerate(tg.degrees) if d == 2)
        for rho in range(3):
            want = 0 if rho == th.trivial_index() else 1
            assert restriction_multiplicity(tg, two, th, rho, emb) == want

    def test_heisenberg_central_multiplicity(self):
        for level in (1, 2):
            g, z2, emb = center_z2_in_heisenberg(level)
            p = common_prime([g, z2])
            tg = character_table(g, prime=p)
            th = character_table(z2, prime=p)
            big = next(i for i, d in enumerate(tg.degrees) if d == 2 ** level)
            rho = 1 - th.trivial_index()
            assert restriction_multiplicity(tg, big, th, rho, emb) == 2 ** level

    def test_degree_bookkeeping(self):
        s3, a3, emb = a3_in_s3()
        tg = character_table(s3)
        th = character_table(a3, prime=tg.prime)
        m = restriction_matrix(tg, th, emb)
        for pi in range(tg.n_irreducibles):
            assert sum(int(m[pi, r]) * th.degrees[r]
                       for r in range(th.n_irreducibles)) == tg.degrees[pi]

    def test_restricted_values_identity_column(self):
        s3, a3, emb = a3_in_s3()
        tg = character_table(s3)
        th = character_table(a3, prime=tg.prime)
        for pi in range(tg.n_irreducibles):
            assert restricted_values(tg, pi, emb, th)[0] == tg.degrees[pi]

    def test_requires_injective(self):
        z4 = cyclic(4)
        z2 = cyclic(2)
        collapse = GroupHom(z4, z2, [0, 1, 0, 1])
        p = common_prime([z4, z2])
        tg = character_table(z2, prime=p)
        th = character_table(z4, prime=p)
        with pytest.raises(NotInjective):
            restriction_multiplicity(tg, 0, th, 0, collapse)


class TestEqualizer:
    def test_a3_split(self):
        _, _, emb = a3_in_s3()
        w = equalizer_witness(emb)
        assert w.kind == "split"
        assert w.self_intersection == 2
        assert w.degrees == (2,)

    def test_z2_in_z4_collision(self):
        z4 = cyclic(4)
        z2 = cyclic(2)
        emb = GroupHom(z2, z4, [0, 2])
        w = equalizer_witness(emb)
        assert w.kind == "collision"
        i, j = w.indices
        tg = character_table(z4)
        th = character_table(z2, prime=tg.prime)
        assert i == tg.trivial_index()
        res_j = restricted_values(tg, j, emb, th)
        assert np.all(res_j == 1)
        # partner is the unique order-2 character of Z/4
        sq = (tg.row(j).astype(object) ** 2) % tg.prime
        assert np.all(sq == 1) and j != tg.trivial_index()

    def test_not_proper(self):
        with pytest.raises(NotProper):
            equalizer_witness(identity_hom(symmetric(3)))

    def test_witness_valid_over_sample(self, corpus_small):
        from bohrsound.groups import Subgroup, all_subgroups
        for g in corpus_small[::6]:
            if g.order > 24:
                continue
            for elems in all_subgroups(g):
                if len(elems) == g.order:
                    continue
                h, emb = Subgroup(g, elems).materialize()
                w = equalizer_witness(emb)
                tg = character_table(g)
                th = character_table(h, prime=tg.prime)
                if w.kind == "split":
                    (pi,) = w.indices
                    res = restricted_values(tg, pi, emb, th)
                    assert th.inner(res, res) >= 2
                else:
                    i, j = w.indices
                    assert i != j
                    assert np.array_equal(
                        restricted_values(tg, i, emb, th),
                        restricted_values(tg, j, emb, th))


class TestClifford:
    def test_central_singletons(self):
        g, z2, emb = center_z2_in_heisenberg(1)
        for rho in (0, 1):
            assert clifford_class(rho, [emb]) == (rho,)

    def test_a3_class_of_size_two(self):
        _, a3, emb = a3_in_s3()
        p = common_prime([emb.target, a3])
        th = character_table(a3, prime=p)
        triv = th.trivial_index()
        assert clifford_class(triv, [emb]) == (triv,)
        others = [r for r in range(3) if r != triv]
        cls = clifford_class(others[0], [emb])
        assert set(cls) == set(others)

    def test_representative_independence(self):
        _, a3, emb = a3_in_s3()
        for rho in range(3):
            cls = clifford_class(rho, [emb])
            for other in cls:
                assert clifford_class(other, [emb]) == cls

    def test_not_normal(self):
        s3 = symmetric(3)
        z2 = cyclic(2)
        transposition = next(i for i in range(6) if s3.element_order(i) == 2)
        emb = GroupHom(z2, s3, [0, transposition])
        with pytest.raises(NotNormal):
            clifford_class(0, [emb])

    def test_empty_family_needs_source(self):
        with pytest.raises(SourceMismatch):
            clifford_class(0, [])

    def test_multiplicity_examples(self):
        _, a3, emb = a3_in_s3()
        p = common_prime([emb.target, a3])
        tg = character_table(emb.target, prime=p)
        th = character_table(a3, prime=p)
        for rho in range(3):
            assert clifford_multiplicity(tg, th, emb, rho) == 1

    def test_multiplicity_heisenberg(self):
        for level, want in [(1, 2), (2, 4)]:
            g, z2, emb = center_z2_in_heisenberg(level)
            p = common_prime([g, z2])
            tg = character_table(g, prime=p)
            th = character_table(z2, prime=p)
            rho = 1 - th.trivial_index()
            assert clifford_multiplicity(tg, th, emb, rho) == want


class TestFinCheck:
    def test_heisenberg_growth_profile(self):
        z2 = cyclic(2)
        embs = []
        for level in (1, 2, 3):
            g, _, emb = center_z2_in_heisenberg(level)
            embs.append(GroupHom(z2, g, emb.mapping))
        reports = fin_check(embs)
        assert len(reports) == 2
        nontrivial = reports[1]
        assert nontrivial.class_size == 1
        assert [nontrivial.per_member[i] for i in range(3)] == [2, 4, 8]
        assert nontrivial.sup_multiplicity == 8
        assert reports[0].per_member == {0: 1, 1: 1, 2: 1}

    def test_single_a3(self):
        _, a3, emb = a3_in_s3()
        reports = fin_check([emb])
        assert len(reports) == 3
        p = common_prime([emb.target, a3])
        th = character_table(a3, prime=p)
        triv = th.trivial_index()
        for rep in reports:
            if rep.rho == triv:
                assert rep.class_size == 1
            else:
                assert rep.class_size == 2
            assert rep.per_member == {0: 1}
            assert rep.sup_multiplicity == 1

    def test_empty_family(self):
        z2 = cyclic(2)
        reports = fin_check([], source=z2)
        assert len(reports) == 2
        for rep in reports:
            assert rep.class_members == (rep.rho,)
            assert rep.per_member == {}
            assert rep.sup_multiplicity is None

    def test_empty_family_without_source(self):
        with pytest.raises(SourceMismatch):
            fin_check([])

    def test_source_mismatch(self):
        _, _, emb1 = center_z2_in_heisenberg(1)
        _, a3, emb2 = a3_in_s3()
        with pytest.raises(SourceMismatch):
            fin_check([emb1, emb2])

    def test_per_member_consistency(self):
        g, z2, emb = center_z2_in_heisenberg(2)
        p = common_prime([g, z2])
        tg = character_table(g, prime=p)
        th = character_table(z2, prime=p)
        for rep in fin_check([emb]):
            assert rep.per_member[0] == clifford_multiplicity(tg, th, emb, rep.rho)


class TestRestrictionStructure:
    """Restrictions to a normal subgroup concentrate on a single Clifford class
    with one shared multiplicity."""

    def test_over_corpus(self, corpus_small):
        from bohrsound.groups import Subgroup
        for g in corpus_small:
            for elems in normal_subgroups(g):
                h, emb = Subgroup(g, elems).materialize()
                p = common_prime([g, h])
                tgp = character_table(g, prime=p)
                thp = character_table(h, prime=p)
                m = restriction_matrix(tgp, thp, emb)
                class_of = {rep.rho: rep.class_members for rep in fin_check([emb])}
                for pi in range(tgp.n_irreducibles):
                    support = [r for r in range(thp.n_irreducibles) if m[pi, r] > 0]
                    assert support
                    assert sorted(support) == sorted(class_of[support[0]])
                    mults = {int(m[pi, r]) for r in support}
                    assert len(mults) == 1


class TestCoproductExtension:
    def test_trivial_degree_one(self):
        z4 = cyclic(4)
        z2 = cyclic(2)
        emb = GroupHom(z2, z4, [0, 2])
        th = character_table(z2, prime=character_table(z4).prime)
        tk = character_table(cyclic(3))
        phi_g, phi_k = coproduct_extension(
            trivial_character(th), trivial_character(tk), emb)
        assert phi_g.degree == 1
        assert phi_g.coeffs[phi_g.table.trivial_index()] == 1
        assert phi_k.coeffs == (1, 0, 0)

    def test_a3_nontrivial_lands_on_two_dim(self):
        s3, a3, emb = a3_in_s3()
        tg = character_table(s3)
        th = character_table(a3, prime=tg.prime)
        tk = character_table(cyclic(2))
        rho = 1 if th.trivial_index() != 1 else 2
        phi_g, phi_k = coproduct_extension(
            irreducible_character(th, rho), trivial_character(tk), emb)
        assert phi_g.degree == 2
        two = next(i for i, d in enumerate(tg.degrees) if d == 2)
        assert phi_g.coeffs[two] == 1 and sum(phi_g.coeffs) == 1
        assert phi_k.degree == 2
        assert phi_k.coeffs[tk.trivial_index()] == 2

    def test_regular_character_of_z2_in_z4(self):
        z4 = cyclic(4)
        z2 = cyclic(2)
        emb = GroupHom(z2, z4, [0, 2])
        tg = character_table(z4)
        th = character_table(z2, prime=tg.prime)
        tk = character_table(cyclic(2))
        phi_g, phi_k = coproduct_extension(
            regular_character(th), regular_character(tk), emb)
        assert phi_g.degree == 2
        assert phi_k.degree == 2
        m = restriction_matrix(tg, th, emb)
        restricted = [0, 0]
        for pi, c in enumerate(phi_g.coeffs):
            for r in range(2):
                restricted[r] += c * int(m[pi, r])
        assert restricted[0] >= 1 and restricted[1] >= 1

    def test_degree_mismatch(self):
        z4 = cyclic(4)
        z2 = cyclic(2)
        emb = GroupHom(z2, z4, [0, 2])
        th = character_table(z2, prime=character_table(z4).prime)
        tk = character_table(cyclic(2))
        with pytest.raises(DegreeMismatch):
            coproduct_extension(regular_character(th), trivial_character(tk), emb)

    def test_restriction_contains_input(self, corpus_small):
        import random
        from bohrsound.groups import Subgroup
        rng = random.Random(13)
        for g in corpus_small[::9]:
            subs = [s for s in normal_subgroups(g) if 1 < len(s) < g.order]
            if not subs:
                continue
            h, emb = Subgroup(g, rng.choice(subs)).materialize()
            p = common_prime([g, h])
            tgp = character_table(g, prime=p)
            thp = character_table(h, prime=p)
            rho = rng.randrange(thp.n_irreducibles)
            tk = character_table(cyclic(2))
            pad_k = Character(
                tk, (thp.degrees[rho], 0))
            phi_g, phi_k = coproduct_extension(
                irreducible_character(thp, rho), pad_k, emb)
            assert phi_k.degree == phi_g.degree
            m = restriction_matrix(tgp, thp, emb)
            got = sum(c * int(m[pi, rho]) for pi, c in enumerate(phi_g.coeffs))
            assert got >= 1
