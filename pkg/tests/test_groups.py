"""Group core: construction, validation, subgroups, actions, abelian structure."""

from fractions import Fraction

import numpy as np
import pytest

from bohrsound import config
from bohrsound.errors import (
    BohrsoundError,
    NoIdentity,
    NoInverse,
    NonAssociative,
    NotAnAction,
    NotASubgroup,
    NotInjective,
    NotNormal,
    SizeLimit,
    SourceMismatch,
)
from bohrsound.groups import (
    FiniteAbelian,
    FiniteGroup,
    GroupHom,
    Subgroup,
    TorusPoint,
    abelian_from_orders,
    all_subgroups,
    alternating,
    closure,
    compose,
    cyclic,
    dihedral,
    direct_product,
    group_from_table,
    heisenberg,
    identity_hom,
    klein_four,
    normal_subgroups,
    semidirect,
    symmetric,
    trivial_group,
    validate_group,
)

from conftest import multiplication_action

# 5x5 loop: latin square, two-sided identity and inverses, but (1*1)*2 != 1*(1*2)
NONASSOC_LOOP = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


class TestConstruction:
    def test_z2_from_table(self):
        g = group_from_table([[0, 1], [1, 0]])
        assert g.order == 2
        assert g.op(1, 1) == 0

    def test_no_inverse(self):
        with pytest.raises((NoInverse, NoIdentity)):
            group_from_table([[0, 1], [1, 1]])

    def test_non_associative(self):
        with pytest.raises(NonAssociative):
            group_from_table(NONASSOC_LOOP)

    def test_identity_relocation(self):
        z3 = cyclic(3)
        perm = [2, 0, 1]  # relabel so the identity lands at index 1
        inv = [perm.index(i) for i in range(3)]
        shuffled = [[perm[z3.op(inv[i], inv[j])] for j in range(3)] for i in range(3)]
        g = group_from_table(shuffled)
        assert g.op(0, 1) == 1
        assert g.iso_signature == z3.iso_signature

    def test_out_of_range_entries(self):
        with pytest.raises(NotASubgroup):
            group_from_table([[0, 1], [1, 7]])

    def test_validate_group_roundtrip(self):
        validate_group(symmetric(4))

    def test_sampled_validation_path(self):
        big = direct_product(cyclic(32), cyclic(32))
        assert big.order == 1024
        validate_group(big)  # order > exhaustive cap exercises the sampled branch


class TestBasicInvariants:
    def test_orders(self):
        assert trivial_group().order == 1
        assert cyclic(7).order == 7
        assert symmetric(4).order == 24
        assert alternating(4).order == 12
        assert dihedral(6).order == 12
        assert klein_four().order == 4

    def test_class_sizes(self):
        assert sorted(len(c) for c in symmetric(3).conjugacy_classes) == [1, 2, 3]
        assert sorted(len(c) for c in symmetric(4).conjugacy_classes) == [1, 3, 6, 6, 8]
        assert sorted(len(c) for c in alternating(4).conjugacy_classes) == [1, 3, 4, 4]
        assert sorted(len(c) for c in dihedral(4).conjugacy_classes) == [1, 1, 2, 2, 2]

    def test_classes_partition_and_divide(self, corpus):
        for g in corpus:
            sizes = [len(c) for c in g.conjugacy_classes]
            assert sum(sizes) == g.order
            assert all(g.order % s == 0 for s in sizes)
            assert g.conjugacy_classes[0] == (0,)

    def test_exponent_and_element_orders(self):
        s4 = symmetric(4)
        assert s4.exponent == 12
        assert sorted(set(s4.element_orders)) == [1, 2, 3, 4]
        assert cyclic(12).exponent == 12

    def test_inverse_class(self):
        z5 = cyclic(5)
        # class of g inverts to class of g^4
        assert z5.inverse_class[1] == 4

    def test_power(self):
        z10 = cyclic(10)
        assert z10.power(3, 7) == 1
        assert z10.power(3, -1) == 7
        assert z10.power(3, 0) == 0


class TestCenterAndDerived:
    def test_center_abelian(self):
        assert cyclic(4).center().order == 4

    def test_center_s3_trivial(self):
        assert symmetric(3).center().order == 1

    def test_heisenberg_center(self):
        for lvl in (1, 2, 3):
            z = heisenberg(lvl).center()
            assert z.order == 2 ** lvl
            grp, _ = z.materialize()
            assert grp.exponent == 2 ** lvl  # cyclic of order 2^lvl

    def test_heisenberg_derived_equals_center(self):
        for lvl in (1, 2, 3):
            g = heisenberg(lvl)
            assert g.derived_subgroup().elements == g.center().elements

    def test_derived_s4(self):
        assert len(symmetric(4).derived_subgroup().elements) == 12


class TestSubgroups:
    def test_subgroup_validation(self):
        s3 = symmetric(3)
        with pytest.raises(NotASubgroup):
            s3.subgroup([0, 3])  # 3-cycle without its square is not closed
        a3 = closure(s3, [3])
        assert len(a3) == 3
        sub = s3.subgroup(a3)
        assert sub.is_normal()

    def test_not_normal_witness(self):
        s3 = symmetric(3)
        two = s3.subgroup(closure(s3, [1]))
        assert two.order == 2
        assert not two.is_normal()
        with pytest.raises(NotNormal):
            two.require_normal()

    def test_materialize_inclusion(self):
        s4 = symmetric(4)
        elems = closure(s4, [s4.labels.index("1032"), s4.labels.index("2301")])
        grp, incl = s4.subgroup(elems).materialize()
        assert grp.order == 4
        assert incl.is_injective
        assert set(incl.image) == set(elems)

    def test_all_subgroups_counts(self):
        assert len(all_subgroups(symmetric(3))) == 6
        assert len(all_subgroups(symmetric(4))) == 30
        assert len(all_subgroups(cyclic(12))) == 6  # one per divisor

    def test_normal_subgroups_counts(self):
        assert len(normal_subgroups(symmetric(3))) == 3
        assert len(normal_subgroups(symmetric(4))) == 4
        assert len(normal_subgroups(cyclic(12))) == 6

    def test_normal_subgroups_are_normal_and_closed(self, corpus_small):
        for g in corpus_small[::7]:
            for elems in normal_subgroups(g):
                assert Subgroup(g, elems).is_normal()

    def test_closure_generates(self):
        s4 = symmetric(4)
        gens = [s4.labels.index("1023"), s4.labels.index("1230")]
        assert len(closure(s4, gens)) == 24


class TestHoms:
    def test_rejects_non_hom(self):
        with pytest.raises(SourceMismatch):
            GroupHom(cyclic(3), cyclic(3), [0, 2, 2])

    def test_compose_and_identity(self):
        z6, z3 = cyclic(6), cyclic(3)
        proj = GroupHom(z6, z3, [0, 1, 2, 0, 1, 2])
        ident = identity_hom(z3)
        comp = compose(ident, proj)
        assert list(comp.mapping) == [0, 1, 2, 0, 1, 2]
        assert not proj.is_injective
        with pytest.raises(NotInjective):
            proj.require_injective()

    def test_injective_image_preimage(self):
        z2, z4 = cyclic(2), cyclic(4)
        emb = GroupHom(z2, z4, [0, 2])
        assert emb.is_injective
        assert emb.image == (0, 2)
        assert emb.preimage == {0: 0, 2: 1}

    def test_compose_mismatch(self):
        with pytest.raises(SourceMismatch):
            compose(identity_hom(cyclic(2)), identity_hom(cyclic(3)))


class TestSemidirect:
    def test_inversion_gives_s3(self):
        z3, z2 = cyclic(3), cyclic(2)
        act = np.stack([np.arange(3), (-np.arange(3)) % 3])
        grp, emb_n, emb_a = semidirect(z3, z2, act)
        assert grp.iso_signature == symmetric(3).iso_signature
        assert emb_n.is_injective and emb_a.is_injective
        assert Subgroup(grp, emb_n.image).is_normal()

    def test_klein_by_z3_gives_a4(self):
        v4, z3 = klein_four(), cyclic(3)
        # cycle the three involutions 1 -> 2 -> 3 -> 1
        act = np.array([[0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]])
        grp, _, _ = semidirect(v4, z3, act)
        assert grp.iso_signature == alternating(4).iso_signature

    def test_trivial_action_is_direct_product(self):
        z4, z3 = cyclic(4), cyclic(3)
        act = np.tile(np.arange(4), (3, 1))
        grp, _, _ = semidirect(z4, z3, act)
        assert np.array_equal(grp.mul, direct_product(z4, z3).mul)

    def test_trivial_action_center(self):
        s3 = symmetric(3)
        act = np.tile(np.arange(6), (2, 1))
        grp, emb_n, emb_a = semidirect(s3, cyclic(2), act)
        center = set(grp.center().elements)
        for n in s3.center().elements:
            for a in range(2):
                assert grp.op(emb_n(n), emb_a(a)) in center

    def test_rejects_bad_action(self):
        z3 = cyclic(3)
        with pytest.raises(NotAnAction):
            semidirect(z3, cyclic(2), np.array([[0, 1, 2], [0, 2, 2]]))
        with pytest.raises(NotAnAction):
            # permutation but not an automorphism (swaps identity away)
            semidirect(z3, cyclic(2), np.array([[0, 1, 2], [1, 0, 2]]))
        with pytest.raises(NotAnAction):
            # each row fine, but not multiplicative in the acting group
            semidirect(z3, cyclic(4), np.array(
                [[0, 1, 2], [0, 2, 1], [0, 1, 2], [0, 1, 2]]))

    def test_multiplication_action_fixture(self):
        z5_by_z4, _, _ = semidirect(cyclic(5), cyclic(4),
                                    multiplication_action(5, 2, 4))
        assert z5_by_z4.order == 20
        assert z5_by_z4.center().order == 1


class TestHeisenberg:
    def test_orders(self):
        assert heisenberg(1).order == 8
        assert heisenberg(2).order == 64
        assert heisenberg(3).order == 512

    def test_size_limit(self):
        with pytest.raises(SizeLimit):
            heisenberg(config.HEISENBERG_MAX_LEVEL + 1)

    def test_class_count_level3(self):
        assert len(heisenberg(3).conjugacy_classes) == 92

    def test_labels_match_structure(self):
        g = heisenberg(1)
        assert g.labels[0] == "(0,0,0)"
        # (1,0,0)*(0,1,0) = (1,1,1): the commutator relation in coordinates
        a = g.labels.index("(1,0,0)")
        b = g.labels.index("(0,1,0)")
        assert g.labels[g.op(a, b)] == "(1,1,1)"


class TestFiniteAbelian:
    def test_chain_validation(self):
        with pytest.raises(NotASubgroup):
            FiniteAbelian((4, 6))
        with pytest.raises(NotASubgroup):
            FiniteAbelian((1, 2))

    def test_from_orders(self):
        assert abelian_from_orders([4, 6]).invariant_factors == (2, 12)
        assert abelian_from_orders([2, 2, 3]).invariant_factors == (2, 6)
        assert abelian_from_orders([1, 1]).invariant_factors == ()

    def test_p_partition(self):
        d = abelian_from_orders([8, 4, 2, 9, 3])
        assert d.p_partition(2) == (3, 2, 1)
        assert d.p_partition(3) == (2, 1)
        assert d.p_partition(5) == ()
        assert d.primes() == (2, 3)

    def test_order_and_str(self):
        d = FiniteAbelian((2, 4))
        assert d.order == 8
        assert str(d) == "Z/2 x Z/4"
        assert FiniteAbelian(()).is_trivial


class TestTorusPoint:
    def test_arithmetic(self):
        p = TorusPoint([Fraction(3, 4), Fraction(1, 2)])
        q = TorusPoint([Fraction(1, 2), Fraction(2, 3)])
        assert (p + q).coords == (Fraction(1, 4), Fraction(1, 6))
        assert (-p).coords == (Fraction(1, 4), Fraction(1, 2))
        assert (p - p) == TorusPoint.zero(2)

    def test_order(self):
        assert TorusPoint([Fraction(1, 6), Fraction(1, 4)]).order == 12
        assert TorusPoint.zero(3).order == 1

    def test_scale_and_hash(self):
        p = TorusPoint([Fraction(1, 3)])
        assert p.scale(3) == TorusPoint.zero(1)
        assert len({p, TorusPoint([Fraction(1, 3)])}) == 1

    def test_rank_mismatch(self):
        with pytest.raises(SourceMismatch):
            TorusPoint.zero(2) + TorusPoint.zero(3)


class TestErrorsHierarchy:
    def test_all_are_bohrsound_errors(self):
        for exc in (NoIdentity, NoInverse, NonAssociative, NotASubgroup,
                    NotAnAction, NotInjective, NotNormal, SizeLimit,
                    SourceMismatch):
            assert issubclass(exc, BohrsoundError)
