"""Tests for group backends, subgroups, homomorphisms and quotients."""

import itertools

import numpy as np
import pytest

from gca_lab.errors import (
    BudgetExceededError,
    GroupError,
    HomomorphismError,
    InfiniteFamilyError,
    PreconditionError,
    SubgroupError,
    UnsupportedError,
)
from gca_lab.groups import (
    FiniteGroup,
    Homomorphism,
    Subgroup,
    all_subgroups,
    build_cayley,
    build_cyclic,
    build_dihedral,
    build_direct_product,
    build_free_abelian,
    build_quaternion,
    build_symmetric,
    derived_subgroup,
    enumerate_endomorphisms,
    enumerate_homomorphisms,
    group_catalog,
    induced_endomorphism,
    is_fully_invariant,
    normal_subgroups,
    quotient_group,
)
from gca_lab.groups.free_abelian import hermite_basis, lattice_index, reduce_modulo
from tests.oracles import brute_force_homomorphisms

# Latin square with identity 0 where (1·1)·2 ≠ 1·(1·2)
NON_ASSOCIATIVE = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


class TestFiniteGroups:
    """Tests for Cayley-table groups and the catalog."""

    def test_trivial_group(self):
        """ℤ/1 has one element and no generators."""
        g = build_cyclic(1)
        assert g.order == 1
        assert g.elements() == [0]
        assert g.generators == ()

    def test_cyclic_addition(self, z4):
        """1 + 3 = 0 in ℤ/4."""
        assert z4.op(1, 3) == 0
        assert z4.inv(1) == 3

    def test_element_order(self, z6):
        """5 has order 6 in ℤ/6."""
        assert z6.element_order(5) == 6
        assert z6.element_order(3) == 2

    def test_power(self, z6):
        """Powers wrap around, negative exponents use the inverse."""
        assert z6.power(1, 7) == 1
        assert z6.power(1, -1) == 5

    def test_cyclic_rejects_zero(self):
        """ℤ/0 is refused."""
        with pytest.raises(GroupError):
            build_cyclic(0)

    def test_not_latin(self):
        """A repeated row entry is rejected."""
        with pytest.raises(GroupError, match="Latin"):
            build_cayley([[0, 1], [1, 1]])

    def test_not_associative(self):
        """A Latin loop that is not a group names the failing triple."""
        with pytest.raises(GroupError, match="associativity fails"):
            build_cayley(NON_ASSOCIATIVE)

    def test_symmetric_group(self, s3):
        """S₃ has order 6, identity 0 and is non-abelian."""
        assert s3.order == 6
        assert s3.identity == 0
        assert not s3.is_abelian

    def test_dihedral_and_quaternion(self):
        """D₄ and Q₈ have order 8 and are non-abelian."""
        for g in (build_dihedral(4), build_quaternion()):
            assert g.order == 8
            assert not g.is_abelian

    def test_quaternion_has_one_involution(self):
        """-1 is the only element of order 2 in Q₈."""
        q8 = build_quaternion()
        assert [a for a in q8.elements() if q8.element_order(a) == 2] == [1]

    def test_direct_product(self, z2):
        """ℤ/2×ℤ/2 is abelian with every element of order ≤ 2."""
        v = build_direct_product(z2, z2)
        assert v.order == 4
        assert v.is_abelian
        assert all(v.op(a, a) == v.identity for a in v.elements())

    def test_catalog_up_to_six(self):
        """The catalog lists groups by order."""
        names = [g.name for g in group_catalog(6)]
        assert names == ["Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "S3"]

    def test_catalog_up_to_eight(self):
        """All fourteen groups of order ≤ 8 appear."""
        catalog = group_catalog(8)
        assert len(catalog) == 14
        assert [g.order for g in catalog] == sorted(g.order for g in catalog)

    def test_equality_by_table(self):
        """Two builds of the same table are equal and hash alike."""
        assert build_cyclic(5) == build_cyclic(5)
        assert hash(build_cyclic(5)) == hash(build_cyclic(5))
        assert build_cyclic(4) != build_direct_product(build_cyclic(2), build_cyclic(2))

    def test_element_from_json(self, z4):
        """Only in-range integers are elements."""
        assert z4.element_from_json(3) == 3
        with pytest.raises(GroupError):
            z4.element_from_json(4)
        with pytest.raises(GroupError):
            z4.element_from_json(True)


class TestFreeAbelian:
    """Tests for ℤ^d and its sublattices."""

    def test_operation(self):
        """Addition and negation are coordinatewise."""
        z2 = build_free_abelian(2)
        assert z2.op((1, 2), (3, -1)) == (4, 1)
        assert z2.inv((1, -2)) == (-1, 2)
        assert z2.identity == (0, 0)

    def test_elements_unsupported(self, line):
        """ℤ cannot be enumerated."""
        with pytest.raises(UnsupportedError):
            line.elements()

    def test_json_scalar_on_rank_one(self, line):
        """A bare integer denotes an element of ℤ."""
        assert line.element_from_json(3) == (3,)
        assert line.element_from_json([-2]) == (-2,)

    def test_hermite_basis(self):
        """The echelon basis spans the same lattice."""
        basis = hermite_basis([[2, 0], [0, 3], [2, 3]], 2)
        assert basis.tolist() == [[2, 0], [0, 3]]
        assert lattice_index(basis) == 6

    def test_reduce_modulo(self):
        """-3 reduces to 1 modulo 2ℤ."""
        assert reduce_modulo(np.array([[2]]), (-3,)) == (1,)

    def test_sublattice(self, line):
        """2ℤ has index 2 and local coordinates n/2."""
        even = Subgroup.from_basis(line, [[2]], name="2Z")
        assert even.index == 2
        assert even.contains((4,))
        assert not even.contains((3,))
        assert even.localize((4,)) == (2,)
        assert even.embed((3,)) == (6,)


class TestSubgroups:
    """Tests for finite subgroups."""

    def test_from_elements_checks_closure(self, z4):
        """{0, 1} is not closed in ℤ/4."""
        with pytest.raises(SubgroupError, match="not closed"):
            Subgroup.from_elements(z4, [0, 1])

    def test_all_subgroups(self, z4, s3, z2):
        """ℤ/4 has 3 subgroups, S₃ has 6, ℤ/2×ℤ/2 has 5."""
        assert len(all_subgroups(z4)) == 3
        assert len(all_subgroups(s3)) == 6
        assert len(all_subgroups(build_direct_product(z2, z2))) == 5

    def test_normal_subgroups(self, s3):
        """S₃ has exactly three normal subgroups."""
        assert [len(k) for k in normal_subgroups(s3)] == [1, 3, 6]

    def test_derived_subgroup(self, s3):
        """[S₃, S₃] = A₃."""
        assert derived_subgroup(s3).elements == (0, 3, 4)

    def test_cosets(self, z4, half_z4):
        """{0, 2} has cosets {0, 2} and {1, 3}."""
        assert half_z4.right_cosets() == [(0, 2), (1, 3)]
        assert half_z4.index == 2

    def test_as_group(self, z6):
        """{0, 2, 4} ≤ ℤ/6 is cyclic of order 3 in local indices."""
        k = Subgroup.from_elements(z6, [0, 2, 4])
        local = k.as_group()
        assert local.order == 3
        assert k.embed(local.op(1, 1)) == z6.op(2, 2)


class TestHomomorphisms:
    """Tests for Hom(H, G) and End(G)."""

    def test_z2_to_z4(self, z2, z4):
        """Two maps: trivial and 1 ↦ 2."""
        homs = enumerate_homomorphisms(z2, z4)
        assert [h.key() for h in homs] == [(0, 0), (0, 2)]

    def test_z3_to_z4(self, z4):
        """Only the trivial map."""
        assert len(enumerate_homomorphisms(build_cyclic(3), z4)) == 1

    def test_torsion_into_z(self, z2, line):
        """ℤ/2 → ℤ is trivial."""
        homs = enumerate_homomorphisms(z2, line)
        assert len(homs) == 1
        assert homs[0].is_trivial

    def test_endomorphism_counts(self, z2, z4):
        """|End(ℤ/4)| = 4, |End(ℤ/2)| = 2, |End(1)| = 1."""
        assert len(enumerate_endomorphisms(z4)) == 4
        assert len(enumerate_endomorphisms(z2)) == 2
        assert len(enumerate_endomorphisms(build_cyclic(1))) == 1

    def test_matches_all_functions_filter(self):
        """Generator search finds exactly the maps an all-functions filter finds."""
        groups = group_catalog(6)
        for domain, codomain in itertools.product(groups, repeat=2):
            expected = brute_force_homomorphisms(domain, codomain)
            found = [h.key() for h in enumerate_homomorphisms(domain, codomain)]
            assert found == expected, (domain.name, codomain.name)

    def test_every_enumerated_map_is_a_homomorphism(self):
        """φ(ab) = φ(a)φ(b) on every pair for maps between groups of order ≤ 8."""
        groups = [g for g in group_catalog(8) if g.order in (4, 8)]
        for domain, codomain in itertools.product(groups, repeat=2):
            for phi in enumerate_homomorphisms(domain, codomain):
                for a, b in itertools.product(domain.elements(), repeat=2):
                    assert phi(domain.op(a, b)) == codomain.op(phi(a), phi(b))

    def test_bad_generator_image(self, z2, z4):
        """1 ↦ 1 from ℤ/2 to ℤ/4 breaks 1+1 = 0."""
        with pytest.raises(HomomorphismError):
            Homomorphism.from_generators(z2, z4, [1])

    def test_from_images_checks_pairs(self, z4):
        """A bijection that is not additive is rejected."""
        with pytest.raises(HomomorphismError):
            Homomorphism.from_images(z4, z4, [0, 2, 1, 3])

    def test_lattice_enumeration_needs_bound(self, line):
        """Hom(ℤ, ℤ) is infinite without a bound."""
        with pytest.raises(InfiniteFamilyError):
            enumerate_homomorphisms(line, line)
        assert len(enumerate_homomorphisms(line, line, bound=1)) == 3

    def test_identity_and_trivial_names(self, z4, line):
        """The identity is "id", the zero map "trivial", the rest are numbered."""
        assert [h.name for h in enumerate_homomorphisms(z4, z4)] == ["trivial", "id", "h2", "h3"]
        assert [h.name for h in enumerate_homomorphisms(line, line, bound=1)] == ["m0", "trivial", "id"]

    def test_lattice_enumeration_budget(self):
        """Too many candidate matrices exceed the limit."""
        z3 = build_free_abelian(3)
        with pytest.raises(BudgetExceededError):
            enumerate_homomorphisms(z3, z3, bound=2, limit=1000)

    def test_lattice_into_finite_unsupported(self, line, z2):
        """Maps ℤ → ℤ/2 are outside the supported backends."""
        with pytest.raises(UnsupportedError):
            enumerate_homomorphisms(line, z2)

    def test_composition_and_image(self, z4):
        """Doubling twice is trivial; doubling has image {0, 2} and kernel {0, 2}."""
        dbl = Homomorphism.from_generators(z4, z4, [2], name="dbl")
        assert dbl.after(dbl).is_trivial
        assert dbl.image().elements == (0, 2)
        assert dbl.kernel().elements == (0, 2)
        assert not dbl.is_injective

    def test_lattice_properties(self, mul):
        """n ↦ 2n is injective but not surjective; n ↦ -n is bijective."""
        assert mul(2).is_injective
        assert not mul(2).is_surjective
        assert mul(-1).is_bijective
        assert mul(2)((3,)) == (6,)

    def test_restrict(self, z4, half_z4):
        """id restricted to {0, 2} is the identity of a group of order 2."""
        res, image = Homomorphism.identity(z4).restrict(half_z4)
        assert image.elements == (0, 2)
        assert res.kind == "restriction"
        assert list(res.image_table) == [0, 1]


class TestFullyInvariant:
    """Tests for full invariance."""

    def test_subgroup_of_cyclic(self, half_z4):
        """Every subgroup of a cyclic group is fully invariant."""
        assert is_fully_invariant(half_z4)

    def test_commutator_subgroup(self, s3):
        """[S₃, S₃] is fully invariant."""
        assert is_fully_invariant(derived_subgroup(s3))

    def test_transposition(self, s3):
        """⟨(0 1)⟩ is moved by conjugation."""
        swap = Subgroup.generated_by(s3, [s3.generators[0]])
        assert len(swap) == 2
        assert not is_fully_invariant(swap)

    def test_infinite_unsupported(self, line):
        """End(ℤ) is infinite."""
        with pytest.raises(UnsupportedError):
            is_fully_invariant(Subgroup.from_basis(line, [[2]]))


class TestQuotients:
    """Tests for G/N and induced endomorphisms."""

    def test_z4_mod_two(self, z4, half_z4):
        """ℤ/4 / {0, 2} has order 2 and ρ(1) = ρ(3)."""
        quotient, rho = quotient_group(z4, half_z4)
        assert quotient.order == 2
        assert rho(1) == rho(3)
        assert rho.kind == "canonical-projection"

    def test_z6_mod_three(self, z6):
        """ℤ/6 / {0, 3} has order 3."""
        quotient, _ = quotient_group(z6, Subgroup.from_elements(z6, [0, 3]))
        assert quotient.order == 3

    def test_s3_mod_a3(self, s3):
        """S₃ / A₃ has order 2."""
        quotient, _ = quotient_group(s3, derived_subgroup(s3))
        assert quotient.order == 2
        assert isinstance(quotient, FiniteGroup)

    def test_non_normal(self, s3):
        """A transposition subgroup has no quotient."""
        with pytest.raises(SubgroupError, match="not normal"):
            quotient_group(s3, Subgroup.generated_by(s3, [s3.generators[0]]))

    def test_doubling_descends_to_trivial(self, z4, half_z4):
        """1 ↦ 2 induces the trivial map on ℤ/2."""
        dbl = Homomorphism.from_generators(z4, z4, [2])
        phi_hat, _ = induced_endomorphism(dbl, half_z4)
        assert phi_hat.is_trivial

    def test_identity_descends_to_identity(self, z4, half_z4):
        """id induces id."""
        phi_hat, _ = induced_endomorphism(Homomorphism.identity(z4), half_z4)
        assert phi_hat == Homomorphism.identity(phi_hat.domain)

    def test_five_on_z6(self, z6):
        """x ↦ 5x on ℤ/6 induces 1̄ ↦ 1̄ on ℤ/6 / {0, 2, 4}."""
        phi = Homomorphism.from_generators(z6, z6, [5])
        phi_hat, _ = induced_endomorphism(phi, Subgroup.from_elements(z6, [0, 2, 4]))
        assert list(phi_hat.image_table) == [0, 1]

    def test_not_invariant(self, z2):
        """The coordinate swap of ℤ/2×ℤ/2 moves {(0,0), (0,1)}."""
        v = build_direct_product(z2, z2)
        swap = Homomorphism.from_images(v, v, [0, 2, 1, 3])
        with pytest.raises(PreconditionError) as exc:
            induced_endomorphism(swap, Subgroup.from_elements(v, [0, 1]))
        assert exc.value.witness == 1
