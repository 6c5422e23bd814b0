"""Tests for difference sets, equivariance decisions and UHP constructions."""

import pytest

from gca_lab.automaton import GCA, identity_gca, reference_value
from gca_lab.configurations import FiniteSupportConfiguration
from gca_lab.equivariance import (
    METHODS,
    characteristic_uhp_certificate,
    constancy_witness,
    decide_equivariance,
    difference_set,
    find_disjoint_translate,
    multiples,
    symmetric_counterexample,
    symmetric_equivariance_check,
    uhp_scan,
)
from gca_lab.errors import (
    HomomorphismError,
    NoCounterexampleError,
    NotFoundError,
    PreconditionError,
    UnsupportedError,
)
from gca_lab.groups import (
    Homomorphism,
    build_cyclic,
    build_free_abelian,
    build_quaternion,
    enumerate_endomorphisms,
)
from gca_lab.rules import LocalRule


@pytest.fixture
def neg4(z4):
    return Homomorphism.from_images(z4, z4, [0, 3, 2, 1], name="neg4")


@pytest.fixture
def xor_line(line, mul, binary):
    """x(2n) ⊕ x(2n+1) on ℤ."""
    return GCA(mul(2), LocalRule.xor(line, [(0,), (1,)], binary), name="t2")


class TestDifferenceSet:
    """Tests for Δ(φ, ψ)."""

    def test_identity_and_five_on_z6(self, z6):
        """Δ(id, 5x) on ℤ/6 is {0, 2, 4}."""
        five = Homomorphism.from_generators(z6, z6, [5])
        delta = difference_set(Homomorphism.identity(z6), five)
        assert delta.finite
        assert delta.elements == [0, 2, 4]

    def test_equal_maps_are_trivial(self, z4):
        """Δ(φ, φ) = {e}."""
        phi = Homomorphism.identity(z4)
        assert difference_set(phi, phi).is_trivial

    def test_lattice_maps(self, mul):
        """Δ(2n, 3n) is infinite with direction -1 along e₁."""
        delta = difference_set(mul(2), mul(3))
        assert not delta.finite
        assert delta.certificate == (1,)
        assert delta.direction == (-1,)
        assert delta.to_dict()["direction"] == [-1]

    def test_equal_lattice_maps(self, mul):
        """Equal matrices give the trivial difference set."""
        assert difference_set(mul(2), mul(2)).is_trivial

    def test_rank_two(self):
        """The first differing column supplies the certificate."""
        plane = build_free_abelian(2)
        phi = Homomorphism.from_matrix(plane, plane, [[1, 0], [0, 1]])
        psi = Homomorphism.from_matrix(plane, plane, [[1, 1], [0, 3]])
        delta = difference_set(phi, psi)
        assert delta.certificate == (0, 1)
        assert delta.direction == (-1, -2)

    def test_mismatched(self, z4, z6):
        """Maps must share domain and codomain."""
        with pytest.raises(HomomorphismError):
            difference_set(Homomorphism.identity(z4), Homomorphism.identity(z6))


class TestDisjointTranslate:
    """Tests for translates r with rT ∩ T = ∅."""

    def test_first_disjoint(self, z4):
        """With T = {0, 1}, TT⁻¹ = {0, 1, 3}, so 2 is the first disjoint translate."""
        assert find_disjoint_translate(z4, [1, 3, 2, 0], [0, 1]) == 2

    def test_none_disjoint(self, z4):
        """All candidates meet T."""
        with pytest.raises(NotFoundError):
            find_disjoint_translate(z4, [0, 1, 3], [0, 1])

    def test_multiples_are_lazy(self, line):
        """An infinite family succeeds within |TT⁻¹| + 1 tries."""
        candidates = (r for _, r in multiples(line, (1,)))
        assert find_disjoint_translate(line, candidates, [(0,), (1,)]) == (-2,)

    def test_cap(self, line):
        """max_candidates stops the search."""
        with pytest.raises(NotFoundError):
            find_disjoint_translate(line, [(1,), (-1,), (2,)], [(0,), (1,)], max_candidates=2)

    def test_multiples_order(self, line):
        """Increasing norm, the negative multiple first."""
        it = multiples(line, (3,))
        assert [next(it) for _ in range(4)] == [(-1, (-3,)), (1, (3,)), (-2, (-6,)), (2, (6,))]

    def test_multiples_tie_break_on_element(self, line):
        """Ties go to the lexicographically smaller element, not the smaller m."""
        it = multiples(line, (-2,))
        assert [next(it) for _ in range(4)] == [(1, (-2,)), (-1, (2,)), (2, (-4,)), (-2, (4,))]


class TestDecideEquivariance:
    """Tests for decide_equivariance."""

    def test_same_homomorphism(self, xor4):
        """ψ = φ needs no work."""
        verdict = decide_equivariance(xor4, xor4.phi)
        assert verdict.equivariant
        assert verdict.method == "identical-homomorphism"

    def test_constant_rule(self, z4, neg4, binary):
        """Constant automata are equivariant with every ψ."""
        gca = GCA(Homomorphism.identity(z4), LocalRule.constant(z4, 1, binary, [0, 1]))
        verdict = decide_equivariance(gca, neg4)
        assert verdict.equivariant
        assert verdict.method == "constant-rule"

    def test_finite_counterexample(self, xor4, neg4, z4, binary):
        """xor over id is not neg-equivariant; the witness re-evaluates."""
        verdict = decide_equivariance(xor4, neg4)
        assert not verdict.equivariant
        assert verdict.method == "exhaustive"
        assert verdict.verified
        other = xor4.with_phi(neg4)
        assert reference_value(xor4, verdict.x, verdict.h) != reference_value(other, verdict.x, verdict.h)
        assert verdict.values[0] != verdict.values[1]

    def test_finite_equivariant(self, even4, neg4):
        """x(h) ⊕ x(h+2) is invariant under h ↦ -h."""
        verdict = decide_equivariance(even4, neg4)
        assert verdict.equivariant
        assert verdict.method == "exhaustive"

    def test_lattice_witness(self, xor_line, mul):
        """2n vs 3n: h = 2, windows {4, 5} and {6, 7}, x = 1 at 6."""
        verdict = decide_equivariance(xor_line, mul(3))
        assert not verdict.equivariant
        assert verdict.method == "theorem-main"
        assert verdict.h == (2,)
        assert verdict.detail["phi_window"] == [[4], [5]]
        assert verdict.detail["psi_window"] == [[6], [7]]
        assert verdict.x.support == {(6,): 1}
        assert verdict.values == (0, 1)

    def test_lattice_witness_serializes(self, xor_line, mul):
        """The witness renders as text."""
        d = decide_equivariance(xor_line, mul(3)).to_dict()
        assert d["witness"]["x"] == "support:default=0;{6:1}"
        assert d["witness"]["h"] == [2]

    def test_every_pair_of_lattice_maps_differs(self, xor_line, mul):
        """No ψ ≠ φ on ℤ keeps xor equivariant."""
        for a in (-3, -1, 0, 1, 3, 4):
            assert not decide_equivariance(xor_line, mul(a)).equivariant

    def test_domain_mismatch(self, xor4, z2):
        """ψ must share domain and codomain with φ."""
        with pytest.raises(HomomorphismError):
            decide_equivariance(xor4, Homomorphism.from_generators(z2, xor4.source, [2]))

    def test_methods_listed(self):
        """Every verdict method is a known tag."""
        assert "theorem-main" in METHODS
        assert "constant-characterization" in METHODS

    def test_single_cell_witness(self, line, mul, binary):
        """A one-cell rule over n vs 2n gets a finite-support witness."""
        gca = GCA(mul(1), LocalRule.identity(line, binary))
        verdict = decide_equivariance(gca, mul(2))
        assert isinstance(verdict.x, FiniteSupportConfiguration)
        assert verdict.verified


class TestConstancyWitness:
    """Tests for the trivial-versus-φ witness."""

    def test_doubling(self, xor_line):
        """h = -1 separates 2n from the trivial map."""
        verdict = constancy_witness(xor_line)
        assert verdict.method == "constant-characterization"
        assert verdict.h == (-1,)
        assert verdict.detail["phi_window"] == [[-2], [-1]]
        assert verdict.x.support == {(0,): 1}
        assert verdict.verified

    def test_constant_rejected(self, line, mul, binary):
        """A constant automaton has no witness."""
        gca = GCA(mul(2), LocalRule.constant(line, 0, binary))
        with pytest.raises(PreconditionError):
            constancy_witness(gca)

    def test_trivial_map_rejected(self, xor_line, mul):
        """ψ₁ must have infinite image."""
        with pytest.raises(PreconditionError):
            constancy_witness(xor_line, mul(0))

    def test_finite_map_rejected(self, xor4):
        """Finite groups have no lattice maps."""
        with pytest.raises(PreconditionError):
            constancy_witness(xor4)


class TestUhpScan:
    """Tests for uhp_scan."""

    def test_xor_on_z2(self, z2, binary):
        """x(0) ⊕ x(1) on ℤ/2 ignores φ entirely."""
        gca = GCA(Homomorphism.identity(z2), LocalRule.xor(z2, [0, 1], binary))
        scan = uhp_scan(gca)
        assert [h.key() for h in scan.equivariant] == [(0, 0), (0, 1)]
        assert [h.name for h in scan.equivariant] == ["trivial", "id"]
        assert not scan.has_uhp
        assert scan.total == 2

    def test_identity_has_uhp(self, z2, binary):
        """The identity automaton pins down φ."""
        scan = uhp_scan(identity_gca(z2, binary))
        assert scan.has_uhp
        assert scan.to_dict()["uhp"]

    def test_lattice_unsupported(self, xor_line):
        """Hom(ℤ, ℤ) is infinite."""
        with pytest.raises(UnsupportedError):
            uhp_scan(xor_line)


class TestSymmetricCounterexample:
    """Tests for the sum-mod-q rule over ⟨Δ⟩."""

    def test_z6(self, z6, binary):
        """Over ℤ/6, Δ(id, 5x) generates {0, 2, 4}."""
        five = Homomorphism.from_generators(z6, z6, [5])
        tau = symmetric_counterexample(Homomorphism.identity(z6), five, binary)
        assert tau.memory == (0, 2, 4)
        assert not tau.is_constant
        assert tau.rule.is_symmetric()

    def test_every_pair_of_endomorphisms(self, z4, binary):
        """The construction succeeds for every pair in End(ℤ/4)."""
        endos = enumerate_endomorphisms(z4)
        for phi in endos:
            for psi in endos:
                tau = symmetric_counterexample(phi, psi, binary)
                assert symmetric_equivariance_check(tau.with_phi(phi), psi)

    def test_quaternion_endomorphisms(self, binary):
        """Over the non-abelian Q₈ every pair in End(Q₈) has a counterexample."""
        endos = enumerate_endomorphisms(build_quaternion())
        for phi in endos:
            for psi in endos:
                if phi == psi:
                    continue
                tau = symmetric_counterexample(phi, psi, binary)
                assert not tau.is_constant
                assert symmetric_equivariance_check(tau.with_phi(phi), psi)

    def test_z8_agrees_with_exhaustive_decision(self, binary):
        """On ℤ/8 the constructed τ is equivariant by the exhaustive check too."""
        endos = enumerate_endomorphisms(build_cyclic(8))
        assert len(endos) == 8
        for phi in endos:
            for psi in endos:
                tau = symmetric_counterexample(phi, psi, binary)
                assert decide_equivariance(tau.with_phi(phi), psi).equivariant

    def test_lattice_has_none(self, mul, binary):
        """Infinite Δ has no counterexample."""
        with pytest.raises(NoCounterexampleError):
            symmetric_counterexample(mul(2), mul(3), binary)


class TestSymmetricCriterion:
    """Tests for the sufficient symmetric criterion."""

    def test_even_memory(self, even4, neg4):
        """Δ(id, neg) ⊆ {0, 2} preserves T = {0, 2}."""
        assert symmetric_equivariance_check(even4, neg4)

    def test_adjacent_memory(self, xor4, neg4):
        """2 + {0, 1} ≠ {0, 1}."""
        assert not symmetric_equivariance_check(xor4, neg4)

    def test_non_symmetric_rule(self, z4, neg4, binary):
        """Non-symmetric rules fall outside the criterion."""
        gca = GCA(Homomorphism.identity(z4), LocalRule(z4, [0, 2], [0, 1, 0, 1], binary))
        assert not symmetric_equivariance_check(gca, neg4)

    def test_lattice(self, xor_line, mul):
        """Over ℤ the criterion holds only for ψ = φ."""
        assert symmetric_equivariance_check(xor_line, mul(2))
        assert not symmetric_equivariance_check(xor_line, mul(3))


class TestCharacteristicCertificate:
    """Tests for characteristic_uhp_certificate."""

    def test_identity(self, z2, binary):
        """id(1, 0) is 1-characteristic on 0."""
        cert = characteristic_uhp_certificate(identity_gca(z2, binary))
        assert (cert.g, cert.a, cert.preimage) == (0, 1, (1, 0))

    def test_xor_has_none(self, xor4):
        """xor images on ℤ/4 have even weight, so no cell is marked alone."""
        assert characteristic_uhp_certificate(xor4) is None

    def test_certificate_implies_uhp(self, z4, binary):
        """The identity on ℤ/4 has a certificate and the scan finds only φ."""
        gca = identity_gca(z4, binary)
        assert characteristic_uhp_certificate(gca) is not None
        assert uhp_scan(gca).has_uhp

    def test_infinite_group(self, xor_line):
        """Only finite groups are searched."""
        with pytest.raises(UnsupportedError):
            characteristic_uhp_certificate(xor_line)
