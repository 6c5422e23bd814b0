"""Tests for configurations, the shift action and fixed-point sets."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gca_lab.configurations import (
    Alphabet,
    ConfigSet,
    DenseConfiguration,
    FiniteSupportConfiguration,
    PeriodicConfiguration,
    all_configurations,
    characteristic_configurations,
    check_space,
    encode,
    evaluate,
    faithfulness_witness,
    fix_subgroup,
    is_characteristic,
    parse_configuration,
    restrict,
    shift,
    translate_characteristic,
)
from gca_lab.errors import BudgetExceededError, ConfigurationError, PreconditionError, UnsupportedError
from gca_lab.groups import Subgroup, build_free_abelian, group_catalog
from tests.oracles import shift_values

CATALOG = group_catalog(6)


@st.composite
def group_and_configuration(draw):
    """A catalog group, two of its elements and a binary configuration."""
    group = draw(st.sampled_from(CATALOG))
    g = draw(st.integers(0, group.order - 1))
    h = draw(st.integers(0, group.order - 1))
    values = draw(st.lists(st.integers(0, 1), min_size=group.order, max_size=group.order))
    return group, g, h, values


class TestAlphabet:
    """Tests for the symbol set."""

    def test_symbols(self):
        """q = 3 has symbols 0, 1, 2."""
        assert list(Alphabet(3).symbols) == [0, 1, 2]

    def test_too_small(self):
        """A one-letter alphabet is rejected."""
        with pytest.raises(ConfigurationError):
            Alphabet(1)

    def test_check_symbol(self, binary):
        """Booleans and out-of-range values are not symbols."""
        assert binary.check_symbol(1) == 1
        for bad in (2, -1, True, "1"):
            with pytest.raises(ConfigurationError):
                binary.check_symbol(bad)


class TestDense:
    """Tests for configurations over finite groups."""

    def test_shift_on_cyclic(self, z4, binary):
        """1·x moves the marked cell from 0 to 1."""
        x = DenseConfiguration(z4, binary, [1, 0, 0, 0])
        assert shift(1, x).values == (0, 1, 0, 0)

    def test_shift_matches_definition(self, s3, binary):
        """(g·x)(k) = x(g⁻¹k) on S₃."""
        values = [1, 1, 0, 0, 0, 1]
        x = DenseConfiguration(s3, binary, values)
        for g in s3.elements():
            assert list(x.shift(g).values) == shift_values(s3, g, values)

    def test_evaluate_and_restrict(self, z4, binary):
        """x(1) and x|_{2,0}, keyed in subset order."""
        x = DenseConfiguration(z4, binary, [1, 0, 1, 1])
        assert evaluate(x, 1) == 0
        assert list(restrict(x, [2, 0]).items()) == [(2, 1), (0, 1)]

    def test_restrict_bad_element(self, z4, binary):
        """A non-element in the subset is rejected."""
        with pytest.raises(ConfigurationError):
            DenseConfiguration(z4, binary, [0, 0, 0, 0]).restrict([4])

    def test_wrong_length(self, z4, binary):
        """Three values do not cover ℤ/4."""
        with pytest.raises(ConfigurationError):
            DenseConfiguration(z4, binary, [0, 1, 0])

    def test_bad_symbol(self, z4, binary):
        """2 is not a binary symbol."""
        with pytest.raises(ConfigurationError):
            DenseConfiguration(z4, binary, [0, 1, 2, 0])

    def test_shift_by_non_element(self, z4, binary):
        """Shifting ℤ/4 configurations by 7 fails."""
        with pytest.raises(ConfigurationError):
            DenseConfiguration(z4, binary, [0, 0, 0, 0]).shift(7)

    def test_equality(self, z4, binary):
        """Equal tables give equal, equally hashed configurations."""
        a = DenseConfiguration(z4, binary, [0, 1, 0, 1])
        b = DenseConfiguration(z4, binary, np.array([0, 1, 0, 1]))
        assert a == b
        assert len({a, b}) == 1


class TestLattice:
    """Tests for configurations over ℤ^d."""

    def test_support_shift(self, line, binary):
        """Shifting moves the support."""
        x = FiniteSupportConfiguration(line, binary, 0, {(0,): 1})
        moved = x.shift((3,))
        assert moved((3,)) == 1
        assert moved((0,)) == 0

    def test_default_entries_dropped(self, line, binary):
        """Support entries equal to the default disappear."""
        x = FiniteSupportConfiguration(line, binary, 1, {(0,): 1, (2,): 0})
        assert x.support == {(2,): 0}

    def test_periodic_evaluation(self, line, binary):
        """Period 2 with values (1, 0): x(-3) = x(1) = 0."""
        x = PeriodicConfiguration(line, binary, [[2]], [1, 0])
        assert x((-3,)) == 0
        assert x((4,)) == 1

    def test_periodic_shift(self, line, binary):
        """Shifting a period-2 configuration by 1 swaps its values."""
        x = PeriodicConfiguration(line, binary, [[2]], [1, 0])
        assert x.shift((1,)).values == (0, 1)
        assert x.shift((2,)) == x

    def test_periodic_needs_full_rank(self, binary):
        """A rank-1 lattice in ℤ² is not a period lattice."""
        with pytest.raises(ConfigurationError):
            PeriodicConfiguration(build_free_abelian(2), binary, [[1, 0]], [0])

    def test_dense_on_infinite_group(self, line, binary):
        """Dense storage needs a finite group."""
        with pytest.raises(ConfigurationError):
            DenseConfiguration(line, binary, [0, 1])


class TestParsing:
    """Tests for the text formats."""

    def test_dense(self, z4, binary):
        """``dense:`` lists every value."""
        x = parse_configuration("dense:[1,0,0,0]", z4, binary)
        assert x == DenseConfiguration(z4, binary, [1, 0, 0, 0])

    def test_support(self, line, binary):
        """``support:`` takes a default and a mapping."""
        x = parse_configuration("support:default=0;{0: 1, -2: 1}", line, binary)
        assert x((0,)) == 1
        assert x((-2,)) == 1
        assert x((5,)) == 0

    def test_periodic(self, line, binary):
        """``periodic:`` takes a basis and fundamental-domain values."""
        x = parse_configuration("periodic:basis=[[3]];[1,1,0]", line, binary)
        assert x((5,)) == 0

    def test_text_round_trip(self, line, z4, binary):
        """to_text parses back to the same configuration."""
        samples = [
            DenseConfiguration(z4, binary, [0, 1, 1, 0]),
            FiniteSupportConfiguration(line, binary, 1, {(3,): 0}),
            PeriodicConfiguration(line, binary, [[2]], [0, 1]),
        ]
        for x in samples:
            assert parse_configuration(x.to_text(), x.group, binary) == x

    @pytest.mark.parametrize(
        "text",
        ["[1,0,0,0]", "sparse:[1]", "dense:[1,0", "support:dflt=0;{}", "support:default=0;[1]"],
    )
    def test_malformed(self, text, line, binary):
        """Malformed text raises ConfigurationError."""
        with pytest.raises(ConfigurationError):
            parse_configuration(text, line, binary)


class TestCharacteristic:
    """Tests for characteristic configurations."""

    def test_count_on_finite_group(self, z4, binary):
        """With q = 2 the 1-characteristic configuration on g is unique."""
        patterns = characteristic_configurations(z4, binary, 2, 1)
        assert patterns.patterns == [(0, 0, 1, 0)]
        assert patterns.complete

    def test_count_with_three_symbols(self, z4):
        """With q = 3 there are 2³ choices off g."""
        assert len(characteristic_configurations(z4, Alphabet(3), 0, 0)) == 8

    def test_window_on_lattice(self, line, binary):
        """Over ℤ the patterns are window-relative."""
        patterns = characteristic_configurations(line, binary, (0,), 1, window=[(-1,), (0,), (1,)])
        assert patterns.patterns == [(0, 1, 0)]
        assert not patterns.complete
        assert patterns.to_dict()["window_relative"]

    def test_lattice_needs_window(self, line, binary):
        """No default window over an infinite group."""
        with pytest.raises(ConfigurationError):
            characteristic_configurations(line, binary, (0,), 1)

    def test_is_characteristic(self, z4, line, binary):
        """x is 1-characteristic on 0 exactly when 0 is its only 1."""
        assert is_characteristic(DenseConfiguration(z4, binary, [1, 0, 0, 0]), 0, 1)
        assert not is_characteristic(DenseConfiguration(z4, binary, [1, 0, 1, 0]), 0, 1)
        assert is_characteristic(FiniteSupportConfiguration(line, binary, 0, {(2,): 1}), (2,), 1)

    def test_periodic_never_characteristic(self, line, binary):
        """Periodic configurations over ℤ repeat every symbol."""
        with pytest.raises(UnsupportedError):
            is_characteristic(PeriodicConfiguration(line, binary, [[2]], [1, 0]), (0,), 1)

    def test_translate(self, s3, binary):
        """kg⁻¹·χ_g is characteristic on k for every k."""
        chi = DenseConfiguration(s3, binary, [0, 0, 1, 0, 0, 0])
        for k in s3.elements():
            moved = translate_characteristic(chi, 2, k)
            assert is_characteristic(moved, k, 1)

    def test_translate_needs_characteristic(self, z4, binary):
        """Two marked cells are not characteristic."""
        with pytest.raises(PreconditionError):
            translate_characteristic(DenseConfiguration(z4, binary, [1, 1, 0, 0]), 0, 2)

    def test_faithfulness(self, s3, line, binary):
        """Every non-identity element moves its witness."""
        for g in s3.elements()[1:]:
            x = faithfulness_witness(s3, g, binary)
            assert x.shift(g) != x
        x = faithfulness_witness(line, (5,), binary)
        assert x.shift((5,)) != x

    def test_faithfulness_identity(self, z4, binary):
        """The identity has no witness."""
        with pytest.raises(PreconditionError):
            faithfulness_witness(z4, 0, binary)


class TestExhaustive:
    """Tests for whole configuration spaces and Fix(K)."""

    def test_all_configurations_order(self):
        """Row i holds the base-q digits of i."""
        rows = all_configurations(3, 2)
        assert rows.shape == (8, 3)
        assert rows[6].tolist() == [0, 1, 1]
        np.testing.assert_array_equal(encode(rows, 2), np.arange(8))

    def test_budget(self):
        """2²¹ exceeds a 2²⁰ limit."""
        assert check_space(20, 2) == 1 << 20
        with pytest.raises(BudgetExceededError):
            check_space(21, 2)
        with pytest.raises(BudgetExceededError):
            all_configurations(5, 3, limit=100)

    def test_fix_half(self, z4, half_z4, binary):
        """Fix({0, 2}) on ℤ/4 holds the four 2-periodic words."""
        fixed = fix_subgroup(half_z4, binary)
        assert len(fixed) == 4
        assert fixed.rows.tolist() == [[0, 0, 0, 0], [1, 0, 1, 0], [0, 1, 0, 1], [1, 1, 1, 1]]

    def test_fix_is_shift_invariant(self, s3, binary):
        """Members of Fix(A₃) are fixed by every element of A₃."""
        a3 = Subgroup.from_elements(s3, [0, 3, 4])
        for x in fix_subgroup(a3, binary).members():
            for k in a3:
                assert x.shift(k) == x

    def test_fix_of_lattice_unsupported(self, line, binary):
        """Fix(2ℤ) is infinite."""
        with pytest.raises(UnsupportedError):
            fix_subgroup(Subgroup.from_basis(line, [[2]]), binary)

    def test_config_set_membership(self, z4, binary):
        """Rows are deduplicated and membership works on rows and objects."""
        rows = np.array([[1, 0, 1, 0], [0, 0, 0, 0], [1, 0, 1, 0]])
        cs = ConfigSet(z4, binary, rows)
        assert len(cs) == 2
        assert DenseConfiguration(z4, binary, [1, 0, 1, 0]) in cs
        assert DenseConfiguration(z4, binary, [1, 1, 1, 0]) not in cs
        assert cs.contains_rows(np.array([[0, 0, 0, 0], [0, 1, 0, 0]])).tolist() == [True, False]


class TestActionLaws:
    """Property tests for the shift action."""

    @given(group_and_configuration())
    @settings(max_examples=100, deadline=None)
    def test_action_composes(self, sample):
        """(gh)·x = g·(h·x)."""
        group, g, h, values = sample
        x = DenseConfiguration(group, Alphabet(2), values)
        assert x.shift(group.op(g, h)) == x.shift(h).shift(g)

    @given(group_and_configuration())
    @settings(max_examples=100, deadline=None)
    def test_identity_acts_trivially(self, sample):
        """e·x = x."""
        group, _, _, values = sample
        x = DenseConfiguration(group, Alphabet(2), values)
        assert x.shift(group.identity) == x

    @given(st.integers(-20, 20), st.integers(-20, 20), st.dictionaries(st.integers(-5, 5), st.integers(0, 1)))
    @settings(max_examples=100, deadline=None)
    def test_action_composes_on_z(self, a, b, support):
        """(a+b)·x = a·(b·x) for finite-support configurations over ℤ."""
        line = build_free_abelian(1)
        x = FiniteSupportConfiguration(line, Alphabet(2), 0, {(k,): v for k, v in support.items()})
        assert x.shift((a + b,)) == x.shift((b,)).shift((a,))
