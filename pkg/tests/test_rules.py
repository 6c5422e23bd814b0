"""Tests for local rules."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gca_lab.configurations import Alphabet
from gca_lab.errors import RuleError
from gca_lab.groups import build_cyclic
from gca_lab.rules import LocalRule, builtin_rule, enumerate_rules
from tests.oracles import brute_force_minimal_memory

Z4 = build_cyclic(4)


class TestValidation:
    """Tests for rule construction."""

    def test_duplicate_memory(self, z4, binary):
        """Memory elements must be distinct."""
        with pytest.raises(RuleError, match="distinct"):
            LocalRule(z4, [0, 0], [0, 1, 1, 0], binary)

    def test_memory_outside_group(self, z4, binary):
        """5 is not in ℤ/4."""
        with pytest.raises(RuleError):
            LocalRule(z4, [5], [0, 1], binary)

    def test_table_length(self, z4, binary):
        """Two cells need four entries."""
        with pytest.raises(RuleError, match="needs 4 entries"):
            LocalRule(z4, [0, 1], [0, 1], binary)

    def test_table_values(self, z4, binary):
        """Table entries must be symbols."""
        with pytest.raises(RuleError):
            LocalRule(z4, [0], [0, 2], binary)

    def test_table_is_read_only(self, z4, binary):
        """The stored table cannot be mutated."""
        rule = LocalRule(z4, [0], [0, 1], binary)
        with pytest.raises(ValueError):
            rule.table[0] = 1

    def test_empty_memory(self, z4, binary):
        """An empty memory holds one constant entry."""
        rule = LocalRule(z4, [], [1], binary)
        assert rule.size == 0
        assert rule([]) == 1
        assert rule.is_constant


class TestEvaluation:
    """Tests for pattern codes and lookup."""

    def test_xor_table(self, z4, binary):
        """xor on two cells is 0, 1, 1, 0 in code order."""
        assert LocalRule.xor(z4, [0, 1], binary).table.tolist() == [0, 1, 1, 0]

    def test_from_function(self, z4, binary):
        """Tabulating the parity function reproduces xor."""
        rule = LocalRule.from_function(z4, [0, 1], binary, lambda p: int(p.sum()) % 2)
        assert rule == LocalRule.xor(z4, [0, 1], binary)

    def test_code_weights(self, z4):
        """Position 0 is the least significant digit."""
        rule = LocalRule.sum_mod_q(z4, [0, 1, 2], Alphabet(3))
        assert rule.code([2, 0, 1]) == 2 + 9
        assert rule.decode(11) == (2, 0, 1)
        assert rule([2, 0, 1]) == 0

    def test_mapping_pattern(self, z4, binary):
        """A mapping t ↦ p(t) is read in memory order."""
        rule = LocalRule.read_at(z4, 3, binary)
        assert rule({3: 1}) == 1

    def test_wrong_pattern_length(self, z4, binary):
        """A pattern must cover the memory."""
        with pytest.raises(RuleError):
            LocalRule.xor(z4, [0, 1], binary)([1])


class TestStructure:
    """Tests for minimal memory, projection and symmetry."""

    def test_inessential_cell_dropped(self, z4, binary):
        """μ(p) = p(0) on {0, 1} has minimal memory {0}."""
        rule = LocalRule(z4, [0, 1], [0, 1, 0, 1], binary)
        assert rule.minimal_memory() == [0]
        small = rule.minimize()
        assert small.memory == (0,)
        assert small.table.tolist() == [0, 1]

    def test_constant_has_empty_memory(self, z4, binary):
        """Constants need no memory."""
        rule = LocalRule.constant(z4, 1, binary, memory=[0, 2])
        assert rule.minimal_memory() == []
        assert rule.minimize().table.tolist() == [1]

    def test_project_keeps_values(self, z4, binary):
        """Projecting onto a larger memory pads with ignored cells."""
        rule = LocalRule.xor(z4, [0, 1], binary)
        big = rule.project([1, 3, 0])
        patterns = big.patterns()
        expected = (patterns[:, 0] + patterns[:, 2]) % 2
        np.testing.assert_array_equal(big.table, expected)

    def test_project_cannot_drop_essential(self, z4, binary):
        """xor depends on both cells."""
        with pytest.raises(RuleError, match="essential"):
            LocalRule.xor(z4, [0, 1], binary).project([0])

    def test_symmetric(self, z4, binary):
        """Parity is symmetric; reading one cell of two is not."""
        assert LocalRule.xor(z4, [0, 1, 2], binary).is_symmetric()
        assert not LocalRule(z4, [0, 1], [0, 1, 0, 1], binary).is_symmetric()
        assert LocalRule.read_at(z4, 2, binary).is_symmetric()

    def test_majority_is_symmetric(self, s3, binary):
        """Majority of three is symmetric."""
        rule = LocalRule(s3, [0, 1, 2], [0, 0, 0, 1, 0, 1, 1, 1], binary)
        assert rule.is_symmetric()
        assert rule.minimal_memory() == [0, 1, 2]

    def test_first_distinct_pair(self, z4, binary):
        """xor first differs at code 1; constants never differ."""
        assert LocalRule.xor(z4, [0, 1], binary).first_distinct_pair() == (0, 1)
        assert LocalRule.constant(z4, 0, binary, [0]).first_distinct_pair() is None

    def test_relabel(self, z4, binary):
        """Relabelling moves memory and keeps the table."""
        rule = LocalRule.xor(z4, [0, 1], binary).relabel(z4, lambda t: (t + 2) % 4)
        assert rule.memory == (2, 3)
        assert rule.table.tolist() == [0, 1, 1, 0]

    def test_to_dict(self, line, binary):
        """Lattice memory serializes as coordinate lists."""
        d = LocalRule.xor(line, [(0,), (1,)], binary, name="xorZ").to_dict()
        assert d == {"name": "xorZ", "group": "Z", "q": 2, "memory": [[0], [1]], "table": [0, 1, 1, 0]}


@given(st.lists(st.integers(0, 1), min_size=8, max_size=8))
@settings(max_examples=100, deadline=None)
def test_minimal_memory_matches_subset_search(table):
    """Essential positions agree with the smallest determining subset."""
    rule = LocalRule(Z4, [0, 1, 3], table, Alphabet(2))
    assert rule.minimal_memory() == brute_force_minimal_memory(rule)


@given(st.lists(st.integers(0, 2), min_size=9, max_size=9))
@settings(max_examples=100, deadline=None)
def test_minimize_preserves_values(table):
    """The minimized rule agrees with the original on every pattern."""
    rule = LocalRule(Z4, [2, 0], table, Alphabet(3))
    small = rule.minimize()
    for pattern in rule.patterns():
        values = dict(zip(rule.memory, pattern.tolist()))
        assert small({t: values[t] for t in small.memory}) == rule(values)


class TestBuiltins:
    """Tests for named rules."""

    def test_identity(self, z4, binary):
        """identity reads the identity cell."""
        rule = builtin_rule("identity", z4, binary)
        assert rule.memory == (0,)
        assert rule.table.tolist() == [0, 1]

    def test_xor_default_memory(self, z4, binary):
        """xor defaults to {e, first generator}."""
        assert builtin_rule("xor", z4, binary).memory == (0, 1)

    def test_sum_mod_q(self, z4):
        """sum-mod-q over q = 3."""
        rule = builtin_rule("sum-mod-q", z4, Alphabet(3), memory=[0, 2])
        assert rule([2, 2]) == 1

    def test_constant(self, z4, binary):
        """constant:1 is constant with empty memory."""
        rule = builtin_rule("constant:1", z4, binary)
        assert rule.memory == ()
        assert rule.table.tolist() == [1]

    def test_read_at(self, z4, line, binary):
        """read-at takes an index or lattice coordinates."""
        assert builtin_rule("read-at:3", z4, binary).memory == (3,)
        assert builtin_rule("read-at:-2", line, binary).memory == ((-2,),)

    @pytest.mark.parametrize("spec", ["majority", "constant:x", "read-at:9", "read-at:a"])
    def test_bad_specs(self, spec, z4, binary):
        """Unknown names and bad arguments raise RuleError."""
        with pytest.raises(RuleError):
            builtin_rule(spec, z4, binary)

    def test_xor_on_trivial_group(self, binary):
        """The trivial group has no generator to default to."""
        with pytest.raises(RuleError):
            builtin_rule("xor", build_cyclic(1), binary)


class TestEnumeration:
    """Tests for exhaustive rule enumeration."""

    def test_counts(self, z2, binary):
        """ℤ/2 with q = 2: 10 rules up to |T| = 1, 26 up to |T| = 2."""
        assert sum(1 for _ in enumerate_rules(z2, binary, 1)) == 10
        assert sum(1 for _ in enumerate_rules(z2, binary, 2)) == 26

    def test_order_and_names(self, z2, binary):
        """Memory sets grow by size and tables run in code order."""
        rules = list(enumerate_rules(z2, binary, 1))
        assert [r.memory for r in rules[:4]] == [(), (), (0,), (0,)]
        assert [r.name for r in rules[2:6]] == ["r0", "r1", "r2", "r3"]
        assert rules[4].table.tolist() == [0, 1]

    def test_custom_pool(self, line, binary):
        """An explicit pool allows lattice memory sets."""
        rules = list(enumerate_rules(line, binary, 1, memories=[(0,), (1,)]))
        assert len(rules) == 2 + 2 * 4
