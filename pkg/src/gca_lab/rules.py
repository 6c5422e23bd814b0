"""Local rules μ : A^T → A over a finite memory set T ⊆ G.

A pattern p on T = (t_0, ..., t_{n-1}) is encoded as the integer
Σ p(t_j)·q^j, so memory position 0 is the least significant digit and
the rule is a flat lookup table of length q^n.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from gca_lab.config import DEFAULT_MAX_CONFIGURATIONS
from gca_lab.configurations import Alphabet, all_configurations, encode
from gca_lab.errors import RuleError
from gca_lab.groups.base import Element, Group

logger = logging.getLogger(__name__)

BUILTINS = ("identity", "xor", "sum-mod-q", "constant:c", "read-at:g")


class LocalRule:
    """A memory set plus a total lookup table.

    Args:
        group: The group G the memory set lives in.
        memory: Distinct elements t_0, ..., t_{n-1}.
        table: μ on every pattern, indexed by pattern code.
        alphabet: Alphabet A.
        name: Display name.

    Raises:
        RuleError: If the memory repeats an element, names a non-element,
            or the table has the wrong length or a bad symbol.
    """

    def __init__(
        self,
        group: Group,
        memory: Sequence[Element],
        table: Sequence[int] | np.ndarray,
        alphabet: Alphabet,
        name: str = "mu",
    ) -> None:
        mem = tuple(memory)
        for t in mem:
            if not group.contains(t):
                raise RuleError(f"{name}: memory element {t!r} is not in {group.name}")
        if len(set(mem)) != len(mem):
            raise RuleError(f"{name}: memory elements must be distinct, got {list(mem)}")
        arr = np.asarray(table, dtype=np.int64).ravel()
        expected = alphabet.size ** len(mem)
        if arr.shape[0] != expected:
            raise RuleError(f"{name}: table needs {expected} entries for |T|={len(mem)}, got {arr.shape[0]}")
        if arr.size and (arr.min() < 0 or arr.max() >= alphabet.size):
            raise RuleError(f"{name}: table values must lie in 0..{alphabet.size - 1}")
        arr.setflags(write=False)
        self.group = group
        self.memory = mem
        self.table = arr
        self.alphabet = alphabet
        self.name = name

    # ─── Constructors ──────────────────────────────────────────

    @classmethod
    def from_function(
        cls,
        group: Group,
        memory: Sequence[Element],
        alphabet: Alphabet,
        fn: Callable[[np.ndarray], int],
        name: str = "mu",
    ) -> LocalRule:
        """Tabulate ``fn`` on every pattern (given as a row of symbols)."""
        patterns = all_configurations(len(memory), alphabet.size)
        return cls(group, memory, [int(fn(p)) for p in patterns], alphabet, name=name)

    @classmethod
    def identity(cls, group: Group, alphabet: Alphabet, name: str = "identity") -> LocalRule:
        """μ(p) = p(e) on T = {e}."""
        return cls.read_at(group, group.identity, alphabet, name=name)

    @classmethod
    def read_at(cls, group: Group, g: Element, alphabet: Alphabet, name: str | None = None) -> LocalRule:
        """μ(p) = p(g) on T = {g}."""
        return cls(group, [g], np.arange(alphabet.size), alphabet, name=name or f"read-at:{g}")

    @classmethod
    def constant(
        cls,
        group: Group,
        c: int,
        alphabet: Alphabet,
        memory: Sequence[Element] = (),
        name: str | None = None,
    ) -> LocalRule:
        """μ ≡ c on the given memory set."""
        c = alphabet.check_symbol(c)
        return cls(group, memory, np.full(alphabet.size ** len(memory), c), alphabet, name=name or f"constant:{c}")

    @classmethod
    def sum_mod_q(
        cls, group: Group, memory: Sequence[Element], alphabet: Alphabet, name: str = "sum-mod-q"
    ) -> LocalRule:
        """μ(p) = Σ p(t) mod q."""
        patterns = all_configurations(len(memory), alphabet.size)
        return cls(group, memory, patterns.sum(axis=1) % alphabet.size, alphabet, name=name)

    @classmethod
    def xor(cls, group: Group, memory: Sequence[Element], alphabet: Alphabet, name: str = "xor") -> LocalRule:
        """μ(p) = Σ p(t) mod 2."""
        patterns = all_configurations(len(memory), alphabet.size)
        return cls(group, memory, patterns.sum(axis=1) % 2, alphabet, name=name)

    # ─── Evaluation ────────────────────────────────────────────

    @property
    def size(self) -> int:
        """|T|."""
        return len(self.memory)

    @property
    def weights(self) -> np.ndarray:
        """q^j for each memory position j."""
        return self.alphabet.size ** np.arange(self.size, dtype=np.int64)

    def code(self, pattern: Sequence[int]) -> int:
        """Code of a pattern given as symbols aligned with the memory."""
        if len(pattern) != self.size:
            raise RuleError(f"{self.name}: pattern needs {self.size} symbols, got {len(pattern)}")
        return int(np.dot(np.asarray(pattern, dtype=np.int64), self.weights))

    def __call__(self, pattern: Sequence[int] | Mapping[Element, int]) -> int:
        """μ(p) for a symbol sequence or a mapping t ↦ p(t)."""
        if isinstance(pattern, Mapping):
            pattern = [pattern[t] for t in self.memory]
        return int(self.table[self.code(pattern)])

    def patterns(self) -> np.ndarray:
        """All patterns in code order, one row per pattern."""
        return all_configurations(self.size, self.alphabet.size, DEFAULT_MAX_CONFIGURATIONS)

    # ─── Structure ─────────────────────────────────────────────

    @property
    def is_constant(self) -> bool:
        """Whether μ takes a single value."""
        return bool(np.all(self.table == self.table[0]))

    def _cube(self) -> np.ndarray:
        # axis i of the cube is memory position n-1-i
        return self.table.reshape((self.alphabet.size,) * self.size)

    def essential_positions(self) -> list[int]:
        """Memory positions where changing one symbol can change μ."""
        cube = self._cube()
        n = self.size
        essential = []
        for j in range(n):
            axis = n - 1 - j
            if np.any(cube != np.take(cube, [0], axis=axis)):
                essential.append(j)
        return essential

    def minimal_memory(self) -> list[Element]:
        """The minimal memory set, in sorted element order."""
        return sorted(self.memory[j] for j in self.essential_positions())

    def project(self, memory: Sequence[Element], name: str | None = None) -> LocalRule:
        """Same local function over a memory set containing every essential element.

        Elements of ``memory`` outside the current memory are ignored by
        the new table; current elements outside ``memory`` must be
        inessential.

        Raises:
            RuleError: If an essential element would be dropped.
        """
        memory = list(memory)
        position = {t: j for j, t in enumerate(self.memory)}
        for j in self.essential_positions():
            if self.memory[j] not in memory:
                raise RuleError(f"{self.name}: cannot drop essential memory element {self.memory[j]!r}")
        new_patterns = all_configurations(len(memory), self.alphabet.size)
        full = np.zeros((new_patterns.shape[0], self.size), dtype=np.int64)
        for i, t in enumerate(memory):
            if t in position:
                full[:, position[t]] = new_patterns[:, i]
        table = self.table[encode(full, self.alphabet.size)]
        return LocalRule(self.group, memory, table, self.alphabet, name=name or self.name)

    def minimize(self) -> LocalRule:
        """This rule projected onto its minimal memory set."""
        return self.project(self.minimal_memory())

    def relabel(self, group: Group, mapping: Callable[[Element], Element], name: str | None = None) -> LocalRule:
        """Same table with each memory element t replaced by mapping(t)."""
        return LocalRule(group, [mapping(t) for t in self.memory], self.table, self.alphabet, name=name or self.name)

    def is_symmetric(self) -> bool:
        """Whether μ is invariant under every permutation of the memory.

        Checks the two generators of the symmetric group on positions.
        """
        n = self.size
        if n < 2:
            return True
        patterns = self.patterns()
        q = self.alphabet.size
        swap = [1, 0] + list(range(2, n))
        cycle = list(range(1, n)) + [0]
        for perm in (swap, cycle):
            if not np.array_equal(self.table[encode(patterns[:, perm], q)], self.table):
                return False
        return True

    def first_distinct_pair(self) -> tuple[int, int] | None:
        """Codes (0, c) with μ(0) ≠ μ(c) for the least such c, or None if constant."""
        diff = np.flatnonzero(self.table != self.table[0])
        if not len(diff):
            return None
        return 0, int(diff[0])

    def decode(self, code: int) -> tuple[int, ...]:
        """Pattern symbols (aligned with the memory) of a code."""
        q = self.alphabet.size
        return tuple((code // q**j) % q for j in range(self.size))

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "name": self.name,
            "group": self.group.name,
            "q": self.alphabet.size,
            "memory": [self.group.element_to_json(t) for t in self.memory],
            "table": self.table.tolist(),
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocalRule):
            return NotImplemented
        return (
            self.group == other.group
            and self.alphabet == other.alphabet
            and self.memory == other.memory
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self) -> int:
        return hash((self.memory, self.table.tobytes()))

    def __repr__(self) -> str:
        return f"LocalRule({self.name}, T={list(self.memory)})"


def builtin_rule(
    spec: str,
    group: Group,
    alphabet: Alphabet,
    memory: Sequence[Element] | None = None,
) -> LocalRule:
    """Build a named rule.

    Args:
        spec: ``identity``, ``xor``, ``sum-mod-q``, ``constant:c`` or
            ``read-at:g`` (g an integer, or comma-separated integers
            over ℤ^d).
        group: The group G.
        alphabet: Alphabet A.
        memory: Memory set for ``xor``/``sum-mod-q``/``constant``; xor and
            sum-mod-q default to {e, first generator}.

    Raises:
        RuleError: For unknown names or bad arguments.
    """
    name, _, arg = spec.partition(":")
    if name == "identity":
        return LocalRule.identity(group, alphabet)
    if name in ("xor", "sum-mod-q"):
        if memory is None:
            if not group.generators:
                raise RuleError(f"{spec} needs an explicit memory set on a trivial group")
            memory = [group.identity, group.generators[0]]
        if name == "xor":
            return LocalRule.xor(group, memory, alphabet)
        return LocalRule.sum_mod_q(group, memory, alphabet)
    if name == "constant":
        try:
            c = int(arg)
        except ValueError:
            raise RuleError(f"constant rule needs an integer symbol, got {arg!r}") from None
        return LocalRule.constant(group, c, alphabet, memory or ())
    if name == "read-at":
        try:
            parts = [int(v) for v in arg.split(",")]
        except ValueError:
            raise RuleError(f"read-at needs an element, got {arg!r}") from None
        g = parts[0] if group.is_finite else tuple(parts)
        if not group.contains(g):
            raise RuleError(f"read-at: {arg!r} is not an element of {group.name}")
        return LocalRule.read_at(group, g, alphabet, name=spec)
    raise RuleError(f"unknown builtin rule {spec!r}; expected one of {', '.join(BUILTINS)}")


def enumerate_rules(
    group: Group,
    alphabet: Alphabet,
    max_memory: int,
    memories: Iterable[Sequence[Element]] | None = None,
) -> Iterator[LocalRule]:
    """Every rule over every memory set of size ≤ ``max_memory``.

    Memory sets are the sorted subsets of ``memories`` (default: all
    elements of the finite ``group``) in size order; tables run in code
    order, so the table with code c is named ``r{c}``.
    """
    pool = list(memories) if memories is not None else list(group.elements())
    q = alphabet.size
    for size in range(max_memory + 1):
        patterns = all_configurations(size, q)
        for memory in itertools.combinations(pool, size):
            for code in range(q ** patterns.shape[0]):
                table = (code // q ** np.arange(patterns.shape[0], dtype=np.int64)) % q
                yield LocalRule(group, memory, table, alphabet, name=f"r{code}")
