"""Finite groups stored as Cayley tables.

Elements are indices 0..n-1 into a row-major multiplication table.
The catalog constructors at the bottom of the module build the groups
used throughout the verification suite.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Sequence

import numpy as np

from gca_lab.errors import GroupError
from gca_lab.groups.base import Element, Group

logger = logging.getLogger(__name__)

DEFAULT_ASSOCIATIVITY_BOUND = 64


class FiniteGroup(Group):
    """A finite group given by its Cayley table.

    The table is checked on construction: it must be a Latin square with
    a two-sided identity, and associativity is verified on all n³ triples
    when n does not exceed ``check_bound``.

    Args:
        table: n×n array; ``table[a, b]`` is the index of ab.
        name: Display name.
        generators: Optional generating set; computed greedily if omitted.
        check_bound: Largest order for which associativity is verified.

    Raises:
        GroupError: If any table invariant fails.
    """

    def __init__(
        self,
        table: Sequence[Sequence[int]] | np.ndarray,
        name: str = "G",
        generators: Sequence[int] | None = None,
        check_bound: int = DEFAULT_ASSOCIATIVITY_BOUND,
    ) -> None:
        arr = np.asarray(table, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise GroupError(f"Cayley table must be a non-empty square matrix, got shape {arr.shape}")
        n = arr.shape[0]
        if arr.min() < 0 or arr.max() >= n:
            raise GroupError(f"Cayley table entries must lie in [0, {n})")
        full = np.arange(n)
        for i in range(n):
            if not np.array_equal(np.sort(arr[i]), full):
                raise GroupError(f"row {i} is not a permutation: table is not a Latin square")
            if not np.array_equal(np.sort(arr[:, i]), full):
                raise GroupError(f"column {i} is not a permutation: table is not a Latin square")

        identity = next((e for e in range(n) if np.array_equal(arr[e], full)), None)
        if identity is None or not np.array_equal(arr[:, identity], full):
            raise GroupError("Cayley table has no two-sided identity")

        if n <= check_bound:
            # lhs[a, b, c] = (ab)c, rhs[a, b, c] = a(bc)
            lhs = arr[arr]
            rhs = arr[full[:, None, None], arr[None, :, :]]
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                a, b, c = (int(v) for v in bad[0])
                raise GroupError(f"associativity fails for triple ({a}, {b}, {c})")

        inverse = np.empty(n, dtype=np.int64)
        for a in range(n):
            inverse[a] = int(np.flatnonzero(arr[a] == identity)[0])
            if arr[inverse[a], a] != identity:
                raise GroupError(f"element {a} has no two-sided inverse")

        arr.setflags(write=False)
        inverse.setflags(write=False)
        self._table = arr
        self._inverse = inverse
        self._identity = identity
        self.name = name
        if generators is None:
            self._generators = self._greedy_generators()
        else:
            gens = tuple(self.check_element(int(g)) for g in generators)
            if len(self.closure(gens)) != n:
                raise GroupError(f"{list(gens)} does not generate {name}")
            self._generators = gens

    # ─── Group interface ───────────────────────────────────────

    @property
    def table(self) -> np.ndarray:
        """Read-only Cayley table."""
        return self._table

    @property
    def inverse_table(self) -> np.ndarray:
        """Read-only inverse table."""
        return self._inverse

    @property
    def identity(self) -> int:
        return self._identity

    @property
    def generators(self) -> tuple[int, ...]:
        return self._generators

    @property
    def is_finite(self) -> bool:
        return True

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self._table, self._table.T))

    @property
    def order(self) -> int:
        return int(self._table.shape[0])

    def op(self, a: Element, b: Element) -> int:
        return int(self._table[a, b])

    def inv(self, a: Element) -> int:
        return int(self._inverse[a])

    def contains(self, a: object) -> bool:
        return isinstance(a, (int, np.integer)) and not isinstance(a, bool) and 0 <= a < self.order

    def elements(self) -> list[int]:
        return list(range(self.order))

    def element_to_json(self, a: Element) -> int:
        return int(a)

    def element_from_json(self, raw: object) -> int:
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise GroupError(f"elements of {self.name} are integer indices, got {raw!r}")
        return self.check_element(raw)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "name": self.name,
            "kind": "cayley",
            "order": self.order,
            "generators": list(self._generators),
            "table": self._table.tolist(),
        }

    # ─── Finite-group helpers ──────────────────────────────────

    def closure(self, gens: Iterable[int]) -> tuple[int, ...]:
        """Sorted elements of the subgroup generated by ``gens``."""
        gens = [int(g) for g in gens]
        seen = {self._identity}
        frontier = [self._identity]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = int(self._table[a, g])
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return tuple(sorted(seen))

    def translation(self, g: int) -> np.ndarray:
        """Index array p with p[k] = g⁻¹k, so ``x[p]`` is the shift g·x."""
        return self._table[self._inverse[g]]

    def _greedy_generators(self) -> tuple[int, ...]:
        gens: list[int] = []
        current: tuple[int, ...] = (self._identity,)
        for a in range(self.order):
            if len(current) == self.order:
                break
            if a not in current:
                gens.append(a)
                current = self.closure(gens)
        return tuple(gens)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self is other or np.array_equal(self._table, other._table)

    def __hash__(self) -> int:
        return hash((self.order, self._table.tobytes()))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


# ─── Catalog ───────────────────────────────────────────────────


def build_cayley(table: Sequence[Sequence[int]], name: str = "G") -> FiniteGroup:
    """Build a finite group from an explicit row-major Cayley table."""
    return FiniteGroup(table, name=name)


def build_cyclic(n: int, name: str | None = None) -> FiniteGroup:
    """Cyclic group ℤ/n with generator 1.

    Args:
        n: Group order, at least 1.
        name: Display name (default ``Z{n}``).

    Raises:
        GroupError: If n < 1.
    """
    if n < 1:
        raise GroupError(f"cyclic group order must be positive, got {n}")
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    gens = [1] if n > 1 else []
    return FiniteGroup(table, name=name or f"Z{n}", generators=gens)


def build_permutation_group(
    generators: Sequence[Sequence[int]], name: str = "P"
) -> FiniteGroup:
    """Finite group generated by permutations of {0..m-1}.

    Elements are sorted lexicographically as permutation tuples, so the
    identity permutation has index 0. Products compose right to left:
    (pq)(i) = p(q(i)).
    """
    gens = [tuple(int(v) for v in g) for g in generators]
    if not gens:
        raise GroupError("at least one generating permutation is required")
    m = len(gens[0])
    for g in gens:
        if sorted(g) != list(range(m)):
            raise GroupError(f"{list(g)} is not a permutation of 0..{m - 1}")
    identity = tuple(range(m))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                r = tuple(p[g[i]] for i in range(m))
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    perms = sorted(seen)
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(m))] for q in perms] for p in perms]
    return FiniteGroup(table, name=name, generators=[index[g] for g in gens])


def build_symmetric(n: int, name: str | None = None) -> FiniteGroup:
    """Symmetric group Sₙ on {0..n-1}, elements in lexicographic order."""
    if n < 1:
        raise GroupError(f"symmetric group degree must be positive, got {n}")
    if n == 1:
        return FiniteGroup([[0]], name=name or "S1")
    cycle = tuple(list(range(1, n)) + [0])
    swap = tuple([1, 0] + list(range(2, n)))
    return build_permutation_group([swap, cycle], name=name or f"S{n}")


def build_dihedral(n: int, name: str | None = None) -> FiniteGroup:
    """Dihedral group of order 2n, acting on the vertices of an n-gon."""
    if n < 3:
        raise GroupError(f"dihedral group needs n >= 3, got {n}")
    rotation = tuple((i + 1) % n for i in range(n))
    reflection = tuple((-i) % n for i in range(n))
    return build_permutation_group([rotation, reflection], name=name or f"D{n}")


def build_quaternion(name: str = "Q8") -> FiniteGroup:
    """Quaternion group {±1, ±i, ±j, ±k}.

    Index 2u + s encodes sign s (0 for +, 1 for -) on unit u in (1, i, j, k).
    """
    # unit product u*v = (sign, unit)
    units = {
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
        (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
        (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
    }
    table = np.empty((8, 8), dtype=np.int64)
    for a, b in itertools.product(range(8), repeat=2):
        sign, unit = units[(a // 2, b // 2)]
        table[a, b] = 2 * unit + (sign ^ (a % 2) ^ (b % 2))
    return FiniteGroup(table, name=name)


def build_direct_product(first: FiniteGroup, second: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """Direct product G₁×G₂; element (a, b) has index a·|G₂| + b."""
    n1, n2 = first.order, second.order
    a = np.arange(n1 * n2)
    left, right = a // n2, a % n2
    table = first.table[left[:, None], left[None, :]] * n2 + second.table[right[:, None], right[None, :]]
    return FiniteGroup(table, name=name or f"{first.name}x{second.name}")


def group_catalog(max_order: int) -> list[FiniteGroup]:
    """Every catalog group of order at most ``max_order``, smallest first.

    The catalog holds ℤ/n, ℤ/2×ℤ/2, ℤ/2×ℤ/4, (ℤ/2)^3, S₃, D₄ and Q₈, which
    covers all groups of order up to 8 up to isomorphism.
    """
    groups: list[FiniteGroup] = [build_cyclic(n) for n in range(1, max_order + 1)]
    z2 = build_cyclic(2)
    if max_order >= 4:
        groups.append(build_direct_product(z2, z2, name="Z2xZ2"))
    if max_order >= 6:
        groups.append(build_symmetric(3))
    if max_order >= 8:
        groups.append(build_direct_product(z2, build_cyclic(4), name="Z2xZ4"))
        groups.append(build_direct_product(build_direct_product(z2, z2), z2, name="Z2^3"))
        groups.append(build_dihedral(4))
        groups.append(build_quaternion())
    groups.sort(key=lambda g: g.order)
    logger.debug("catalog up to order %d: %s", max_order, [g.name for g in groups])
    return groups
