"""Subgroups of finite groups and sublattices of ℤ^d.

A finite subgroup is a sorted tuple of element indices; a subgroup of
ℤ^d is a sublattice held by its Hermite row-echelon basis. Both expose
``as_group()`` plus ``embed``/``localize`` so that constructions on
A^K can treat K as a group in its own right.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Sequence
from functools import cached_property

import numpy as np

from gca_lab.errors import SubgroupError, UnsupportedError
from gca_lab.groups.base import Element, Group
from gca_lab.groups.finite import FiniteGroup
from gca_lab.groups.free_abelian import (
    FreeAbelianGroup,
    hermite_basis,
    lattice_coordinates,
    lattice_index,
)

logger = logging.getLogger(__name__)


class Subgroup:
    """A subgroup K of a parent group.

    Use ``Subgroup.from_elements``, ``Subgroup.generated_by`` or
    ``Subgroup.from_basis`` rather than calling the constructor directly.

    Args:
        parent: Ambient group.
        elements: Sorted element indices (finite parent only).
        basis: Echelon basis rows (free abelian parent only).
        name: Display name.
    """

    def __init__(
        self,
        parent: Group,
        elements: Sequence[int] | None = None,
        basis: np.ndarray | None = None,
        name: str = "K",
    ) -> None:
        self.parent = parent
        self.name = name
        if isinstance(parent, FiniteGroup):
            if elements is None:
                raise SubgroupError("finite subgroups are given by their elements")
            self._elements = tuple(sorted(int(e) for e in set(elements)))
            self._basis = None
            self._position = {e: i for i, e in enumerate(self._elements)}
        elif isinstance(parent, FreeAbelianGroup):
            if basis is None:
                raise SubgroupError("subgroups of free abelian groups are given by a basis")
            self._basis = np.asarray(basis, dtype=np.int64).reshape(-1, parent.rank)
            self._elements = None
            self._position = {}
        else:
            raise UnsupportedError(f"subgroups of {parent!r} are not supported")

    # ─── Constructors ──────────────────────────────────────────

    @classmethod
    def from_elements(cls, parent: Group, elements: Iterable[int], name: str = "K") -> Subgroup:
        """Subgroup with exactly the given elements.

        Raises:
            SubgroupError: If the set is not closed, lacks the identity or
                is not closed under inverses.
        """
        if not isinstance(parent, FiniteGroup):
            raise UnsupportedError("element lists describe subgroups of finite groups only")
        elems = {parent.check_element(int(e)) for e in elements}
        if parent.identity not in elems:
            raise SubgroupError(f"{sorted(elems)} does not contain the identity {parent.identity}")
        for a in elems:
            if parent.inv(a) not in elems:
                raise SubgroupError(f"{sorted(elems)} is not closed under inverses: {a}")
            for b in elems:
                if parent.op(a, b) not in elems:
                    raise SubgroupError(
                        f"{sorted(elems)} is not closed: {a}·{b} = {parent.op(a, b)}"
                    )
        return cls(parent, elements=sorted(elems), name=name)

    @classmethod
    def generated_by(cls, parent: Group, generators: Iterable[Element], name: str = "K") -> Subgroup:
        """Smallest subgroup containing ``generators``."""
        gens = [parent.check_element(g) for g in generators]
        if isinstance(parent, FiniteGroup):
            return cls(parent, elements=parent.closure(gens), name=name)  # type: ignore[arg-type]
        if isinstance(parent, FreeAbelianGroup):
            return cls(parent, basis=hermite_basis(gens, parent.rank), name=name)  # type: ignore[arg-type]
        raise UnsupportedError(f"subgroups of {parent!r} are not supported")

    @classmethod
    def from_basis(cls, parent: FreeAbelianGroup, vectors: Iterable[Sequence[int]], name: str = "K") -> Subgroup:
        """Sublattice spanned by ``vectors``."""
        return cls.generated_by(parent, [tuple(int(x) for x in v) for v in vectors], name=name)

    @classmethod
    def trivial(cls, parent: Group, name: str = "1") -> Subgroup:
        """The trivial subgroup {e}."""
        return cls.generated_by(parent, [], name=name)

    @classmethod
    def whole(cls, parent: Group, name: str | None = None) -> Subgroup:
        """The subgroup G itself."""
        return cls.generated_by(parent, parent.generators, name=name or parent.name)

    # ─── Queries ───────────────────────────────────────────────

    @property
    def is_finite_parent(self) -> bool:
        """Whether the parent group is finite."""
        return self._elements is not None

    @property
    def elements(self) -> tuple[int, ...]:
        """Sorted elements (finite parent only)."""
        if self._elements is None:
            raise UnsupportedError(f"subgroup {self.name} of {self.parent.name} is infinite")
        return self._elements

    @property
    def basis(self) -> np.ndarray:
        """Echelon basis rows (free abelian parent only)."""
        if self._basis is None:
            raise UnsupportedError(f"subgroup {self.name} is finite; use elements")
        return self._basis

    @property
    def order(self) -> int | None:
        """|K|, or None when K is infinite."""
        if self._elements is not None:
            return len(self._elements)
        return 1 if self._basis.shape[0] == 0 else None  # type: ignore[union-attr]

    @property
    def index(self) -> int | None:
        """[G:K], or None when infinite."""
        if self._elements is not None:
            return self.parent.order // len(self._elements)  # type: ignore[operator]
        return lattice_index(self._basis)  # type: ignore[arg-type]

    def contains(self, g: Element) -> bool:
        """Whether g ∈ K."""
        if self._elements is not None:
            return g in self._position
        return self.parent.contains(g) and lattice_coordinates(self._basis, g) is not None  # type: ignore[arg-type]

    def __contains__(self, g: object) -> bool:
        return self.contains(g)  # type: ignore[arg-type]

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def is_subset_of(self, other: Subgroup) -> bool:
        """Whether K ⊆ other."""
        if self._elements is not None:
            return all(other.contains(k) for k in self._elements)
        return all(other.contains(tuple(int(x) for x in row)) for row in self._basis)  # type: ignore[union-attr]

    @cached_property
    def is_normal(self) -> bool:
        """Whether gKg⁻¹ = K for every g (always true over ℤ^d)."""
        if self._elements is None or self.parent.is_abelian:
            return True
        g_all = self.parent.elements()
        return all(
            self.parent.op(self.parent.op(g, k), self.parent.inv(g)) in self._position
            for g in g_all
            for k in self._elements
        )

    def right_cosets(self) -> list[tuple[int, ...]]:
        """Right cosets Kg as sorted tuples, ordered by least element."""
        seen: set[int] = set()
        cosets = []
        for g in self.parent.elements():
            if g in seen:
                continue
            coset = tuple(sorted(self.parent.op(k, g) for k in self.elements))
            seen.update(coset)
            cosets.append(coset)
        return cosets

    def left_cosets(self) -> list[tuple[int, ...]]:
        """Left cosets gK as sorted tuples, ordered by least element."""
        seen: set[int] = set()
        cosets = []
        for g in self.parent.elements():
            if g in seen:
                continue
            coset = tuple(sorted(self.parent.op(g, k) for k in self.elements))
            seen.update(coset)
            cosets.append(coset)
        return cosets

    # ─── K as a group ──────────────────────────────────────────

    @cached_property
    def _as_group(self) -> Group:
        if self._elements is not None:
            table = [
                [self._position[self.parent.op(a, b)] for b in self._elements]
                for a in self._elements
            ]
            return FiniteGroup(table, name=self.name)
        rank = self._basis.shape[0]  # type: ignore[union-attr]
        if rank == 0:
            raise UnsupportedError(f"subgroup {self.name} of {self.parent.name} is trivial")
        return FreeAbelianGroup(rank, name=self.name)

    def as_group(self) -> Group:
        """K as a standalone group.

        Finite K: local index i stands for ``elements[i]``. Sublattice K:
        local coordinates c stand for c·basis.
        """
        return self._as_group

    def embed(self, local: Element) -> Element:
        """Parent element represented by a local element of ``as_group()``."""
        if self._elements is not None:
            return self._elements[local]  # type: ignore[index]
        return tuple(int(x) for x in np.asarray(local, dtype=np.int64) @ self._basis)

    def localize(self, g: Element) -> Element:
        """Local element of ``as_group()`` representing g ∈ K.

        Raises:
            SubgroupError: If g ∉ K.
        """
        if self._elements is not None:
            if g not in self._position:
                raise SubgroupError(f"{g} is not in subgroup {self.name}")
            return self._position[g]  # type: ignore[index]
        coords = lattice_coordinates(self._basis, g)  # type: ignore[arg-type]
        if coords is None:
            raise SubgroupError(f"{g} is not in sublattice {self.name}")
        return coords

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        d: dict = {"name": self.name, "parent": self.parent.name, "normal": self.is_normal}
        if self._elements is not None:
            d["elements"] = list(self._elements)
            d["order"] = len(self._elements)
        else:
            d["basis"] = self._basis.tolist()  # type: ignore[union-attr]
        d["index"] = self.index
        return d

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        if self.parent != other.parent:
            return False
        if self._elements is not None:
            return self._elements == other._elements
        return np.array_equal(self._basis, other._basis)

    def __hash__(self) -> int:
        if self._elements is not None:
            return hash(self._elements)
        return hash(self._basis.tobytes())  # type: ignore[union-attr]

    def __repr__(self) -> str:
        if self._elements is not None:
            return f"Subgroup({self.name} ≤ {self.parent.name}, {list(self._elements)})"
        return f"Subgroup({self.name} ≤ {self.parent.name}, basis={self._basis.tolist()})"  # type: ignore[union-attr]


def all_subgroups(group: FiniteGroup) -> list[Subgroup]:
    """Every subgroup of a finite group, ordered by (order, elements).

    Built by joining cyclic subgroups until no new subgroup appears.
    """
    found: dict[tuple[int, ...], None] = {}
    frontier = [(group.identity,)]
    found[(group.identity,)] = None
    while frontier:
        nxt = []
        for elems in frontier:
            for g in group.elements():
                if g in elems:
                    continue
                joined = group.closure(list(elems) + [g])
                if joined not in found:
                    found[joined] = None
                    nxt.append(joined)
        frontier = nxt
    ordered = sorted(found, key=lambda e: (len(e), e))
    logger.debug("%s has %d subgroups", group.name, len(ordered))
    return [Subgroup(group, elements=e, name=f"K{i}") for i, e in enumerate(ordered)]


def normal_subgroups(group: FiniteGroup) -> list[Subgroup]:
    """Normal subgroups, in the order of ``all_subgroups``."""
    return [k for k in all_subgroups(group) if k.is_normal]


def derived_subgroup(group: FiniteGroup) -> Subgroup:
    """Commutator subgroup [G, G]."""
    commutators = {
        group.op(group.op(a, b), group.op(group.inv(a), group.inv(b)))
        for a in group.elements()
        for b in group.elements()
    }
    return Subgroup.generated_by(group, sorted(commutators), name=f"[{group.name},{group.name}]")
