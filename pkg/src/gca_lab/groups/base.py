"""Abstract base class for group backends.

Every algorithm in gca-lab talks to groups exclusively through this
interface. Two backends implement it: ``FiniteGroup`` (Cayley table) and
``FreeAbelianGroup`` (integer vectors of a fixed rank).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Iterable, Sequence
from typing import Union

# Finite groups use element indices, free abelian groups integer tuples.
Element = Union[int, tuple[int, ...]]


class Group(ABC):
    """Abstract interface for a computable group.

    Attributes:
        name: Display name used in reports.
    """

    name: str

    @property
    @abstractmethod
    def identity(self) -> Element:
        """The identity element e."""

    @property
    @abstractmethod
    def generators(self) -> tuple[Element, ...]:
        """A generating set, in a fixed order."""

    @property
    @abstractmethod
    def is_finite(self) -> bool:
        """Whether the group has finitely many elements."""

    @property
    @abstractmethod
    def is_abelian(self) -> bool:
        """Whether the operation is commutative."""

    @abstractmethod
    def op(self, a: Element, b: Element) -> Element:
        """Group operation ab.

        Args:
            a: Left factor.
            b: Right factor.

        Returns:
            The product ab.
        """

    @abstractmethod
    def inv(self, a: Element) -> Element:
        """Inverse a⁻¹."""

    @abstractmethod
    def contains(self, a: object) -> bool:
        """Whether ``a`` is a well-formed element of this group."""

    @abstractmethod
    def elements(self) -> list[Element]:
        """All elements in canonical order.

        Raises:
            UnsupportedError: For infinite groups.
        """

    @abstractmethod
    def element_to_json(self, a: Element) -> int | list[int]:
        """JSON-ready form of an element."""

    @abstractmethod
    def element_from_json(self, raw: object) -> Element:
        """Parse the JSON form of an element.

        Raises:
            GroupError: If ``raw`` does not denote an element.
        """

    @abstractmethod
    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""

    @property
    def order(self) -> int | None:
        """Number of elements, or None for infinite groups."""
        return len(self.elements()) if self.is_finite else None

    def check_element(self, a: object) -> Element:
        """Return ``a`` if it belongs to the group, else raise GroupError."""
        from gca_lab.errors import GroupError

        if not self.contains(a):
            raise GroupError(f"{a!r} is not an element of {self.name}")
        return a  # type: ignore[return-value]

    def power(self, a: Element, n: int) -> Element:
        """a^n for any integer n, by repeated squaring."""
        base = a if n >= 0 else self.inv(a)
        n = abs(n)
        result = self.identity
        while n:
            if n & 1:
                result = self.op(result, base)
            base = self.op(base, base)
            n >>= 1
        return result

    def product_set(self, left: Iterable[Element], right: Iterable[Element]) -> list[Element]:
        """Sorted set {ab : a ∈ left, b ∈ right}."""
        right = list(right)
        return sorted({self.op(a, b) for a in left for b in right})

    def translate(self, g: Element, subset: Sequence[Element]) -> list[Element]:
        """Left translate gS, preserving the order of ``subset``."""
        return [self.op(g, s) for s in subset]

    def element_order(self, a: Element) -> int | None:
        """Order of ``a``; None when it has infinite order."""
        if not self.is_finite:
            return 1 if a == self.identity else None
        k, x = 1, a
        while x != self.identity:
            x = self.op(x, a)
            k += 1
        return k

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"
