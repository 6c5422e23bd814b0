"""Free abelian groups ℤ^d and integer lattice helpers.

Elements are integer tuples of length d; the operation is component-wise
addition. Sublattices are kept in Hermite row-echelon form so membership,
coordinates and fundamental domains are exact integer computations.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from gca_lab.errors import GroupError, UnsupportedError
from gca_lab.groups.base import Element, Group


class FreeAbelianGroup(Group):
    """The free abelian group ℤ^d of rank d ≥ 1.

    Args:
        rank: Dimension d.
        name: Display name (default ``Z`` or ``Z^d``).

    Raises:
        GroupError: If rank < 1.
    """

    def __init__(self, rank: int, name: str | None = None) -> None:
        if rank < 1:
            raise GroupError(f"free abelian rank must be positive, got {rank}")
        self.rank = rank
        self.name = name or ("Z" if rank == 1 else f"Z^{rank}")

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * self.rank

    @property
    def generators(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))

    @property
    def is_finite(self) -> bool:
        return False

    @property
    def is_abelian(self) -> bool:
        return True

    def op(self, a: Element, b: Element) -> tuple[int, ...]:
        return tuple(x + y for x, y in zip(a, b))  # type: ignore[arg-type]

    def inv(self, a: Element) -> tuple[int, ...]:
        return tuple(-x for x in a)  # type: ignore[union-attr]

    def contains(self, a: object) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == self.rank
            and all(isinstance(x, (int, np.integer)) and not isinstance(x, bool) for x in a)
        )

    def elements(self) -> list[Element]:
        raise UnsupportedError(f"{self.name} is infinite; its elements cannot be enumerated")

    def element_to_json(self, a: Element) -> list[int]:
        return [int(x) for x in a]  # type: ignore[union-attr]

    def element_from_json(self, raw: object) -> tuple[int, ...]:
        if isinstance(raw, int) and not isinstance(raw, bool) and self.rank == 1:
            return (raw,)
        if isinstance(raw, (list, tuple)):
            return self.check_element(tuple(raw))  # type: ignore[return-value]
        raise GroupError(f"elements of {self.name} are integer vectors of length {self.rank}, got {raw!r}")

    def scale(self, a: Element, m: int) -> tuple[int, ...]:
        """m·a."""
        return tuple(m * x for x in a)  # type: ignore[union-attr]

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {"name": self.name, "kind": "free-abelian", "rank": self.rank}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FreeAbelianGroup):
            return NotImplemented
        return self.rank == other.rank

    def __hash__(self) -> int:
        return hash(("free-abelian", self.rank))

    def __repr__(self) -> str:
        return f"FreeAbelianGroup(rank={self.rank})"


def build_free_abelian(rank: int, name: str | None = None) -> FreeAbelianGroup:
    """Free abelian group ℤ^rank."""
    return FreeAbelianGroup(rank, name=name)


def norm(v: Sequence[int]) -> int:
    """ℓ¹ norm, used to order search candidates."""
    return sum(abs(int(x)) for x in v)


def hermite_basis(vectors: Iterable[Sequence[int]], dim: int) -> np.ndarray:
    """Row-echelon basis of the lattice spanned by ``vectors``.

    Uses integer row operations only (Euclid on each pivot column), so the
    result spans exactly the same lattice. Pivots are positive.

    Args:
        vectors: Spanning vectors of length ``dim``.
        dim: Ambient rank.

    Returns:
        r×dim int64 array of basis rows, r = rank of the lattice.
    """
    rows = [np.array(v, dtype=np.int64) for v in vectors]
    rows = [r for r in rows if r.any()]
    basis: list[np.ndarray] = []
    for col in range(dim):
        while True:
            nonzero = [i for i, r in enumerate(rows) if r[col] != 0]
            if len(nonzero) <= 1:
                break
            p = min(nonzero, key=lambda i: abs(int(rows[i][col])))
            pivot = rows[p]
            for i in nonzero:
                if i != p:
                    rows[i] = rows[i] - (int(rows[i][col]) // int(pivot[col])) * pivot
            rows = [r for r in rows if r.any()]
        nonzero = [i for i, r in enumerate(rows) if r[col] != 0]
        if nonzero:
            pivot = rows.pop(nonzero[0])
            basis.append(pivot if pivot[col] > 0 else -pivot)
        if not rows:
            break
    if not basis:
        return np.zeros((0, dim), dtype=np.int64)
    return np.vstack(basis)


def pivot_columns(basis: np.ndarray) -> list[int]:
    """Column of the leading entry of each echelon row."""
    return [int(np.flatnonzero(row)[0]) for row in basis]


def lattice_coordinates(basis: np.ndarray, v: Sequence[int]) -> tuple[int, ...] | None:
    """Integer coordinates c with c·basis = v, or None if v is off the lattice."""
    residual = np.array(v, dtype=np.int64)
    coords = []
    for row, col in zip(basis, pivot_columns(basis)):
        q, r = divmod(int(residual[col]), int(row[col]))
        if r:
            return None
        coords.append(q)
        residual = residual - q * row
    if residual.any():
        return None
    return tuple(coords)


def reduce_modulo(basis: np.ndarray, v: Sequence[int]) -> tuple[int, ...]:
    """Canonical representative of v modulo a full-rank echelon lattice.

    Coordinate i of the result lies in [0, basis[i, i]).
    """
    w = np.array(v, dtype=np.int64)
    for i, row in enumerate(basis):
        w = w - (int(w[i]) // int(row[i])) * row
    return tuple(int(x) for x in w)


def lattice_index(basis: np.ndarray) -> int | None:
    """Index of a full-rank echelon lattice; None if the rank is deficient."""
    if basis.shape[0] != basis.shape[1]:
        return None
    return int(np.prod(np.diag(basis)))
