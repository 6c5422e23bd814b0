"""Configuration spaces A^G, the shift action and fixed-point sets.

Three storage kinds share one evaluation interface:

- ``DenseConfiguration``: a full symbol table over a finite group.
- ``FiniteSupportConfiguration``: a default symbol plus finitely many
  exceptions over ℤ^d.
- ``PeriodicConfiguration``: a table over a box fundamental domain of a
  full-rank period lattice in ℤ^d.

Exhaustive helpers (``all_configurations``, ``fix_subgroup``) work on
numpy arrays whose rows are configurations over a finite group.
"""

from __future__ import annotations

import ast
import itertools
import json
import logging
from abc import ABC, abstractmethod
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from gca_lab.config import DEFAULT_MAX_CONFIGURATIONS
from gca_lab.errors import BudgetExceededError, ConfigurationError, PreconditionError, UnsupportedError
from gca_lab.groups.base import Element, Group
from gca_lab.groups.finite import FiniteGroup
from gca_lab.groups.free_abelian import FreeAbelianGroup, hermite_basis, reduce_modulo
from gca_lab.groups.subgroups import Subgroup

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Alphabet:
    """Symbols 0..q-1 with q ≥ 2.

    Attributes:
        size: Number of symbols q.
    """

    size: int = 2

    def __post_init__(self) -> None:
        if self.size < 2:
            raise ConfigurationError(f"alphabet needs at least 2 symbols, got {self.size}")

    @property
    def symbols(self) -> range:
        """All symbols in order."""
        return range(self.size)

    def check_symbol(self, a: object) -> int:
        """Return ``a`` if it is a symbol, else raise ConfigurationError."""
        if isinstance(a, bool) or not isinstance(a, (int, np.integer)) or not 0 <= a < self.size:
            raise ConfigurationError(f"{a!r} is not a symbol of the alphabet of size {self.size}")
        return int(a)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {"size": self.size}


class Configuration(ABC):
    """An element x of A^G."""

    group: Group
    alphabet: Alphabet

    @abstractmethod
    def __call__(self, g: Element) -> int:
        """The symbol x(g)."""

    @abstractmethod
    def shift(self, g: Element) -> Configuration:
        """The configuration g·x, (g·x)(k) = x(g⁻¹k)."""

    @abstractmethod
    def to_text(self) -> str:
        """Text form, parseable by ``parse_configuration``."""

    @abstractmethod
    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""

    def restrict(self, subset: Iterable[Element]) -> dict[Element, int]:
        """The pattern x|_S, keyed in the order of ``subset``."""
        pattern = {}
        for s in subset:
            if not self.group.contains(s):
                raise ConfigurationError(f"{s!r} is not an element of {self.group.name}")
            pattern[s] = self(s)
        return pattern

    def _check_shift(self, g: Element) -> None:
        if not self.group.contains(g):
            raise ConfigurationError(f"cannot shift a configuration over {self.group.name} by {g!r}")

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_text()})"


class DenseConfiguration(Configuration):
    """A configuration over a finite group, stored as its full table.

    Args:
        group: Finite group G.
        alphabet: Alphabet A.
        values: x(g) for every g in element order.
    """

    def __init__(self, group: FiniteGroup, alphabet: Alphabet, values: Sequence[int] | np.ndarray) -> None:
        if not isinstance(group, FiniteGroup):
            raise ConfigurationError(f"dense configurations need a finite group, got {group.name}")
        vals = tuple(int(v) for v in np.asarray(values).ravel())
        if len(vals) != group.order:
            raise ConfigurationError(f"{group.name} has {group.order} elements, got {len(vals)} values")
        for v in vals:
            alphabet.check_symbol(v)
        self.group = group
        self.alphabet = alphabet
        self.values = vals

    @property
    def array(self) -> np.ndarray:
        """Values as an int array."""
        return np.asarray(self.values, dtype=np.int64)

    def __call__(self, g: Element) -> int:
        return self.values[g]  # type: ignore[index]

    def shift(self, g: Element) -> DenseConfiguration:
        self._check_shift(g)
        return DenseConfiguration(self.group, self.alphabet, self.array[self.group.translation(g)])  # type: ignore[arg-type]

    def to_text(self) -> str:
        return "dense:[" + ",".join(str(v) for v in self.values) + "]"

    def to_dict(self) -> dict:
        return {"kind": "dense", "group": self.group.name, "values": list(self.values)}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseConfiguration):
            return NotImplemented
        return self.group == other.group and self.values == other.values

    def __hash__(self) -> int:
        return hash(self.values)


class FiniteSupportConfiguration(Configuration):
    """A configuration over ℤ^d equal to ``default`` off a finite support.

    Support entries equal to the default are dropped on construction.
    """

    def __init__(
        self,
        group: FreeAbelianGroup,
        alphabet: Alphabet,
        default: int = 0,
        support: Mapping[Element, int] | None = None,
    ) -> None:
        if not isinstance(group, FreeAbelianGroup):
            raise ConfigurationError(f"finite-support configurations live over ℤ^d, got {group.name}")
        self.group = group
        self.alphabet = alphabet
        self.default = alphabet.check_symbol(default)
        cleaned: dict[tuple[int, ...], int] = {}
        for point, value in (support or {}).items():
            key = group.element_from_json(point if not isinstance(point, tuple) else list(point))
            value = alphabet.check_symbol(value)
            if value != self.default:
                cleaned[key] = value
        self.support = dict(sorted(cleaned.items()))

    def __call__(self, g: Element) -> int:
        return self.support.get(g, self.default)  # type: ignore[arg-type]

    def shift(self, g: Element) -> FiniteSupportConfiguration:
        self._check_shift(g)
        moved = {self.group.op(g, k): v for k, v in self.support.items()}
        return FiniteSupportConfiguration(self.group, self.alphabet, self.default, moved)

    def to_text(self) -> str:
        if self.group.rank == 1:
            body = ",".join(f"{k[0]}:{v}" for k, v in self.support.items())
        else:
            body = ",".join(f"({','.join(str(c) for c in k)}):{v}" for k, v in self.support.items())
        return f"support:default={self.default};{{{body}}}"

    def to_dict(self) -> dict:
        return {
            "kind": "support",
            "group": self.group.name,
            "default": self.default,
            "support": [[list(k), v] for k, v in self.support.items()],
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteSupportConfiguration):
            return NotImplemented
        return (
            self.group == other.group
            and self.default == other.default
            and self.support == other.support
        )

    def __hash__(self) -> int:
        return hash((self.default, tuple(self.support.items())))


class PeriodicConfiguration(Configuration):
    """A configuration over ℤ^d invariant under a full-rank lattice L.

    Values are stored over the box fundamental domain of the Hermite basis
    of L: coordinate i ranges over [0, basis[i, i]), points in
    lexicographic order.
    """

    def __init__(
        self,
        group: FreeAbelianGroup,
        alphabet: Alphabet,
        basis: Sequence[Sequence[int]] | np.ndarray,
        values: Sequence[int],
    ) -> None:
        if not isinstance(group, FreeAbelianGroup):
            raise ConfigurationError(f"periodic configurations live over ℤ^d, got {group.name}")
        echelon = hermite_basis([list(row) for row in np.asarray(basis, dtype=np.int64)], group.rank)
        if echelon.shape[0] != group.rank:
            raise ConfigurationError(f"period lattice must have rank {group.rank}")
        self.group = group
        self.alphabet = alphabet
        self.basis = echelon
        self.shape = tuple(int(echelon[i, i]) for i in range(group.rank))
        vals = tuple(alphabet.check_symbol(int(v)) for v in values)
        if len(vals) != int(np.prod(self.shape)):
            raise ConfigurationError(
                f"fundamental domain has {int(np.prod(self.shape))} cells, got {len(vals)} values"
            )
        self.values = vals

    def domain(self) -> list[tuple[int, ...]]:
        """Fundamental-domain points in storage order."""
        return list(itertools.product(*(range(n) for n in self.shape)))

    def __call__(self, g: Element) -> int:
        point = reduce_modulo(self.basis, g)  # type: ignore[arg-type]
        return self.values[int(np.ravel_multi_index(point, self.shape))]

    def shift(self, g: Element) -> PeriodicConfiguration:
        self._check_shift(g)
        inv = self.group.inv(g)
        moved = [self(self.group.op(inv, p)) for p in self.domain()]
        return PeriodicConfiguration(self.group, self.alphabet, self.basis, moved)

    def to_text(self) -> str:
        basis = json.dumps(self.basis.tolist(), separators=(",", ":"))
        return f"periodic:basis={basis};[" + ",".join(str(v) for v in self.values) + "]"

    def to_dict(self) -> dict:
        return {
            "kind": "periodic",
            "group": self.group.name,
            "basis": self.basis.tolist(),
            "values": list(self.values),
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PeriodicConfiguration):
            return NotImplemented
        return (
            self.group == other.group
            and np.array_equal(self.basis, other.basis)
            and self.values == other.values
        )

    def __hash__(self) -> int:
        return hash((self.basis.tobytes(), self.values))


# ─── Operations ────────────────────────────────────────────────


def shift(g: Element, x: Configuration) -> Configuration:
    """g·x."""
    return x.shift(g)


def evaluate(x: Configuration, g: Element) -> int:
    """x(g)."""
    return x(g)


def restrict(x: Configuration, subset: Iterable[Element]) -> dict[Element, int]:
    """x|_S as a pattern."""
    return x.restrict(subset)


def parse_configuration(text: str, group: Group, alphabet: Alphabet) -> Configuration:
    """Parse the ``dense:``/``support:``/``periodic:`` text formats.

    Raises:
        ConfigurationError: On malformed text or a group/kind mismatch.
    """
    kind, sep, body = text.strip().partition(":")
    if not sep:
        raise ConfigurationError(f"configuration text needs a kind prefix: {text!r}")
    try:
        if kind == "dense":
            return DenseConfiguration(group, alphabet, json.loads(body))  # type: ignore[arg-type]
        if kind == "support":
            head, _, entries = body.partition(";")
            key, _, default = head.partition("=")
            if key.strip() != "default":
                raise ConfigurationError(f"expected 'default=' in {text!r}")
            raw = ast.literal_eval(entries.strip() or "{}")
            if not isinstance(raw, dict):
                raise ConfigurationError(f"support must be a mapping: {entries!r}")
            support = {
                (k,) if isinstance(k, int) else tuple(k): v
                for k, v in raw.items()
            }
            return FiniteSupportConfiguration(group, alphabet, int(default), support)  # type: ignore[arg-type]
        if kind == "periodic":
            head, _, values = body.partition(";")
            key, _, basis = head.partition("=")
            if key.strip() != "basis":
                raise ConfigurationError(f"expected 'basis=' in {text!r}")
            return PeriodicConfiguration(group, alphabet, json.loads(basis), json.loads(values))  # type: ignore[arg-type]
    except (ValueError, SyntaxError, TypeError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"malformed configuration {text!r}: {exc}") from None
    raise ConfigurationError(f"unknown configuration kind {kind!r}")


# ─── Characteristic functions ──────────────────────────────────


@dataclass
class CharacteristicPatterns:
    """Patterns on a window taking value ``a`` exactly at ``g``.

    Attributes:
        g: Marked element.
        a: Marked symbol.
        window: Window elements, in pattern order.
        patterns: Symbol tuples aligned with ``window``.
        complete: True when the window is the whole (finite) group, so the
            patterns are full configurations; False when values off the
            window are unconstrained.
    """

    g: Element
    a: int
    window: list[Element]
    patterns: list[tuple[int, ...]] = field(default_factory=list)
    complete: bool = False

    def __len__(self) -> int:
        return len(self.patterns)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "g": self.g,
            "a": self.a,
            "window": list(self.window),
            "patterns": [list(p) for p in self.patterns],
            "complete": self.complete,
            "window_relative": not self.complete,
        }


def characteristic_configurations(
    group: Group,
    alphabet: Alphabet,
    g: Element,
    a: int,
    window: Sequence[Element] | None = None,
) -> CharacteristicPatterns:
    """Enumerate a-characteristic patterns on g over a window.

    The window defaults to the whole group when it is finite.

    Raises:
        ConfigurationError: If ``a`` is not a symbol, g is not in the
            window, or the group is infinite and no window is given.
    """
    alphabet.check_symbol(a)
    if window is None:
        if not group.is_finite:
            raise ConfigurationError(f"{group.name} is infinite; supply a window")
        window = group.elements()
    window = [group.check_element(w) for w in window]
    if g not in window:
        raise ConfigurationError(f"{g!r} is not in the window")
    others = [s for s in alphabet.symbols if s != a]
    pos = window.index(g)
    patterns = []
    for rest in itertools.product(others, repeat=len(window) - 1):
        patterns.append(rest[:pos] + (a,) + rest[pos:])
    complete = group.is_finite and len(set(window)) == group.order
    return CharacteristicPatterns(g=g, a=a, window=window, patterns=patterns, complete=complete)


def is_characteristic(x: Configuration, g: Element, a: int) -> bool:
    """Whether x takes value a at g and nowhere else.

    Raises:
        UnsupportedError: For periodic configurations over ℤ^d.
    """
    if isinstance(x, DenseConfiguration):
        return x(g) == a and x.values.count(a) == 1
    if isinstance(x, FiniteSupportConfiguration):
        return x.default != a and [k for k, v in x.support.items() if v == a] == [g]
    raise UnsupportedError("a periodic configuration over an infinite group is never characteristic")


def translate_characteristic(chi: Configuration, g: Element, k: Element) -> Configuration:
    """χ_k^a := kg⁻¹·χ_g^a.

    Raises:
        PreconditionError: If chi is not characteristic on g.
    """
    a = chi(g)
    if not is_characteristic(chi, g, a):
        raise PreconditionError(f"{chi.to_text()} is not {a}-characteristic on {g!r}", witness=g)
    group = chi.group
    moved = chi.shift(group.op(k, group.inv(g)))
    if not is_characteristic(moved, k, a):
        raise PreconditionError(f"translate of {chi.to_text()} is not characteristic on {k!r}", witness=k)
    return moved


def faithfulness_witness(group: Group, g: Element, alphabet: Alphabet) -> Configuration:
    """A configuration x with g·x ≠ x, for g ≠ e.

    Uses the 1-characteristic configuration on e: (g·x)(g) = 1 ≠ x(g).

    Raises:
        PreconditionError: If g is the identity.
    """
    group.check_element(g)
    if g == group.identity:
        raise PreconditionError("the identity fixes every configuration", witness=g)
    if isinstance(group, FiniteGroup):
        values = [0] * group.order
        values[group.identity] = 1
        return DenseConfiguration(group, alphabet, values)
    return FiniteSupportConfiguration(group, alphabet, 0, {group.identity: 1})  # type: ignore[arg-type]


# ─── Exhaustive spaces ─────────────────────────────────────────


def check_space(cells: int, q: int, limit: int = DEFAULT_MAX_CONFIGURATIONS) -> int:
    """q^cells, or BudgetExceededError when it exceeds ``limit``."""
    size = q**cells
    if size > limit:
        raise BudgetExceededError(f"{q}^{cells} = {size} configurations exceed the limit {limit}")
    return size


def all_configurations(cells: int, q: int, limit: int = DEFAULT_MAX_CONFIGURATIONS) -> np.ndarray:
    """Every word of length ``cells`` over q symbols.

    Row i holds the base-q digits of i, cell j the digit of weight q^j,
    so ``encode(rows, q)`` recovers the row index.
    """
    size = check_space(cells, q, limit)
    weights = q ** np.arange(cells, dtype=np.int64)
    return (np.arange(size, dtype=np.int64)[:, None] // weights[None, :]) % q


def encode(rows: np.ndarray, q: int) -> np.ndarray:
    """Mixed-radix codes of configuration rows (inverse of all_configurations)."""
    rows = np.asarray(rows, dtype=np.int64)
    return rows @ (q ** np.arange(rows.shape[-1], dtype=np.int64))


class ConfigSet:
    """A duplicate-free set of dense configurations over one finite group.

    Rows are kept sorted by their mixed-radix code.
    """

    def __init__(self, group: FiniteGroup, alphabet: Alphabet, rows: np.ndarray) -> None:
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, group.order)
        codes, first = np.unique(encode(rows, alphabet.size), return_index=True)
        self.group = group
        self.alphabet = alphabet
        self.rows = rows[first]
        self.codes = codes

    def __len__(self) -> int:
        return int(self.rows.shape[0])

    def __contains__(self, x: object) -> bool:
        if not isinstance(x, DenseConfiguration) or x.group != self.group:
            return False
        code = int(encode(x.array, self.alphabet.size))
        i = int(np.searchsorted(self.codes, code))
        return i < len(self.codes) and int(self.codes[i]) == code

    def contains_rows(self, rows: np.ndarray) -> np.ndarray:
        """Membership mask for a batch of rows."""
        codes = encode(rows, self.alphabet.size)
        i = np.clip(np.searchsorted(self.codes, codes), 0, len(self.codes) - 1)
        return self.codes[i] == codes

    def members(self) -> list[DenseConfiguration]:
        """Members as configuration objects."""
        return [DenseConfiguration(self.group, self.alphabet, row) for row in self.rows]

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "group": self.group.name,
            "size": len(self),
            "members": self.rows.tolist(),
        }


def fix_subgroup(
    subgroup: Subgroup, alphabet: Alphabet, limit: int = DEFAULT_MAX_CONFIGURATIONS
) -> ConfigSet:
    """Fix(K): configurations constant on every right coset Kg.

    Raises:
        UnsupportedError: For subgroups of infinite groups.
        BudgetExceededError: If q^[G:K] exceeds ``limit``.
    """
    if not subgroup.is_finite_parent:
        raise UnsupportedError(f"Fix({subgroup.name}) over {subgroup.parent.name} is infinite")
    group: FiniteGroup = subgroup.parent  # type: ignore[assignment]
    label = np.empty(group.order, dtype=np.int64)
    cosets = subgroup.right_cosets()
    for i, coset in enumerate(cosets):
        label[list(coset)] = i
    choices = all_configurations(len(cosets), alphabet.size, limit)
    logger.debug("Fix(%s) in %s: %d configurations", subgroup.name, group.name, len(choices))
    return ConfigSet(group, alphabet, choices[:, label])
