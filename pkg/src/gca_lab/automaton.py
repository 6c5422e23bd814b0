"""φ-cellular automata 𝒯 : A^G → A^H.

𝒯(x)(h) = μ((φ(h⁻¹)·x)|_T), which unfolds to μ(t ↦ x(φ(h)t)). Over finite
groups every configuration space is a numpy array with one configuration
per row, and ``apply_batch`` evaluates the automaton on all rows at once
through the index matrix idx[h, j] = φ(h)·t_j.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from gca_lab.config import DEFAULT_MAX_CONFIGURATIONS, Budget
from gca_lab.configurations import (
    Alphabet,
    Configuration,
    ConfigSet,
    DenseConfiguration,
    all_configurations,
    check_space,
    encode,
)
from gca_lab.errors import ConfigurationError, ConsistencyError, UnsupportedError
from gca_lab.groups.base import Element, Group
from gca_lab.groups.finite import FiniteGroup
from gca_lab.groups.free_abelian import FreeAbelianGroup
from gca_lab.groups.homomorphisms import Homomorphism
from gca_lab.rules import LocalRule

logger = logging.getLogger(__name__)


class GCA:
    """A φ-cellular automaton: a homomorphism φ : H → G and a rule over G.

    Args:
        phi: The homomorphism φ.
        rule: Local rule whose memory lives in φ's codomain.
        name: Display name.

    Raises:
        ConfigurationError: If the rule lives over another group.
    """

    def __init__(self, phi: Homomorphism, rule: LocalRule, name: str = "T") -> None:
        if rule.group != phi.codomain:
            raise ConfigurationError(
                f"{name}: rule over {rule.group.name} but {phi.name} maps into {phi.codomain.name}"
            )
        self.phi = phi
        self.rule = rule
        self.name = name

    @property
    def source(self) -> Group:
        """G, the group of input configurations."""
        return self.phi.codomain

    @property
    def target(self) -> Group:
        """H, the group of output configurations."""
        return self.phi.domain

    @property
    def alphabet(self) -> Alphabet:
        return self.rule.alphabet

    @property
    def memory(self) -> tuple[Element, ...]:
        return self.rule.memory

    @property
    def is_finite(self) -> bool:
        """Whether both groups are finite."""
        return self.source.is_finite and self.target.is_finite

    # ─── Evaluation ────────────────────────────────────────────

    @cached_property
    def index_matrix(self) -> np.ndarray:
        """idx[h, j] = φ(h)·t_j, for finite H and G."""
        if not self.is_finite:
            raise UnsupportedError(f"{self.name} is not over finite groups")
        src: FiniteGroup = self.source  # type: ignore[assignment]
        mem = np.asarray(self.memory, dtype=np.int64)
        idx = np.ascontiguousarray(src.table[self.phi.images[:, None], mem[None, :]])
        idx.setflags(write=False)
        return idx

    def apply_batch(self, rows: np.ndarray) -> np.ndarray:
        """Apply to every row of a (m, |G|) array; returns (m, |H|)."""
        rows = np.asarray(rows, dtype=np.int64)
        codes = rows[:, self.index_matrix] @ self.rule.weights
        return self.rule.table[codes]

    def value_at(self, x: Configuration, h: Element) -> int:
        """𝒯(x)(h) = μ(t ↦ x(φ(h)t))."""
        base = self.phi(h)
        return self.rule([x(self.source.op(base, t)) for t in self.memory])

    def apply(self, x: Configuration, window: Iterable[Element] | None = None):
        """𝒯(x).

        Returns a ``DenseConfiguration`` over H when H is finite and no
        window is given; otherwise the exact pattern h ↦ 𝒯(x)(h) on the
        window.

        Raises:
            ConfigurationError: On a group or alphabet mismatch, or an
                infinite H without a window.
        """
        if x.group != self.source:
            raise ConfigurationError(f"{self.name} reads configurations over {self.source.name}, got {x.group.name}")
        if x.alphabet != self.alphabet:
            raise ConfigurationError(f"{self.name} uses q={self.alphabet.size}, got q={x.alphabet.size}")
        if window is None:
            if not self.target.is_finite:
                raise ConfigurationError(f"{self.target.name} is infinite; supply an output window")
            if isinstance(x, DenseConfiguration) and self.is_finite:
                out = self.apply_batch(x.array[None, :])[0]
            else:
                out = [self.value_at(x, h) for h in self.target.elements()]
            return DenseConfiguration(self.target, self.alphabet, out)  # type: ignore[arg-type]
        return {h: self.value_at(x, self.target.check_element(h)) for h in window}

    def __call__(self, x: Configuration, window: Iterable[Element] | None = None):
        return self.apply(x, window)

    # ─── Structure ─────────────────────────────────────────────

    @property
    def is_constant(self) -> bool:
        """Whether the local table is constant."""
        return self.rule.is_constant

    def minimal_memory_set(self) -> list[Element]:
        """Minimal memory set, sorted."""
        return self.rule.minimal_memory()

    def minimize(self) -> GCA:
        """Same map over its minimal memory set."""
        return GCA(self.phi, self.rule.minimize(), name=self.name)

    def with_phi(self, phi: Homomorphism, name: str | None = None) -> GCA:
        """Same rule over another homomorphism into G."""
        return GCA(phi, self.rule, name=name or f"{self.name}[{phi.name}]")

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "name": self.name,
            "phi": self.phi.to_dict(),
            "rule": self.rule.to_dict(),
            "minimal_memory": [self.source.element_to_json(t) for t in self.minimal_memory_set()],
        }

    def _minimal_key(self) -> tuple:
        rule = self.rule.minimize()
        return (self.phi.key(), rule.memory, rule.table.tobytes())

    def __eq__(self, other: object) -> bool:
        # same homomorphism and same minimal rule
        if not isinstance(other, GCA):
            return NotImplemented
        return (
            self.phi == other.phi
            and self.alphabet == other.alphabet
            and self._minimal_key() == other._minimal_key()
        )

    def __hash__(self) -> int:
        return hash(self._minimal_key())

    def __repr__(self) -> str:
        return f"GCA({self.name}: {self.phi.name}, T={list(self.memory)})"


# ─── Constructors ──────────────────────────────────────────────


def pullback(phi: Homomorphism, alphabet: Alphabet, name: str | None = None) -> GCA:
    """φ*: x ↦ x∘φ, memory {e}."""
    return GCA(phi, LocalRule.identity(phi.codomain, alphabet), name=name or f"{phi.name}*")


def identity_gca(group: Group, alphabet: Alphabet, name: str = "id") -> GCA:
    """The identity map of A^G."""
    return pullback(Homomorphism.identity(group), alphabet, name=name)


def reference_value(gca: GCA, x: Configuration, h: Element) -> int:
    """𝒯(x)(h) computed literally: shift x by φ(h⁻¹), restrict to T, apply μ."""
    moved = x.shift(gca.phi(gca.target.inv(h)))
    pattern = moved.restrict(gca.memory)
    return gca.rule(pattern)


# ─── Composition and factorization ─────────────────────────────


def compose(first: GCA, second: GCA, budget: Budget | None = None, name: str | None = None) -> GCA:
    """The single GCA realizing apply(second, apply(first, ·)).

    ``first`` is 𝒯 over φ : H → G and ``second`` is 𝒮 over ψ : K → H.
    The result is over φ∘ψ with memory φ(S)T; its table is materialized
    on every pattern over that memory.

    Raises:
        ConfigurationError: If the groups or alphabets do not chain.
        BudgetExceededError: If q^|φ(S)T| exceeds the configuration limit.
    """
    budget = budget or Budget()
    if second.source != first.target:
        raise ConfigurationError(
            f"cannot compose: {second.name} reads {second.source.name} but {first.name} writes {first.target.name}"
        )
    if first.alphabet != second.alphabet:
        raise ConfigurationError("cannot compose automata over different alphabets")
    group = first.source
    q = first.alphabet.size
    phi = first.phi
    cells = {s: [group.op(phi(s), t) for t in first.memory] for s in second.memory}
    memory = sorted({g for row in cells.values() for g in row})
    if len(memory) > budget.compose_cell_warning:
        logger.warning(
            "composing %s after %s needs %d memory cells (q^%d patterns)",
            second.name, first.name, len(memory), len(memory),
        )
    position = {g: i for i, g in enumerate(memory)}
    patterns = all_configurations(len(memory), q, budget.max_configurations)
    inner = np.zeros((patterns.shape[0], second.rule.size), dtype=np.int64)
    for i, s in enumerate(second.memory):
        cols = [position[g] for g in cells[s]]
        inner[:, i] = first.rule.table[patterns[:, cols] @ first.rule.weights]
    table = second.rule.table[inner @ second.rule.weights]
    rule = LocalRule(group, memory, table, first.alphabet, name=f"{second.rule.name}∘{first.rule.name}")
    return GCA(phi.after(second.phi), rule, name=name or f"{second.name}∘{first.name}")


def factorize(gca: GCA, budget: Budget | None = None) -> tuple[GCA, Homomorphism]:
    """The factorization 𝒯 = φ*∘τ with τ ∈ CA(A^G).

    τ keeps the memory set and table of 𝒯. Over finite groups the
    factorization is re-checked on every configuration.

    Raises:
        ConsistencyError: If φ*∘τ differs from 𝒯 somewhere.
    """
    budget = budget or Budget()
    tau = GCA(Homomorphism.identity(gca.source), gca.rule, name=f"tau({gca.name})")
    if gca.is_finite and gca.alphabet.size ** gca.source.order <= budget.max_configurations:  # type: ignore[operator]
        rows = all_configurations(gca.source.order, gca.alphabet.size, budget.max_configurations)  # type: ignore[arg-type]
        lhs = gca.apply_batch(rows)
        rhs = tau.apply_batch(rows)[:, gca.phi.images]
        if not np.array_equal(lhs, rhs):
            bad = int(np.flatnonzero(np.any(lhs != rhs, axis=1))[0])
            raise ConsistencyError(
                f"{gca.name} is not {gca.phi.name}*∘tau",
                {"gca": gca.to_dict(), "input": rows[bad].tolist()},
            )
    return tau, gca.phi


# ─── Exhaustive properties ─────────────────────────────────────


def input_space(gca: GCA, limit: int = DEFAULT_MAX_CONFIGURATIONS) -> np.ndarray:
    """Every configuration over G, one per row."""
    if not gca.is_finite:
        raise UnsupportedError(f"A^{gca.source.name} is infinite")
    return all_configurations(gca.source.order, gca.alphabet.size, limit)  # type: ignore[arg-type]


def image_set(gca: GCA, limit: int = DEFAULT_MAX_CONFIGURATIONS) -> ConfigSet:
    """𝒯(A^G) as a ConfigSet over H."""
    return ConfigSet(gca.target, gca.alphabet, gca.apply_batch(input_space(gca, limit)))  # type: ignore[arg-type]


@dataclass
class MapProperties:
    """Injectivity and surjectivity of an automaton over finite groups."""

    injective: bool
    surjective: bool
    image_size: int
    domain_size: int
    codomain_size: int

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "injective": self.injective,
            "surjective": self.surjective,
            "bijective": self.bijective,
            "image_size": self.image_size,
            "domain_size": self.domain_size,
            "codomain_size": self.codomain_size,
        }


def injectivity_surjectivity(gca: GCA, limit: int = DEFAULT_MAX_CONFIGURATIONS) -> MapProperties:
    """Decide injectivity and surjectivity by enumerating the image.

    Raises:
        UnsupportedError: Over infinite groups.
        ConsistencyError: If 𝒯 is surjective while φ is not injective.
    """
    q = gca.alphabet.size
    check_space(gca.target.order, q, limit)  # type: ignore[arg-type]
    outputs = gca.apply_batch(input_space(gca, limit))
    image_size = len(np.unique(encode(outputs, q)))
    props = MapProperties(
        injective=image_size == outputs.shape[0],
        surjective=image_size == q**gca.target.order,  # type: ignore[operator]
        image_size=image_size,
        domain_size=int(outputs.shape[0]),
        codomain_size=q**gca.target.order,  # type: ignore[operator]
    )
    if props.surjective and not gca.phi.is_injective:
        raise ConsistencyError(
            f"{gca.name} is surjective but {gca.phi.name} is not injective",
            {"gca": gca.to_dict()},
        )
    logger.debug("%s: %s", gca.name, props.to_dict())
    return props


def check_equivariance(gca: GCA, limit: int = DEFAULT_MAX_CONFIGURATIONS) -> bool:
    """Whether h·𝒯(x) = 𝒯(φ(h)·x) for every h ∈ H and every x (finite groups)."""
    rows = input_space(gca, limit)
    out = gca.apply_batch(rows)
    src: FiniteGroup = gca.source  # type: ignore[assignment]
    tgt: FiniteGroup = gca.target  # type: ignore[assignment]
    for h in tgt.elements():
        lhs = out[:, tgt.translation(h)]
        rhs = gca.apply_batch(rows[:, src.translation(gca.phi(h))])
        if not np.array_equal(lhs, rhs):
            logger.debug("%s fails equivariance at h=%s", gca.name, h)
            return False
    return True


def realizes_same_map(first: GCA, second: GCA, limit: int = DEFAULT_MAX_CONFIGURATIONS) -> bool:
    """Whether two automata A^G → A^H are the same map.

    Equal maps have equal minimal rules (𝒯(x)(e) = μ(x|_T) for any φ).
    With equal minimal rules the answer is immediate for constant rules
    and identical homomorphisms, exhaustive over finite groups, and
    negative over ℤ^d since distinct lattice maps have infinite
    difference sets.

    Raises:
        UnsupportedError: For other backend combinations.
    """
    if first.source != second.source or first.target != second.target:
        return False
    if first.alphabet != second.alphabet:
        return False
    a, b = first.rule.minimize(), second.rule.minimize()
    if a.memory != b.memory or not np.array_equal(a.table, b.table):
        return False
    if a.is_constant or first.phi == second.phi:
        return True
    if first.is_finite:
        rows = input_space(first, limit)
        return bool(np.array_equal(first.apply_batch(rows), second.apply_batch(rows)))
    if isinstance(first.source, FreeAbelianGroup) and isinstance(first.target, FreeAbelianGroup):
        return False
    raise UnsupportedError(f"cannot compare {first.name} and {second.name} over these groups")


def pullback_batch(phi: Homomorphism, rows: np.ndarray) -> np.ndarray:
    """x ↦ x∘φ on every row."""
    return np.asarray(rows)[:, phi.images]


def shift_batch(group: FiniteGroup, g: int, rows: np.ndarray) -> np.ndarray:
    """x ↦ g·x on every row."""
    return np.asarray(rows)[:, group.translation(g)]


def random_gca(
    rng: np.random.Generator,
    phi: Homomorphism,
    alphabet: Alphabet,
    max_memory: int,
    name: str = "T",
) -> GCA:
    """A GCA over φ with a uniformly random table on a random memory set.

    The memory set has between 0 and ``max_memory`` distinct elements of
    the (finite) codomain.
    """
    group = phi.codomain
    size = int(rng.integers(0, min(max_memory, group.order) + 1))  # type: ignore[type-var]
    memory: Sequence[int] = sorted(int(v) for v in rng.choice(group.order, size=size, replace=False))  # type: ignore[arg-type]
    table = rng.integers(0, alphabet.size, size=alphabet.size**size)
    return GCA(phi, LocalRule(group, memory, table, alphabet, name=f"{name}.mu"), name=name)
