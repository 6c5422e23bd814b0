"""Group homomorphisms and the enumeration of Hom(H, G) and End(G).

A homomorphism out of a finite group is stored as its full image table;
a homomorphism ℤ^e → ℤ^d is stored as a d×e integer matrix acting on
column vectors. Maps from ℤ^e into a finite group are not supported.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from functools import cached_property

import numpy as np

from gca_lab.errors import (
    BudgetExceededError,
    HomomorphismError,
    InfiniteFamilyError,
    UnsupportedError,
)
from gca_lab.groups.base import Element, Group
from gca_lab.groups.finite import FiniteGroup
from gca_lab.groups.free_abelian import FreeAbelianGroup
from gca_lab.groups.subgroups import Subgroup

logger = logging.getLogger(__name__)

KINDS = ("general", "canonical-projection", "restriction")

# Enumerations larger than this raise BudgetExceededError.
DEFAULT_ENUMERATION_LIMIT = 1 << 20


class Homomorphism:
    """A verified homomorphism φ : H → G.

    Build instances with ``from_generators``, ``from_images``,
    ``from_matrix``, ``identity`` or ``trivial``; every constructor checks
    φ(ab) = φ(a)φ(b) before returning.

    Args:
        domain: H.
        codomain: G.
        images: Image table, ``images[h]`` = φ(h) (finite H).
        matrix: d×e integer matrix (H = ℤ^e, G = ℤ^d).
        name: Display name.
        kind: One of ``general``, ``canonical-projection``, ``restriction``.
    """

    def __init__(
        self,
        domain: Group,
        codomain: Group,
        images: Sequence[Element] | None = None,
        matrix: np.ndarray | None = None,
        name: str = "phi",
        kind: str = "general",
    ) -> None:
        if kind not in KINDS:
            raise HomomorphismError(f"unknown homomorphism kind {kind!r}")
        self.domain = domain
        self.codomain = codomain
        self.name = name
        self.kind = kind
        if isinstance(domain, FiniteGroup):
            if images is None or len(images) != domain.order:
                raise HomomorphismError(f"{name}: need one image per element of {domain.name}")
            self._images: tuple[Element, ...] | None = tuple(codomain.check_element(v) for v in images)
            self._matrix: np.ndarray | None = None
        elif isinstance(domain, FreeAbelianGroup):
            if not isinstance(codomain, FreeAbelianGroup):
                raise UnsupportedError(
                    f"{name}: homomorphisms from {domain.name} into {codomain.name} are not supported"
                )
            m = np.asarray(matrix, dtype=np.int64)
            if m.shape != (codomain.rank, domain.rank):
                raise HomomorphismError(
                    f"{name}: matrix must be {codomain.rank}x{domain.rank}, got {m.shape}"
                )
            m.setflags(write=False)
            self._images = None
            self._matrix = m
        else:
            raise UnsupportedError(f"homomorphisms out of {domain!r} are not supported")

    # ─── Constructors ──────────────────────────────────────────

    @classmethod
    def from_generators(
        cls,
        domain: Group,
        codomain: Group,
        generator_images: Sequence[Element],
        name: str = "phi",
    ) -> Homomorphism:
        """Extend images of ``domain.generators`` to a homomorphism.

        Raises:
            HomomorphismError: If the assignment violates a relation of the
                domain; the message names the offending product.
        """
        gens = domain.generators
        if len(generator_images) != len(gens):
            raise HomomorphismError(
                f"{name}: {domain.name} has {len(gens)} generators, got {len(generator_images)} images"
            )
        imgs = [codomain.check_element(v) for v in generator_images]
        if isinstance(domain, FreeAbelianGroup):
            if not isinstance(codomain, FreeAbelianGroup):
                raise UnsupportedError(
                    f"{name}: homomorphisms from {domain.name} into {codomain.name} are not supported"
                )
            matrix = np.array(imgs, dtype=np.int64).reshape(domain.rank, codomain.rank).T
            return cls(domain, codomain, matrix=matrix, name=name)
        table = _extend_images(domain, codomain, list(gens), imgs, name)  # type: ignore[arg-type]
        return cls.from_images(domain, codomain, table, name=name)

    @classmethod
    def from_images(
        cls,
        domain: Group,
        codomain: Group,
        images: Sequence[Element],
        name: str = "phi",
        kind: str = "general",
    ) -> Homomorphism:
        """Homomorphism from a full image table, verified on all pairs."""
        hom = cls(domain, codomain, images=images, name=name, kind=kind)
        hom.check()
        return hom

    @classmethod
    def from_matrix(
        cls,
        domain: FreeAbelianGroup,
        codomain: FreeAbelianGroup,
        matrix: Sequence[Sequence[int]] | np.ndarray,
        name: str = "phi",
        kind: str = "general",
    ) -> Homomorphism:
        """Homomorphism ℤ^e → ℤ^d given by a d×e integer matrix."""
        return cls(domain, codomain, matrix=np.asarray(matrix, dtype=np.int64), name=name, kind=kind)

    @classmethod
    def identity(cls, group: Group, name: str = "id") -> Homomorphism:
        """Identity map of ``group``."""
        if isinstance(group, FreeAbelianGroup):
            return cls.from_matrix(group, group, np.eye(group.rank, dtype=np.int64), name=name)
        return cls(group, group, images=group.elements(), name=name)

    @classmethod
    def trivial(cls, domain: Group, codomain: Group, name: str = "trivial") -> Homomorphism:
        """The map sending everything to the identity."""
        if isinstance(domain, FreeAbelianGroup):
            zeros = np.zeros((getattr(codomain, "rank", 0), domain.rank), dtype=np.int64)
            return cls(domain, codomain, matrix=zeros, name=name)
        return cls(domain, codomain, images=[codomain.identity] * domain.order, name=name)  # type: ignore[operator]

    # ─── Evaluation ────────────────────────────────────────────

    @property
    def is_matrix(self) -> bool:
        """Whether the map is stored as an integer matrix."""
        return self._matrix is not None

    @property
    def matrix(self) -> np.ndarray:
        """The d×e matrix of a map ℤ^e → ℤ^d."""
        if self._matrix is None:
            raise UnsupportedError(f"{self.name} is not a lattice map")
        return self._matrix

    @property
    def image_table(self) -> tuple[Element, ...]:
        """φ(h) for every h of a finite domain, in element order."""
        if self._images is None:
            raise UnsupportedError(f"{self.name} has an infinite domain")
        return self._images

    @cached_property
    def images(self) -> np.ndarray:
        """Image table as an int array (finite domain and codomain)."""
        if not isinstance(self.codomain, FiniteGroup):
            raise UnsupportedError(f"{self.name} has an infinite codomain")
        arr = np.asarray(self.image_table, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def __call__(self, h: Element) -> Element:
        if self._images is not None:
            return self._images[h]  # type: ignore[index]
        return tuple(int(v) for v in self._matrix @ np.asarray(h, dtype=np.int64))  # type: ignore[operator]

    def check(self) -> None:
        """Verify φ(e) = e and φ(ab) = φ(a)φ(b) on every pair.

        Raises:
            HomomorphismError: Naming the first violating pair.
        """
        if self._matrix is not None:
            return
        dom, cod = self.domain, self.codomain
        if self(dom.identity) != cod.identity:
            raise HomomorphismError(f"{self.name} does not send the identity to the identity")
        if isinstance(dom, FiniteGroup) and isinstance(cod, FiniteGroup):
            img = np.asarray(self._images, dtype=np.int64)
            lhs = img[dom.table]
            rhs = cod.table[img[:, None], img[None, :]]
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                a, b = (int(v) for v in bad[0])
                raise HomomorphismError(
                    f"{self.name}({a}·{b}) = {int(lhs[a, b])} but "
                    f"{self.name}({a})·{self.name}({b}) = {int(rhs[a, b])}"
                )
            return
        for a, b in itertools.product(dom.elements(), repeat=2):
            if self(dom.op(a, b)) != cod.op(self(a), self(b)):
                raise HomomorphismError(f"{self.name} violates the homomorphism law on ({a}, {b})")

    # ─── Structure ─────────────────────────────────────────────

    def after(self, other: Homomorphism, name: str | None = None) -> Homomorphism:
        """The composite self ∘ other.

        Raises:
            HomomorphismError: If ``other`` does not land in our domain.
        """
        if other.codomain != self.domain:
            raise HomomorphismError(
                f"cannot compose {self.name}∘{other.name}: {other.codomain.name} ≠ {self.domain.name}"
            )
        label = name or f"{self.name}∘{other.name}"
        if other._matrix is not None:
            return Homomorphism(
                other.domain, self.codomain, matrix=self.matrix @ other._matrix, name=label
            )
        return Homomorphism(
            other.domain, self.codomain, images=[self(v) for v in other.image_table], name=label
        )

    def image(self, name: str | None = None) -> Subgroup:
        """φ(H) as a subgroup of the codomain."""
        label = name or f"{self.name}({self.domain.name})"
        if self._matrix is not None:
            return Subgroup.from_basis(self.codomain, self._matrix.T.tolist(), name=label)  # type: ignore[arg-type]
        if isinstance(self.codomain, FiniteGroup):
            return Subgroup(self.codomain, elements=sorted(set(self.image_table)), name=label)  # type: ignore[arg-type]
        return Subgroup.trivial(self.codomain, name=label)

    def image_of(self, subgroup: Subgroup, name: str | None = None) -> Subgroup:
        """φ(K) for a subgroup K of the domain."""
        label = name or f"{self.name}({subgroup.name})"
        if subgroup.is_finite_parent:
            return Subgroup.generated_by(self.codomain, [self(k) for k in subgroup.elements], name=label)
        return Subgroup.generated_by(
            self.codomain, [self(tuple(int(v) for v in row)) for row in subgroup.basis], name=label
        )

    def kernel(self, name: str | None = None) -> Subgroup:
        """ker φ (finite domain only)."""
        identity = self.codomain.identity
        elems = [h for h, v in enumerate(self.image_table) if v == identity]
        return Subgroup(self.domain, elements=elems, name=name or f"ker {self.name}")

    @cached_property
    def is_injective(self) -> bool:
        """Whether φ is one-to-one."""
        if self._matrix is not None:
            return int(np.linalg.matrix_rank(self._matrix)) == self.domain.rank  # type: ignore[attr-defined]
        return len(set(self.image_table)) == len(self.image_table)

    @cached_property
    def is_surjective(self) -> bool:
        """Whether φ is onto."""
        if self._matrix is not None:
            return self.image().index == 1
        if not isinstance(self.codomain, FiniteGroup):
            return False
        return len(set(self.image_table)) == self.codomain.order

    @property
    def is_bijective(self) -> bool:
        """Whether φ is an isomorphism."""
        return self.is_injective and self.is_surjective

    @property
    def is_trivial(self) -> bool:
        """Whether φ sends everything to the identity."""
        if self._matrix is not None:
            return not self._matrix.any()
        return all(v == self.codomain.identity for v in self.image_table)

    def maps_into(self, subgroup: Subgroup) -> bool:
        """Whether φ(K) ⊆ K for a subgroup K of the (shared) group."""
        if subgroup.is_finite_parent:
            return all(subgroup.contains(self(k)) for k in subgroup.elements)
        return all(subgroup.contains(self(tuple(int(v) for v in row))) for row in subgroup.basis)

    def restrict(self, subgroup: Subgroup) -> tuple[Homomorphism, Subgroup]:
        """φ|_K^{φ(K)} together with the image subgroup φ(K).

        The restricted map goes between the standalone groups
        ``subgroup.as_group()`` and ``φ(K).as_group()``.
        """
        if subgroup.parent != self.domain:
            raise HomomorphismError(f"{subgroup.name} is not a subgroup of {self.domain.name}")
        image = self.image_of(subgroup)
        local_k = subgroup.as_group()
        local_img = image.as_group()
        label = f"{self.name}|{subgroup.name}"
        if subgroup.is_finite_parent:
            images = [image.localize(self(subgroup.embed(i))) for i in range(len(subgroup))]
            return Homomorphism(local_k, local_img, images=images, name=label, kind="restriction"), image
        columns = [
            image.localize(self(subgroup.embed(tuple(int(i == j) for j in range(local_k.rank)))))  # type: ignore[attr-defined]
            for i in range(local_k.rank)  # type: ignore[attr-defined]
        ]
        matrix = np.array(columns, dtype=np.int64).reshape(local_k.rank, local_img.rank).T  # type: ignore[attr-defined]
        return Homomorphism(local_k, local_img, matrix=matrix, name=label, kind="restriction"), image

    def key(self) -> tuple:
        """Canonical sort key (image table or flattened matrix)."""
        if self._matrix is not None:
            return tuple(int(v) for v in self._matrix.ravel())
        return tuple(self.image_table)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        d: dict = {
            "name": self.name,
            "domain": self.domain.name,
            "codomain": self.codomain.name,
            "kind": self.kind,
        }
        if self._matrix is not None:
            d["matrix"] = self._matrix.tolist()
        else:
            d["images"] = [self.codomain.element_to_json(v) for v in self.image_table]
        return d

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Homomorphism):
            return NotImplemented
        if self.domain != other.domain or self.codomain != other.codomain:
            return False
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Homomorphism({self.name}: {self.domain.name} -> {self.codomain.name})"


def _extend_images(
    domain: FiniteGroup,
    codomain: Group,
    gens: list[int],
    gen_images: list[Element],
    name: str,
) -> list[Element]:
    """Breadth-first extension of generator images over the Cayley graph."""
    table: dict[int, Element] = {domain.identity: codomain.identity}
    frontier = [domain.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g, img in zip(gens, gen_images):
                b = domain.op(a, g)
                value = codomain.op(table[a], img)
                if b not in table:
                    table[b] = value
                    nxt.append(b)
                elif table[b] != value:
                    raise HomomorphismError(
                        f"{name}: images {gen_images} break a relation of {domain.name} "
                        f"(element {b} reached as {table[b]} and {value})"
                    )
        frontier = nxt
    if len(table) != domain.order:
        raise HomomorphismError(f"{name}: generators do not reach all of {domain.name}")
    return [table[h] for h in range(domain.order)]


def _named(hom: Homomorphism, fallback: str) -> Homomorphism:
    """Call the identity "id" and the trivial map "trivial"; anything else gets ``fallback``."""
    if hom.domain == hom.codomain and hom == Homomorphism.identity(hom.domain):
        hom.name = "id"
    elif hom.is_trivial:
        hom.name = "trivial"
    else:
        hom.name = fallback
    return hom


def enumerate_homomorphisms(
    domain: Group,
    codomain: Group,
    bound: int | None = None,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> list[Homomorphism]:
    """All homomorphisms H → G in canonical (lexicographic) order.

    Args:
        domain: H.
        codomain: G.
        bound: Largest absolute matrix entry, required when both groups
            are free abelian.
        limit: Largest number of candidates to examine.

    Raises:
        InfiniteFamilyError: Both groups free abelian and no bound given.
        UnsupportedError: Free abelian domain with a finite codomain.
        BudgetExceededError: Candidate count above ``limit``.
    """
    if isinstance(domain, FreeAbelianGroup):
        if not isinstance(codomain, FreeAbelianGroup):
            raise UnsupportedError(f"Hom({domain.name}, {codomain.name}) is not supported")
        if bound is None:
            raise InfiniteFamilyError(
                f"Hom({domain.name}, {codomain.name}) is infinite; supply an entry bound"
            )
        cells = domain.rank * codomain.rank
        count = (2 * bound + 1) ** cells
        if count > limit:
            raise BudgetExceededError(f"{count} candidate matrices exceed the limit {limit}")
        homs = [
            _named(
                Homomorphism.from_matrix(domain, codomain, np.array(entries).reshape(codomain.rank, domain.rank)),
                f"m{i}",
            )
            for i, entries in enumerate(itertools.product(range(-bound, bound + 1), repeat=cells))
        ]
        logger.debug("Hom(%s, %s) with bound %d: %d maps", domain.name, codomain.name, bound, len(homs))
        return homs

    if not isinstance(codomain, FiniteGroup):
        # torsion cannot map nontrivially into a torsion-free group
        return [Homomorphism.trivial(domain, codomain)]

    gens = list(domain.generators)
    orders = [domain.element_order(g) for g in gens]
    candidates = [
        [v for v in codomain.elements() if o % codomain.element_order(v) == 0]  # type: ignore[operator]
        for o in orders
    ]
    count = int(np.prod([len(c) for c in candidates])) if candidates else 1
    if count > limit:
        raise BudgetExceededError(f"{count} generator assignments exceed the limit {limit}")

    found: dict[tuple, list[Element]] = {}
    for assignment in itertools.product(*candidates):
        try:
            table = _extend_images(domain, codomain, gens, list(assignment), "candidate")  # type: ignore[arg-type]
        except HomomorphismError:
            continue
        found.setdefault(tuple(table), table)
    homs = []
    for i, key in enumerate(sorted(found)):
        hom = _named(Homomorphism(domain, codomain, images=found[key]), f"h{i}")
        hom.check()
        homs.append(hom)
    logger.debug("Hom(%s, %s): %d maps from %d candidates", domain.name, codomain.name, len(homs), count)
    return homs


def enumerate_endomorphisms(
    group: Group,
    bound: int | None = None,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> list[Homomorphism]:
    """End(G) = Hom(G, G), canonically ordered."""
    return enumerate_homomorphisms(group, group, bound=bound, limit=limit)


def is_fully_invariant(subgroup: Subgroup) -> bool:
    """Whether φ(K) ⊆ K for every φ ∈ End(G).

    Raises:
        UnsupportedError: For subgroups of infinite groups.
    """
    if not subgroup.is_finite_parent:
        raise UnsupportedError(
            f"End({subgroup.parent.name}) is infinite; full invariance is decided for finite groups only"
        )
    for phi in enumerate_endomorphisms(subgroup.parent):
        if not phi.maps_into(subgroup):
            logger.debug("%s moves %s out of itself", phi.key(), subgroup.name)
            return False
    return True
