"""Quotient groups G/N and endomorphisms induced on them."""

from __future__ import annotations

import logging

import numpy as np

from gca_lab.errors import PreconditionError, SubgroupError, UnsupportedError
from gca_lab.groups.finite import FiniteGroup
from gca_lab.groups.homomorphisms import Homomorphism
from gca_lab.groups.subgroups import Subgroup

logger = logging.getLogger(__name__)


class QuotientGroup(FiniteGroup):
    """G/N as a Cayley table.

    Quotient element i is the coset whose least element is
    ``representatives[i]``; cosets are ordered by that representative.
    """

    def __init__(self, parent: FiniteGroup, normal: Subgroup, name: str | None = None) -> None:
        cosets = normal.right_cosets()
        label = {g: i for i, coset in enumerate(cosets) for g in coset}
        reps = [coset[0] for coset in cosets]
        table = [[label[parent.op(a, b)] for b in reps] for a in reps]
        super().__init__(table, name=name or f"{parent.name}/{normal.name}")
        self.parent = parent
        self.normal = normal
        self.cosets = cosets
        self.representatives = tuple(reps)
        self.labels = np.array([label[g] for g in range(parent.order)], dtype=np.int64)

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["kind"] = "quotient"
        d["parent"] = self.parent.name
        d["cosets"] = [list(c) for c in self.cosets]
        return d


def quotient_group(group: FiniteGroup, normal: Subgroup) -> tuple[QuotientGroup, Homomorphism]:
    """G/N together with the canonical projection ρ : G → G/N.

    Raises:
        UnsupportedError: If G is infinite.
        SubgroupError: If N is not a normal subgroup of G.
    """
    if not isinstance(group, FiniteGroup):
        raise UnsupportedError(f"quotients of {group.name} are not supported")
    if normal.parent != group:
        raise SubgroupError(f"{normal.name} is not a subgroup of {group.name}")
    if not normal.is_normal:
        raise SubgroupError(f"{normal.name} is not normal in {group.name}")
    quotient = QuotientGroup(group, normal)
    rho = Homomorphism.from_images(
        group, quotient, quotient.labels.tolist(), name="rho", kind="canonical-projection"
    )
    logger.debug("%s has order %d", quotient.name, quotient.order)
    return quotient, rho


def induced_endomorphism(phi: Homomorphism, normal: Subgroup) -> tuple[Homomorphism, Homomorphism]:
    """The unique φ̂ ∈ End(G/N) with φ̂∘ρ = ρ∘φ.

    Returns:
        (φ̂, ρ).

    Raises:
        PreconditionError: If φ is not an endomorphism or φ(N) ⊄ N; the
            witness is the element of N leaving N.
    """
    group = phi.domain
    if phi.codomain != group:
        raise PreconditionError(f"{phi.name} is not an endomorphism")
    for k in normal.elements:
        if not normal.contains(phi(k)):
            raise PreconditionError(
                f"{normal.name} is not {phi.name}-invariant: {phi.name}({k}) = {phi(k)}", witness=k
            )
    quotient, rho = quotient_group(group, normal)  # type: ignore[arg-type]
    images = [int(quotient.labels[phi(r)]) for r in quotient.representatives]
    phi_hat = Homomorphism.from_images(quotient, quotient, images, name=f"{phi.name}^")
    lhs = phi_hat.images[rho.images]
    rhs = rho.images[phi.images]
    if not np.array_equal(lhs, rhs):
        g = int(np.flatnonzero(lhs != rhs)[0])
        raise PreconditionError(f"{phi.name} does not descend to {quotient.name} at {g}", witness=g)
    return phi_hat, rho
