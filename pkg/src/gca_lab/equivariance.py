"""Difference sets, equivariance decisions and UHP certificates.

A φ-cellular automaton 𝒯 = φ*∘τ is ψ-equivariant exactly when it equals
ψ*∘τ. Over finite groups that is decided by enumeration. Over ℤ^d the
difference set Δ(φ, ψ) = {ψ(h)⁻¹φ(h)} is infinite as soon as φ ≠ ψ, and
a distinguishing configuration is built from a translate r ∈ Δ with
rT ∩ T = ∅.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from gca_lab.automaton import GCA, input_space, reference_value
from gca_lab.config import Budget
from gca_lab.configurations import (
    Alphabet,
    Configuration,
    DenseConfiguration,
    FiniteSupportConfiguration,
)
from gca_lab.errors import (
    ConsistencyError,
    HomomorphismError,
    NoCounterexampleError,
    NotFoundError,
    PreconditionError,
    UnsupportedError,
)
from gca_lab.groups.base import Element, Group
from gca_lab.groups.finite import FiniteGroup
from gca_lab.groups.free_abelian import FreeAbelianGroup
from gca_lab.groups.homomorphisms import Homomorphism, enumerate_homomorphisms
from gca_lab.rules import LocalRule

logger = logging.getLogger(__name__)

METHODS = ("identical-homomorphism", "constant-rule", "exhaustive", "theorem-main", "constant-characterization")


@dataclass
class DifferenceSet:
    """Δ(φ, ψ) = {ψ(h)⁻¹φ(h) : h ∈ H}.

    Attributes:
        phi: φ.
        psi: ψ.
        finite: Whether Δ is finite.
        elements: Sorted elements when finite.
        certificate: Basis vector e_j of H with φ(e_j) ≠ ψ(e_j) when Δ
            is infinite; every multiple of ``direction`` then lies in Δ.
        direction: ψ(e_j)⁻¹φ(e_j) for the certificate.
    """

    phi: Homomorphism
    psi: Homomorphism
    finite: bool
    elements: list[Element] | None = None
    certificate: Element | None = None
    direction: Element | None = None

    @property
    def is_trivial(self) -> bool:
        """Whether Δ = {e}, i.e. φ = ψ."""
        return self.finite and self.elements == [self.phi.codomain.identity]

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        d: dict = {"phi": self.phi.name, "psi": self.psi.name, "finite": self.finite}
        if self.finite:
            d["elements"] = [self.phi.codomain.element_to_json(g) for g in self.elements or []]
        else:
            d["certificate"] = list(self.certificate)  # type: ignore[arg-type]
            d["direction"] = list(self.direction)  # type: ignore[arg-type]
        return d


def difference_set(phi: Homomorphism, psi: Homomorphism) -> DifferenceSet:
    """Δ(φ, ψ), enumerated or classified.

    Raises:
        HomomorphismError: If φ and ψ do not share domain and codomain.
        UnsupportedError: For backend combinations other than finite
            domains and lattice maps.
    """
    if phi.domain != psi.domain or phi.codomain != psi.codomain:
        raise HomomorphismError(f"{phi.name} and {psi.name} must share domain and codomain")
    g = phi.codomain
    if phi.domain.is_finite:
        elements = sorted({g.op(g.inv(psi(h)), phi(h)) for h in phi.domain.elements()})
        return DifferenceSet(phi, psi, finite=True, elements=elements)
    if phi.is_matrix and psi.is_matrix:
        diff = phi.matrix - psi.matrix
        nonzero = np.flatnonzero(np.any(diff != 0, axis=0))
        if not len(nonzero):
            return DifferenceSet(phi, psi, finite=True, elements=[g.identity])
        j = int(nonzero[0])
        certificate = tuple(int(i == j) for i in range(phi.domain.rank))  # type: ignore[attr-defined]
        direction = tuple(int(v) for v in diff[:, j])
        return DifferenceSet(phi, psi, finite=False, certificate=certificate, direction=direction)
    raise UnsupportedError(f"Δ({phi.name}, {psi.name}) is not supported for these groups")


def multiples(group: Group, direction: Element) -> Iterator[tuple[int, Element]]:
    """(m, m·d) by increasing |m|, the lexicographically smaller of ±m·d first."""
    for m in itertools.count(1):
        pair = sorted(((signed, group.power(direction, signed)) for signed in (-m, m)), key=lambda p: p[1])
        yield from pair


def find_disjoint_translate(
    group: Group,
    candidates: Iterable[Element],
    memory: Sequence[Element],
    max_candidates: int | None = None,
) -> Element:
    """First r among ``candidates`` with rT ∩ T = ∅.

    rT meets T exactly when r ∈ TT⁻¹, so an infinite family of distinct
    candidates succeeds within |TT⁻¹| + 1 tries; lazy iterables are
    capped there unless ``max_candidates`` says otherwise.

    Raises:
        NotFoundError: If every examined candidate meets T.
    """
    forbidden = set(group.product_set(memory, [group.inv(t) for t in memory]))
    if max_candidates is None and not isinstance(candidates, Sequence):
        max_candidates = len(forbidden) + 1
    for i, r in enumerate(candidates):
        if max_candidates is not None and i >= max_candidates:
            break
        if r not in forbidden:
            return r
    raise NotFoundError(f"no candidate translate is disjoint from T={list(memory)}")


def _disjoint_multiple(delta: DifferenceSet, memory: Sequence[Element]) -> tuple[int, Element]:
    group = delta.phi.codomain
    forbidden = set(group.product_set(memory, [group.inv(t) for t in memory]))
    # two candidates (m and -m) per magnitude
    for i, (m, r) in enumerate(multiples(group, delta.direction)):  # type: ignore[arg-type]
        if i >= 2 * (len(forbidden) + 1):
            break
        if r not in forbidden:
            return m, r
    raise NotFoundError(f"no multiple of {delta.direction} is disjoint from T={list(memory)}")


# ─── Verdicts ──────────────────────────────────────────────────


@dataclass
class EquivarianceVerdict:
    """Whether 𝒯 is ψ-equivariant, with a re-verified witness when not.

    Attributes:
        equivariant: The decision.
        method: How it was reached (see ``METHODS``).
        h: Output cell where 𝒯 and ψ*∘τ differ.
        x: Input configuration on which they differ.
        values: (𝒯(x)(h), ψ*∘τ(x)(h)) from the reference evaluator.
        verified: Whether the witness re-evaluated to a genuine difference.
        detail: Construction data (translate, patterns, ...).
    """

    equivariant: bool
    method: str
    h: Element | None = None
    x: Configuration | None = None
    values: tuple[int, int] | None = None
    verified: bool = False
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        d: dict = {"equivariant": self.equivariant, "method": self.method}
        if self.x is not None:
            d["witness"] = {
                "h": list(self.h) if isinstance(self.h, tuple) else self.h,
                "x": self.x.to_text(),
                "values": list(self.values or ()),
                "verified": self.verified,
            }
        if self.detail:
            d["detail"] = self.detail
        return d


def _verify_witness(first: GCA, second: GCA, x: Configuration, h: Element) -> tuple[int, int]:
    values = (reference_value(first, x, h), reference_value(second, x, h))
    if values[0] == values[1]:
        raise ConsistencyError(
            f"witness does not separate {first.name} from {second.name}",
            {"h": h, "x": x.to_text(), "values": list(values)},
        )
    return values


def _translate_witness(gca: GCA, psi: Homomorphism, delta: DifferenceSet, method: str) -> EquivarianceVerdict:
    """Separate φ*∘τ from ψ*∘τ at h = m·e_j with φ(h)T ∩ ψ(h)T = ∅."""
    group: FreeAbelianGroup = gca.source  # type: ignore[assignment]
    rule = gca.rule
    pair = rule.first_distinct_pair()
    if pair is None:
        raise PreconditionError(f"{gca.name} is constant; nothing separates it")
    m, r = _disjoint_multiple(delta, rule.memory)
    h = gca.target.power(delta.certificate, m)  # type: ignore[arg-type]
    left = [group.op(gca.phi(h), t) for t in rule.memory]
    right = [group.op(psi(h), t) for t in rule.memory]
    if set(left) & set(right):
        raise ConsistencyError(
            f"translate {r} does not separate the windows of {gca.name}",
            {"h": list(h), "left": [list(v) for v in left], "right": [list(v) for v in right]},
        )
    z1, z2 = rule.decode(pair[0]), rule.decode(pair[1])
    support = dict(zip(left, z1))
    support.update(zip(right, z2))
    x = FiniteSupportConfiguration(group, gca.alphabet, 0, support)
    other = gca.with_phi(psi)
    values = _verify_witness(gca, other, x, h)
    return EquivarianceVerdict(
        equivariant=False,
        method=method,
        h=h,
        x=x,
        values=values,
        verified=True,
        detail={
            "translate": list(r),
            "multiple": m,
            "z1": list(z1),
            "z2": list(z2),
            "phi_window": [list(v) for v in left],
            "psi_window": [list(v) for v in right],
        },
    )


def decide_equivariance(gca: GCA, psi: Homomorphism, budget: Budget | None = None) -> EquivarianceVerdict:
    """Decide whether 𝒯 is ψ-equivariant.

    Cases, in order: ψ = φ; constant rule; finite groups (exhaustive);
    lattice maps ℤ^e → ℤ^d (never equivariant, witness from a disjoint
    translate).

    Raises:
        HomomorphismError: If ψ does not share domain and codomain with φ.
        UnsupportedError: For any other backend combination.
    """
    budget = budget or Budget()
    phi = gca.phi
    if psi.domain != phi.domain or psi.codomain != phi.codomain:
        raise HomomorphismError(f"{psi.name} must map {phi.domain.name} into {phi.codomain.name}")
    if psi == phi:
        return EquivarianceVerdict(True, "identical-homomorphism")
    if gca.is_constant:
        return EquivarianceVerdict(True, "constant-rule")
    if gca.is_finite:
        rows = input_space(gca, budget.max_configurations)
        other = gca.with_phi(psi)
        lhs, rhs = gca.apply_batch(rows), other.apply_batch(rows)
        diff = np.argwhere(lhs != rhs)
        if not len(diff):
            return EquivarianceVerdict(True, "exhaustive")
        i, h = (int(v) for v in diff[0])
        x = DenseConfiguration(gca.source, gca.alphabet, rows[i])  # type: ignore[arg-type]
        values = _verify_witness(gca, other, x, h)
        return EquivarianceVerdict(False, "exhaustive", h=h, x=x, values=values, verified=True)
    if phi.is_matrix and psi.is_matrix:
        return _translate_witness(gca, psi, difference_set(phi, psi), "theorem-main")
    raise UnsupportedError(f"equivariance of {gca.name} is not decidable over these groups")


def constancy_witness(gca: GCA, psi: Homomorphism | None = None) -> EquivarianceVerdict:
    """Separate ψ₀*∘τ from ψ₁*∘τ for a non-constant 𝒯 over ℤ^d.

    ψ₀ is the trivial map and ψ₁ (default: φ) must have infinite image.

    Raises:
        PreconditionError: If 𝒯 is constant or ψ₁ has finite image.
    """
    psi1 = psi or gca.phi
    if gca.is_constant:
        raise PreconditionError(f"{gca.name} is constant")
    if not psi1.is_matrix or psi1.is_trivial:
        raise PreconditionError(f"{psi1.name} must be a lattice map with infinite image")
    psi0 = Homomorphism.trivial(psi1.domain, psi1.codomain, name="psi0")
    delta = difference_set(psi1, psi0)
    return _translate_witness(gca.with_phi(psi1, name=gca.name), psi0, delta, "constant-characterization")


# ─── Scans and constructions ───────────────────────────────────


@dataclass
class UhpScan:
    """Every ψ ∈ Hom(H, G) for which 𝒯 is ψ-equivariant."""

    gca: GCA
    equivariant: list[Homomorphism]
    total: int

    @property
    def has_uhp(self) -> bool:
        """Whether φ is the only such homomorphism."""
        return self.equivariant == [self.gca.phi]

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "gca": self.gca.name,
            "homomorphisms": self.total,
            "equivariant": [h.to_dict() for h in self.equivariant],
            "uhp": self.has_uhp,
        }


def uhp_scan(gca: GCA, budget: Budget | None = None) -> UhpScan:
    """Scan Hom(H, G) for homomorphisms 𝒯 is equivariant with.

    Raises:
        UnsupportedError: Over infinite groups.
    """
    budget = budget or Budget()
    if not gca.is_finite:
        raise UnsupportedError("uhp-scan needs finite groups; use decide_equivariance per homomorphism")
    homs = enumerate_homomorphisms(gca.target, gca.source)
    rows = input_space(gca, budget.max_configurations)
    reference = gca.apply_batch(rows)
    found = []
    for psi in homs:
        if psi == gca.phi or np.array_equal(gca.with_phi(psi).apply_batch(rows), reference):
            found.append(psi)
    logger.debug("%s equivariant with %d of %d homomorphisms", gca.name, len(found), len(homs))
    return UhpScan(gca, found, len(homs))


def symmetric_counterexample(
    phi: Homomorphism,
    psi: Homomorphism,
    alphabet: Alphabet,
    budget: Budget | None = None,
) -> GCA:
    """Non-constant τ with φ*∘τ = ψ*∘τ when Δ(φ, ψ) is finite.

    τ is the sum-mod-q rule over T = ⟨Δ(φ, ψ)⟩; the equality is checked
    on every configuration over finite groups.

    Raises:
        NoCounterexampleError: If Δ(φ, ψ) is infinite.
        ConsistencyError: If the constructed τ fails the equality.
    """
    budget = budget or Budget()
    delta = difference_set(phi, psi)
    if not delta.finite:
        raise NoCounterexampleError(
            f"Δ({phi.name}, {psi.name}) is infinite: φ*∘τ ≠ ψ*∘τ for every non-constant τ"
        )
    group = phi.codomain
    if isinstance(group, FiniteGroup):
        memory = list(group.closure(delta.elements))  # type: ignore[arg-type]
    else:
        memory = [group.identity]
    rule = LocalRule.sum_mod_q(group, memory, alphabet)
    tau = GCA(Homomorphism.identity(group), rule, name=f"sym({phi.name},{psi.name})")
    if phi.domain.is_finite and group.is_finite:
        first, second = tau.with_phi(phi), tau.with_phi(psi)
        rows = input_space(first, budget.max_configurations)
        if not np.array_equal(first.apply_batch(rows), second.apply_batch(rows)):
            raise ConsistencyError(
                f"symmetric rule over ⟨Δ⟩ separates {phi.name}* and {psi.name}*",
                {"phi": phi.to_dict(), "psi": psi.to_dict(), "memory": memory},
            )
    return tau


def symmetric_equivariance_check(gca: GCA, psi: Homomorphism) -> bool:
    """Sufficient criterion for ψ-equivariance.

    True when μ is symmetric and ψ(h)⁻¹φ(h)T = T for every h. False
    means the criterion does not apply, not that 𝒯 fails equivariance.
    """
    if not gca.rule.is_symmetric():
        return False
    phi = gca.phi
    group = gca.source
    memory = set(gca.memory)
    if not memory:
        return True
    if phi.domain.is_finite:
        for h in phi.domain.elements():
            d = group.op(group.inv(psi(h)), phi(h))
            if {group.op(d, t) for t in memory} != memory:
                return False
        return True
    if phi.is_matrix and psi.is_matrix:
        # dT = T forces d = 0 in a torsion-free group
        return difference_set(phi, psi).is_trivial
    return False


@dataclass
class UhpCertificate:
    """τ(y) is a-characteristic on g, so φ*∘τ has the UHP for every φ."""

    g: int
    a: int
    preimage: tuple[int, ...]
    image: tuple[int, ...]

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {"g": self.g, "a": self.a, "preimage": list(self.preimage), "image": list(self.image)}


def characteristic_uhp_certificate(tau: GCA, budget: Budget | None = None) -> UhpCertificate | None:
    """Search τ(A^G) for a characteristic configuration.

    Symbols are tried in the order 1, ..., q-1, 0 and preimages in code
    order; only the local rule of ``tau`` is used.

    Raises:
        UnsupportedError: If G is infinite.
    """
    budget = budget or Budget()
    group = tau.source
    if not isinstance(group, FiniteGroup):
        raise UnsupportedError(f"{group.name} is infinite")
    ca = GCA(Homomorphism.identity(group), tau.rule, name=tau.name)
    rows = input_space(ca, budget.max_configurations)
    out = ca.apply_batch(rows)
    q = ca.alphabet.size
    for a in list(range(1, q)) + [0]:
        hits = np.flatnonzero((out == a).sum(axis=1) == 1)
        if len(hits):
            i = int(hits[0])
            g = int(np.flatnonzero(out[i] == a)[0])
            return UhpCertificate(g, a, tuple(int(v) for v in rows[i]), tuple(int(v) for v in out[i]))
    return None
