"""Quotient, restriction and induction of φ-cellular automata.

Over a finite group every construction here is followed by an exhaustive
check of the diagram that defines it; a failed check is a bug and raises
``ConsistencyError`` with the offending input attached.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

import numpy as np
import pandas as pd

from gca_lab.automaton import (
    GCA,
    compose,
    identity_gca,
    injectivity_surjectivity,
    input_space,
    pullback,
    random_gca,
    realizes_same_map,
)
from gca_lab.config import Budget
from gca_lab.configurations import (
    Alphabet,
    ConfigSet,
    FiniteSupportConfiguration,
    all_configurations,
    fix_subgroup,
)
from gca_lab.errors import (
    BudgetExceededError,
    ConsistencyError,
    HomomorphismError,
    PreconditionError,
    SubgroupError,
    UnsupportedError,
)
from gca_lab.groups.finite import FiniteGroup
from gca_lab.groups.homomorphisms import (
    Homomorphism,
    enumerate_endomorphisms,
    is_fully_invariant,
)
from gca_lab.groups.quotients import induced_endomorphism
from gca_lab.groups.subgroups import Subgroup, all_subgroups
from gca_lab.rules import LocalRule, enumerate_rules

logger = logging.getLogger(__name__)

# local coordinates scanned by the sublattice window check
LATTICE_WINDOW = range(-2, 3)
LATTICE_TRIALS = 16


def _require_endomorphism(gca: GCA) -> FiniteGroup:
    if gca.phi.domain != gca.phi.codomain:
        raise PreconditionError(f"{gca.name} is over {gca.phi.name}, which is not an endomorphism")
    if not isinstance(gca.source, FiniteGroup):
        raise UnsupportedError(f"{gca.source.name} is infinite; quotients need a finite group")
    return gca.source


def _require_invariant(phi: Homomorphism, subgroup: Subgroup) -> None:
    for k in subgroup.elements:
        if not subgroup.contains(phi(k)):
            raise PreconditionError(
                f"{subgroup.name} is not {phi.name}-invariant: {phi.name}({k}) = {phi(k)}", witness=k
            )


def _first_bad_row(lhs: np.ndarray, rhs: np.ndarray) -> int:
    return int(np.flatnonzero(np.any(lhs != rhs, axis=1))[0])


# ─── Fix(K) and quotients ──────────────────────────────────────


def invariance_check(gca: GCA, subgroup: Subgroup, budget: Budget | None = None) -> bool:
    """Confirm that 𝒯 maps Fix(K) into Fix(K).

    Args:
        gca: A φ-cellular automaton with φ ∈ End(G), G finite.
        subgroup: A φ-invariant subgroup K of G.
        budget: Enumeration limits.

    Returns:
        True.

    Raises:
        PreconditionError: If φ(K) ⊄ K (the witness is the escaping k).
        ConsistencyError: If some member of Fix(K) leaves Fix(K).
    """
    budget = budget or Budget()
    _require_endomorphism(gca)
    _require_invariant(gca.phi, subgroup)
    fixed = fix_subgroup(subgroup, gca.alphabet, budget.max_configurations)
    images = gca.apply_batch(fixed.rows)
    inside = fixed.contains_rows(images)
    if not inside.all():
        bad = int(np.flatnonzero(~inside)[0])
        raise ConsistencyError(
            f"{gca.name} maps a member of Fix({subgroup.name}) outside Fix({subgroup.name})",
            {"gca": gca.to_dict(), "input": fixed.rows[bad].tolist(), "output": images[bad].tolist()},
        )
    logger.debug("Fix(%s) is %s-invariant (%d members)", subgroup.name, gca.name, len(fixed))
    return True


@dataclass
class QuotientPackage:
    """𝒯̂ on A^{G/N} together with the pieces that define it.

    Attributes:
        original: 𝒯 over φ ∈ End(G).
        normal: The normal φ-invariant subgroup N.
        quotient_gca: 𝒯̂ over φ̂ on G/N.
        projection: ρ : G → G/N.
        fix_set: Fix(N).
    """

    original: GCA
    normal: Subgroup
    quotient_gca: GCA
    projection: Homomorphism
    fix_set: ConfigSet

    def lift(self, rows: np.ndarray) -> np.ndarray:
        """ρ*: configurations over G/N to members of Fix(N)."""
        return np.asarray(rows)[:, self.projection.images]

    def descend(self, rows: np.ndarray, section: Iterable[int] | None = None) -> np.ndarray:
        """(ρ*_↓)⁻¹: members of Fix(N) to configurations over G/N.

        Args:
            rows: Configurations over G, one per row.
            section: One element per coset, in coset order; defaults to
                the least element of each coset.

        Raises:
            PreconditionError: If a row is not in Fix(N).
        """
        rows = np.asarray(rows, dtype=np.int64)
        inside = self.fix_set.contains_rows(rows)
        if not inside.all():
            bad = int(np.flatnonzero(~inside)[0])
            raise PreconditionError(f"row {bad} is not fixed by {self.normal.name}", witness=rows[bad].tolist())
        quotient = self.quotient_gca.source
        reps = list(section) if section is not None else list(quotient.representatives)  # type: ignore[attr-defined]
        return rows[:, reps]

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "original": self.original.to_dict(),
            "normal": self.normal.to_dict(),
            "quotient_group": self.quotient_gca.source.to_dict(),
            "projection": self.projection.to_dict(),
            "quotient_gca": self.quotient_gca.to_dict(),
            "fix_size": len(self.fix_set),
            "diagram_verified": True,
        }


def quotient_gca(gca: GCA, normal: Subgroup, budget: Budget | None = None) -> QuotientPackage:
    """Build 𝒯̂ = (ρ*_↓)⁻¹ ∘ 𝒯|_{Fix(N)} ∘ ρ*_↓ as a φ̂-cellular automaton.

    The table of 𝒯̂ is read off at the identity coset over the memory set
    ρ(T) and then minimized. The square ρ*∘𝒯̂ = 𝒯∘ρ* is checked on all of
    A^{G/N}.

    Raises:
        PreconditionError: If φ is not an endomorphism or N is not φ-invariant.
        SubgroupError: If N is not normal.
        ConsistencyError: If the square fails to commute.
    """
    budget = budget or Budget()
    group = _require_endomorphism(gca)
    phi_hat, rho = induced_endomorphism(gca.phi, normal)
    quotient: FiniteGroup = rho.codomain  # type: ignore[assignment]
    q = gca.alphabet.size

    memory = sorted({rho(t) for t in gca.memory})
    patterns = all_configurations(len(memory), q, budget.max_configurations)
    extended = np.zeros((patterns.shape[0], quotient.order), dtype=np.int64)
    extended[:, memory] = patterns
    table = gca.apply_batch(extended[:, rho.images])[:, group.identity]
    rule = LocalRule(quotient, memory, table, gca.alphabet, name=f"{gca.rule.name}^")
    hat = GCA(phi_hat, rule, name=f"{gca.name}^").minimize()

    rows = input_space(hat, budget.max_configurations)
    lhs = hat.apply_batch(rows)[:, rho.images]
    rhs = gca.apply_batch(rows[:, rho.images])
    if not np.array_equal(lhs, rhs):
        bad = _first_bad_row(lhs, rhs)
        raise ConsistencyError(
            f"quotient square fails for {gca.name} over {quotient.name}",
            {"gca": gca.to_dict(), "quotient_input": rows[bad].tolist()},
        )

    invariance_check(gca, normal, budget)
    fixed = fix_subgroup(normal, gca.alphabet, budget.max_configurations)
    logger.debug("%s on %s has memory %s", hat.name, quotient.name, list(hat.memory))
    return QuotientPackage(gca, normal, hat, rho, fixed)


def quotient_functoriality_check(
    group: FiniteGroup,
    normal: Subgroup,
    sample: list[GCA],
    budget: Budget | None = None,
) -> bool:
    """Confirm that 𝒯 ↦ 𝒯̂ respects composition and the identity.

    Every GCA in ``sample`` must be over an endomorphism of ``group``.

    Raises:
        PreconditionError: If N is not fully invariant.
        ConsistencyError: If (𝒮∘𝒯)^ ≠ 𝒮̂∘𝒯̂ for some pair, or id^ ≠ id.
    """
    budget = budget or Budget()
    if normal.parent != group:
        raise SubgroupError(f"{normal.name} is not a subgroup of {group.name}")
    if not is_fully_invariant(normal):
        raise PreconditionError(f"{normal.name} is not fully invariant in {group.name}")
    limit = budget.max_configurations

    ident = quotient_gca(identity_gca(group, _sample_alphabet(sample)), normal, budget)
    hat_id = ident.quotient_gca
    if not realizes_same_map(hat_id, identity_gca(hat_id.source, hat_id.alphabet), limit):
        raise ConsistencyError(f"hat of the identity is not the identity on {hat_id.source.name}")

    hats = [quotient_gca(t, normal, budget).quotient_gca for t in sample]
    for (i, first), (j, second) in itertools.product(enumerate(sample), repeat=2):
        whole = quotient_gca(compose(first, second, budget), normal, budget).quotient_gca
        parts = compose(hats[i], hats[j], budget)
        if not realizes_same_map(whole, parts, limit):
            raise ConsistencyError(
                f"hat does not respect {second.name}∘{first.name}",
                {"first": first.to_dict(), "second": second.to_dict()},
            )
    logger.debug("hat respects composition on %d pairs over %s", len(sample) ** 2, normal.name)
    return True


def _sample_alphabet(sample: list[GCA]) -> Alphabet:
    return sample[0].alphabet if sample else Alphabet(2)


# ─── Restriction and induction ─────────────────────────────────


@dataclass
class RestrictionPackage:
    """𝒯_K together with the subgroups it lives on.

    Attributes:
        original: 𝒯 over φ : H → G with memory in φ(K).
        subgroup: K ≤ H.
        image_subgroup: φ(K) ≤ G.
        restricted: 𝒯_K over φ|_K^{φ(K)}.
        check: How the square was checked ("exhaustive" or "window").
    """

    original: GCA
    subgroup: Subgroup
    image_subgroup: Subgroup
    restricted: GCA
    check: str = "exhaustive"

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "original": self.original.to_dict(),
            "subgroup": self.subgroup.to_dict(),
            "image_subgroup": self.image_subgroup.to_dict(),
            "restricted": self.restricted.to_dict(),
            "check": self.check,
        }


def restrict(gca: GCA, subgroup: Subgroup, budget: Budget | None = None) -> RestrictionPackage:
    """Build 𝒯_K : A^{φ(K)} → A^K, keeping the rule table of 𝒯.

    The square Res_K∘𝒯 = 𝒯_K∘Res_{φ(K)} is checked on all of A^G over
    finite groups and on random finite-support inputs over ℤ^d.

    Raises:
        SubgroupError: If K is not a subgroup of H.
        PreconditionError: If a memory element lies outside φ(K).
        ConsistencyError: If the square fails.
    """
    budget = budget or Budget()
    if subgroup.parent != gca.target:
        raise SubgroupError(f"{subgroup.name} is not a subgroup of {gca.target.name}")
    phi_res, image = gca.phi.restrict(subgroup)
    for t in gca.memory:
        if not image.contains(t):
            raise PreconditionError(f"memory element {t} of {gca.name} is outside {image.name}", witness=t)
    rule = gca.rule.relabel(image.as_group(), image.localize, name=f"{gca.rule.name}|{subgroup.name}")
    restricted = GCA(phi_res, rule, name=f"{gca.name}|{subgroup.name}")

    if gca.is_finite:
        rows = input_space(gca, budget.max_configurations)
        lhs = gca.apply_batch(rows)[:, list(subgroup.elements)]
        rhs = restricted.apply_batch(rows[:, list(image.elements)])
        if not np.array_equal(lhs, rhs):
            bad = _first_bad_row(lhs, rhs)
            raise ConsistencyError(
                f"restriction square fails for {gca.name} on {subgroup.name}",
                {"gca": gca.to_dict(), "input": rows[bad].tolist()},
            )
        return RestrictionPackage(gca, subgroup, image, restricted, "exhaustive")

    _lattice_window_check(gca, restricted, subgroup, image, budget)
    return RestrictionPackage(gca, subgroup, image, restricted, "window")


def restriction_candidates(pkg: RestrictionPackage, budget: Budget | None = None) -> int:
    """Count the rules over subsets of the minimal memory of 𝒯_K that close the restriction square.

    The restriction is unique exactly when the count is 1.

    Raises:
        UnsupportedError: Over ℤ^d.
    """
    budget = budget or Budget()
    original, restricted = pkg.original, pkg.restricted
    if not original.is_finite:
        raise UnsupportedError("uniqueness of the restriction is checked over finite groups only")
    rows = input_space(original, budget.max_configurations)
    target = original.apply_batch(rows)[:, list(pkg.subgroup.elements)]
    inputs = rows[:, list(pkg.image_subgroup.elements)]
    memory = restricted.minimal_memory_set()
    matches = 0
    for rule in enumerate_rules(restricted.source, restricted.alphabet, len(memory), memories=memory):
        candidate = GCA(restricted.phi, rule)
        matches += bool(np.array_equal(candidate.apply_batch(inputs), target))
    return matches


def _lattice_window_check(
    gca: GCA, restricted: GCA, subgroup: Subgroup, image: Subgroup, budget: Budget
) -> None:
    rng = np.random.default_rng(budget.seed)
    q = gca.alphabet.size
    rank = restricted.target.rank  # type: ignore[attr-defined]
    window = list(itertools.product(LATTICE_WINDOW, repeat=rank))
    for _ in range(LATTICE_TRIALS):
        support = {}
        for c in window:
            base = gca.phi(subgroup.embed(c))
            for t in gca.memory:
                support[gca.source.op(base, t)] = int(rng.integers(0, q))
        x = FiniteSupportConfiguration(gca.source, gca.alphabet, 0, support)  # type: ignore[arg-type]
        local = FiniteSupportConfiguration(
            restricted.source,  # type: ignore[arg-type]
            gca.alphabet,
            0,
            {image.localize(g): v for g, v in x.support.items()},
        )
        for c in window:
            lhs = gca.value_at(x, subgroup.embed(c))
            rhs = restricted.value_at(local, c)
            if lhs != rhs:
                raise ConsistencyError(
                    f"restriction square fails for {gca.name} at {c}",
                    {"gca": gca.to_dict(), "input": x.to_dict(), "at": list(c)},
                )


def induce(restricted: GCA, phi: Homomorphism, subgroup: Subgroup, name: str | None = None) -> GCA:
    """Build 𝒮^H : A^G → A^H from a φ|_K^{φ(K)}-cellular automaton 𝒮.

    𝒮^H(x)(h) = ν((φ(h⁻¹)·x)|_S), with S carried back into G.

    Raises:
        HomomorphismError: If 𝒮 is not over the restriction of φ to K.
    """
    phi_res, image = phi.restrict(subgroup)
    if restricted.source != image.as_group() or restricted.target != subgroup.as_group():
        raise HomomorphismError(
            f"{restricted.name} does not map A^{image.name} to A^{subgroup.name}"
        )
    for k in restricted.target.generators:
        if image.embed(restricted.phi(k)) != phi(subgroup.embed(k)):
            raise HomomorphismError(
                f"{restricted.phi.name} disagrees with {phi.name} on generator {subgroup.embed(k)}"
            )
    rule = restricted.rule.relabel(phi.codomain, image.embed, name=f"{restricted.rule.name}^H")
    return GCA(phi, rule, name=name or f"{restricted.name}^{phi.domain.name}")


def restriction_composition_check(
    outer: GCA, inner: GCA, subgroup: Subgroup, budget: Budget | None = None
) -> bool:
    """Confirm (𝒯∘𝒮)_K = 𝒯_K ∘ 𝒮_{φ(K)}.

    Args:
        outer: 𝒯 : A^R → A^H over φ : H → R with memory in φ(K).
        inner: 𝒮 : A^G → A^R over ψ : R → G with memory in ψ(φ(K)).
        subgroup: K ≤ H.
        budget: Enumeration limits.

    Raises:
        PreconditionError: If a memory set is not contained where required.
        ConsistencyError: If the two sides realize different maps.
    """
    budget = budget or Budget()
    whole = restrict(compose(inner, outer, budget), subgroup, budget).restricted
    outer_pkg = restrict(outer, subgroup, budget)
    inner_pkg = restrict(inner, outer_pkg.image_subgroup, budget)
    parts = compose(inner_pkg.restricted, outer_pkg.restricted, budget)
    if not realizes_same_map(whole, parts, budget.max_configurations):
        raise ConsistencyError(
            f"restriction of {outer.name}∘{inner.name} to {subgroup.name} differs from the composite of restrictions",
            {"outer": outer.to_dict(), "inner": inner.to_dict(), "subgroup": subgroup.to_dict()},
        )
    return True


# ─── Property transfer ─────────────────────────────────────────


@dataclass
class TransferReport:
    """Injectivity and bijectivity of 𝒯, 𝒯_K and φ, with the derived claims."""

    gca: str
    subgroup: str
    injective: bool
    bijective: bool
    surjective: bool
    restricted_injective: bool
    restricted_bijective: bool
    restricted_surjective: bool
    phi_surjective: bool
    phi_bijective: bool
    restricted_pullback_injective: bool
    restricted_pullback_surjective: bool
    pullback_surjective: bool
    kernel_in_subgroup: bool

    @property
    def injectivity_transfer(self) -> bool:
        return self.injective == (self.restricted_injective and self.phi_surjective)

    @property
    def bijectivity_transfer(self) -> bool:
        return self.bijective == (self.restricted_bijective and self.phi_bijective)

    @property
    def pullback_claims(self) -> dict[str, bool]:
        """The three claims about φ*_K = (φ|_K^{φ(K)})*."""
        return {
            "restricted_pullback_injective": self.restricted_pullback_injective,
            "surjectivity_restricts": (not self.pullback_surjective) or self.restricted_pullback_surjective,
            "surjectivity_extends": (
                not (self.kernel_in_subgroup and self.restricted_pullback_surjective)
            ) or self.pullback_surjective,
        }

    @property
    def holds(self) -> bool:
        return self.injectivity_transfer and self.bijectivity_transfer and all(self.pullback_claims.values())

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "gca": self.gca,
            "subgroup": self.subgroup,
            "injective": self.injective,
            "surjective": self.surjective,
            "bijective": self.bijective,
            "restricted_injective": self.restricted_injective,
            "restricted_surjective": self.restricted_surjective,
            "restricted_bijective": self.restricted_bijective,
            "phi_surjective": self.phi_surjective,
            "phi_bijective": self.phi_bijective,
            "injectivity_transfer": self.injectivity_transfer,
            "bijectivity_transfer": self.bijectivity_transfer,
            **self.pullback_claims,
        }


def transfer_theorem_check(gca: GCA, subgroup: Subgroup, budget: Budget | None = None) -> TransferReport:
    """Compute the flags of 𝒯, 𝒯_K and φ independently and check they fit.

    Checked: 𝒯 injective ⇔ 𝒯_K injective ∧ φ surjective; 𝒯 bijective ⇔
    𝒯_K bijective ∧ φ bijective; φ*_K injective; φ* surjective ⇒ φ*_K
    surjective; ker φ ≤ K ∧ φ*_K surjective ⇒ φ* surjective. Also checks
    that the restriction of φ* is the pullback of φ|_K^{φ(K)} and that
    𝒯_K = φ*_K∘τ_{φ(K)}.

    Raises:
        UnsupportedError: Over infinite groups.
        PreconditionError: If the memory set is not inside φ(K).
        ConsistencyError: If any claim fails.
    """
    budget = budget or Budget()
    if not gca.is_finite:
        raise UnsupportedError("the transfer check enumerates configurations; use finite groups")
    limit = budget.max_configurations
    alphabet = gca.alphabet
    pkg = restrict(gca, subgroup, budget)
    restricted = pkg.restricted
    phi_res = restricted.phi

    star = pullback(gca.phi, alphabet)
    star_res = pullback(phi_res, alphabet)
    if not realizes_same_map(restrict(star, subgroup, budget).restricted, star_res, limit):
        raise ConsistencyError(
            f"restriction of {gca.phi.name}* is not the pullback of {phi_res.name}",
            {"phi": gca.phi.to_dict(), "subgroup": subgroup.to_dict()},
        )
    tau = GCA(Homomorphism.identity(gca.source), gca.rule, name=f"tau({gca.name})")
    tau_res = restrict(tau, pkg.image_subgroup, budget).restricted
    if not realizes_same_map(restricted, compose(tau_res, star_res, budget), limit):
        raise ConsistencyError(
            f"{restricted.name} does not factor through the restriction of tau",
            {"gca": gca.to_dict(), "subgroup": subgroup.to_dict()},
        )

    own = injectivity_surjectivity(gca, limit)
    res = injectivity_surjectivity(restricted, limit)
    star_props = injectivity_surjectivity(star, limit)
    star_res_props = injectivity_surjectivity(star_res, limit)
    kernel = gca.phi.kernel()
    report = TransferReport(
        gca=gca.name,
        subgroup=subgroup.name,
        injective=own.injective,
        bijective=own.bijective,
        surjective=own.surjective,
        restricted_injective=res.injective,
        restricted_bijective=res.bijective,
        restricted_surjective=res.surjective,
        phi_surjective=gca.phi.is_surjective,
        phi_bijective=gca.phi.is_bijective,
        restricted_pullback_injective=star_res_props.injective,
        restricted_pullback_surjective=star_res_props.surjective,
        pullback_surjective=star_props.surjective,
        kernel_in_subgroup=kernel.is_subset_of(subgroup),
    )
    if not report.holds:
        raise ConsistencyError(
            f"transfer claims fail for {gca.name} on {subgroup.name}",
            {"gca": gca.to_dict(), "subgroup": subgroup.to_dict(), "flags": report.to_dict()},
        )
    logger.debug("transfer %s on %s: %s", gca.name, subgroup.name, report.to_dict())
    return report


def restriction_instances(phi: Homomorphism, alphabet: Alphabet, max_memory: int) -> Iterator[tuple[GCA, Subgroup]]:
    """Every (𝒯, K) over φ with K ≤ H, memory ⊆ φ(K) of size ≤ ``max_memory``, any table.

    Tables are enumerated in code order.
    """
    for subgroup in all_subgroups(phi.domain):  # type: ignore[arg-type]
        image = phi.image_of(subgroup)
        for rule in enumerate_rules(phi.codomain, alphabet, max_memory, image.elements):
            yield GCA(phi, rule, name=f"T[{phi.name},{list(rule.memory)},{rule.name}]"), subgroup


def surjectivity_table(
    instances: Iterable[tuple[GCA, Subgroup]], budget: Budget | None = None
) -> pd.DataFrame:
    """Tabulate surjectivity of 𝒯 against surjectivity of 𝒯_K.

    No relation between the two columns is asserted.
    """
    budget = budget or Budget()
    records = []
    for gca, subgroup in instances:
        pkg = restrict(gca, subgroup, budget)
        own = injectivity_surjectivity(gca, budget.max_configurations)
        res = injectivity_surjectivity(pkg.restricted, budget.max_configurations)
        records.append(
            {
                "gca": gca.name,
                "phi": gca.phi.name,
                "subgroup": subgroup.name,
                "memory": len(gca.memory),
                "phi_surjective": gca.phi.is_surjective,
                "injective": own.injective,
                "surjective": own.surjective,
                "restricted_injective": res.injective,
                "restricted_surjective": res.surjective,
            }
        )
    df = pd.DataFrame.from_records(
        records,
        columns=[
            "gca", "phi", "subgroup", "memory", "phi_surjective",
            "injective", "surjective", "restricted_injective", "restricted_surjective",
        ],
    )
    logger.debug("surjectivity table: %d instances", len(df))
    return df


# ─── Fully invariant subgroups ─────────────────────────────────


@dataclass
class SubmonoidReport:
    """Closure of GCA_K(A^G) under composition against full invariance of K."""

    group: str
    subgroup: str
    fully_invariant: bool
    closed: bool
    compositions: int
    materialized: int
    witness: dict | None = None

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "group": self.group,
            "subgroup": self.subgroup,
            "fully_invariant": self.fully_invariant,
            "closed": self.closed,
            "compositions": self.compositions,
            "materialized": self.materialized,
            "witness": self.witness,
        }


def gca_submonoid_check(
    group: FiniteGroup,
    subgroup: Subgroup,
    sample_bound: int | None = None,
    budget: Budget | None = None,
) -> SubmonoidReport:
    """Test whether GCA with memory in K are closed under composition.

    Pairs 𝒮∘𝒯 are taken with 𝒯 over every φ ∈ End(G) and both minimal
    memory sets ranging over the subsets of K of size 1..``sample_bound``.
    The composite memory lies in φ(S)T, so only pairs where that product
    leaves K are materialized; sum-mod-q tables are used, whose minimal
    memory is the whole memory set. The closure answer must agree with
    ``is_fully_invariant(K)``.

    Raises:
        UnsupportedError: For infinite groups.
        BudgetExceededError: Past ``budget.max_compositions`` pairs.
        ConsistencyError: If closure and full invariance disagree.
    """
    budget = budget or Budget()
    if not isinstance(group, FiniteGroup):
        raise UnsupportedError(f"End({group.name}) is infinite")
    if subgroup.parent != group:
        raise SubgroupError(f"{subgroup.name} is not a subgroup of {group.name}")
    bound = budget.max_memory if sample_bound is None else sample_bound
    if bound < 1:
        raise PreconditionError(f"sample bound must be at least 1, got {bound}")
    alphabet = Alphabet(budget.alphabet_size)
    elements = np.asarray(subgroup.elements, dtype=np.int64)
    inside = np.zeros(group.order, dtype=bool)
    inside[elements] = True
    memories = [m for size in range(1, bound + 1) for m in itertools.combinations(subgroup.elements, size)]

    compositions = 0
    materialized = 0
    witness = None
    for phi in enumerate_endomorphisms(group):
        # cells[s, t] = φ(s)·t for s, t ∈ K
        cells = group.table[phi.images[elements][:, None], elements[None, :]]
        compositions += len(memories) ** 2
        if compositions > budget.max_compositions:
            raise BudgetExceededError(f"more than {budget.max_compositions} compositions for {subgroup.name}")
        if inside[cells].all():
            continue
        witness = _escaping_pair(phi, group, alphabet, memories, inside, budget)
        materialized += 1
        if witness is not None:
            break

    closed = witness is None
    fully = is_fully_invariant(subgroup)
    report = SubmonoidReport(group.name, subgroup.name, fully, closed, compositions, materialized, witness)
    if closed != fully:
        raise ConsistencyError(
            f"closure of GCA_{subgroup.name} disagrees with full invariance", report.to_dict()
        )
    logger.debug("submonoid %s ≤ %s: %s", subgroup.name, group.name, report.to_dict())
    return report


def _escaping_pair(
    phi: Homomorphism,
    group: FiniteGroup,
    alphabet: Alphabet,
    memories: list[tuple[int, ...]],
    inside: np.ndarray,
    budget: Budget,
) -> dict | None:
    ident = Homomorphism.identity(group)
    for first_memory, second_memory in itertools.product(memories, repeat=2):
        product = {group.op(phi(s), t) for s in second_memory for t in first_memory}
        if all(inside[g] for g in product):
            continue
        first = GCA(phi, LocalRule.sum_mod_q(group, first_memory, alphabet), name="A")
        second = GCA(ident, LocalRule.sum_mod_q(group, second_memory, alphabet), name="B")
        minimal = compose(first, second, budget).minimal_memory_set()
        escaped = [g for g in minimal if not inside[g]]
        if escaped:
            return {
                "phi": phi.to_dict(),
                "first_memory": list(first_memory),
                "second_memory": list(second_memory),
                "composite_memory": minimal,
                "escaped": escaped,
            }
    return None


# ─── Finite groups are Hopfian and surjunctive ─────────────────


@dataclass
class HopfianReport:
    """Counts behind the Hopfian and surjunctive checks on one finite group."""

    group: str
    endomorphisms: int
    automorphisms: int
    sampled: int
    injective_sampled: int

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "group": self.group,
            "endomorphisms": self.endomorphisms,
            "automorphisms": self.automorphisms,
            "sampled": self.sampled,
            "injective_sampled": self.injective_sampled,
        }


def hopfian_surjunctive_check(
    group: FiniteGroup, alphabet: Alphabet | None = None, budget: Budget | None = None
) -> HopfianReport:
    """Check that surjective endomorphisms and injective GCA on A^G are bijective.

    Every pullback φ*, φ ∈ End(G), is checked exhaustively; then
    ``budget.samples`` random GCA over End(G) with |T| ≤ ``max_memory``.

    Raises:
        ConsistencyError: On a surjective non-injective endomorphism or an
            injective non-surjective GCA.
    """
    budget = budget or Budget()
    alphabet = alphabet or Alphabet(budget.alphabet_size)
    limit = budget.max_configurations
    endos = enumerate_endomorphisms(group)
    automorphisms = 0
    for phi in endos:
        if phi.is_surjective != phi.is_injective:
            raise ConsistencyError(f"{phi.name} on {group.name} is not Hopfian-compatible", {"phi": phi.to_dict()})
        automorphisms += phi.is_bijective
        props = injectivity_surjectivity(pullback(phi, alphabet), limit)
        if props.injective != props.surjective:
            raise ConsistencyError(f"{phi.name}* is injective but not surjective", {"phi": phi.to_dict()})

    rng = np.random.default_rng(budget.seed)
    injective = 0
    for i in range(budget.samples):
        phi = endos[int(rng.integers(0, len(endos)))]
        gca = random_gca(rng, phi, alphabet, budget.max_memory, name=f"S{i}")
        props = injectivity_surjectivity(gca, limit)
        if props.injective and not props.surjective:
            raise ConsistencyError(f"{gca.name} is injective but not surjective", {"gca": gca.to_dict()})
        injective += props.injective
    return HopfianReport(group.name, len(endos), automorphisms, budget.samples, injective)

