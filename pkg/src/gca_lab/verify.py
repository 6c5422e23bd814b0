"""The sweeps behind ``gca-lab verify``.

Every suite walks the small groups allowed by a Budget and records one
check per claim. A claim that fails is reported under the label of the
result it contradicts (e.g. ``le-star(3)`` for "φ injective ⇔ φ*
surjective") with the first counterexample in enumeration order; the
sweep keeps going so that every claim gets a verdict. Each suite draws
from its own generator seeded with ``budget.seed``, so a report depends
on the budget alone.
"""

from __future__ import annotations

import itertools
import logging
import time
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from typing import TypeVar

import numpy as np
import pandas as pd

from gca_lab.automaton import (
    GCA,
    check_equivariance,
    compose,
    factorize,
    identity_gca,
    injectivity_surjectivity,
    input_space,
    pullback,
    random_gca,
    realizes_same_map,
    reference_value,
    shift_batch,
)
from gca_lab.config import Budget
from gca_lab.configurations import (
    Alphabet,
    DenseConfiguration,
    all_configurations,
    characteristic_configurations,
    encode,
    faithfulness_witness,
    fix_subgroup,
    is_characteristic,
    translate_characteristic,
)
from gca_lab.equivariance import (
    characteristic_uhp_certificate,
    constancy_witness,
    decide_equivariance,
    symmetric_counterexample,
    symmetric_equivariance_check,
    uhp_scan,
)
from gca_lab.errors import (
    BudgetExceededError,
    ConsistencyError,
    GcaLabError,
    PreconditionError,
    UnsupportedError,
)
from gca_lab.groups.finite import FiniteGroup, build_cyclic, group_catalog
from gca_lab.groups.free_abelian import build_free_abelian
from gca_lab.groups.homomorphisms import Homomorphism, enumerate_homomorphisms, is_fully_invariant
from gca_lab.groups.subgroups import Subgroup, all_subgroups, normal_subgroups
from gca_lab.report import Report
from gca_lab.rules import LocalRule, enumerate_rules
from gca_lab.structure import (
    gca_submonoid_check,
    hopfian_surjunctive_check,
    induce,
    quotient_functoriality_check,
    quotient_gca,
    restrict,
    restriction_candidates,
    restriction_composition_check,
    restriction_instances,
    transfer_theorem_check,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")

PULLBACK_GROUPS = ("Z2", "Z3", "Z4", "Z2xZ2", "Z6", "S3")
# composition samples draw groups up to this order
SAMPLE_MAX_ORDER = 6
LOCAL_FORMULA_ROWS = 4
LATTICE_FACTORS = range(-2, 3)
LATTICE_MEMORY = ((0,), (1,))
LATTICE_MAX_RULES = 64
UHP_MAX_ORDER = 4
FUNCTOR_SAMPLE = 3
# one restriction chain per this many composition samples
CHAIN_RATIO = 5


# ─── Claim bookkeeping ─────────────────────────────────────────


@dataclass
class Claim:
    """Running verdict of one claim."""

    name: str
    lemma: str
    instances: int = 0
    failures: int = 0
    message: str = ""
    counterexample: dict = field(default_factory=dict)


class Tally:
    """Per-claim counters for one suite, keeping each claim's first counterexample.

    A claim is either a bare name, reported under ``tag(n)`` with n its
    position, or a ``(name, lemma)`` pair carrying its own label.
    """

    def __init__(self, tag: str, claims: Sequence[str | tuple[str, str]]) -> None:
        self.tag = tag
        self.claims: dict[str, Claim] = {}
        for i, claim in enumerate(claims, start=1):
            name, lemma = claim if isinstance(claim, tuple) else (claim, f"{tag}({i})")
            self.claims[name] = Claim(name, lemma)

    def record(self, claim: str, ok: bool, message: str = "", **counterexample) -> bool:
        """Count one instance of ``claim``; returns ``ok``."""
        entry = self.claims[claim]
        entry.instances += 1
        if not ok:
            entry.failures += 1
            if entry.failures == 1:
                entry.message = message or f"{claim} does not hold"
                entry.counterexample = counterexample
                logger.warning("%s violated: %s", entry.lemma, entry.message)
        return bool(ok)

    def attempt(
        self,
        claim: str,
        call: Callable[[], T],
        context: dict | None = None,
        count: bool = True,
    ) -> T | None:
        """Run a self-checking operation, counting an internal failure against ``claim``.

        Instances are built to meet every documented precondition, so a
        PreconditionError is a failure here as much as a ConsistencyError.
        Returns None after a failure.
        """
        try:
            value = call()
        except ConsistencyError as exc:
            self.record(claim, False, str(exc), **{**(context or {}), **exc.counterexample})
            return None
        except PreconditionError as exc:
            self.record(claim, False, str(exc), **(context or {}), witness=exc.witness)
            return None
        if count:
            self.record(claim, True)
        return value

    @property
    def instances(self) -> int:
        return sum(c.instances for c in self.claims.values())

    @property
    def failures(self) -> int:
        return sum(c.failures > 0 for c in self.claims.values())

    def emit(self, report: Report) -> None:
        """Append one check per claim, in declaration order."""
        for c in self.claims.values():
            if c.failures:
                report.failed(
                    c.name, c.lemma, f"{c.failures} of {c.instances} instances fail: {c.message}",
                    **c.counterexample,
                )
            elif c.instances:
                report.passed(c.name, c.lemma, f"{c.instances} instances")
            else:
                report.passed(c.name, c.lemma, "no instances within the budget")


class _Homs:
    """Hom(H, G) enumerations shared within one suite."""

    def __init__(self) -> None:
        self._cache: dict[tuple[int, int], list[Homomorphism]] = {}

    def __call__(self, domain: FiniteGroup, codomain: FiniteGroup) -> list[Homomorphism]:
        key = (id(domain), id(codomain))
        if key not in self._cache:
            self._cache[key] = enumerate_homomorphisms(domain, codomain)
        return self._cache[key]


def _pick(rng: np.random.Generator, items: Sequence[T]) -> T:
    return items[int(rng.integers(0, len(items)))]


def _random_rule(
    rng: np.random.Generator,
    group: FiniteGroup,
    pool: Sequence[int],
    alphabet: Alphabet,
    max_memory: int,
    name: str = "mu",
) -> LocalRule:
    size = int(rng.integers(0, min(max_memory, len(pool)) + 1))
    memory = sorted(int(v) for v in rng.choice(np.asarray(pool), size=size, replace=False))
    table = rng.integers(0, alphabet.size, size=alphabet.size**size)
    return LocalRule(group, memory, table, alphabet, name=name)


def brute_minimal_memory(rule: LocalRule) -> list:
    """Smallest subset of the memory the table depends on, found by trying every subset."""
    q = rule.alphabet.size
    patterns = rule.patterns()
    for size in range(rule.size + 1):
        for subset in itertools.combinations(range(rule.size), size):
            keys = encode(patterns[:, list(subset)], q)
            if all(np.unique(rule.table[keys == k]).size == 1 for k in np.unique(keys)):
                return sorted(rule.memory[j] for j in subset)
    return sorted(rule.memory)


# ─── Suites ────────────────────────────────────────────────────


def _pullback_suite(tally: Tally, budget: Budget) -> dict:
    alphabet = Alphabet(budget.alphabet_size)
    limit = budget.max_configurations
    groups = [g for g in group_catalog(budget.max_order) if g.name in PULLBACK_GROUPS]
    homs = _Homs()
    rows = {id(g): all_configurations(g.order, alphabet.size, limit) for g in groups}
    stars: dict[tuple, GCA] = {}

    for domain, codomain in itertools.product(groups, repeat=2):
        x = rows[id(codomain)]
        codes = []
        for phi in homs(domain, codomain):
            star = stars.setdefault((id(domain), id(codomain), phi.key()), pullback(phi, alphabet))
            out = star.apply_batch(x)
            tally.record("pullback-is-precomposition", np.array_equal(out, x[:, phi.images]), phi=phi.to_dict())
            props = tally.attempt(
                "injective-iff-surjective-pullback",
                lambda: injectivity_surjectivity(star, limit),
                {"phi": phi.to_dict()},
                count=False,
            )
            if props is None:
                continue
            tally.record(
                "surjective-iff-injective-pullback", props.injective == phi.is_surjective,
                phi=phi.to_dict(), pullback=props.to_dict(),
            )
            tally.record(
                "injective-iff-surjective-pullback", props.surjective == phi.is_injective,
                phi=phi.to_dict(), pullback=props.to_dict(),
            )
            codes.append(encode(out, alphabet.size))
        maps = homs(domain, codomain)
        for i, j in itertools.combinations(range(len(codes)), 2):
            same = bool(np.array_equal(codes[i], codes[j]))
            tally.record(
                "equal-pullbacks-iff-equal-maps", same == (maps[i] == maps[j]),
                phi=maps[i].to_dict(), psi=maps[j].to_dict(),
            )

    # (ψ∘φ)* = φ*∘ψ* for φ : H → G, ψ : G → R
    for domain, middle, last in itertools.product(groups, repeat=3):
        x = rows[id(last)]
        for psi in homs(middle, last):
            inner = stars[(id(middle), id(last), psi.key())].apply_batch(x)
            for phi in homs(domain, middle):
                lhs = pullback(psi.after(phi), alphabet).apply_batch(x)
                rhs = stars[(id(domain), id(middle), phi.key())].apply_batch(inner)
                tally.record(
                    "pullback-reverses-composition", np.array_equal(lhs, rhs),
                    phi=phi.to_dict(), psi=psi.to_dict(),
                )
    return {"groups": [g.name for g in groups]}


def _composition_suite(tally: Tally, budget: Budget) -> dict:
    alphabet = Alphabet(budget.alphabet_size)
    limit = budget.max_configurations
    catalog = group_catalog(min(budget.max_order, SAMPLE_MAX_ORDER))
    homs = _Homs()
    rng = np.random.default_rng(budget.seed)

    for i in range(budget.samples):
        g0, g1, g2, g3 = (catalog[int(k)] for k in rng.integers(0, len(catalog), size=4))
        first = random_gca(rng, _pick(rng, homs(g1, g0)), alphabet, budget.max_memory, name=f"T{i}")
        second = random_gca(rng, _pick(rng, homs(g2, g1)), alphabet, budget.max_memory, name=f"S{i}")
        third = random_gca(rng, _pick(rng, homs(g3, g2)), alphabet, budget.max_memory, name=f"U{i}")
        phi = first.phi
        context = {"first": first.to_dict(), "second": second.to_dict()}

        rows = input_space(first, limit)
        out = first.apply_batch(rows)
        picks = rng.choice(rows.shape[0], size=min(LOCAL_FORMULA_ROWS, rows.shape[0]), replace=False)
        for r in sorted(int(v) for v in picks):
            x = DenseConfiguration(g0, alphabet, rows[r])
            ok = all(reference_value(first, x, h) == out[r, h] for h in g1.elements())
            tally.record("local-formula", ok, gca=first.to_dict(), x=rows[r].tolist())

        composite = tally.attempt(
            "composite-matches-sequential", lambda: compose(first, second, budget), context, count=False
        )
        if composite is not None:
            tally.record(
                "composite-matches-sequential",
                np.array_equal(composite.apply_batch(rows), second.apply_batch(out)),
                **context,
            )
            bound = {g0.op(phi(s), t) for s in second.memory for t in first.memory}
            tally.record(
                "composite-memory-bound", set(composite.minimal_memory_set()) <= bound,
                composite=composite.to_dict(), bound=sorted(bound),
            )

        factors = tally.attempt("factorization", lambda: factorize(first, budget), {"gca": first.to_dict()}, count=False)
        if factors is not None:
            tau, psi = factors
            tally.record(
                "factorization",
                psi == phi and np.array_equal(tau.apply_batch(rows)[:, phi.images], out),
                gca=first.to_dict(),
            )

        tally.record(
            "minimal-memory", first.minimal_memory_set() == brute_minimal_memory(first.rule),
            gca=first.to_dict(), brute_force=brute_minimal_memory(first.rule),
        )
        tally.record("equivariance", check_equivariance(first, limit), gca=first.to_dict())

        left = compose(identity_gca(g0, alphabet), first, budget)
        right = compose(first, identity_gca(g1, alphabet), budget)
        tally.record(
            "identity-is-neutral",
            realizes_same_map(left, first, limit) and realizes_same_map(right, first, limit),
            gca=first.to_dict(),
        )
        outer = compose(compose(first, second, budget), third, budget)
        inner = compose(first, compose(second, third, budget), budget)
        tally.record(
            "composition-is-associative", realizes_same_map(outer, inner, limit),
            **context, third=third.to_dict(),
        )
    return {"samples": budget.samples, "groups": [g.name for g in catalog]}


def _lattice_rules(alphabet: Alphabet, rng: np.random.Generator) -> list[LocalRule]:
    line = build_free_abelian(1, name="Z")
    q = alphabet.size
    cells = q ** len(LATTICE_MEMORY)
    total = q**cells
    if total <= LATTICE_MAX_RULES:
        codes = list(range(total))
    else:
        codes = sorted(int(c) for c in rng.choice(total, size=LATTICE_MAX_RULES, replace=False))
    rules = []
    for code in codes:
        table = [(code // q**j) % q for j in range(cells)]
        rule = LocalRule(line, LATTICE_MEMORY, table, alphabet, name=f"r{code}")
        if not rule.is_constant:
            rules.append(rule)
    return rules


def _lattice_suite(tally: Tally, budget: Budget) -> dict:
    alphabet = Alphabet(budget.alphabet_size)
    rng = np.random.default_rng(budget.seed)
    line = build_free_abelian(1, name="Z")
    maps = {a: Homomorphism.from_matrix(line, line, [[a]], name=f"x{a}") for a in LATTICE_FACTORS}
    rules = _lattice_rules(alphabet, rng)

    for rule in rules:
        for a, b in itertools.permutations(LATTICE_FACTORS, 2):
            gca = GCA(maps[a], rule, name=f"{rule.name}[x{a}]")
            context = {"gca": gca.to_dict(), "psi": maps[b].to_dict()}
            verdict = tally.attempt(
                "witness-reverifies", lambda: decide_equivariance(gca, maps[b], budget), context, count=False
            )
            if verdict is None:
                continue
            ok = (
                not verdict.equivariant
                and verdict.verified
                and reference_value(gca, verdict.x, verdict.h)
                != reference_value(gca.with_phi(maps[b]), verdict.x, verdict.h)
            )
            tally.record("witness-reverifies", ok, **context, verdict=verdict.to_dict())
            left = {tuple(v) for v in verdict.detail.get("phi_window", [])}
            right = {tuple(v) for v in verdict.detail.get("psi_window", [])}
            tally.record("translate-is-disjoint", bool(left) and not left & right, **context)

        for a in LATTICE_FACTORS:
            if a == 0:
                continue
            gca = GCA(maps[a], rule, name=f"{rule.name}[x{a}]")
            verdict = tally.attempt(
                "constant-characterization", lambda: constancy_witness(gca), {"gca": gca.to_dict()}, count=False
            )
            if verdict is None:
                continue
            trivial = gca.with_phi(Homomorphism.trivial(line, line))
            tally.record(
                "constant-characterization",
                reference_value(gca, verdict.x, verdict.h) != reference_value(trivial, verdict.x, verdict.h),
                gca=gca.to_dict(), verdict=verdict.to_dict(),
            )
    return {"rules": len(rules), "factors": list(LATTICE_FACTORS)}


def _symmetric_suite(tally: Tally, budget: Budget) -> dict:
    alphabet = Alphabet(budget.alphabet_size)
    for n in range(1, budget.max_order + 1):
        group = build_cyclic(n)
        endos = enumerate_homomorphisms(group, group)
        for phi, psi in itertools.permutations(endos, 2):
            context = {"phi": phi.to_dict(), "psi": psi.to_dict()}
            tau = tally.attempt(
                "pullbacks-agree", lambda: symmetric_counterexample(phi, psi, alphabet, budget), context
            )
            if tau is None:
                continue
            gca = tau.with_phi(phi)
            tally.record("counterexample-is-nonconstant", not tau.is_constant, **context)
            tally.record("symmetric-criterion-holds", symmetric_equivariance_check(gca, psi), **context)
            verdict = decide_equivariance(gca, psi, budget)
            tally.record("exhaustive-agrees", verdict.equivariant, **context, verdict=verdict.to_dict())
    return {"cyclic_orders": list(range(1, budget.max_order + 1))}


def _uhp_suite(tally: Tally, budget: Budget) -> dict:
    alphabet = Alphabet(budget.alphabet_size)
    limit = budget.max_configurations
    catalog = group_catalog(min(budget.max_order, UHP_MAX_ORDER))
    injective = certificates = 0
    for group in catalog:
        endos = enumerate_homomorphisms(group, group)
        ident = Homomorphism.identity(group)
        for rule in enumerate_rules(group, alphabet, budget.max_memory):
            tau = GCA(ident, rule, name=f"tau{list(rule.memory)}.{rule.name}")
            for phi in endos:
                gca = tau.with_phi(phi)
                if injectivity_surjectivity(gca, limit).injective:
                    injective += 1
                    scan = uhp_scan(gca, budget)
                    tally.record("injective-has-uhp", scan.has_uhp, gca=gca.to_dict(), scan=scan.to_dict())
                if symmetric_equivariance_check(tau, phi):
                    verdict = decide_equivariance(tau, phi, budget)
                    tally.record(
                        "symmetric-criterion-agrees", verdict.equivariant,
                        gca=tau.to_dict(), psi=phi.to_dict(), verdict=verdict.to_dict(),
                    )
            certificate = characteristic_uhp_certificate(tau, budget)
            if certificate is None:
                continue
            certificates += 1
            for phi in endos:
                scan = uhp_scan(tau.with_phi(phi), budget)
                tally.record(
                    "certificate-implies-uhp", scan.has_uhp,
                    gca=tau.with_phi(phi).to_dict(), certificate=certificate.to_dict(), scan=scan.to_dict(),
                )
    return {"groups": [g.name for g in catalog], "injective": injective, "certified_rules": certificates}


def _configuration_suite(tally: Tally, budget: Budget) -> dict:
    alphabet = Alphabet(budget.alphabet_size)
    q = alphabet.size
    limit = budget.max_configurations
    catalog = group_catalog(budget.max_order)
    for group in catalog:
        rows = all_configurations(group.order, q, limit)
        elements = group.elements()
        tally.record(
            "identity-acts-trivially",
            np.array_equal(shift_batch(group, group.identity, rows), rows), group=group.name,
        )
        for g, h in itertools.product(elements, repeat=2):
            lhs = shift_batch(group, g, shift_batch(group, h, rows))
            rhs = shift_batch(group, group.op(g, h), rows)
            tally.record("action-law", np.array_equal(lhs, rhs), group=group.name, g=g, h=h)
        for g in elements:
            if g != group.identity:
                x = faithfulness_witness(group, g, alphabet)
                tally.record("action-is-faithful", x.shift(g) != x, group=group.name, g=g)
            chi = DenseConfiguration(group, alphabet, characteristic_configurations(group, alphabet, g, 1).patterns[0])
            for k in elements:
                try:
                    moved = translate_characteristic(chi, g, k)
                except PreconditionError as exc:
                    tally.record("characteristic-translates", False, str(exc), group=group.name, g=g, k=k)
                    continue
                tally.record("characteristic-translates", is_characteristic(moved, k, 1), group=group.name, g=g, k=k)
        for subgroup in all_subgroups(group):
            fixed = fix_subgroup(subgroup, alphabet, limit)
            mask = np.ones(rows.shape[0], dtype=bool)
            for k in subgroup.elements:
                mask &= np.all(shift_batch(group, k, rows) == rows, axis=1)
            tally.record(
                "fix-size",
                len(fixed) == q**subgroup.index and int(mask.sum()) == len(fixed),
                group=group.name, subgroup=subgroup.to_dict(), size=len(fixed), brute_force=int(mask.sum()),
            )
    return {"groups": [g.name for g in catalog]}


def _unique_quotient(pkg, limit: int) -> bool:
    """Exactly one rule over subsets of the hat's memory makes the square commute."""
    hat = pkg.quotient_gca
    rho = pkg.projection
    rows = input_space(hat, limit)
    target = pkg.original.apply_batch(rows[:, rho.images])
    matches = 0
    for rule in enumerate_rules(hat.source, hat.alphabet, len(hat.memory), memories=hat.memory):
        candidate = GCA(hat.phi, rule)
        matches += bool(np.array_equal(candidate.apply_batch(rows)[:, rho.images], target))
    return matches == 1


def _quotient_suite(tally: Tally, budget: Budget) -> dict:
    alphabet = Alphabet(budget.alphabet_size)
    limit = budget.max_configurations
    catalog = group_catalog(budget.max_order)
    rng = np.random.default_rng(budget.seed)
    pairs = packages = 0
    for group in catalog:
        endos = enumerate_homomorphisms(group, group)
        rules = list(enumerate_rules(group, alphabet, budget.max_memory))
        for normal in normal_subgroups(group):
            pairs += 1
            for phi in (p for p in endos if p.maps_into(normal)):
                for rule in rules:
                    gca = GCA(phi, rule, name=f"T[{phi.name},{list(rule.memory)},{rule.name}]")
                    context = {"gca": gca.to_dict(), "normal": normal.to_dict()}
                    pkg = tally.attempt("quotient-square", lambda: quotient_gca(gca, normal, budget), context)
                    if pkg is None:
                        continue
                    packages += 1
                    hat_rows = input_space(pkg.quotient_gca, limit)
                    lifted = pkg.lift(hat_rows)
                    tally.record(
                        "lift-descend-roundtrip",
                        bool(pkg.fix_set.contains_rows(lifted).all()) and np.array_equal(pkg.descend(lifted), hat_rows),
                        **context,
                    )
                    tally.record("quotient-is-unique", _unique_quotient(pkg, limit), **context, package=pkg.to_dict())
            if is_fully_invariant(normal):
                sample = [
                    random_gca(rng, _pick(rng, endos), alphabet, budget.max_memory, name=f"F{j}")
                    for j in range(FUNCTOR_SAMPLE)
                ]
                tally.attempt(
                    "quotient-respects-composition",
                    lambda: quotient_functoriality_check(group, normal, sample, budget),
                    {"group": group.name, "normal": normal.to_dict(), "sample": [g.to_dict() for g in sample]},
                )
    return {"groups": [g.name for g in catalog], "normal_pairs": pairs, "packages": packages}


# claim name -> TransferReport flag
TRANSFER_FLAGS = {
    "injectivity-transfer": "injectivity_transfer",
    "bijectivity-transfer": "bijectivity_transfer",
    "restricted-pullback-injective": "restricted_pullback_injective",
    "surjectivity-restricts": "surjectivity_restricts",
    "surjectivity-extends": "surjectivity_extends",
}


def _record_transfer(tally: Tally, gca: GCA, subgroup: Subgroup, budget: Budget, context: dict) -> dict | None:
    """Record each transfer claim separately; returns the flags, or None if none were computed."""
    try:
        flags = transfer_theorem_check(gca, subgroup, budget).to_dict()
    except ConsistencyError as exc:
        flags = exc.counterexample.get("flags")
        if flags is None:
            tally.record("restricted-pullback-injective", False, str(exc), **{**context, **exc.counterexample})
            return None
    except PreconditionError as exc:
        tally.record("injectivity-transfer", False, str(exc), **context, witness=exc.witness)
        return None
    for claim, flag in TRANSFER_FLAGS.items():
        tally.record(claim, bool(flags[flag]), f"{flag} fails for {gca.name}", **context, flags=flags)
    return flags


def restriction_instance_count(budget: Budget) -> int:
    """Number of (φ, 𝒯, K) instances the restriction suite visits."""
    alphabet = Alphabet(budget.alphabet_size)
    catalog = group_catalog(budget.max_order)
    homs = _Homs()
    return sum(
        1
        for domain, codomain in itertools.product(catalog, repeat=2)
        for phi in homs(domain, codomain)
        for _ in restriction_instances(phi, alphabet, budget.max_memory)
    )


def _restriction_suite(tally: Tally, budget: Budget) -> dict:
    alphabet = Alphabet(budget.alphabet_size)
    limit = budget.max_configurations
    catalog = group_catalog(budget.max_order)
    homs = _Homs()
    rng = np.random.default_rng(budget.seed)
    records = []
    instances = 0

    for domain, codomain in itertools.product(catalog, repeat=2):
        for phi in homs(domain, codomain):
            for gca, subgroup in restriction_instances(phi, alphabet, budget.max_memory):
                instances += 1
                context = {"gca": gca.to_dict(), "subgroup": subgroup.to_dict()}
                flags = _record_transfer(tally, gca, subgroup, budget, context)
                if flags is not None:
                    records.append(flags)
                pkg = tally.attempt(
                    "restriction-is-unique", lambda: restrict(gca, subgroup, budget), context, count=False
                )
                if pkg is None:
                    continue
                matches = restriction_candidates(pkg, budget)
                tally.record(
                    "restriction-is-unique", matches == 1,
                    f"{matches} rules close the restriction square", **context,
                )
                back = induce(pkg.restricted, phi, subgroup)
                tally.record("restrict-then-induce", realizes_same_map(back, gca, limit), **context)
                again = restrict(back, subgroup, budget).restricted
                tally.record(
                    "induce-then-restrict", realizes_same_map(again, pkg.restricted, limit),
                    restricted=pkg.restricted.to_dict(), **context,
                )

    for i in range(budget.samples // CHAIN_RATIO):
        first, middle, last = (catalog[int(k)] for k in rng.integers(0, len(catalog), size=3))
        phi = _pick(rng, homs(first, middle))
        psi = _pick(rng, homs(middle, last))
        subgroup = _pick(rng, all_subgroups(first))
        image = phi.image_of(subgroup)
        outer = GCA(phi, _random_rule(rng, middle, image.elements, alphabet, budget.max_memory), name=f"T{i}")
        inner_pool = psi.image_of(image).elements
        inner = GCA(psi, _random_rule(rng, last, inner_pool, alphabet, budget.max_memory), name=f"S{i}")
        tally.attempt(
            "restriction-of-composite",
            lambda: restriction_composition_check(outer, inner, subgroup, budget),
            {"outer": outer.to_dict(), "inner": inner.to_dict(), "subgroup": subgroup.to_dict()},
        )

    df = pd.DataFrame.from_records(records, columns=["surjective", "restricted_surjective"])
    counts = df.groupby(["surjective", "restricted_surjective"]).size()
    surjectivity = {
        f"surjective={bool(s)},restricted_surjective={bool(r)}": int(n) for (s, r), n in counts.items()
    }
    return {"instances": instances, "checked": len(records), "surjectivity": surjectivity}


def _submonoid_suite(tally: Tally, budget: Budget) -> dict:
    catalog = group_catalog(budget.max_order)
    fully = {}
    for group in catalog:
        found = 0
        for subgroup in all_subgroups(group):
            report = tally.attempt(
                "closure-iff-fully-invariant",
                lambda: gca_submonoid_check(group, subgroup, budget.max_memory, budget),
                {"group": group.name, "subgroup": subgroup.to_dict()},
            )
            found += bool(report and report.fully_invariant)
        fully[group.name] = found
    return {"fully_invariant_subgroups": fully}


def _hopfian_suite(tally: Tally, budget: Budget) -> dict:
    alphabet = Alphabet(budget.alphabet_size)
    catalog = group_catalog(budget.max_order)
    reports = {}
    for group in catalog:
        report = tally.attempt(
            "injective-implies-surjective",
            lambda: hopfian_surjunctive_check(group, alphabet, budget),
            {"group": group.name},
        )
        if report is not None:
            reports[group.name] = report.to_dict()
    return {"groups": reports}


# ─── Registry and driver ───────────────────────────────────────


@dataclass(frozen=True)
class SuiteDefinition:
    """A named sweep: its tag, its ``(claim, lemma)`` pairs in order, and the function that runs it."""

    name: str
    tag: str
    claims: tuple[tuple[str, str], ...]
    run: Callable[[Tally, Budget], dict]


SUITES: dict[str, SuiteDefinition] = {
    s.name: s
    for s in (
        SuiteDefinition(
            "pullbacks", "pullback-duality",
            (
                ("equal-pullbacks-iff-equal-maps", "le-star(1)"),
                ("surjective-iff-injective-pullback", "le-star(2)"),
                ("injective-iff-surjective-pullback", "le-star(3)"),
                ("pullback-reverses-composition", "le-star(4)"),
                ("pullback-is-precomposition", "def-pullback"),
            ),
            _pullback_suite,
        ),
        SuiteDefinition(
            "composition", "composition",
            (
                ("local-formula", "def-gca"),
                ("composite-matches-sequential", "th-old(2)"),
                ("composite-memory-bound", "th-old(2)"),
                ("factorization", "lemma:GCA-tau_phi"),
                ("minimal-memory", "le-minimal-memory"),
                ("equivariance", "def-gca"),
                ("identity-is-neutral", "gca-monoid"),
                ("composition-is-associative", "gca-monoid"),
            ),
            _composition_suite,
        ),
        SuiteDefinition(
            "lattice", "disjoint-translate",
            (
                ("witness-reverifies", "th-main"),
                ("translate-is-disjoint", "le-power"),
                ("constant-characterization", "le-constant"),
            ),
            _lattice_suite,
        ),
        SuiteDefinition(
            "symmetric", "symmetric-rule",
            (
                ("pullbacks-agree", "prop-last"),
                ("counterexample-is-nonconstant", "prop-last"),
                ("symmetric-criterion-holds", "prop"),
                ("exhaustive-agrees", "prop-last"),
            ),
            _symmetric_suite,
        ),
        SuiteDefinition(
            "uhp", "unique-homomorphism",
            (
                ("injective-has-uhp", "le-q2-1"),
                ("certificate-implies-uhp", "cor-UHP"),
                ("symmetric-criterion-agrees", "prop"),
            ),
            _uhp_suite,
        ),
        SuiteDefinition(
            "configurations", "shift-action",
            (
                ("action-law", "def-shift"),
                ("identity-acts-trivially", "def-shift"),
                ("action-is-faithful", "le-q2-1"),
                ("characteristic-translates", "le-specialconfig"),
                ("fix-size", "le-fix"),
            ),
            _configuration_suite,
        ),
        SuiteDefinition(
            "quotient", "quotient",
            (
                ("quotient-square", "quotient"),
                ("lift-descend-roundtrip", "le-fix"),
                ("quotient-is-unique", "quotient"),
                ("quotient-respects-composition", "le-endGN"),
            ),
            _quotient_suite,
        ),
        SuiteDefinition(
            "restriction", "restriction-transfer",
            (
                ("injectivity-transfer", "th-transfer(1)"),
                ("bijectivity-transfer", "th-transfer(2)"),
                ("restricted-pullback-injective", "cor-phi-res(1)"),
                ("surjectivity-restricts", "cor-phi-res(2)"),
                ("surjectivity-extends", "cor-phi-res(3)"),
                ("restriction-is-unique", "le-restriction"),
                ("restrict-then-induce", "lemma:(tau|_K)^(G,H)=tau"),
                ("induce-then-restrict", "lemma:(tau|_K)^(G,H)=tau"),
                ("restriction-of-composite", "indres-comp"),
            ),
            _restriction_suite,
        ),
        SuiteDefinition(
            "submonoid", "fully-invariant-submonoid",
            (("closure-iff-fully-invariant", "prop-GCA_K"),),
            _submonoid_suite,
        ),
        SuiteDefinition(
            "hopfian", "hopfian-surjunctive",
            (("injective-implies-surjective", "gca-surjunctive"),),
            _hopfian_suite,
        ),
    )
}


def run_verify(
    budget: Budget | None = None,
    suites: Iterable[str] | None = None,
    command: list[str] | None = None,
) -> Report:
    """Run the named suites (default: all) and collect their checks.

    A suite stopped by an UnsupportedError or BudgetExceededError adds an
    ``unsupported`` check; any other library error inside a suite adds a
    failed check carrying the suite tag.

    Raises:
        ValueError: On an unknown suite name.
    """
    budget = budget or Budget()
    names = list(suites) if suites else list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suites: {', '.join(unknown)}; expected {', '.join(SUITES)}")

    report = Report(command=command or ["verify"])
    rows = []
    experiments = {}
    for name in names:
        definition = SUITES[name]
        tally = Tally(definition.tag, definition.claims)
        started = time.perf_counter()
        status = "ran"
        try:
            experiments[name] = definition.run(tally, budget)
        except (UnsupportedError, BudgetExceededError) as exc:
            status = "unsupported"
            tally.emit(report)
            report.unsupported(name, str(exc))
        except GcaLabError as exc:
            status = "error"
            tally.emit(report)
            report.failed(name, definition.tag, f"{type(exc).__name__}: {exc}")
        else:
            tally.emit(report)
        seconds = time.perf_counter() - started
        report.timing[f"{name}_seconds"] = round(seconds, 6)
        logger.info("suite %s: %d instances in %.2fs", name, tally.instances, seconds)
        rows.append(
            {
                "suite": name,
                "tag": definition.tag,
                "status": status,
                "claims": len(definition.claims),
                "instances": tally.instances,
                "failed_claims": tally.failures,
            }
        )

    summary = pd.DataFrame.from_records(
        rows, columns=["suite", "tag", "status", "claims", "instances", "failed_claims"]
    )
    report.result = {
        "budget": budget.to_dict(),
        "suites": summary.to_dict(orient="records"),
        "experiments": experiments,
    }
    return report.finish()
