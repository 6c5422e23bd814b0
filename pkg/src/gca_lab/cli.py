"""CLI interface for gca-lab.

Every command reads named entities from one definition document and
prints a report: human-readable text by default, JSON with
``--format json``. ``--report PATH`` also writes the JSON to a file.

Usage:
    gca-lab apply -w defs.json --gca xor4 --config x
    gca-lab compose -w defs.json --first xor4 --second shift4
    gca-lab factorize -w defs.json --gca xor4
    gca-lab minimize -w defs.json --gca xor4
    gca-lab delta -w defs.json --phi mul2 --psi mul3
    gca-lab equivariance -w defs.json --gca t2 --psi mul3
    gca-lab uhp-scan -w defs.json --gca xor2
    gca-lab counterexample -w defs.json --phi id4 --psi neg4
    gca-lab quotient -w defs.json --gca xor4 --normal N2
    gca-lab restrict -w defs.json --gca xor4 --subgroup N2
    gca-lab induce -w defs.json --gca xor4 --subgroup N2
    gca-lab transfer -w defs.json --gca xor4 --subgroup N2
    gca-lab submonoid -w defs.json --group Z4 --subgroup N2
    gca-lab surjectivity -w defs.json --phi id4
    gca-lab verify --max-order 6 --q 2 --max-memory 2 --report verify.json

Exit status: 0 when every check passes, 1 on a failed check, 2 on a
usage or definition error, 3 when a check is unsupported.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from gca_lab import __version__
from gca_lab.automaton import (
    compose,
    factorize,
    injectivity_surjectivity,
    input_space,
    realizes_same_map,
    reference_value,
)
from gca_lab.config import Budget
from gca_lab.equivariance import (
    characteristic_uhp_certificate,
    decide_equivariance,
    difference_set,
    symmetric_counterexample,
    symmetric_equivariance_check,
    uhp_scan,
)
from gca_lab.errors import (
    BudgetExceededError,
    ConsistencyError,
    DefinitionError,
    GcaLabError,
    NoCounterexampleError,
    NotFoundError,
    UnsupportedError,
)
from gca_lab.groups.finite import FiniteGroup
from gca_lab.report import Report
from gca_lab.structure import (
    gca_submonoid_check,
    induce,
    quotient_gca,
    restrict,
    restriction_candidates,
    restriction_instances,
    surjectivity_table,
    transfer_theorem_check,
)
from gca_lab.verify import SUITES, run_verify
from gca_lab.workspace import Workspace, load_workspace

logger = logging.getLogger("gca_lab")

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3


def _workspace(args: argparse.Namespace) -> Workspace:
    """Load the definition document named by --workspace or GCA_LAB_WORKSPACE."""
    path = args.workspace or os.environ.get("GCA_LAB_WORKSPACE")
    if not path:
        raise DefinitionError("no definition document: pass --workspace PATH or set GCA_LAB_WORKSPACE")
    return load_workspace(path)


def _configure_logging(verbose: bool) -> None:
    """Send log records to stderr so stdout carries only the report."""
    level = "DEBUG" if verbose else os.environ.get("GCA_LAB_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _output(report: Report, args: argparse.Namespace) -> None:
    """Print the report and write the JSON copy if asked."""
    if args.format == "json":
        print(report.to_json())
    else:
        print(report.to_text())
    if args.report:
        report.write(args.report)


def _window(raw: str | None, group) -> list | None:
    if raw is None:
        return None
    try:
        values = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DefinitionError(f"--window must be a JSON list: {exc.msg}") from None
    return [group.element_from_json(v) for v in values]


# ─── Automata ──────────────────────────────────────────────────

def cmd_apply(args: argparse.Namespace, report: Report) -> None:
    """Apply a GCA to a named configuration."""
    ws = _workspace(args)
    gca = ws.gca(args.gca)
    x = ws.configuration(args.config)
    window = _window(args.window, gca.target)
    out = gca.apply(x, window)
    if window is None:
        cells = list(gca.target.elements())
        values = list(out.values)
        rendered: object = out.to_text()
    else:
        cells = list(out)
        values = [out[h] for h in cells]
        rendered = [{"h": gca.target.element_to_json(h), "value": v} for h, v in out.items()]
    mismatched = [h for h, v in zip(cells, values) if reference_value(gca, x, h) != v]
    report.result = {"gca": gca.name, "input": x.to_text(), "output": rendered}
    if mismatched:
        report.failed(
            "reference-evaluator", "def-gca", "batch and pointwise evaluation disagree",
            cells=[gca.target.element_to_json(h) for h in mismatched],
        )
    else:
        report.passed("reference-evaluator", "def-gca", f"{len(cells)} cells agree with the pointwise evaluator")


def cmd_compose(args: argparse.Namespace, report: Report) -> None:
    """Compose two GCA (second after first)."""
    ws = _workspace(args)
    first, second = ws.gca(args.first), ws.gca(args.second)
    composite = compose(first, second, args.budget, name=args.name)
    report.result = {"composite": composite.to_dict(), "memory": list(composite.memory)}
    if not composite.is_finite or not first.is_finite:
        report.passed("compose", "th-old(2)", "composite built; groups are infinite, no exhaustive check")
        return
    rows = input_space(first, args.budget.max_configurations)
    sequential = second.apply_batch(first.apply_batch(rows))
    if np.array_equal(composite.apply_batch(rows), sequential):
        report.passed("composite-matches-sequential", "th-old(2)", f"{rows.shape[0]} inputs agree")
    else:
        bad = int(np.flatnonzero(np.any(composite.apply_batch(rows) != sequential, axis=1))[0])
        report.failed("composite-matches-sequential", "th-old(2)", "composite differs", input=rows[bad].tolist())


def cmd_factorize(args: argparse.Namespace, report: Report) -> None:
    """Split a GCA into φ*∘τ."""
    ws = _workspace(args)
    gca = ws.gca(args.gca)
    tau, phi = factorize(gca, args.budget)
    report.result = {"tau": tau.to_dict(), "phi": phi.to_dict()}
    how = "checked on every configuration" if gca.is_finite else "by construction"
    report.passed("factorization", "lemma:GCA-tau_phi", f"{gca.name} = {phi.name}*∘tau, {how}")


def cmd_minimize(args: argparse.Namespace, report: Report) -> None:
    """Minimal memory set and the rule restricted to it."""
    ws = _workspace(args)
    gca = ws.gca(args.gca)
    minimal = gca.minimize()
    report.result = {
        "gca": gca.name,
        "memory": [gca.source.element_to_json(t) for t in gca.memory],
        "minimal_memory": [gca.source.element_to_json(t) for t in minimal.memory],
        "rule": minimal.rule.to_dict(),
        "constant": gca.is_constant,
    }
    report.passed("minimize", "le-minimal-memory", f"|T| {len(gca.memory)} -> {len(minimal.memory)}")


# ─── Equivariance ──────────────────────────────────────────────

def cmd_delta(args: argparse.Namespace, report: Report) -> None:
    """Difference set Δ(φ, ψ)."""
    ws = _workspace(args)
    delta = difference_set(ws.homomorphism(args.phi), ws.homomorphism(args.psi))
    report.result = delta.to_dict()
    if delta.finite:
        message = f"finite; {len(delta.elements or [])} elements"
    else:
        cert = list(delta.certificate or ())
        message = f"infinite; certificate direction {cert[0] if len(cert) == 1 else cert}"
    report.passed("difference-set", "difference-set", message)


def cmd_equivariance(args: argparse.Namespace, report: Report) -> None:
    """Decide ψ-equivariance of a GCA."""
    ws = _workspace(args)
    gca = ws.gca(args.gca)
    psi = ws.homomorphism(args.psi)
    verdict = decide_equivariance(gca, psi, args.budget)
    report.result = verdict.to_dict()
    report.result["symmetric_criterion"] = symmetric_equivariance_check(gca, psi)
    word = "equivariant" if verdict.equivariant else "not equivariant"
    if verdict.equivariant or verdict.verified:
        report.passed("equivariance", verdict.method, f"{gca.name} is {word} for {psi.name}")
    else:
        report.failed("equivariance", verdict.method, "witness did not re-verify", **verdict.to_dict())


def cmd_uhp_scan(args: argparse.Namespace, report: Report) -> None:
    """List every ψ a GCA is equivariant with."""
    ws = _workspace(args)
    gca = ws.gca(args.gca)
    scan = uhp_scan(gca, args.budget)
    report.result = scan.to_dict()
    certificate = characteristic_uhp_certificate(gca, args.budget) if isinstance(gca.source, FiniteGroup) else None
    report.result["certificate"] = certificate.to_dict() if certificate else None
    verdict = "UHP holds" if scan.has_uhp else "UHP fails"
    names = ", ".join(h.name for h in scan.equivariant)
    report.passed("uhp-scan", "cor-UHP", f"{verdict}: equivariant with {{{names}}}")
    if certificate is not None and not scan.has_uhp:
        report.failed("certificate-implies-uhp", "cor-UHP", "certificate found but UHP fails",
                      certificate=certificate.to_dict())


def cmd_counterexample(args: argparse.Namespace, report: Report) -> None:
    """Non-constant τ with φ*∘τ = ψ*∘τ."""
    ws = _workspace(args)
    phi, psi = ws.homomorphism(args.phi), ws.homomorphism(args.psi)
    try:
        tau = symmetric_counterexample(phi, psi, ws.alphabet, args.budget)
    except NoCounterexampleError as exc:
        report.result = {"delta": difference_set(phi, psi).to_dict()}
        report.failed("symmetric-counterexample", "prop-last", str(exc))
        return
    report.result = {"tau": tau.to_dict(), "delta": difference_set(phi, psi).to_dict()}
    how = "on every configuration" if phi.domain.is_finite and phi.codomain.is_finite else "by the symmetric criterion"
    report.passed("symmetric-counterexample", "prop-last", f"{phi.name}*∘tau = {psi.name}*∘tau {how}")


# ─── Structure ─────────────────────────────────────────────────

def cmd_quotient(args: argparse.Namespace, report: Report) -> None:
    """Quotient GCA on A^{G/N}."""
    ws = _workspace(args)
    pkg = quotient_gca(ws.gca(args.gca), ws.subgroup(args.normal), args.budget)
    report.result = pkg.to_dict()
    report.passed("quotient-square", "quotient", f"square commutes on all of A^{pkg.quotient_gca.source.name}")


def cmd_restrict(args: argparse.Namespace, report: Report) -> None:
    """Restriction 𝒯_K."""
    ws = _workspace(args)
    pkg = restrict(ws.gca(args.gca), ws.subgroup(args.subgroup), args.budget)
    report.result = pkg.to_dict()
    report.passed("restriction-square", "le-restriction", f"square checked ({pkg.check})")
    if pkg.check == "exhaustive":
        matches = restriction_candidates(pkg, args.budget)
        if matches == 1:
            report.passed("restriction-is-unique", "le-restriction", "one rule over the minimal memory closes the square")
        else:
            report.failed("restriction-is-unique", "le-restriction", f"{matches} rules close the square")


def cmd_induce(args: argparse.Namespace, report: Report) -> None:
    """Restrict to K, induce back, and compare with the original."""
    ws = _workspace(args)
    gca = ws.gca(args.gca)
    subgroup = ws.subgroup(args.subgroup)
    pkg = restrict(gca, subgroup, args.budget)
    back = induce(pkg.restricted, gca.phi, subgroup)
    report.result = {"restricted": pkg.restricted.to_dict(), "induced": back.to_dict()}
    if realizes_same_map(back, gca, args.budget.max_configurations):
        report.passed("restrict-then-induce", "lemma:(tau|_K)^(G,H)=tau", f"induction recovers {gca.name}")
    else:
        report.failed("restrict-then-induce", "lemma:(tau|_K)^(G,H)=tau", f"induction does not recover {gca.name}")


def cmd_transfer(args: argparse.Namespace, report: Report) -> None:
    """Injectivity and bijectivity transfer between 𝒯 and 𝒯_K."""
    ws = _workspace(args)
    flags = transfer_theorem_check(ws.gca(args.gca), ws.subgroup(args.subgroup), args.budget)
    report.result = flags.to_dict()
    report.passed("transfer-flags", "th-transfer", "every transfer claim holds")


def cmd_submonoid(args: argparse.Namespace, report: Report) -> None:
    """Closure of GCA_K under composition against full invariance."""
    ws = _workspace(args)
    group = ws.group(args.group)
    summary = gca_submonoid_check(group, ws.subgroup(args.subgroup), args.bound, args.budget)  # type: ignore[arg-type]
    report.result = summary.to_dict()
    word = "a submonoid" if summary.closed else "not closed"
    report.passed("closure-iff-fully-invariant", "prop-GCA_K",
                  f"GCA_{summary.subgroup} is {word}; fully invariant: {summary.fully_invariant}")


def cmd_surjectivity(args: argparse.Namespace, report: Report) -> None:
    """Tabulate surjectivity of 𝒯 against 𝒯_K over every small instance."""
    ws = _workspace(args)
    phi = ws.homomorphism(args.phi)
    instances = restriction_instances(phi, ws.alphabet, args.budget.max_memory)
    df = surjectivity_table(instances, args.budget)
    counts = df.groupby(["surjective", "restricted_surjective"]).size()
    report.result = {
        "instances": len(df),
        "counts": {f"surjective={bool(s)},restricted_surjective={bool(r)}": int(n) for (s, r), n in counts.items()},
        "rows": df.to_dict(orient="records") if args.rows else [],
    }
    report.passed("surjectivity-table", None, f"{len(df)} instances tabulated")


def cmd_properties(args: argparse.Namespace, report: Report) -> None:
    """Injectivity and surjectivity of a GCA over finite groups."""
    ws = _workspace(args)
    gca = ws.gca(args.gca)
    props = injectivity_surjectivity(gca, args.budget.max_configurations)
    report.result = {"gca": gca.name, **props.to_dict()}
    report.passed("properties", None, f"injective={props.injective}, surjective={props.surjective}")


def cmd_verify(args: argparse.Namespace, report: Report) -> None:
    """Run the verification suites."""
    result = run_verify(args.budget, args.suite, command=report.command)
    report.checks.extend(result.checks)
    report.result = result.result
    report.timing.update(result.timing)


# ─── Parser ────────────────────────────────────────────────────

def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workspace", "-w", help="Definition document (default: $GCA_LAB_WORKSPACE)")
    common.add_argument("--report", help="Also write the JSON report to this path")
    common.add_argument("--format", choices=["text", "json"], default="text", help="Output format (default: text)")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging on stderr")
    budget = common.add_argument_group("budget")
    budget.add_argument("--max-order", type=int, help="Largest group order in sweeps (default: 6)")
    budget.add_argument("--q", type=int, dest="alphabet_size", help="Alphabet size (default: 2)")
    budget.add_argument("--max-memory", type=int, help="Largest memory set in sweeps (default: 2)")
    budget.add_argument("--max-configurations", type=int, help="Largest enumerated space (default: 2^20)")
    budget.add_argument("--samples", type=int, help="Random instances per sampled suite (default: 500)")
    budget.add_argument("--seed", type=int, help="Random seed (default: 0)")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Build the CLI argument parser."""
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="gca-lab",
        description="φ-cellular automata over finite and free abelian groups",
    )
    parser.add_argument("--version", action="version", version=f"gca-lab {__version__}")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    def add(name: str, func, text: str) -> argparse.ArgumentParser:
        p = subparsers.add_parser(name, parents=[common], help=text)
        p.set_defaults(func=func)
        return p

    p = add("apply", cmd_apply, "Apply a GCA to a configuration")
    p.add_argument("--gca", required=True)
    p.add_argument("--config", required=True, help="Configuration name")
    p.add_argument("--window", help="JSON list of output cells (required for infinite H)")

    p = add("compose", cmd_compose, "Compose two GCA (second after first)")
    p.add_argument("--first", required=True)
    p.add_argument("--second", required=True)
    p.add_argument("--name", help="Name of the composite")

    p = add("factorize", cmd_factorize, "Factor a GCA as φ*∘τ")
    p.add_argument("--gca", required=True)

    p = add("minimize", cmd_minimize, "Minimal memory set")
    p.add_argument("--gca", required=True)

    p = add("properties", cmd_properties, "Injectivity and surjectivity (finite groups)")
    p.add_argument("--gca", required=True)

    p = add("delta", cmd_delta, "Difference set of two homomorphisms")
    p.add_argument("--phi", required=True)
    p.add_argument("--psi", required=True)

    p = add("equivariance", cmd_equivariance, "Decide ψ-equivariance")
    p.add_argument("--gca", required=True)
    p.add_argument("--psi", required=True)

    p = add("uhp-scan", cmd_uhp_scan, "Every ψ a GCA is equivariant with (finite groups)")
    p.add_argument("--gca", required=True)

    p = add("counterexample", cmd_counterexample, "Symmetric τ with φ*∘τ = ψ*∘τ")
    p.add_argument("--phi", required=True)
    p.add_argument("--psi", required=True)

    p = add("quotient", cmd_quotient, "Quotient GCA on A^{G/N}")
    p.add_argument("--gca", required=True)
    p.add_argument("--normal", required=True, help="Normal subgroup name")

    for name, func, text in (
        ("restrict", cmd_restrict, "Restriction to a subgroup"),
        ("induce", cmd_induce, "Restrict, induce back, compare"),
        ("transfer", cmd_transfer, "Injectivity/bijectivity transfer check"),
    ):
        p = add(name, func, text)
        p.add_argument("--gca", required=True)
        p.add_argument("--subgroup", required=True)

    p = add("submonoid", cmd_submonoid, "Closure of GCA_K against full invariance")
    p.add_argument("--group", required=True)
    p.add_argument("--subgroup", required=True)
    p.add_argument("--bound", type=int, help="Largest memory size sampled (default: --max-memory)")

    p = add("surjectivity", cmd_surjectivity, "Surjectivity of 𝒯 against 𝒯_K")
    p.add_argument("--phi", required=True)
    p.add_argument("--rows", action="store_true", help="Include every instance in the result")

    p = add("verify", cmd_verify, "Run the verification suites")
    p.add_argument("--suite", action="append", choices=list(SUITES), help="Run only this suite (repeatable)")

    return parser


def _budget(args: argparse.Namespace) -> Budget:
    return Budget.from_env(
        max_order=args.max_order,
        alphabet_size=args.alphabet_size,
        max_memory=args.max_memory,
        max_configurations=args.max_configurations,
        samples=args.samples,
        seed=args.seed,
    )


def main(argv: list[str] | None = None) -> int:
    """CLI entry point; returns the exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    _configure_logging(args.verbose)
    report = Report(command=argv)
    try:
        args.budget = _budget(args)
        args.func(args, report)
    except (DefinitionError, ValueError) as e:
        report.result = {"error": str(e), "type": type(e).__name__}
        _output(report, args)
        return EXIT_USAGE
    except (UnsupportedError, BudgetExceededError) as e:
        report.unsupported(args.command, str(e))
    except (ConsistencyError, NotFoundError) as e:
        report.failed(args.command, None, str(e), **getattr(e, "counterexample", {}))
    except GcaLabError as e:
        report.result = {"error": str(e), "type": type(e).__name__}
        _output(report, args)
        return EXIT_FAIL
    except Exception as e:
        logger.exception("unexpected error in %s", args.command)
        report.result = {"error": str(e), "type": type(e).__name__}
        _output(report, args)
        return EXIT_FAIL

    report.finish()
    _output(report, args)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
