"""Definition documents: named groups, maps, rules and automata in one JSON file.

Example::

    {
      "alphabet": 2,
      "groups": [{"name": "Z4", "kind": "cyclic", "n": 4}],
      "subgroups": [{"name": "K", "group": "Z4", "elements": [0, 2]}],
      "homomorphisms": [{"name": "id4", "domain": "Z4", "codomain": "Z4", "builtin": "identity"}],
      "rules": [{"name": "xor", "group": "Z4", "builtin": "xor", "memory": [0, 1]}],
      "gcas": [{"name": "xor4", "phi": "id4", "rule": "xor"}],
      "configurations": [{"name": "x", "group": "Z4", "text": "dense:[1,0,0,0]"}]
    }

Sections are read in the order groups, subgroups, homomorphisms, rules,
gcas, configurations, so later sections may refer to earlier ones.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from gca_lab.automaton import GCA
from gca_lab.configurations import Alphabet, Configuration, parse_configuration
from gca_lab.errors import DefinitionError, GcaLabError
from gca_lab.groups.base import Group
from gca_lab.groups.finite import (
    FiniteGroup,
    build_cayley,
    build_cyclic,
    build_dihedral,
    build_direct_product,
    build_quaternion,
    build_symmetric,
)
from gca_lab.groups.free_abelian import FreeAbelianGroup, build_free_abelian
from gca_lab.groups.homomorphisms import Homomorphism
from gca_lab.groups.subgroups import Subgroup, derived_subgroup
from gca_lab.rules import LocalRule, builtin_rule

logger = logging.getLogger(__name__)

SECTIONS = ("groups", "subgroups", "homomorphisms", "rules", "gcas", "configurations")
GROUP_KINDS = ("cyclic", "cayley", "symmetric", "dihedral", "quaternion", "product", "free-abelian")


@dataclass
class Workspace:
    """Every entity of one definition document, keyed by name.

    Attributes:
        path: Source file, if loaded from disk.
        alphabet: The alphabet shared by all rules and configurations.
        provenance: (section, name) → line of the entity's ``"name"`` key.
    """

    path: str | None = None
    alphabet: Alphabet = field(default_factory=Alphabet)
    groups: dict[str, Group] = field(default_factory=dict)
    subgroups: dict[str, Subgroup] = field(default_factory=dict)
    homomorphisms: dict[str, Homomorphism] = field(default_factory=dict)
    rules: dict[str, LocalRule] = field(default_factory=dict)
    gcas: dict[str, GCA] = field(default_factory=dict)
    configurations: dict[str, Configuration] = field(default_factory=dict)
    provenance: dict[tuple[str, str], int | None] = field(default_factory=dict)

    def lookup(self, section: str, name: str):
        """The entity called ``name`` in ``section``.

        Raises:
            DefinitionError: If no such entity exists.
        """
        table = getattr(self, section)
        if name not in table:
            known = ", ".join(sorted(table)) or "none"
            raise DefinitionError(f"unknown {section[:-1]} {name!r} (defined: {known})", self.path)
        return table[name]

    def group(self, name: str) -> Group:
        return self.lookup("groups", name)

    def subgroup(self, name: str) -> Subgroup:
        return self.lookup("subgroups", name)

    def homomorphism(self, name: str) -> Homomorphism:
        return self.lookup("homomorphisms", name)

    def rule(self, name: str) -> LocalRule:
        return self.lookup("rules", name)

    def gca(self, name: str) -> GCA:
        return self.lookup("gcas", name)

    def configuration(self, name: str) -> Configuration:
        return self.lookup("configurations", name)

    def location(self, section: str, name: str) -> str:
        """``path:line`` for an entity, as far as it is known."""
        line = self.provenance.get((section, name))
        return f"{self.path or '<memory>'}:{line if line is not None else '?'}"

    def __len__(self) -> int:
        return sum(len(getattr(self, s)) for s in SECTIONS)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "path": self.path,
            "alphabet": self.alphabet.size,
            **{s: sorted(getattr(self, s)) for s in SECTIONS},
        }


# ─── Loading ───────────────────────────────────────────────────


def load_workspace(path: str | Path) -> Workspace:
    """Parse and validate a definition document.

    Raises:
        DefinitionError: On unreadable JSON, an invalid entity (with its
            line), or a reference to an undefined name.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DefinitionError(f"cannot read {path}: {exc.strerror}", str(path)) from None
    return parse_workspace(text, str(path))


def parse_workspace(text: str, path: str | None = None) -> Workspace:
    """Build a workspace from the text of a definition document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DefinitionError(f"invalid JSON: {exc.msg}", path, exc.lineno) from None
    if not isinstance(doc, dict):
        raise DefinitionError("a definition document must be a JSON object", path, 1)
    unknown = set(doc) - set(SECTIONS) - {"alphabet"}
    if unknown:
        raise DefinitionError(f"unknown top-level keys: {', '.join(sorted(unknown))}", path, 1)

    try:
        alphabet = Alphabet(int(doc.get("alphabet", 2)))
    except (TypeError, ValueError) as exc:
        raise DefinitionError(f"bad alphabet: {exc}", path, _line_of(text, '"alphabet"')) from None
    ws = Workspace(path=path, alphabet=alphabet)
    builders = {
        "groups": _build_group,
        "subgroups": _build_subgroup,
        "homomorphisms": _build_homomorphism,
        "rules": _build_rule,
        "gcas": _build_gca,
        "configurations": _build_configuration,
    }
    for section in SECTIONS:
        entries = doc.get(section, [])
        if not isinstance(entries, list):
            raise DefinitionError(f"{section} must be a list", path, _line_of(text, f'"{section}"'))
        for entry in entries:
            name = entry.get("name") if isinstance(entry, dict) else None
            if not isinstance(name, str) or not name:
                raise DefinitionError(f"every entry of {section} needs a string name", path, _line_of(text, f'"{section}"'))
            line = _locate(text, section, name)
            table = getattr(ws, section)
            if name in table:
                raise DefinitionError(f"duplicate {section[:-1]} name {name!r}", path, line)
            try:
                table[name] = builders[section](ws, entry)
            except DefinitionError as exc:
                raise DefinitionError(f"{section[:-1]} {name!r}: {exc.args[0]}", path, line) from None
            except (GcaLabError, KeyError, TypeError, ValueError) as exc:
                detail = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
                raise DefinitionError(f"{section[:-1]} {name!r}: {detail}", path, line) from None
            ws.provenance[(section, name)] = line
    logger.debug("loaded %d entities from %s", len(ws), path or "<memory>")
    return ws


def _line_of(text: str, needle: str, start: int = 0) -> int | None:
    pos = text.find(needle, start)
    if pos < 0:
        return None
    return text.count("\n", 0, pos) + 1


def _locate(text: str, section: str, name: str) -> int | None:
    start = max(text.find(f'"{section}"'), 0)
    match = re.compile(rf'"name"\s*:\s*"{re.escape(name)}"').search(text, start)
    if match is None:
        return None
    return text.count("\n", 0, match.start()) + 1


# ─── Entity builders ───────────────────────────────────────────


def _build_group(ws: Workspace, entry: dict) -> Group:
    name = entry["name"]
    kind = entry.get("kind")
    if kind == "cyclic":
        return build_cyclic(int(entry["n"]), name=name)
    if kind == "cayley":
        return build_cayley(entry["table"], name=name)
    if kind == "symmetric":
        return build_symmetric(int(entry["n"]), name=name)
    if kind == "dihedral":
        return build_dihedral(int(entry["n"]), name=name)
    if kind == "quaternion":
        return build_quaternion(name=name)
    if kind == "product":
        first, second = (ws.group(g) for g in entry["factors"])
        if not isinstance(first, FiniteGroup) or not isinstance(second, FiniteGroup):
            raise DefinitionError("products are built from finite groups only")
        return build_direct_product(first, second, name=name)
    if kind == "free-abelian":
        return build_free_abelian(int(entry["rank"]), name=name)
    raise DefinitionError(f"unknown group kind {kind!r}; expected one of {', '.join(GROUP_KINDS)}")


def _elements(group: Group, raw: list) -> list:
    return [group.element_from_json(v) for v in raw]


def _build_subgroup(ws: Workspace, entry: dict) -> Subgroup:
    name = entry["name"]
    group = ws.group(entry["group"])
    builtin = entry.get("builtin")
    if builtin == "trivial":
        return Subgroup.trivial(group, name=name)
    if builtin == "whole":
        return Subgroup.whole(group, name=name)
    if builtin == "derived":
        if not isinstance(group, FiniteGroup):
            raise DefinitionError("the derived subgroup is computed for finite groups only")
        derived = derived_subgroup(group)
        return Subgroup(group, elements=derived.elements, name=name)
    if builtin is not None:
        raise DefinitionError(f"unknown subgroup builtin {builtin!r}")
    if "elements" in entry:
        return Subgroup.from_elements(group, _elements(group, entry["elements"]), name=name)
    if "generators" in entry:
        return Subgroup.generated_by(group, _elements(group, entry["generators"]), name=name)
    if "basis" in entry:
        if not isinstance(group, FreeAbelianGroup):
            raise DefinitionError("a basis describes a sublattice of ℤ^d")
        return Subgroup.from_basis(group, entry["basis"], name=name)
    raise DefinitionError("a subgroup needs elements, generators, basis or builtin")


def _build_homomorphism(ws: Workspace, entry: dict) -> Homomorphism:
    name = entry["name"]
    domain = ws.group(entry["domain"])
    codomain = ws.group(entry["codomain"])
    builtin = entry.get("builtin")
    if builtin == "identity":
        if domain != codomain:
            raise DefinitionError("the identity needs equal domain and codomain")
        return Homomorphism.identity(domain, name=name)
    if builtin == "trivial":
        return Homomorphism.trivial(domain, codomain, name=name)
    if builtin is not None:
        raise DefinitionError(f"unknown homomorphism builtin {builtin!r}")
    if "matrix" in entry:
        return Homomorphism.from_matrix(domain, codomain, entry["matrix"], name=name)
    if "generator_images" in entry:
        return Homomorphism.from_generators(domain, codomain, _elements(codomain, entry["generator_images"]), name=name)
    if "images" in entry:
        return Homomorphism.from_images(domain, codomain, _elements(codomain, entry["images"]), name=name)
    raise DefinitionError("a homomorphism needs matrix, generator_images, images or builtin")


def _build_rule(ws: Workspace, entry: dict) -> LocalRule:
    name = entry["name"]
    group = ws.group(entry["group"])
    memory = _elements(group, entry["memory"]) if "memory" in entry else None
    if "builtin" in entry:
        rule = builtin_rule(entry["builtin"], group, ws.alphabet, memory)
        return LocalRule(rule.group, rule.memory, rule.table, rule.alphabet, name=name)
    if "table" in entry:
        if memory is None:
            raise DefinitionError("a table rule needs a memory list")
        return LocalRule(group, memory, entry["table"], ws.alphabet, name=name)
    raise DefinitionError("a rule needs a builtin or a table")


def _build_gca(ws: Workspace, entry: dict) -> GCA:
    return GCA(ws.homomorphism(entry["phi"]), ws.rule(entry["rule"]), name=entry["name"])


def _build_configuration(ws: Workspace, entry: dict) -> Configuration:
    return parse_configuration(entry["text"], ws.group(entry["group"]), ws.alphabet)
