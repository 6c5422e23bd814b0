"""Shared test fixtures for gca-lab tests."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from gca_lab.automaton import GCA
from gca_lab.configurations import Alphabet
from gca_lab.groups.finite import build_cyclic, build_symmetric
from gca_lab.groups.free_abelian import build_free_abelian
from gca_lab.groups.homomorphisms import Homomorphism
from gca_lab.groups.subgroups import Subgroup
from gca_lab.rules import LocalRule

SAMPLE_WORKSPACE = Path(__file__).parent.parent / "data" / "sample" / "workspace.json"


# ─── Groups and automata ───────────────────────────────────────


@pytest.fixture
def binary():
    """The alphabet {0, 1}."""
    return Alphabet(2)


@pytest.fixture
def z2():
    return build_cyclic(2)


@pytest.fixture
def z4():
    return build_cyclic(4)


@pytest.fixture
def z6():
    return build_cyclic(6)


@pytest.fixture
def s3():
    return build_symmetric(3)


@pytest.fixture
def line():
    """ℤ as a free abelian group of rank 1."""
    return build_free_abelian(1, name="Z")


@pytest.fixture
def half_z4(z4):
    """The subgroup {0, 2} of ℤ/4."""
    return Subgroup.from_elements(z4, [0, 2], name="N2")


@pytest.fixture
def xor4(z4, binary):
    """x ↦ x(h) ⊕ x(h+1) on ℤ/4."""
    return GCA(Homomorphism.identity(z4), LocalRule.xor(z4, [0, 1], binary), name="xor4")


@pytest.fixture
def even4(z4, binary):
    """x ↦ x(h) ⊕ x(h+2) on ℤ/4; its memory lies in {0, 2}."""
    return GCA(Homomorphism.identity(z4), LocalRule.xor(z4, [0, 2], binary), name="even4")


@pytest.fixture
def mul(line):
    """Factory for the lattice map n ↦ an on ℤ."""

    def make(a: int) -> Homomorphism:
        return Homomorphism.from_matrix(line, line, [[a]], name=f"mul{a}")

    return make


# ─── Definition documents ──────────────────────────────────────


@pytest.fixture
def sample_path():
    """Path of the bundled sample definition document."""
    return SAMPLE_WORKSPACE


@pytest.fixture
def write_doc(tmp_path):
    """Write a definition document to a temp file and return its path."""

    def write(doc: dict | str, name: str = "defs.json") -> Path:
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc, indent=2))
        return path

    return write
