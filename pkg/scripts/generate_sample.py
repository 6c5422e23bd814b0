#!/usr/bin/env python3
"""Write the sample definition document used by the README and the CLI tests.

The document defines small cyclic groups, S₃ and ℤ, a few homomorphisms
between them, XOR-style rules and the automata built from them.

Output: data/sample/workspace.json
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from gca_lab.workspace import parse_workspace

SAMPLE = {
    "alphabet": 2,
    "groups": [
        {"name": "Z2", "kind": "cyclic", "n": 2},
        {"name": "Z4", "kind": "cyclic", "n": 4},
        {"name": "S3", "kind": "symmetric", "n": 3},
        {"name": "Z", "kind": "free-abelian", "rank": 1},
    ],
    "subgroups": [
        {"name": "N2", "group": "Z4", "elements": [0, 2]},
        {"name": "A3", "group": "S3", "builtin": "derived"},
        {"name": "E2", "group": "Z", "basis": [[2]]},
    ],
    "homomorphisms": [
        {"name": "id2", "domain": "Z2", "codomain": "Z2", "builtin": "identity"},
        {"name": "triv2", "domain": "Z2", "codomain": "Z2", "builtin": "trivial"},
        {"name": "id4", "domain": "Z4", "codomain": "Z4", "builtin": "identity"},
        {"name": "neg4", "domain": "Z4", "codomain": "Z4", "images": [0, 3, 2, 1]},
        {"name": "dbl4", "domain": "Z4", "codomain": "Z4", "generator_images": [2]},
        {"name": "idS3", "domain": "S3", "codomain": "S3", "builtin": "identity"},
        {"name": "idZ", "domain": "Z", "codomain": "Z", "builtin": "identity"},
        {"name": "mul2", "domain": "Z", "codomain": "Z", "matrix": [[2]]},
        {"name": "mul3", "domain": "Z", "codomain": "Z", "matrix": [[3]]},
    ],
    "rules": [
        {"name": "xor2", "group": "Z2", "builtin": "xor", "memory": [0, 1]},
        {"name": "xor4", "group": "Z4", "builtin": "xor", "memory": [0, 1]},
        {"name": "even4", "group": "Z4", "builtin": "xor", "memory": [0, 2]},
        {"name": "shift4", "group": "Z4", "builtin": "read-at:1"},
        {"name": "maj3", "group": "S3", "memory": [0, 1, 2], "table": [0, 0, 0, 1, 0, 1, 1, 1]},
        {"name": "xorZ", "group": "Z", "builtin": "xor", "memory": [[0], [1]]},
    ],
    "gcas": [
        {"name": "xor2", "phi": "id2", "rule": "xor2"},
        {"name": "xor4", "phi": "id4", "rule": "xor4"},
        {"name": "even4", "phi": "id4", "rule": "even4"},
        {"name": "shift4", "phi": "id4", "rule": "shift4"},
        {"name": "xor4neg", "phi": "neg4", "rule": "xor4"},
        {"name": "maj3", "phi": "idS3", "rule": "maj3"},
        {"name": "t2", "phi": "mul2", "rule": "xorZ"},
    ],
    "configurations": [
        {"name": "x", "group": "Z4", "text": "dense:[1,0,0,0]"},
        {"name": "y", "group": "S3", "text": "dense:[1,1,0,0,0,1]"},
        {"name": "z", "group": "Z", "text": "support:default=0;{0: 1}"},
    ],
}


def generate_sample_workspace(output: str | None = None) -> Path:
    """Validate SAMPLE and write it as JSON.

    Args:
        output: Output file (default: data/sample/workspace.json).

    Returns:
        The path written.
    """
    path = Path(output) if output else Path(__file__).parent.parent / "data" / "sample" / "workspace.json"
    text = json.dumps(SAMPLE, indent=2) + "\n"
    ws = parse_workspace(text, str(path))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"Wrote {len(ws)} entities to {path}")
    return path


if __name__ == "__main__":
    import argparse

    parser = argparse.ArgumentParser(description="Write the sample definition document")
    parser.add_argument("--output", "-o", help="Output file")
    args = parser.parse_args()
    generate_sample_workspace(args.output)
