"""Command reports: per-check statuses plus a result payload.

Text and JSON are rendered from the same dictionary. JSON keys are
sorted and wall-clock timing sits under its own ``timing`` key, so two
runs of the same command differ only there.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from gca_lab import __version__

PASS = "pass"
FAIL = "fail"
UNSUPPORTED = "unsupported"
STATUSES = (PASS, FAIL, UNSUPPORTED)


def jsonable(value: object) -> object:
    """Convert numpy scalars/arrays and tuples into plain JSON values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


@dataclass
class Check:
    """One verified claim.

    Attributes:
        name: Short identifier, e.g. ``quotient-square``.
        status: ``pass``, ``fail`` or ``unsupported``.
        lemma: Tag of the result the check exercises.
        message: One-line human summary.
        detail: Counterexample or certificate data.
    """

    name: str
    status: str
    lemma: str | None = None
    message: str = ""
    detail: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown check status {self.status!r}")

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "name": self.name,
            "status": self.status,
            "lemma": self.lemma,
            "message": self.message,
            "detail": jsonable(self.detail),
        }


@dataclass
class Report:
    """Everything one command produced."""

    command: list[str]
    checks: list[Check] = field(default_factory=list)
    result: dict = field(default_factory=dict)
    timing: dict[str, float] = field(default_factory=dict)
    _started: float = field(default_factory=time.perf_counter, repr=False)

    def add(self, name: str, status: str, lemma: str | None = None, message: str = "", **detail) -> Check:
        """Append a check and return it."""
        check = Check(name, status, lemma, message, detail)
        self.checks.append(check)
        return check

    def passed(self, name: str, lemma: str | None = None, message: str = "", **detail) -> Check:
        return self.add(name, PASS, lemma, message, **detail)

    def failed(self, name: str, lemma: str | None = None, message: str = "", **detail) -> Check:
        return self.add(name, FAIL, lemma, message, **detail)

    def unsupported(self, name: str, message: str = "", **detail) -> Check:
        return self.add(name, UNSUPPORTED, None, message, **detail)

    def finish(self) -> Report:
        """Record total wall time."""
        self.timing["total_seconds"] = round(time.perf_counter() - self._started, 6)
        return self

    @property
    def counts(self) -> dict[str, int]:
        return {s: sum(c.status == s for c in self.checks) for s in STATUSES}

    @property
    def exit_code(self) -> int:
        """0 when every check passed, 1 on any failure, 3 when only unsupported checks remain."""
        counts = self.counts
        if counts[FAIL]:
            return 1
        if counts[UNSUPPORTED]:
            return 3
        return 0

    def to_dict(self, timing: bool = True) -> dict:
        """Convert to dictionary for JSON serialization."""
        d = {
            "tool": "gca-lab",
            "version": __version__,
            "command": list(self.command),
            "checks": [c.to_dict() for c in self.checks],
            "summary": self.counts,
            "result": jsonable(self.result),
        }
        if timing:
            d["timing"] = dict(self.timing)
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing=timing), indent=2, sort_keys=True, ensure_ascii=False)

    def to_text(self) -> str:
        """Human-readable rendering with the same facts as the JSON."""
        lines = [f"gca-lab {__version__}: {' '.join(self.command)}"]
        for c in self.checks:
            tag = f" ({c.lemma})" if c.lemma else ""
            lines.append(f"  [{c.status.upper()}] {c.name}{tag}: {c.message}")
            if c.detail:
                lines.append(_indent(json.dumps(jsonable(c.detail), sort_keys=True, ensure_ascii=False), 8))
        if self.result:
            lines.append("result:")
            lines.append(_indent(json.dumps(jsonable(self.result), indent=2, sort_keys=True, ensure_ascii=False), 2))
        counts = self.counts
        lines.append(
            f"summary: {len(self.checks)} checks, {counts[PASS]} passed, "
            f"{counts[FAIL]} failed, {counts[UNSUPPORTED]} unsupported"
        )
        if self.timing:
            lines.append(f"time: {self.timing.get('total_seconds', 0.0):.3f}s")
        return "\n".join(lines)

    def write(self, path: str | Path) -> None:
        """Write the JSON rendering to ``path``."""
        Path(path).write_text(self.to_json() + "\n")


def _indent(text: str, width: int) -> str:
    pad = " " * width
    return "\n".join(pad + line for line in text.splitlines())
