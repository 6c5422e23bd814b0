"""Tests for command reports."""

import json

import numpy as np
import pytest

from gca_lab import __version__
from gca_lab.report import Check, Report, jsonable


def _report() -> Report:
    report = Report(command=["apply", "--gca", "xor4"])
    report.passed("reference-evaluator", "local-formula", "4 cells agree")
    report.result = {"output": np.array([1, 0, 0, 1])}
    return report


class TestChecks:
    """Tests for Check."""

    def test_invalid_status(self):
        """Only pass, fail and unsupported are statuses."""
        with pytest.raises(ValueError, match="unknown check status"):
            Check("x", "maybe")

    def test_detail_is_jsonable(self):
        """numpy values in the detail become plain JSON."""
        d = Check("x", "fail", detail={"cells": np.array([1, 2]), "h": (np.int64(3),)}).to_dict()
        assert d["detail"] == {"cells": [1, 2], "h": [3]}

    def test_jsonable_scalars(self):
        """Booleans, floats and tuple keys convert."""
        assert jsonable({(1, 2): np.bool_(True), "f": np.float64(0.5)}) == {"(1, 2)": True, "f": 0.5}


class TestExitCodes:
    """Tests for Report.exit_code."""

    def test_all_pass(self):
        """Passing checks exit 0."""
        assert _report().exit_code == 0

    def test_failure_wins(self):
        """Any failure exits 1, even next to an unsupported check."""
        report = _report()
        report.unsupported("uhp", "Hom(Z, Z) is infinite")
        report.failed("square", "quotient", "differs")
        assert report.exit_code == 1

    def test_unsupported_only(self):
        """Unsupported without failures exits 3."""
        report = _report()
        report.unsupported("uhp", "Hom(Z, Z) is infinite")
        assert report.exit_code == 3
        assert report.checks[-1].lemma is None

    def test_counts(self):
        """Counts cover every status."""
        report = _report()
        report.failed("square", "quotient")
        assert report.counts == {"pass": 1, "fail": 1, "unsupported": 0}


class TestRendering:
    """Tests for JSON and text output."""

    def test_dict_keys(self):
        """Timing is optional."""
        report = _report().finish()
        assert set(report.to_dict()) == {"tool", "version", "command", "checks", "summary", "result", "timing"}
        assert "timing" not in report.to_dict(timing=False)
        assert report.to_dict()["version"] == __version__

    def test_json_is_deterministic(self):
        """Without timing two renderings of equal reports match."""
        assert _report().finish().to_json(timing=False) == _report().finish().to_json(timing=False)

    def test_json_is_sorted(self):
        """Keys come out sorted."""
        d = json.loads(_report().to_json())
        assert list(d) == sorted(d)
        assert d["result"]["output"] == [1, 0, 0, 1]

    def test_text(self):
        """Text carries the same facts as the JSON."""
        report = _report()
        report.failed("square", "quotient", "differs", x=[1, 0])
        text = report.finish().to_text()
        lines = text.splitlines()
        assert lines[0] == f"gca-lab {__version__}: apply --gca xor4"
        assert "  [PASS] reference-evaluator (local-formula): 4 cells agree" in lines
        assert "  [FAIL] square (quotient): differs" in lines
        assert "result:" in lines
        assert "summary: 2 checks, 1 passed, 1 failed, 0 unsupported" in lines
        assert lines[-1].startswith("time: ")

    def test_write(self, tmp_path):
        """write stores the JSON rendering."""
        path = tmp_path / "report.json"
        _report().finish().write(path)
        d = json.loads(path.read_text())
        assert d["tool"] == "gca-lab"
        assert d["summary"]["pass"] == 1
