"""Report Contract Validation Tests.

Validates that every command writes a report matching the declared schema.
"""

import numpy as np
import pytest
from deepdiff import DeepDiff
from pydantic import ValidationError

from graphinv.catalog import get_graph
from graphinv.schemas.errors import ErrorResponse
from graphinv.schemas.reports import Report
from graphinv.services.fd_correspondence import FDTarget, lift_monoid_hom_fd


class TestReportContracts:
    """Tests for report format validation."""

    @pytest.mark.parametrize(
        "argv, section",
        [
            (("ideals", "catalog:two_circles"), "lattice"),
            (("ktheory", "catalog:o3"), "kdata"),
            (("tails", "catalog:toeplitz"), "tails"),
            (("ext", "catalog:single_loop"), "ext"),
            (("monoid", "eq", "catalog:o2", "v:1", "v:5"), "monoid"),
            (("compare", "catalog:o2", "catalog:o3"), "verdict"),
            (("fd", "catalog:chain2", "--blocks", "2", "--dims", "a:2;b:2"), "fd"),
            (("corpus", "--count", "3", "--max-vertices", "2", "--max-edges", "2"), "corpus"),
            (("catalog",), "catalog"),
        ],
    )
    def test_command_reports_validate(self, run_cli, argv, section):
        status, data, _ = run_cli(*argv)
        assert status == 0
        report = Report.model_validate(data)
        assert report.command == argv[0]
        assert section in data
        assert len(report.input_digest) == 64

    def test_integers_are_decimal_strings(self, run_cli):
        _, data, _ = run_cli("ideals", "catalog:two_circles")
        assert data["lattice"]["size"] == "4"
        assert all(isinstance(e["height"], str) for e in data["lattice"]["elements"])

    def test_absent_sections_omitted(self, run_cli):
        _, data, _ = run_cli("ideals", "catalog:o2")
        assert "verdict" not in data
        assert "other" not in data

    def test_reports_are_deterministic(self, run_cli):
        _, first, raw_first = run_cli("compare", "catalog:two_circles", "catalog:two_circles")
        _, second, raw_second = run_cli("compare", "catalog:two_circles", "catalog:two_circles")
        assert DeepDiff(first, second) == {}
        assert raw_first == raw_second

    def test_error_report_format(self, run_cli):
        status, data, _ = run_cli("ideals", "catalog:missing")
        assert status == 1
        error = ErrorResponse.model_validate(data).error
        assert error.code == "parse_error"
        assert error.detail == {"graph": "missing"}

    def test_report_forbids_unknown_sections(self):
        with pytest.raises(ValidationError):
            Report(tool_version="x", command="ideals", input_digest="0" * 64, extra_section={})


class TestReportSchema:
    def test_top_level_sections(self, report_schema):
        properties = set(report_schema["properties"])
        assert {"lattice", "kdata", "tails", "ext", "monoid", "verdict", "fd", "corpus"} <= properties
        assert set(report_schema["required"]) == {"tool_version", "command", "input_digest"}

    def test_group_info_shape(self, report_schema):
        group = report_schema["$defs"]["GroupInfo"]
        assert group["properties"]["free_rank"]["type"] == "string"
        assert group["properties"]["torsion"]["items"]["type"] == "string"


class TestFDSerialization:
    def test_fd_unitaries_round_trip(self, run_cli):
        _, data, _ = run_cli(
            "fd", "catalog:chain2", "--blocks", "2", "--dims", "a:2;b:2", "--haar", "--seed", "4"
        )
        fd = data["fd"]
        assert set(fd["unitaries"]) == set(fd["unitary_shapes"]) == {"a"}
        (block,) = fd["unitaries"]["a"]
        parsed = np.array([[complex(float(re), float(im)) for re, im in row] for row in block])
        assert parsed.shape == (2, 2)
        assert all("e" not in part for row in block for entry in row for part in entry)

        expected = lift_monoid_hom_fd(
            get_graph("chain2"), FDTarget((2,)), {"a": (2,), "b": (2,)}, method="haar", seed=4
        )
        assert np.array_equal(parsed, expected.unitaries["a"][0])
        assert np.allclose(parsed @ parsed.conj().T, np.eye(2))
