"""Shared fixtures for contract tests."""

import io
import json

import pytest

from graphinv.cli import main


@pytest.fixture
def run_cli():
    """Run the CLI in-process and return (exit status, parsed stdout, raw stdout)."""

    def _run(*argv: str):
        out = io.StringIO()
        status = main(list(argv), stdout=out)
        raw = out.getvalue()
        return status, json.loads(raw), raw

    return _run


@pytest.fixture(scope="module")
def report_schema():
    from graphinv.schemas.reports import Report

    return Report.model_json_schema()
