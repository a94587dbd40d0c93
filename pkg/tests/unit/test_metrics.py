"""Unit tests for Prometheus metrics module."""

import uuid

import pytest
from prometheus_client import REGISTRY, Counter, Histogram

from graphinv.metrics import (
    CORPUS_GRAPHS_TOTAL,
    LATTICE_ENUMERATIONS_TOTAL,
    LATTICE_SIZE,
    OPERATION_DURATION_SECONDS,
    SNF_TOTAL,
    VERDICTS_TOTAL,
    record_lattice,
    record_verdict,
    timed,
)
from graphinv.services.ideal_lattice import enumerate_lattice
from tests.conftest import make_graph


def sample(name, **labels):
    return REGISTRY.get_sample_value(name, labels) or 0.0


class TestMetricDefinitions:
    def test_types(self):
        assert isinstance(LATTICE_ENUMERATIONS_TOTAL, Counter)
        assert isinstance(SNF_TOTAL, Counter)
        assert isinstance(CORPUS_GRAPHS_TOTAL, Counter)
        assert isinstance(LATTICE_SIZE, Histogram)
        assert isinstance(OPERATION_DURATION_SECONDS, Histogram)

    def test_labels(self):
        assert VERDICTS_TOTAL._labelnames == ("conclusion",)
        assert OPERATION_DURATION_SECONDS._labelnames == ("operation",)


class TestRecorders:
    def test_record_lattice(self):
        before = sample("graphinv_lattice_enumerations_total")
        size_before = sample("graphinv_lattice_size_sum")
        record_lattice(4)
        assert sample("graphinv_lattice_enumerations_total") == before + 1
        assert sample("graphinv_lattice_size_sum") == size_before + 4

    def test_record_verdict(self):
        before = sample("graphinv_verdicts_total", conclusion="undecided")
        record_verdict("undecided")
        assert sample("graphinv_verdicts_total", conclusion="undecided") == before + 1

    def test_timed_observes_on_error(self):
        before = sample("graphinv_operation_duration_seconds_count", operation="unit_test")
        with pytest.raises(RuntimeError):
            with timed("unit_test"):
                raise RuntimeError("boom")
        assert sample("graphinv_operation_duration_seconds_count", operation="unit_test") == before + 1


class TestInstrumentation:
    def test_enumeration_is_counted_once_per_graph(self):
        name = f"x{uuid.uuid4().hex[:8]}"
        graph = make_graph([name], [("e", name, name)])
        before = sample("graphinv_lattice_enumerations_total")
        enumerate_lattice(graph)
        enumerate_lattice(graph)
        assert sample("graphinv_lattice_enumerations_total") == before + 1
